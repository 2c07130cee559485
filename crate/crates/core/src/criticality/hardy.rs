//! Hardy weights from positive supersolutions and capacity floors on proper
//! subsets.

use alloc::vec::Vec;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::capacity::{capacity, CapacityOptions, CapacityResult};
use crate::energy::{energy, require_nonnegative};
use crate::error::{Error, Result};
use crate::graph::{VertexId, VertexSubset, WeightedGraph};
use crate::math::{abs, abs_pow, pow, PairwiseSum};
use crate::operators::{classify, phi_p, schrodinger_unchecked, HarmonicityClass, PExponent};
use crate::random::random_test_function;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HardyVerification {
    pub trials: usize,
    /// Smallest `h(phi) - sum_V w |phi|^p m` over the battery.
    pub min_slack: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HardyCertificate {
    /// `Hu / u^(p-1)` on `V`, zero elsewhere.
    pub w: Vec<f64>,
    pub subset: Vec<VertexId>,
    pub classification: HarmonicityClass,
    pub min_weight: f64,
    pub max_weight: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verification: Option<HardyVerification>,
}

impl HardyCertificate {
    /// Verified on a test battery and positive somewhere.
    pub fn is_witness(&self) -> bool {
        self.max_weight > 0.0 && self.verification.as_ref().is_some_and(|v| v.holds)
    }
}

/// `w = Hu / u^(p-1)` on `V` for `u` superharmonic on `V`.
///
/// `u` must be strictly positive on `V` and nonnegative on its boundary; a
/// zero boundary value is how the Dirichlet condition of the half-line enters.
pub fn hardy_witness(g: &WeightedGraph, u: &[f64], v: &VertexSubset, p: PExponent) -> Result<HardyCertificate> {
    let p = p.require_superlinear()?;
    g.check_len(u)?;
    require_nonnegative(u)?;
    if let Some(x) = v.iter().find(|&x| !(u[x] > 0.0)) {
        return Err(Error::NotStrictlyPositive { vertex: x, value: u[x] });
    }
    let classification = classify(g, u, v, p, None)?;
    if !classification.is_supersolution() {
        return Err(Error::NotSuperharmonic {
            vertex: classification.argmin.unwrap_or(0),
            value: classification.min_value,
        });
    }
    let mut w = alloc::vec![0.0; g.vertex_count()];
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for x in v.iter() {
        w[x] = schrodinger_unchecked(g, u, x, p) / pow(u[x], p.value() - 1.0);
        lo = lo.min(w[x]);
        hi = hi.max(w[x]);
    }
    if v.is_empty() {
        lo = 0.0;
        hi = 0.0;
    }
    Ok(HardyCertificate { w, subset: v.to_vec(), classification, min_weight: lo, max_weight: hi, verification: None })
}

/// `h(phi) - sum_x w(x) |phi(x)|^p m(x)`.
pub fn hardy_slack(g: &WeightedGraph, w: &[f64], phi: &[f64], p: PExponent) -> Result<f64> {
    g.check_len(w)?;
    let h = energy(g, phi, p)?.total;
    let mut acc = PairwiseSum::new();
    for x in 0..g.vertex_count() {
        acc.push(w[x] * abs_pow(phi[x], p.value()) * g.measure(x));
    }
    Ok(h - acc.total())
}

/// Checks the Hardy inequality for `w` on `trials` random test functions
/// supported in `V`.
pub fn verify_hardy<R: Rng>(
    g: &WeightedGraph,
    w: &[f64],
    v: &VertexSubset,
    p: PExponent,
    trials: usize,
    tol: f64,
    rng: &mut R,
) -> Result<HardyVerification> {
    let mut min_slack = f64::INFINITY;
    for _ in 0..trials {
        let phi = random_test_function(v, rng);
        min_slack = min_slack.min(hardy_slack(g, w, &phi, p)?);
    }
    if trials == 0 {
        min_slack = 0.0;
    }
    Ok(HardyVerification { trials, min_slack, holds: min_slack >= -tol })
}

/// [`hardy_witness`] followed by [`verify_hardy`].
pub fn certified_hardy_witness<R: Rng>(
    g: &WeightedGraph,
    u: &[f64],
    v: &VertexSubset,
    p: PExponent,
    trials: usize,
    rng: &mut R,
) -> Result<HardyCertificate> {
    let mut cert = hardy_witness(g, u, v, p)?;
    cert.verification = Some(verify_hardy(g, &cert.w, v, p, trials, 1e-10, rng)?);
    Ok(cert)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProperSubsetReport {
    pub vertex: VertexId,
    pub capacity: f64,
    /// `sum_{y not in V, y ~ x} b(x,y) (1 - phi_p(1 - u(y)/u(x)))`
    pub floor: f64,
    pub holds: bool,
    pub classification: HarmonicityClass,
    pub result: CapacityResult,
}

/// Capacity at a vertex `x` of a proper connected subset `V` next to its
/// complement, compared against the floor implied by Picone's inequality edge
/// by edge: every `phi >= 0` in `C_c(V)` with `phi(x) = 1` has
/// `h(phi) >= sum_{y not in V} b(x,y)(1 - phi_p(1 - u(y)/u(x)))`.
pub fn proper_subset_check(
    g: &WeightedGraph,
    v: &VertexSubset,
    u: &[f64],
    p: PExponent,
    vertex: Option<VertexId>,
    opts: &CapacityOptions,
) -> Result<ProperSubsetReport> {
    let p = p.require_superlinear()?;
    g.check_subset(v)?;
    g.check_len(u)?;
    if v.count() == g.vertex_count() || v.is_empty() {
        return Err(Error::NotProperSubset);
    }
    if !g.is_connected(v) {
        return Err(Error::Disconnected);
    }
    if let Some(x) = v.iter().find(|&x| !(u[x] > 0.0)) {
        return Err(Error::NotStrictlyPositive { vertex: x, value: u[x] });
    }
    if let Some(x) = g.boundary(v).iter().find(|&x| !(u[x] >= 0.0)) {
        return Err(Error::NegativeFunction { vertex: x, value: u[x] });
    }
    let classification = classify(g, u, v, p, None)?;
    if !classification.is_supersolution() {
        return Err(Error::NotSuperharmonic {
            vertex: classification.argmin.unwrap_or(0),
            value: classification.min_value,
        });
    }
    let next_to_outside = |x: VertexId| g.neighbors(x).any(|(y, _)| !v.contains(y));
    let x = match vertex {
        Some(x) => {
            if !v.contains(x) {
                return Err(Error::NotInSubset { vertex: x });
            }
            x
        }
        None => v.iter().find(|&x| next_to_outside(x)).ok_or(Error::NotProperSubset)?,
    };
    let mut floor = PairwiseSum::new();
    for (y, b) in g.neighbors(x) {
        if !v.contains(y) {
            floor.push(b * (1.0 - phi_p(1.0 - u[y] / u[x], p)));
        }
    }
    let floor = floor.total();
    let result = capacity(g, x, v, p, opts)?;
    let holds = floor > 0.0 && result.value >= floor - 1e-9 * (1.0 + abs(floor));
    Ok(ProperSubsetReport { vertex: x, capacity: result.value, floor, holds, classification, result })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{hardy_u_function, int_line_id, nat_line, ExhaustibleModel, ModelFamily};
    use crate::random;
    use std::vec;

    fn p(v: f64) -> PExponent {
        PExponent::new(v).unwrap()
    }

    #[test]
    fn harmonic_u_gives_zero_weight() {
        let g = crate::models::int_line(5).unwrap();
        let cert = hardy_witness(&g, &[1.0; 11], g.interior(), p(2.0)).unwrap();
        assert!(cert.w.iter().all(|&w| w == 0.0));
        let mut rng = random::rng(1);
        let c = certified_hardy_witness(&g, &[1.0; 11], g.interior(), p(2.0), 10, &mut rng).unwrap();
        assert!(!c.is_witness());
    }

    #[test]
    fn half_line_weight_positive_and_valid() {
        for pv in [1.5, 2.0, 3.0] {
            let g = nat_line(16).unwrap();
            let u = hardy_u_function(17, p(pv)).unwrap();
            let mut rng = random::rng(7);
            let cert = certified_hardy_witness(&g, &u, g.interior(), p(pv), 200, &mut rng).unwrap();
            assert!(cert.min_weight > 0.0, "p={pv}");
            assert!(cert.is_witness());
        }
    }

    #[test]
    fn not_superharmonic_rejected() {
        let g = nat_line(6).unwrap();
        let u: Vec<f64> = (0..7).map(|n| 1.0 + (n as f64 - 3.0).powi(2)).collect();
        assert!(matches!(hardy_witness(&g, &u, g.interior(), p(2.0)), Err(Error::NotSuperharmonic { .. })));
    }

    #[test]
    fn proper_subset_of_int_line() {
        let w = ExhaustibleModel::new(ModelFamily::IntLine).window(12).unwrap();
        let g = &w.graph;
        let n = 6;
        let v = VertexSubset::from_ids(g.vertex_count(), (1..=n).map(int_line_id)).unwrap();
        let r = proper_subset_check(
            g,
            &v,
            &vec![1.0; g.vertex_count()],
            p(2.0),
            Some(int_line_id(1)),
            &CapacityOptions::default(),
        )
        .unwrap();
        assert_eq!(r.floor, 1.0);
        assert!((r.capacity - (1.0 + 1.0 / n as f64)).abs() < 1e-8);
        assert!(r.holds);
        assert_eq!(
            proper_subset_check(
                g,
                &VertexSubset::full(g.vertex_count()),
                &[1.0; 25],
                p(2.0),
                None,
                &CapacityOptions::default()
            )
            .unwrap_err(),
            Error::NotProperSubset
        );
    }
}
