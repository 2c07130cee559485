//! Null sequences over exhaustions and the finite-volume criticality verdict.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::capacity::{capacity, CapacityOptions, CapacityStatus};
use super::hardy::HardyCertificate;
use crate::energy::energy;
use crate::error::{Error, Result};
use crate::graph::VertexId;
use crate::math::{abs, abs_pow, ln};
use crate::models::ExhaustibleModel;
use crate::operators::PExponent;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NullSequenceStep {
    pub radius: usize,
    /// `h(e_n)` recomputed from `e_n`.
    pub energy: f64,
    /// Capacity at the root for pin value 1.
    pub capacity: f64,
    pub status: CapacityStatus,
    pub iterations: usize,
    pub converged: bool,
    /// `e_n = alpha * minimiser`, on the vertices of the window.
    pub e_n: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NullSequenceEvidence {
    pub root: VertexId,
    pub alpha: f64,
    pub p: f64,
    pub steps: Vec<NullSequenceStep>,
}

impl NullSequenceEvidence {
    pub fn energies(&self) -> Vec<f64> {
        self.steps.iter().map(|s| s.energy).collect()
    }

    pub fn radii(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.radius).collect()
    }
}

/// For each radius, the capacity minimiser at `root` over the interior of the
/// window, scaled to `alpha` at the root. Each solve starts from the previous
/// minimiser extended by zero.
pub fn null_sequence_search(
    model: &ExhaustibleModel,
    root: VertexId,
    alpha: f64,
    p: PExponent,
    radii: &[usize],
    opts: &CapacityOptions,
) -> Result<NullSequenceEvidence> {
    let p = p.require_superlinear()?;
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::InvalidParameter(alloc::format!("alpha = {alpha} must be positive")));
    }
    if radii.is_empty() {
        return Err(Error::InvalidParameter(alloc::string::String::from("no radii given")));
    }
    let mut steps: Vec<NullSequenceStep> = Vec::with_capacity(radii.len());
    let mut previous: Option<Vec<f64>> = None;
    for &r in radii {
        let w = model.window(r)?;
        let g = &w.graph;
        let mut local = CapacityOptions { pin: 1.0, ..opts.clone() };
        if opts.warm_start.is_none() {
            local.warm_start = previous.as_ref().filter(|prev| prev.len() <= g.vertex_count()).map(|prev| {
                let mut start = alloc::vec![0.0; g.vertex_count()];
                start[..prev.len()].copy_from_slice(prev);
                start
            });
        }
        let cap = capacity(g, root, g.interior(), p, &local)?;
        let e_n: Vec<f64> = cap.minimizer.iter().map(|v| alpha * v).collect();
        let energy = energy(g, &e_n, p)?.total;
        previous = Some(cap.minimizer.to_vec());
        steps.push(NullSequenceStep {
            radius: r,
            energy,
            capacity: cap.value,
            status: cap.status,
            iterations: cap.iterations,
            converged: cap.converged,
            e_n,
        });
    }
    Ok(NullSequenceEvidence { root, alpha, p: p.value(), steps })
}

/// Thresholds for reading a decaying energy sequence as a critical trend.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrendCriteria {
    /// Largest admissible `last / first`.
    pub max_final_ratio: f64,
    /// Largest admissible least-squares slope of `ln E` against `ln r`.
    pub max_slope: f64,
    /// Relative slack allowed in the monotonicity test.
    pub monotone_tol: f64,
}

impl Default for TrendCriteria {
    fn default() -> Self {
        Self { max_final_ratio: 0.5, max_slope: -0.2, monotone_tol: 1e-9 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrendSummary {
    pub monotone: bool,
    /// `last / first`
    pub final_ratio: f64,
    /// Log-log slope; `None` with fewer than two positive energies.
    pub slope: Option<f64>,
    pub critical: bool,
}

/// Least-squares slope of `ln y` against `ln x` over pairs with positive `y`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> =
        xs.iter().zip(ys).filter(|(x, y)| **x > 0.0 && **y > 0.0).map(|(x, y)| (ln(*x), ln(*y))).collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

pub fn trend(radii: &[usize], energies: &[f64], criteria: &TrendCriteria) -> TrendSummary {
    let monotone = energies.windows(2).all(|w| w[1] <= w[0] + criteria.monotone_tol * abs(w[0]).max(1e-300));
    let (first, last) = (energies.first().copied().unwrap_or(0.0), energies.last().copied().unwrap_or(0.0));
    let final_ratio = if first > 0.0 { last / first } else { f64::NAN };
    let xs: Vec<f64> = radii.iter().map(|&r| r as f64).collect();
    let slope = loglog_slope(&xs, energies);
    let critical = energies.len() >= 2
        && monotone
        && first > 0.0
        && last >= 0.0
        && final_ratio <= criteria.max_final_ratio
        && slope.is_some_and(|s| s <= criteria.max_slope);
    TrendSummary { monotone, final_ratio, slope, critical }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    SubcriticalWitness,
    CriticalTrend,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalityVerdict {
    pub classification: Classification,
    pub radii: Vec<usize>,
    pub energies: Vec<f64>,
    pub capacities: Vec<f64>,
    pub trend: TrendSummary,
    /// `alpha^p w(root) m(root)`: every `h(e_n)` is at least this when a
    /// verified Hardy weight is present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hardy_floor: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hardy: Option<HardyCertificate>,
    /// Last null-sequence element, the finite-volume ground state approximant.
    pub ground_state_approximant: Vec<f64>,
}

/// A verified Hardy weight positive somewhere wins; otherwise the energies
/// decide between a critical trend and no conclusion.
pub fn assess(
    evidence: &NullSequenceEvidence,
    criteria: &TrendCriteria,
    hardy: Option<&HardyCertificate>,
    measure_at_root: f64,
) -> CriticalityVerdict {
    let radii = evidence.radii();
    let energies = evidence.energies();
    let trend = trend(&radii, &energies, criteria);
    let witness = hardy.filter(|h| h.is_witness());
    let classification = if witness.is_some() {
        Classification::SubcriticalWitness
    } else if trend.critical {
        Classification::CriticalTrend
    } else {
        Classification::Inconclusive
    };
    let hardy_floor = witness
        .and_then(|h| h.w.get(evidence.root))
        .map(|&w| abs_pow(evidence.alpha, evidence.p) * w * measure_at_root);
    CriticalityVerdict {
        classification,
        radii,
        energies,
        capacities: evidence.steps.iter().map(|s| s.capacity).collect(),
        trend,
        hardy_floor,
        hardy: hardy.cloned(),
        ground_state_approximant: evidence.steps.last().map(|s| s.e_n.clone()).unwrap_or_default(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundStateTrend {
    /// `alpha / u(root)`
    pub scale: f64,
    pub core: Vec<VertexId>,
    /// `max_core |e_n - scale u|` per radius.
    pub deviations: Vec<f64>,
    pub radii: Vec<usize>,
    pub decreasing: bool,
}

/// Compares each `e_n` on a fixed core with `(alpha / u(root)) u`.
///
/// `u` is indexed by vertex id of the largest window; since windows nest it
/// restricts to every smaller one.
pub fn ground_state_trend(evidence: &NullSequenceEvidence, u: &[f64], core: &[VertexId]) -> Result<GroundStateTrend> {
    let root = evidence.root;
    for &x in core.iter().chain(core::iter::once(&root)) {
        let value = *u.get(x).ok_or(Error::VertexOutOfRange { vertex: x, count: u.len() })?;
        if !(value > 0.0) {
            return Err(Error::NotStrictlyPositive { vertex: x, value });
        }
    }
    let scale = evidence.alpha / u[root];
    let mut deviations = Vec::with_capacity(evidence.steps.len());
    for step in &evidence.steps {
        let mut dev = 0.0f64;
        for &x in core {
            let e = *step.e_n.get(x).ok_or(Error::VertexOutOfRange { vertex: x, count: step.e_n.len() })?;
            dev = dev.max(abs(e - scale * u[x]));
        }
        deviations.push(dev);
    }
    let decreasing = deviations.windows(2).all(|w| w[1] <= w[0] + 1e-12);
    Ok(GroundStateTrend { scale, core: core.to_vec(), deviations, radii: evidence.radii(), decreasing })
}
