//! Transfer of criticality between two energies on the same exhaustion.
//!
//! [`liouville_check`] compares a critical energy `h` with ground state `u`
//! against a second energy `h~` and a positive `h~`-subharmonic `u~`. When the
//! pointwise comparisons hold, the null sequence of `h` transported by
//! `u~ / u` is a null sequence of `h~`.
//!
//! [`gsr_criticality_transfer`] compares `h` with the simplified energy
//! `h_{u,1}` for a positive harmonic `u`, capacity by capacity.

use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::capacity::{capacity, CapacityOptions};
use super::nullseq::{null_sequence_search, trend, TrendCriteria, TrendSummary};
use crate::energy::{energy, CorollaryConstants};
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::math::{abs, abs_pow, pow};
use crate::models::{ExhaustibleModel, Window};
use crate::operators::{classify, HarmonicityKind, PExponent};

/// Scalar function on window coordinates, shared by every window.
pub type CoordFn<'a> = &'a dyn Fn([i64; 2]) -> f64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LiouvilleConstants {
    /// Constant in `b^(2/p) u(x) u(y) >= alpha b~^(2/p) u~(x) u~(y)`.
    pub alpha: f64,
    /// Constant in `b^(1/p) |grad u| >= beta b~^(1/p) |grad u~|`, reversed
    /// for `p < 2`.
    pub beta: f64,
}

impl Default for LiouvilleConstants {
    fn default() -> Self {
        Self { alpha: 1.0, beta: 1.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypothesisOutcome {
    pub name: String,
    pub holds: bool,
    /// Worst slack over the checked points; negative when violated.
    pub min_slack: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LiouvilleVerdict {
    Critical,
    HypothesesNotMet { failing: Vec<String> },
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LiouvilleReport {
    pub verdict: LiouvilleVerdict,
    pub hypotheses: Vec<HypothesisOutcome>,
    pub radii: Vec<usize>,
    /// `h(e_n)` for the null sequence of `h` pinned at `u(root)`.
    pub reference_energies: Vec<f64>,
    pub reference_trend: TrendSummary,
    /// `h~(u~ e_n / u)`
    pub transported_energies: Vec<f64>,
    pub transported_trend: TrendSummary,
}

fn sample(w: &Window, f: CoordFn<'_>) -> Vec<f64> {
    w.coords.iter().map(|&c| f(c)).collect()
}

fn same_vertices(a: &Window, b: &Window) -> Result<()> {
    if a.coords != b.coords {
        return Err(Error::InvalidParameter(String::from("models do not share their windows")));
    }
    Ok(())
}

fn outcome(name: &str, min_slack: f64, detail: Option<String>) -> HypothesisOutcome {
    HypothesisOutcome { name: String::from(name), holds: min_slack >= 0.0, min_slack, detail }
}

/// Pointwise comparisons `(c)` and `(d)` over the edges of the reference
/// window. Edges missing from one graph count with weight zero.
fn edge_comparisons(
    g: &WeightedGraph,
    gt: &WeightedGraph,
    u: &[f64],
    ut: &[f64],
    p: f64,
    k: &LiouvilleConstants,
) -> (f64, f64) {
    let mut pairs: Vec<(usize, usize)> = g.edges().map(|e| (e.x, e.y)).collect();
    pairs.extend(gt.edges().map(|e| (e.x, e.y)));
    pairs.sort_unstable();
    pairs.dedup();
    let (mut product, mut gradient) = (f64::INFINITY, f64::INFINITY);
    for (x, y) in pairs {
        let (b, bt) = (g.weight(x, y), gt.weight(x, y));
        let lhs = pow(b, 2.0 / p) * u[x] * u[y];
        let rhs = k.alpha * pow(bt, 2.0 / p) * ut[x] * ut[y];
        product = product.min((lhs - rhs) / (1.0 + abs(lhs) + abs(rhs)) + 1e-12);
        let ours = pow(b, 1.0 / p) * abs(u[x] - u[y]);
        let theirs = k.beta * pow(bt, 1.0 / p) * abs(ut[x] - ut[y]);
        let slack = if p >= 2.0 { ours - theirs } else { theirs - ours };
        gradient = gradient.min(slack / (1.0 + ours + theirs) + 1e-12);
    }
    (product, gradient)
}

/// Checks the hypotheses of the transfer on the largest window and reads the
/// conclusion off the transported null sequence.
///
/// `superharmonic` is a positive `h~`-superharmonic function; when absent,
/// `u~` itself is used and must then be harmonic.
#[allow(clippy::too_many_arguments)]
pub fn liouville_check(
    reference: &ExhaustibleModel,
    comparison: &ExhaustibleModel,
    u: CoordFn<'_>,
    u_tilde: CoordFn<'_>,
    superharmonic: Option<CoordFn<'_>>,
    constants: &LiouvilleConstants,
    p: PExponent,
    radii: &[usize],
    opts: &CapacityOptions,
) -> Result<LiouvilleReport> {
    let p = p.require_superlinear()?;
    let largest = *radii.iter().max().ok_or_else(|| Error::InvalidParameter(String::from("no radii given")))?;
    let w = reference.window(largest)?;
    let wt = comparison.window(largest)?;
    same_vertices(&w, &wt)?;
    let (g, gt) = (&w.graph, &wt.graph);
    let (uv, utv) = (sample(&w, u), sample(&wt, u_tilde));
    for (x, &value) in uv.iter().chain(&utv).enumerate() {
        if !(value > 0.0) {
            return Err(Error::NotStrictlyPositive { vertex: x % uv.len(), value });
        }
    }

    let root = reference.root();
    let evidence = null_sequence_search(reference, root, uv[root], p, radii, opts)?;
    let criteria = TrendCriteria::default();
    let reference_energies = evidence.energies();
    let reference_trend = trend(&evidence.radii(), &reference_energies, &criteria);
    let mut hypotheses = alloc::vec![outcome(
        "a",
        if reference_trend.critical { 0.0 } else { -1.0 },
        Some(alloc::format!("final ratio {:.3e}", reference_trend.final_ratio)),
    )];

    let sub = classify(gt, &utv, gt.interior(), p, None)?;
    let sub_ok = matches!(sub.kind, HarmonicityKind::Harmonic | HarmonicityKind::Subharmonic);
    let witness_ok = match superharmonic {
        Some(f) => {
            let s = sample(&wt, f);
            s.iter().all(|&v| v > 0.0) && classify(gt, &s, gt.interior(), p, None)?.is_supersolution()
        }
        None => sub.kind == HarmonicityKind::Harmonic,
    };
    hypotheses.push(outcome(
        "b",
        if sub_ok && witness_ok { 0.0 } else { -1.0 },
        Some(alloc::format!("max H~u~ = {:.3e}", sub.max_value)),
    ));

    let (product, gradient) = edge_comparisons(g, gt, &uv, &utv, p.value(), constants);
    hypotheses.push(outcome("c", product, None));
    hypotheses.push(outcome("d", gradient, None));

    let mut transported_energies = Vec::with_capacity(evidence.steps.len());
    for step in &evidence.steps {
        let wr = comparison.window(step.radius)?;
        let ur = sample(&wr, u);
        let utr = sample(&wr, u_tilde);
        let psi: Vec<f64> = step.e_n.iter().enumerate().map(|(x, &e)| utr[x] * e / ur[x]).collect();
        transported_energies.push(energy(&wr.graph, &psi, p)?.total);
    }
    let transported_trend = trend(&evidence.radii(), &transported_energies, &criteria);

    let failing: Vec<String> = hypotheses.iter().filter(|h| !h.holds).map(|h| h.name.clone()).collect();
    let verdict = if !failing.is_empty() {
        LiouvilleVerdict::HypothesesNotMet { failing }
    } else if transported_trend.critical {
        LiouvilleVerdict::Critical
    } else {
        LiouvilleVerdict::Inconclusive
    };
    Ok(LiouvilleReport {
        verdict,
        hypotheses,
        radii: evidence.radii(),
        reference_energies,
        reference_trend,
        transported_energies,
        transported_trend,
    })
}

/// Weights on `0 - 1 - ... - n` making an increasing `u` harmonic at every
/// inner vertex: `b(k, k+1) = 1 / phi_p(u(k+1) - u(k))`.
pub fn harmonic_line_weights(u: &[f64], p: PExponent) -> Result<Vec<f64>> {
    u.windows(2)
        .enumerate()
        .map(|(k, w)| {
            let d = w[1] - w[0];
            if !(d > 0.0) {
                return Err(Error::InvalidParameter(alloc::format!("u must increase strictly at {k}")));
            }
            Ok(1.0 / pow(d, p.value() - 1.0))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransferStep {
    pub radius: usize,
    /// Capacity of `h` at the root.
    pub capacity: f64,
    /// Capacity of `h_{u,1}` at the root for the same pin, `u(o)^(-p)` times
    /// that of the reweighted graph.
    pub simplified_capacity: f64,
    /// The corollary bound between the two held.
    pub bound_holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransferReport {
    pub p: f64,
    pub constants: CorollaryConstants,
    pub steps: Vec<TransferStep>,
    pub trend: TrendSummary,
    pub simplified_trend: TrendSummary,
    /// Both trends read the same way.
    pub agree: bool,
}

/// `h` and `h_{u,1}` have comparable capacities, so they are critical
/// together. `u` must be positive and harmonic on every window.
pub fn gsr_criticality_transfer(
    model: &ExhaustibleModel,
    u: CoordFn<'_>,
    p: PExponent,
    radii: &[usize],
    opts: &CapacityOptions,
) -> Result<TransferReport> {
    let p = p.require_superlinear()?;
    if radii.is_empty() {
        return Err(Error::InvalidParameter(String::from("no radii given")));
    }
    let constants = CorollaryConstants::for_exponent(p)?;
    let root = model.root();
    let local = CapacityOptions { pin: 1.0, warm_start: None, ..opts.clone() };
    let mut steps = Vec::with_capacity(radii.len());
    for &r in radii {
        let w = model.window(r)?;
        let g = &w.graph;
        let uv = sample(&w, u);
        if let Some(x) = (0..uv.len()).find(|&x| !(uv[x] > 0.0)) {
            return Err(Error::NotStrictlyPositive { vertex: x, value: uv[x] });
        }
        let class = classify(g, &uv, g.interior(), p, None)?;
        if class.kind != HarmonicityKind::Harmonic {
            let x = if abs(class.min_value) > abs(class.max_value) { class.argmin } else { class.argmax };
            let value = if abs(class.min_value) > abs(class.max_value) { class.min_value } else { class.max_value };
            return Err(Error::NotHarmonic { vertex: x.unwrap_or(0), value });
        }
        let gu = g
            .reweighted(|x, y, b| b * pow(uv[x] * uv[y], p.value() / 2.0))?
            .with_potential(alloc::vec![0.0; uv.len()])?;
        let cap = capacity(g, root, g.interior(), p, &local)?.value;
        let simplified = capacity(&gu, root, gu.interior(), p, &local)?.value / abs_pow(uv[root], p.value());
        let tol = 1e-8 * (1.0 + cap + simplified);
        let lower_ok = constants.lower.map_or(true, |k| k * simplified <= cap + tol);
        let upper_ok = constants.upper.map_or(true, |k| cap <= k * simplified + tol);
        steps.push(TransferStep {
            radius: r,
            capacity: cap,
            simplified_capacity: simplified,
            bound_holds: lower_ok && upper_ok,
        });
    }
    let criteria = TrendCriteria::default();
    let caps: Vec<f64> = steps.iter().map(|s| s.capacity).collect();
    let simple: Vec<f64> = steps.iter().map(|s| s.simplified_capacity).collect();
    let t = trend(radii, &caps, &criteria);
    let st = trend(radii, &simple, &criteria);
    Ok(TransferReport {
        p: p.value(),
        constants,
        steps,
        trend: t,
        simplified_trend: st,
        agree: t.critical == st.critical,
    })
}
