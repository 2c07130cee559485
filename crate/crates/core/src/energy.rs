//! The energy functional `h`, the weighted bracket, the simplified energies
//! and the ground state representation check.
//!
//! All double sums over `X x X` with a symmetric summand are evaluated once
//! per undirected edge. For `h` this is the `1/2` in its definition. For the
//! simplified energies `h_u`, `h_{u,1}`, `h_{u,2}`, `h_{u,3}` the same
//! edge-once reading is what makes the representation an identity at `p = 2`.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{VertexId, WeightedGraph};
use crate::inequalities;
use crate::math::{abs, abs_pow, pow, sqrt, PairwiseSum};
use crate::operators::{schrodinger_unchecked, PExponent};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdgeTerm {
    pub x: VertexId,
    pub y: VertexId,
    pub b: f64,
    pub term: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport {
    pub total: f64,
    pub gradient_part: f64,
    pub potential_part: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub edge_terms: Option<Vec<EdgeTerm>>,
}

fn energy_impl(g: &WeightedGraph, f: &[f64], p: PExponent, keep_terms: bool) -> Result<EnergyReport> {
    g.check_len(f)?;
    let pv = p.value();
    let mut grad = PairwiseSum::new();
    let mut terms = keep_terms.then(Vec::new);
    for e in g.edges() {
        let term = e.b * abs_pow(f[e.x] - f[e.y], pv);
        grad.push(term);
        if let Some(t) = terms.as_mut() {
            t.push(EdgeTerm { x: e.x, y: e.y, b: e.b, term });
        }
    }
    let mut pot = PairwiseSum::new();
    for (x, &fx) in f.iter().enumerate() {
        pot.push(g.potential(x) * abs_pow(fx, pv));
    }
    let gradient_part = grad.total();
    let potential_part = pot.total();
    Ok(EnergyReport { total: gradient_part + potential_part, gradient_part, potential_part, edge_terms: terms })
}

/// `h(f) = 1/2 sum_{x,y} b |f(x) - f(y)|^p + sum_x c |f(x)|^p` over the window.
///
/// Equals the energy on the underlying infinite graph whenever `f` vanishes
/// off the interior.
pub fn energy(g: &WeightedGraph, f: &[f64], p: PExponent) -> Result<EnergyReport> {
    energy_impl(g, f, p, false)
}

/// [`energy`] with the per-edge gradient terms attached.
pub fn energy_with_terms(g: &WeightedGraph, f: &[f64], p: PExponent) -> Result<EnergyReport> {
    energy_impl(g, f, p, true)
}

/// `<f, phi> = sum_x f(x) phi(x) m(x)`.
pub fn bracket(g: &WeightedGraph, f: &[f64], phi: &[f64]) -> Result<f64> {
    g.check_len(f)?;
    g.check_len(phi)?;
    let mut acc = PairwiseSum::new();
    for x in 0..g.vertex_count() {
        acc.push(f[x] * phi[x] * g.measure(x));
    }
    Ok(acc.total())
}

pub(crate) fn require_nonnegative(u: &[f64]) -> Result<()> {
    match u.iter().position(|&v| !(v >= 0.0)) {
        Some(x) => Err(Error::NegativeFunction { vertex: x, value: u[x] }),
        None => Ok(()),
    }
}

/// Errors unless `phi` vanishes off the interior of `g`.
pub(crate) fn require_interior_support(g: &WeightedGraph, phi: &[f64]) -> Result<()> {
    match (0..g.vertex_count()).find(|&x| phi[x] != 0.0 && !g.is_interior(x)) {
        Some(x) => Err(Error::OutsideSupport { vertex: x }),
        None => Ok(()),
    }
}

fn edge_sum<F: FnMut(f64, f64, f64, f64, f64) -> f64>(g: &WeightedGraph, u: &[f64], phi: &[f64], mut term: F) -> f64 {
    let mut acc = PairwiseSum::new();
    for e in g.edges() {
        acc.push(term(e.b, u[e.x], u[e.y], phi[e.x], phi[e.y]));
    }
    acc.total()
}

fn check_simplified(g: &WeightedGraph, u: &[f64], phi: &[f64], p: PExponent) -> Result<()> {
    p.require_superlinear()?;
    g.check_len(u)?;
    g.check_len(phi)?;
    require_nonnegative(u)
}

/// Edge term of `h_u`. A vanishing prefactor `u(x)u(y)(grad phi)^2` gives 0
/// even where the bracket power would be infinite (`1 < p < 2`).
#[inline]
pub(crate) fn simplified_term(b: f64, ux: f64, uy: f64, fx: f64, fy: f64, p: f64) -> f64 {
    let d = fx - fy;
    let pre = ux * uy * d * d;
    if pre == 0.0 {
        return 0.0;
    }
    let inner = sqrt(ux * uy) * abs(d) + 0.5 * (abs(fx) + abs(fy)) * abs(ux - uy);
    b * pre * pow(inner, p - 2.0)
}

/// The simplified energy `h_u(phi)`.
pub fn simplified_energy(g: &WeightedGraph, u: &[f64], phi: &[f64], p: PExponent) -> Result<f64> {
    check_simplified(g, u, phi, p)?;
    let pv = p.value();
    Ok(edge_sum(g, u, phi, |b, ux, uy, fx, fy| simplified_term(b, ux, uy, fx, fy, pv)))
}

/// `h_{u,1}(phi) = sum_edges b (u(x)u(y))^(p/2) |grad phi|^p`.
pub fn simplified_energy_1(g: &WeightedGraph, u: &[f64], phi: &[f64], p: PExponent) -> Result<f64> {
    check_simplified(g, u, phi, p)?;
    let pv = p.value();
    Ok(edge_sum(g, u, phi, |b, ux, uy, fx, fy| b * abs_pow(ux * uy, 0.5 * pv) * abs_pow(fx - fy, pv)))
}

/// `h_{u,2}(phi)`, defined for `p >= 2`.
pub fn simplified_energy_2(g: &WeightedGraph, u: &[f64], phi: &[f64], p: PExponent) -> Result<f64> {
    if p.value() < 2.0 {
        return Err(Error::InvalidExponent { p: p.value(), reason: "h_{u,2} requires p >= 2" });
    }
    check_simplified(g, u, phi, p)?;
    let pv = p.value();
    Ok(edge_sum(g, u, phi, |b, ux, uy, fx, fy| {
        let d = fx - fy;
        b * ux * uy * abs_pow(ux - uy, pv - 2.0) * abs_pow(0.5 * (abs(fx) + abs(fy)), pv - 2.0) * d * d
    }))
}

/// `h_{u,3}(phi)`: the bracket uses `|grad(u phi)| + |phi_u| |grad u|` with
/// `phi_u(x,y)` equal to `phi(x)` if `u(x) < u(y)`, `phi(y)` if
/// `u(x) > u(y)` and 0 otherwise.
pub fn simplified_energy_3(g: &WeightedGraph, u: &[f64], phi: &[f64], p: PExponent) -> Result<f64> {
    check_simplified(g, u, phi, p)?;
    let pv = p.value();
    Ok(edge_sum(g, u, phi, |b, ux, uy, fx, fy| {
        let d = fx - fy;
        let pre = ux * uy * d * d;
        if pre == 0.0 {
            return 0.0;
        }
        let du = ux - uy;
        let selected = if du < 0.0 {
            fx
        } else if du > 0.0 {
            fy
        } else {
            0.0
        };
        let inner = abs(ux * fx - uy * fy) + abs(selected) * abs(du);
        b * pre * pow(inner, pv - 2.0)
    }))
}

/// `h(u phi) - <Hu, u |phi|^p>` for `u >= 0` and `phi` supported in the
/// interior.
pub fn picone_residual(g: &WeightedGraph, u: &[f64], phi: &[f64], p: PExponent) -> Result<f64> {
    p.require_superlinear()?;
    g.check_len(u)?;
    g.check_len(phi)?;
    require_nonnegative(u)?;
    require_interior_support(g, phi)?;
    let pv = p.value();
    let product: Vec<f64> = u.iter().zip(phi).map(|(a, b)| a * b).collect();
    let h = energy(g, &product, p)?.total;
    let mut acc = PairwiseSum::new();
    for x in 0..g.vertex_count() {
        if phi[x] != 0.0 {
            acc.push(schrodinger_unchecked(g, u, x, p) * u[x] * abs_pow(phi[x], pv) * g.measure(x));
        }
    }
    Ok(h - acc.total())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GsrReport {
    /// `h(u phi) - <Hu, u |phi|^p>`
    pub lhs: f64,
    /// `h_u(phi)`
    pub rhs: f64,
    /// `lhs / rhs` when `rhs > 0`.
    pub ratio: Option<f64>,
    /// Both sides vanish.
    pub degenerate: bool,
}

/// Compares both sides of the ground state representation for `(u, phi)`.
pub fn gsr_check(g: &WeightedGraph, u: &[f64], phi: &[f64], p: PExponent) -> Result<GsrReport> {
    let lhs = picone_residual(g, u, phi, p)?;
    let rhs = simplified_energy(g, u, phi, p)?;
    let (ratio, degenerate) = if rhs > 0.0 { (Some(lhs / rhs), false) } else { (None, abs(lhs) <= 1e-12) };
    Ok(GsrReport { lhs, rhs, ratio, degenerate })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub constant: f64,
    /// Nonnegative exactly when the bound holds (before tolerance).
    pub slack: f64,
    pub holds: bool,
}

/// Constants for the simplified-energy bounds in terms of `h_{u,1}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorollaryConstants {
    pub p: f64,
    /// `lhs >= lower h_{u,1}` for `p >= 2`: twice the minimiser constant
    /// `c_p`, since `h_{u,1}` is summed once per edge here.
    pub lower: Option<f64>,
    /// `lhs <= upper h_{u,1}` for `1 < p <= 2`, calibrated numerically.
    pub upper: Option<f64>,
}

impl CorollaryConstants {
    pub fn for_exponent(p: PExponent) -> Result<Self> {
        let p = p.require_superlinear()?;
        let pv = p.value();
        let lower = if pv >= 2.0 { Some(2.0 * inequalities::constant_cp(pv)?) } else { None };
        let upper = if pv <= 2.0 { Some(inequalities::corollary_upper_constant(pv)?) } else { None };
        Ok(Self { p: pv, lower, upper })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorollaryReport {
    pub lhs: f64,
    pub h_u1: f64,
    /// `h_{u,2}`, only for `p >= 2`.
    pub h_u2: Option<f64>,
    pub lower: Option<BoundCheck>,
    pub upper: Option<BoundCheck>,
    /// `lhs / (h_{u,1} + h_{u,2})` for `p >= 2` when the sum is positive.
    pub sum_ratio: Option<f64>,
    pub holds: bool,
}

/// Checks `lhs >= 2 c_p h_{u,1}` (`p >= 2`) and `lhs <= c' h_{u,1}`
/// (`p <= 2`), where `lhs = h(u phi) - <Hu, u|phi|^p>`.
pub fn corollary_bounds_check(
    g: &WeightedGraph,
    u: &[f64],
    phi: &[f64],
    p: PExponent,
    constants: &CorollaryConstants,
) -> Result<CorollaryReport> {
    if constants.p != p.value() {
        return Err(Error::InvalidParameter(alloc::format!(
            "constants computed for p = {}, called with p = {}",
            constants.p,
            p.value()
        )));
    }
    let lhs = picone_residual(g, u, phi, p)?;
    let h_u1 = simplified_energy_1(g, u, phi, p)?;
    let h_u2 = if p.value() >= 2.0 { Some(simplified_energy_2(g, u, phi, p)?) } else { None };
    let tol = |k: f64| 1e-10 * (1.0 + abs(lhs) + k * h_u1);
    let lower = constants.lower.map(|k| {
        let slack = lhs - k * h_u1;
        BoundCheck { constant: k, slack, holds: slack >= -tol(k) }
    });
    let upper = constants.upper.map(|k| {
        let slack = k * h_u1 - lhs;
        BoundCheck { constant: k, slack, holds: slack >= -tol(k) }
    });
    let sum_ratio = h_u2.and_then(|h2| {
        let s = h_u1 + h2;
        (s > 0.0).then(|| lhs / s)
    });
    let holds = lower.map_or(true, |b| b.holds) && upper.map_or(true, |b| b.holds);
    Ok(CorollaryReport { lhs, h_u1, h_u2, lower, upper, sum_ratio, holds })
}
