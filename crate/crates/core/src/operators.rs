//! The p-Laplacian `L`, the p-Schrödinger operator `H = L + (c/m) phi_p`,
//! Green's formula and harmonicity classification.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{VertexId, VertexSubset, WeightedGraph};
use crate::math::{abs, pow, PairwiseSum};

/// The exponent `p >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct PExponent(f64);

impl PExponent {
    pub fn new(p: f64) -> Result<Self> {
        if !p.is_finite() {
            return Err(Error::InvalidExponent { p, reason: "must be finite" });
        }
        if p < 1.0 {
            return Err(Error::InvalidExponent { p, reason: "must satisfy p >= 1" });
        }
        Ok(Self(p))
    }

    /// Exponent for operations that need strict convexity of `|t|^p`.
    pub fn superlinear(p: f64) -> Result<Self> {
        Self::new(p)?.require_superlinear()
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Hölder conjugate `q = p / (p - 1)`; infinite at `p = 1`.
    pub fn conjugate(self) -> f64 {
        if self.0 == 1.0 {
            f64::INFINITY
        } else {
            self.0 / (self.0 - 1.0)
        }
    }

    pub fn require_superlinear(self) -> Result<Self> {
        if self.0 > 1.0 {
            Ok(self)
        } else {
            Err(Error::InvalidExponent { p: self.0, reason: "this operation requires p > 1" })
        }
    }
}

impl TryFrom<f64> for PExponent {
    type Error = Error;
    fn try_from(p: f64) -> Result<Self> {
        Self::new(p)
    }
}

impl From<PExponent> for f64 {
    fn from(p: PExponent) -> f64 {
        p.0
    }
}

/// `phi_p(t) = |t|^(p-2) t`, with `phi_p(0) = 0` for every `p`.
#[inline]
pub fn phi_p(t: f64, p: PExponent) -> f64 {
    if t == 0.0 {
        0.0
    } else if p.0 == 2.0 {
        t
    } else {
        let m = pow(abs(t), p.0 - 1.0);
        if t > 0.0 {
            m
        } else {
            -m
        }
    }
}

/// `f(x) - f(y)`.
#[inline]
pub fn gradient(f: &[f64], x: VertexId, y: VertexId) -> f64 {
    f[x] - f[y]
}

/// `m(x) Lf(x)`: the neighbour sum without the measure normalisation.
pub(crate) fn weighted_laplacian_sum(g: &WeightedGraph, f: &[f64], x: VertexId, p: PExponent) -> f64 {
    let mut acc = PairwiseSum::new();
    for (y, b) in g.neighbors(x) {
        acc.push(b * phi_p(gradient(f, x, y), p));
    }
    acc.total()
}

pub(crate) fn schrodinger_unchecked(g: &WeightedGraph, f: &[f64], x: VertexId, p: PExponent) -> f64 {
    (weighted_laplacian_sum(g, f, x, p) + g.potential(x) * phi_p(f[x], p)) / g.measure(x)
}

/// `Lf(x) = (1/m(x)) sum_y b(x,y) phi_p(f(x) - f(y))` at an interior vertex.
pub fn p_laplacian(g: &WeightedGraph, f: &[f64], x: VertexId, p: PExponent) -> Result<f64> {
    g.check_len(f)?;
    g.check_vertex(x)?;
    if !g.is_interior(x) {
        return Err(Error::NotInterior { vertex: x });
    }
    Ok(weighted_laplacian_sum(g, f, x, p) / g.measure(x))
}

/// `Hf(x)` at an interior vertex.
pub fn schroedinger_at(g: &WeightedGraph, f: &[f64], x: VertexId, p: PExponent) -> Result<f64> {
    g.check_len(f)?;
    g.check_vertex(x)?;
    if !g.is_interior(x) {
        return Err(Error::NotInterior { vertex: x });
    }
    Ok(schrodinger_unchecked(g, f, x, p))
}

/// Values of an operator on the interior. Boundary entries are `None`: the
/// window does not contain their full neighbourhood.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct InteriorValues {
    values: Vec<Option<f64>>,
}

impl InteriorValues {
    pub fn get(&self, x: VertexId) -> Option<f64> {
        self.values.get(x).copied().flatten()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn as_slice(&self) -> &[Option<f64>] {
        &self.values
    }

    /// `(vertex, value)` over the defined entries.
    pub fn defined(&self) -> impl Iterator<Item = (VertexId, f64)> + '_ {
        self.values.iter().enumerate().filter_map(|(i, v)| v.map(|v| (i, v)))
    }
}

/// `Hf` on the interior of `g`.
pub fn schroedinger_apply(g: &WeightedGraph, f: &[f64], p: PExponent) -> Result<InteriorValues> {
    g.check_len(f)?;
    let values = (0..g.vertex_count()).map(|x| g.is_interior(x).then(|| schrodinger_unchecked(g, f, x, p))).collect();
    Ok(InteriorValues { values })
}

/// Both sides of Green's formula on `V`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GreenSides {
    /// `sum_{x in V} Hf(x) phi(x) m(x)`
    pub lhs: f64,
    /// `1/2 sum_{x,y in V} b phi_p(grad f) grad phi`
    pub interior_term: f64,
    /// `sum_{x in V} c phi_p(f) phi`
    pub potential_term: f64,
    /// `sum_{x in V, y in dV} b phi_p(grad f) phi(x)`
    pub boundary_term: f64,
}

impl GreenSides {
    pub fn rhs(&self) -> f64 {
        self.interior_term + self.potential_term + self.boundary_term
    }

    pub fn residual(&self) -> f64 {
        abs(self.lhs - self.rhs())
    }
}

/// Evaluates both sides of Green's formula for `f` and a test function `phi`
/// on a subset `V` of the interior.
pub fn greens_sides(g: &WeightedGraph, f: &[f64], phi: &[f64], v: &VertexSubset, p: PExponent) -> Result<GreenSides> {
    g.check_len(f)?;
    g.check_len(phi)?;
    g.check_subset(v)?;
    if let Some(x) = v.iter().find(|&x| !g.is_interior(x)) {
        return Err(Error::NotInterior { vertex: x });
    }
    let mut lhs = PairwiseSum::new();
    let mut interior = PairwiseSum::new();
    let mut potential = PairwiseSum::new();
    let mut boundary = PairwiseSum::new();
    for x in v.iter() {
        lhs.push(schrodinger_unchecked(g, f, x, p) * phi[x] * g.measure(x));
        potential.push(g.potential(x) * phi_p(f[x], p) * phi[x]);
        for (y, b) in g.neighbors(x) {
            let flux = b * phi_p(gradient(f, x, y), p);
            if v.contains(y) {
                // Each unordered pair is visited from both ends; (1/2) sum over
                // ordered pairs equals the sum over x < y.
                if x < y {
                    interior.push(flux * gradient(phi, x, y));
                }
            } else {
                boundary.push(flux * phi[x]);
            }
        }
    }
    Ok(GreenSides {
        lhs: lhs.total(),
        interior_term: interior.total(),
        potential_term: potential.total(),
        boundary_term: boundary.total(),
    })
}

/// `|LHS - RHS|` of Green's formula.
pub fn greens_residual(g: &WeightedGraph, f: &[f64], phi: &[f64], v: &VertexSubset, p: PExponent) -> Result<f64> {
    greens_sides(g, f, phi, v, p).map(|s| s.residual())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HarmonicityKind {
    Harmonic,
    /// `Hu >= 0` on `V`, strictly positive somewhere.
    Superharmonic,
    /// `Hu <= 0` on `V`, strictly negative somewhere.
    Subharmonic,
    Neither,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HarmonicityClass {
    pub kind: HarmonicityKind,
    pub tol: f64,
    /// `min_V Hu` and where it is attained (`None` for empty `V`).
    pub min_value: f64,
    pub argmin: Option<VertexId>,
    pub max_value: f64,
    pub argmax: Option<VertexId>,
}

impl HarmonicityClass {
    /// Harmonic or superharmonic.
    pub fn is_supersolution(&self) -> bool {
        matches!(self.kind, HarmonicityKind::Harmonic | HarmonicityKind::Superharmonic)
    }

    /// Harmonic or subharmonic.
    pub fn is_subsolution(&self) -> bool {
        matches!(self.kind, HarmonicityKind::Harmonic | HarmonicityKind::Subharmonic)
    }
}

/// Scale-aware zero threshold `1e-9 (1 + max|u|^(p-1) max deg / min m)`.
pub fn default_tolerance(g: &WeightedGraph, u: &[f64], p: PExponent) -> f64 {
    let max_u = u.iter().fold(0.0f64, |a, &v| a.max(abs(v)));
    let min_m = g.measures().iter().copied().fold(f64::INFINITY, f64::min);
    let min_m = if min_m.is_finite() { min_m } else { 1.0 };
    1e-9 * (1.0 + pow(max_u, p.value() - 1.0) * g.max_degree() / min_m)
}

/// Classifies `u` on `V` (a subset of the interior) by the sign of `Hu`.
pub fn classify(
    g: &WeightedGraph,
    u: &[f64],
    v: &VertexSubset,
    p: PExponent,
    tol: Option<f64>,
) -> Result<HarmonicityClass> {
    g.check_len(u)?;
    g.check_subset(v)?;
    if let Some(x) = v.iter().find(|&x| !g.is_interior(x)) {
        return Err(Error::NotInterior { vertex: x });
    }
    let tol = tol.unwrap_or_else(|| default_tolerance(g, u, p));
    let mut min_value = f64::INFINITY;
    let mut max_value = f64::NEG_INFINITY;
    let mut argmin = None;
    let mut argmax = None;
    for x in v.iter() {
        let hu = schrodinger_unchecked(g, u, x, p);
        if hu < min_value {
            min_value = hu;
            argmin = Some(x);
        }
        if hu > max_value {
            max_value = hu;
            argmax = Some(x);
        }
    }
    let kind = if argmin.is_none() || (min_value >= -tol && max_value <= tol) {
        HarmonicityKind::Harmonic
    } else if min_value >= -tol {
        HarmonicityKind::Superharmonic
    } else if max_value <= tol {
        HarmonicityKind::Subharmonic
    } else {
        HarmonicityKind::Neither
    };
    if argmin.is_none() {
        min_value = 0.0;
        max_value = 0.0;
    }
    Ok(HarmonicityClass { kind, tol, min_value, argmin, max_value, argmax })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphBuilder;
    use crate::math::sqrt;
    use std::vec;

    fn p(v: f64) -> PExponent {
        PExponent::new(v).unwrap()
    }

    #[test]
    fn phi_p_examples() {
        assert_eq!(phi_p(0.0, p(1.5)), 0.0);
        assert_eq!(phi_p(2.0, p(3.0)), 4.0);
        assert_eq!(phi_p(-3.0, p(2.0)), -3.0);
        assert_eq!(phi_p(-2.0, p(1.0)), -1.0);
    }

    #[test]
    fn exponent_validation() {
        assert!(PExponent::new(0.5).is_err());
        assert!(PExponent::new(f64::NAN).is_err());
        assert!(PExponent::superlinear(1.0).is_err());
        assert_eq!(p(3.0).conjugate(), 1.5);
        assert!(p(1.0).conjugate().is_infinite());
    }

    #[test]
    fn gradient_examples() {
        let f = [0.0, 1.0, 2.0];
        assert_eq!(gradient(&f, 2, 0), 2.0);
        assert_eq!(gradient(&[3.0; 3], 0, 2), 0.0);
    }

    fn nat_window(len: usize) -> WeightedGraph {
        let mut b = GraphBuilder::new(len);
        for i in 0..len - 1 {
            b.add_edge(i, i + 1, 1.0);
        }
        b.interior(VertexSubset::from_ids(len, 1..len - 1).unwrap()).build().unwrap()
    }

    #[test]
    fn p_laplacian_examples() {
        let g = nat_window(5);
        let lin: Vec<f64> = (0..5).map(|n| n as f64).collect();
        assert_eq!(p_laplacian(&g, &lin, 1, p(3.0)).unwrap(), 0.0);
        assert_eq!(p_laplacian(&g, &[2.0; 5], 2, p(1.7)).unwrap(), 0.0);
        let u: Vec<f64> = (0..5).map(|n| sqrt(n as f64)).collect();
        let expected = (sqrt(2.0) - 1.0) - (sqrt(3.0) - sqrt(2.0));
        let got = p_laplacian(&g, &u, 2, p(2.0)).unwrap();
        assert!((got - expected).abs() < 1e-15);
        assert!(got > 0.0);
        assert_eq!(p_laplacian(&g, &u, 0, p(2.0)), Err(Error::NotInterior { vertex: 0 }));
    }

    #[test]
    fn schroedinger_two_vertex_example() {
        let g = GraphBuilder::new(2)
            .edge(0, 1, 1.0)
            .measure(vec![2.0, 1.0])
            .potential(vec![3.0, 0.0])
            .interior(VertexSubset::from_ids(2, [0]).unwrap())
            .build()
            .unwrap();
        let hf = schroedinger_apply(&g, &[1.0, 0.0], p(2.0)).unwrap();
        assert_eq!(hf.get(0), Some(2.0));
        assert_eq!(hf.get(1), None);
        let zero = schroedinger_apply(&g, &[0.0, 0.0], p(2.0)).unwrap();
        assert_eq!(zero.get(0), Some(0.0));
    }

    #[test]
    fn greens_path_example() {
        let g = GraphBuilder::new(3).edge(0, 1, 1.0).edge(1, 2, 1.0).build().unwrap();
        let v = VertexSubset::from_ids(3, [1]).unwrap();
        let s = greens_sides(&g, &[0.0, 1.0, 0.0], &[0.0, 1.0, 0.0], &v, p(2.0)).unwrap();
        assert_eq!(s.lhs, 2.0);
        assert_eq!(s.interior_term, 0.0);
        assert_eq!(s.boundary_term, 2.0);
        assert_eq!(s.residual(), 0.0);
        let r = greens_residual(&g, &[0.3, 1.0, -2.0], &[0.0; 3], &v, p(2.5)).unwrap();
        assert_eq!(r, 0.0);
    }

    #[test]
    fn classify_examples() {
        let g = nat_window(8);
        let interior = g.interior().clone();
        let c = classify(&g, &[4.0; 8], &interior, p(2.0), None).unwrap();
        assert_eq!(c.kind, HarmonicityKind::Harmonic);
        let pe = p(1.5);
        let u: Vec<f64> = (0..8).map(|n| pow(n as f64, (pe.value() - 1.0) / pe.value())).collect();
        let c = classify(&g, &u, &interior, pe, None).unwrap();
        assert_eq!(c.kind, HarmonicityKind::Superharmonic);
        let neg: Vec<f64> = u.iter().map(|v| -v).collect();
        assert_eq!(classify(&g, &neg, &interior, pe, None).unwrap().kind, HarmonicityKind::Subharmonic);
    }
}
