//! Local Harnack constants for nonnegative supersolutions `Hu >= f u^(p-1)`.
//!
//! Along an edge `x ~ y` of `K` a supersolution satisfies
//! `u(y) <= F(x -> y) u(x)` with `F(x -> y) = (d_f(x) / b(x,y))^(1/(p-1)) + 1`
//! and `d_f = deg + c - f m`. Chaining along paths gives a bound for every
//! ordered pair; the best one is a shortest path for the weights `ln F >= 0`.

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::energy::require_nonnegative;
use crate::error::{Error, Result};
use crate::graph::{VertexId, VertexSubset, WeightedGraph};
use crate::math::{abs, exp, ln, pow};
use crate::operators::{default_tolerance, schrodinger_unchecked, PExponent};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HarnackResult {
    /// `C_{K,H,f}`: the largest pairwise bound.
    pub constant: f64,
    /// Vertices of `K` in ascending order.
    pub vertices: Vec<VertexId>,
    /// `d_f = deg + c - f m` on `vertices`.
    pub defect: Vec<f64>,
    /// `pair_bounds[i][j]` bounds `u(vertices[j]) / u(vertices[i])`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair_bounds: Option<Vec<Vec<f64>>>,
    /// Ordered pair attaining the constant.
    pub extremal_pair: (VertexId, VertexId),
}

#[derive(Clone, Copy, PartialEq)]
struct Entry {
    dist: f64,
    vertex: usize,
}

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        // Min-heap on distance, ties to the smaller index.
        other.dist.partial_cmp(&self.dist).unwrap_or(Ordering::Equal).then_with(|| other.vertex.cmp(&self.vertex))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn dijkstra(adj: &[Vec<(usize, f64)>], source: usize) -> Vec<f64> {
    let mut dist = alloc::vec![f64::INFINITY; adj.len()];
    let mut heap = BinaryHeap::new();
    dist[source] = 0.0;
    heap.push(Entry { dist: 0.0, vertex: source });
    while let Some(Entry { dist: d, vertex: x }) = heap.pop() {
        if d > dist[x] {
            continue;
        }
        for &(y, w) in &adj[x] {
            let nd = d + w;
            if nd < dist[y] {
                dist[y] = nd;
                heap.push(Entry { dist: nd, vertex: y });
            }
        }
    }
    dist
}

/// `d_f` on `K`, rejecting negative values beyond rounding.
fn defects(g: &WeightedGraph, k: &[VertexId], f: &[f64]) -> Result<Vec<f64>> {
    k.iter()
        .map(|&x| {
            let d = g.degree_unchecked(x) + g.potential(x) - f[x] * g.measure(x);
            let scale = g.degree_unchecked(x) + abs(g.potential(x)) + abs(f[x] * g.measure(x));
            if d < -1e-12 * (1.0 + scale) {
                Err(Error::NegativeHarnackDefect { vertex: x, value: d })
            } else {
                Ok(d.max(0.0))
            }
        })
        .collect()
}

/// The Harnack constant of a finite connected `K` inside the interior.
pub fn harnack_constant(
    g: &WeightedGraph,
    k: &VertexSubset,
    f: &[f64],
    p: PExponent,
    keep_pairs: bool,
) -> Result<HarnackResult> {
    let p = p.require_superlinear()?;
    g.check_subset(k)?;
    g.check_len(f)?;
    if k.is_empty() || !g.is_connected(k) {
        return Err(Error::Disconnected);
    }
    if let Some(x) = k.iter().find(|&x| !g.is_interior(x)) {
        return Err(Error::NotInterior { vertex: x });
    }
    let vertices = k.to_vec();
    let defect = defects(g, &vertices, f)?;
    let index = |x: VertexId| vertices.binary_search(&x).ok();
    let exponent = 1.0 / (p.value() - 1.0);
    let adj: Vec<Vec<(usize, f64)>> = vertices
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            g.neighbors(x).filter_map(|(y, b)| index(y).map(|j| (j, ln(pow(defect[i] / b, exponent) + 1.0)))).collect()
        })
        .collect();
    let n = vertices.len();
    let mut pairs = keep_pairs.then(|| Vec::with_capacity(n));
    let mut best = (0.0f64, (vertices[0], vertices[0]));
    for i in 0..n {
        let dist = dijkstra(&adj, i);
        for (j, &d) in dist.iter().enumerate() {
            if d > best.0 {
                best = (d, (vertices[i], vertices[j]));
            }
        }
        if let Some(p) = pairs.as_mut() {
            p.push(dist.iter().map(|&d| exp(d)).collect());
        }
    }
    Ok(HarnackResult { constant: exp(best.0), vertices, defect, pair_bounds: pairs, extremal_pair: best.1 })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HarnackVerification {
    pub constant: f64,
    /// `max_K u / min_K u` when `min_K u > 0`.
    pub ratio: Option<f64>,
    /// Set when `u` vanishes somewhere on `K`: whether it vanishes on all of
    /// `K` and its boundary.
    pub zero_propagation: Option<bool>,
    /// `min_K (Hu - f u^(p-1))`.
    pub min_excess: f64,
    pub holds: bool,
}

/// Verifies `max_K u <= C min_K u` for a supersolution `u >= 0`, or the
/// vanishing on `K` and its boundary when `u` has a zero in `K`.
pub fn harnack_verify(
    g: &WeightedGraph,
    k: &VertexSubset,
    f: &[f64],
    u: &[f64],
    p: PExponent,
) -> Result<HarnackVerification> {
    let p = p.require_superlinear()?;
    g.check_len(u)?;
    let closure = k.union(&g.boundary(k));
    let on_closure: Vec<f64> = closure.iter().map(|x| u[x]).collect();
    require_nonnegative(&on_closure).map_err(|_| {
        let x = closure.iter().find(|&x| !(u[x] >= 0.0)).unwrap_or(0);
        Error::NegativeFunction { vertex: x, value: u[x] }
    })?;
    let result = harnack_constant(g, k, f, p, false)?;
    let tol = default_tolerance(g, u, p);
    let mut min_excess = f64::INFINITY;
    for x in k.iter() {
        let excess = schrodinger_unchecked(g, u, x, p) - f[x] * pow(u[x], p.value() - 1.0);
        if excess < -tol {
            return Err(Error::SupersolutionViolated { vertex: x, excess });
        }
        min_excess = min_excess.min(excess);
    }
    let (lo, hi) = k.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), x| (lo.min(u[x]), hi.max(u[x])));
    if lo == 0.0 {
        let vanishes = closure.iter().all(|x| u[x] == 0.0);
        return Ok(HarnackVerification {
            constant: result.constant,
            ratio: None,
            zero_propagation: Some(vanishes),
            min_excess,
            holds: vanishes,
        });
    }
    let ratio = hi / lo;
    Ok(HarnackVerification {
        constant: result.constant,
        ratio: Some(ratio),
        zero_propagation: None,
        min_excess,
        holds: ratio <= result.constant * (1.0 + 1e-12),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{hardy_u_function, nat_line};
    use std::vec;

    fn p(v: f64) -> PExponent {
        PExponent::new(v).unwrap()
    }

    #[test]
    fn singleton_has_constant_one() {
        let g = nat_line(4).unwrap();
        let k = VertexSubset::from_ids(5, [2]).unwrap();
        assert_eq!(harnack_constant(&g, &k, &[0.0; 5], p(2.0), false).unwrap().constant, 1.0);
    }

    #[test]
    fn half_line_pair() {
        let g = nat_line(4).unwrap();
        let k = VertexSubset::from_ids(5, [1, 2]).unwrap();
        let r = harnack_constant(&g, &k, &[0.0; 5], p(2.0), true).unwrap();
        assert!((r.constant - 3.0).abs() < 1e-12);
        assert_eq!(r.defect, vec![2.0, 2.0]);
        assert_eq!(r.pair_bounds.unwrap()[0][0], 1.0);
    }

    #[test]
    fn disconnected_rejected() {
        let g = nat_line(6).unwrap();
        let k = VertexSubset::from_ids(7, [1, 3]).unwrap();
        assert_eq!(harnack_constant(&g, &k, &[0.0; 7], p(2.0), false).unwrap_err(), Error::Disconnected);
    }

    #[test]
    fn negative_defect_rejected() {
        let g = nat_line(4).unwrap();
        let k = VertexSubset::from_ids(5, [1, 2]).unwrap();
        assert!(matches!(
            harnack_constant(&g, &k, &[0.0, 3.0, 0.0, 0.0, 0.0], p(2.0), false),
            Err(Error::NegativeHarnackDefect { vertex: 1, .. })
        ));
    }

    #[test]
    fn hardy_u_bound_holds() {
        let g = nat_line(12).unwrap();
        let u = hardy_u_function(13, p(1.5)).unwrap();
        let k = VertexSubset::from_ids(13, 1..12).unwrap();
        let v = harnack_verify(&g, &k, &[0.0; 13], &u, p(1.5)).unwrap();
        assert!(v.holds);
        assert!(v.ratio.unwrap() > 1.0);
    }

    #[test]
    fn zero_propagation() {
        let g = nat_line(8).unwrap();
        let k = VertexSubset::from_ids(9, [3, 4]).unwrap();
        let u = [1.0, 0.5, 0.0, 0.0, 0.0, 0.0, 0.7, 1.0, 2.0];
        let v = harnack_verify(&g, &k, &[0.0; 9], &u, p(2.0)).unwrap();
        assert_eq!(v.zero_propagation, Some(true));
        assert!(v.holds);
        let bad = [1.0, 0.5, 0.2, 0.0, 0.0, 0.0, 0.7, 1.0, 2.0];
        assert!(matches!(
            harnack_verify(&g, &k, &[0.0; 9], &bad, p(2.0)),
            Err(Error::SupersolutionViolated { vertex: 3, .. })
        ));
    }
}
