//! Seeded random instances for property tests and the command line.

use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::{GraphBuilder, VertexSubset, WeightedGraph};

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform draw from the half-open interval `(lo, hi]`.
fn left_open<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    hi - (hi - lo) * rng.gen::<f64>()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RandomGraphSpec {
    pub min_vertices: usize,
    pub max_vertices: usize,
    /// Probability of each extra edge beyond a random spanning tree.
    pub edge_probability: f64,
    /// Weights are drawn from `(0, max_weight]`.
    pub max_weight: f64,
    /// Measures are drawn from `(0, max_measure]`.
    pub max_measure: f64,
    /// Potentials are drawn from `[-potential_bound, potential_bound]`.
    pub potential_bound: f64,
    /// Each vertex is left out of the interior with this probability (at
    /// least one vertex stays interior).
    pub boundary_probability: f64,
}

impl Default for RandomGraphSpec {
    fn default() -> Self {
        Self {
            min_vertices: 2,
            max_vertices: 50,
            edge_probability: 0.1,
            max_weight: 1.0,
            max_measure: 2.0,
            potential_bound: 1.0,
            boundary_probability: 0.0,
        }
    }
}

/// A connected graph: a random recursive tree plus independent extra edges.
pub fn random_graph<R: Rng>(spec: &RandomGraphSpec, rng: &mut R) -> Result<WeightedGraph> {
    let n = rng.gen_range(spec.min_vertices.max(1)..=spec.max_vertices.max(spec.min_vertices.max(1)));
    let mut labels: Vec<usize> = (0..n).collect();
    labels.shuffle(rng);
    let mut adjacent = alloc::vec![false; n * n];
    let mut b = GraphBuilder::new(n);
    for i in 1..n {
        let (x, y) = (labels[i], labels[rng.gen_range(0..i)]);
        adjacent[x * n + y] = true;
        adjacent[y * n + x] = true;
        b.add_edge(x, y, left_open(rng, 0.0, spec.max_weight));
    }
    for x in 0..n {
        for y in x + 1..n {
            if rng.gen::<f64>() < spec.edge_probability && !adjacent[x * n + y] {
                b.add_edge(x, y, left_open(rng, 0.0, spec.max_weight));
            }
        }
    }
    let m = (0..n).map(|_| left_open(rng, 0.0, spec.max_measure)).collect();
    let c = (0..n).map(|_| rng.gen_range(-spec.potential_bound..=spec.potential_bound)).collect();
    let mut interior: Vec<bool> = (0..n).map(|_| rng.gen::<f64>() >= spec.boundary_probability).collect();
    if !interior.iter().any(|&f| f) {
        interior[rng.gen_range(0..n)] = true;
    }
    b.measure(m).potential(c).interior(VertexSubset::from_flags(interior)).build()
}

/// Values drawn from `(lo, hi]` on every vertex.
pub fn random_positive<R: Rng>(n: usize, lo: f64, hi: f64, rng: &mut R) -> Vec<f64> {
    (0..n).map(|_| left_open(rng, lo, hi)).collect()
}

/// Uniform values in `[-1, 1]` on the vertices of `support`, zero elsewhere.
pub fn random_test_function<R: Rng>(support: &VertexSubset, rng: &mut R) -> Vec<f64> {
    (0..support.universe()).map(|x| if support.contains(x) { rng.gen_range(-1.0..=1.0) } else { 0.0 }).collect()
}

/// A connected subset grown from a random vertex by random accretion,
/// with at most `max_size` vertices drawn from `allowed`.
pub fn random_connected_subset<R: Rng>(
    g: &WeightedGraph,
    allowed: &VertexSubset,
    max_size: usize,
    rng: &mut R,
) -> VertexSubset {
    let candidates = allowed.to_vec();
    let mut set = VertexSubset::empty(g.vertex_count());
    if candidates.is_empty() {
        return set;
    }
    let start = candidates[rng.gen_range(0..candidates.len())];
    let target = rng.gen_range(1..=max_size.max(1));
    set.insert(start);
    let mut frontier: Vec<usize> = Vec::new();
    let push_neighbors = |x: usize, set: &VertexSubset, frontier: &mut Vec<usize>| {
        for (y, _) in g.neighbors(x) {
            if allowed.contains(y) && !set.contains(y) && !frontier.contains(&y) {
                frontier.push(y);
            }
        }
    };
    push_neighbors(start, &set, &mut frontier);
    while set.count() < target && !frontier.is_empty() {
        let y = frontier.swap_remove(rng.gen_range(0..frontier.len()));
        set.insert(y);
        push_neighbors(y, &set, &mut frontier);
    }
    set
}
