//! Weighted graphs on finite windows.
//!
//! A [`WeightedGraph`] stores a symmetric edge weight `b`, a strictly positive
//! vertex measure `m` and a signed potential `c` over dense vertex ids
//! `0..n`. A designated `interior` marks the vertices whose full neighbourhood
//! is present in the window. Operators are only evaluated there. The remaining
//! vertices carry boundary values.
//!
//! Adjacency is stored CSR-style. Neighbours are sorted by id, so every
//! neighbour sum is taken in the same order on every run.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Deref, DerefMut};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math::PairwiseSum;

pub type VertexId = usize;

/// Membership flags over the vertices of one graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexSubset {
    members: Vec<bool>,
}

impl VertexSubset {
    pub fn empty(n: usize) -> Self {
        Self { members: vec![false; n] }
    }

    pub fn full(n: usize) -> Self {
        Self { members: vec![true; n] }
    }

    pub fn from_ids<I: IntoIterator<Item = VertexId>>(n: usize, ids: I) -> Result<Self> {
        let mut s = Self::empty(n);
        for id in ids {
            if id >= n {
                return Err(Error::VertexOutOfRange { vertex: id, count: n });
            }
            s.members[id] = true;
        }
        Ok(s)
    }

    pub fn from_flags(members: Vec<bool>) -> Self {
        Self { members }
    }

    /// Size of the ambient vertex range (not the number of members).
    pub fn universe(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, x: VertexId) -> bool {
        self.members.get(x).copied().unwrap_or(false)
    }

    pub fn insert(&mut self, x: VertexId) {
        self.members[x] = true;
    }

    pub fn remove(&mut self, x: VertexId) {
        self.members[x] = false;
    }

    pub fn count(&self) -> usize {
        self.members.iter().filter(|&&m| m).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.members.iter().any(|&m| m)
    }

    pub fn iter(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.members.iter().enumerate().filter_map(|(i, &m)| m.then_some(i))
    }

    pub fn to_vec(&self) -> Vec<VertexId> {
        self.iter().collect()
    }

    pub fn complement(&self) -> Self {
        Self { members: self.members.iter().map(|&m| !m).collect() }
    }

    pub fn union(&self, other: &Self) -> Self {
        Self { members: self.members.iter().zip(&other.members).map(|(&a, &b)| a || b).collect() }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        Self { members: self.members.iter().zip(&other.members).map(|(&a, &b)| a && b).collect() }
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.members.iter().zip(&other.members).all(|(&a, &b)| !a || b)
    }

    pub fn flags(&self) -> &[bool] {
        &self.members
    }
}

/// A real-valued function on the vertices of a graph.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GraphFunction {
    values: Vec<f64>,
}

impl GraphFunction {
    pub fn new(values: Vec<f64>) -> Self {
        Self { values }
    }

    pub fn zeros(n: usize) -> Self {
        Self { values: vec![0.0; n] }
    }

    pub fn constant(n: usize, value: f64) -> Self {
        Self { values: vec![value; n] }
    }

    pub fn indicator(n: usize, x: VertexId) -> Self {
        let mut f = Self::zeros(n);
        f.values[x] = 1.0;
        f
    }

    pub fn from_fn<F: FnMut(VertexId) -> f64>(n: usize, f: F) -> Self {
        Self { values: (0..n).map(f).collect() }
    }

    pub fn support(&self) -> VertexSubset {
        VertexSubset::from_flags(self.values.iter().map(|&v| v != 0.0).collect())
    }

    pub fn scaled(&self, lambda: f64) -> Self {
        Self { values: self.values.iter().map(|v| lambda * v).collect() }
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.values
    }
}

impl From<Vec<f64>> for GraphFunction {
    fn from(values: Vec<f64>) -> Self {
        Self { values }
    }
}

impl Deref for GraphFunction {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.values
    }
}

impl DerefMut for GraphFunction {
    fn deref_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub x: VertexId,
    pub y: VertexId,
    pub b: f64,
}

/// Immutable weighted graph with measure, potential and interior.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    offsets: Vec<usize>,
    targets: Vec<VertexId>,
    weights: Vec<f64>,
    measure: Vec<f64>,
    potential: Vec<f64>,
    interior: VertexSubset,
    edge_count: usize,
}

/// Collects edges and vertex data, then validates them into a [`WeightedGraph`].
#[derive(Debug, Clone)]
pub struct GraphBuilder {
    n: usize,
    edges: Vec<Edge>,
    measure: Option<Vec<f64>>,
    potential: Option<Vec<f64>>,
    interior: Option<VertexSubset>,
}

impl GraphBuilder {
    pub fn new(vertex_count: usize) -> Self {
        Self { n: vertex_count, edges: Vec::new(), measure: None, potential: None, interior: None }
    }

    pub fn edge(mut self, x: VertexId, y: VertexId, b: f64) -> Self {
        self.edges.push(Edge { x, y, b });
        self
    }

    pub fn add_edge(&mut self, x: VertexId, y: VertexId, b: f64) {
        self.edges.push(Edge { x, y, b });
    }

    pub fn measure(mut self, m: Vec<f64>) -> Self {
        self.measure = Some(m);
        self
    }

    pub fn potential(mut self, c: Vec<f64>) -> Self {
        self.potential = Some(c);
        self
    }

    pub fn interior(mut self, interior: VertexSubset) -> Self {
        self.interior = Some(interior);
        self
    }

    pub fn build(self) -> Result<WeightedGraph> {
        let n = self.n;
        let measure = self.measure.unwrap_or_else(|| vec![1.0; n]);
        let potential = self.potential.unwrap_or_else(|| vec![0.0; n]);
        if measure.len() != n {
            return Err(Error::LengthMismatch { expected: n, found: measure.len() });
        }
        if potential.len() != n {
            return Err(Error::LengthMismatch { expected: n, found: potential.len() });
        }
        for (i, &m) in measure.iter().enumerate() {
            if !m.is_finite() {
                return Err(Error::NonFinite { what: "measure", index: i });
            }
            if m <= 0.0 {
                return Err(Error::NonPositiveMeasure { vertex: i, value: m });
            }
        }
        for (i, &c) in potential.iter().enumerate() {
            if !c.is_finite() {
                return Err(Error::NonFinite { what: "potential", index: i });
            }
        }
        let interior = match self.interior {
            Some(s) if s.universe() != n => return Err(Error::LengthMismatch { expected: n, found: s.universe() }),
            Some(s) => s,
            None => VertexSubset::full(n),
        };

        let mut canon: Vec<Edge> = Vec::with_capacity(self.edges.len());
        for (i, e) in self.edges.iter().enumerate() {
            for v in [e.x, e.y] {
                if v >= n {
                    return Err(Error::VertexOutOfRange { vertex: v, count: n });
                }
            }
            if !e.b.is_finite() {
                return Err(Error::NonFinite { what: "edge weight", index: i });
            }
            if e.x == e.y {
                return Err(Error::SelfLoop { vertex: e.x });
            }
            if e.b < 0.0 {
                return Err(Error::NegativeWeight { x: e.x, y: e.y, weight: e.b });
            }
            if e.b == 0.0 {
                continue;
            }
            let (x, y) = if e.x < e.y { (e.x, e.y) } else { (e.y, e.x) };
            canon.push(Edge { x, y, b: e.b });
        }
        canon.sort_by_key(|e| (e.x, e.y));
        let mut unique: Vec<Edge> = Vec::with_capacity(canon.len());
        for e in canon {
            match unique.last() {
                Some(last) if last.x == e.x && last.y == e.y => {
                    if last.b != e.b {
                        return Err(Error::AsymmetricDuplicate { x: e.x, y: e.y, first: last.b, second: e.b });
                    }
                }
                _ => unique.push(e),
            }
        }

        let mut counts = vec![0usize; n + 1];
        for e in &unique {
            counts[e.x + 1] += 1;
            counts[e.y + 1] += 1;
        }
        for i in 0..n {
            counts[i + 1] += counts[i];
        }
        let offsets = counts;
        let mut fill = offsets.clone();
        let mut targets = vec![0; 2 * unique.len()];
        let mut weights = vec![0.0; 2 * unique.len()];
        for e in &unique {
            targets[fill[e.x]] = e.y;
            weights[fill[e.x]] = e.b;
            fill[e.x] += 1;
        }
        for e in &unique {
            targets[fill[e.y]] = e.x;
            weights[fill[e.y]] = e.b;
            fill[e.y] += 1;
        }
        for x in 0..n {
            let (lo, hi) = (offsets[x], offsets[x + 1]);
            let mut row: Vec<(VertexId, f64)> =
                targets[lo..hi].iter().copied().zip(weights[lo..hi].iter().copied()).collect();
            row.sort_by_key(|&(t, _)| t);
            for (k, (t, w)) in row.into_iter().enumerate() {
                targets[lo + k] = t;
                weights[lo + k] = w;
            }
        }

        Ok(WeightedGraph { offsets, targets, weights, measure, potential, interior, edge_count: unique.len() })
    }
}

impl WeightedGraph {
    pub fn builder(vertex_count: usize) -> GraphBuilder {
        GraphBuilder::new(vertex_count)
    }

    pub fn vertex_count(&self) -> usize {
        self.measure.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn check_vertex(&self, x: VertexId) -> Result<()> {
        if x < self.vertex_count() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: x, count: self.vertex_count() })
        }
    }

    pub fn check_len(&self, values: &[f64]) -> Result<()> {
        if values.len() == self.vertex_count() {
            Ok(())
        } else {
            Err(Error::LengthMismatch { expected: self.vertex_count(), found: values.len() })
        }
    }

    pub fn check_subset(&self, subset: &VertexSubset) -> Result<()> {
        if subset.universe() == self.vertex_count() {
            Ok(())
        } else {
            Err(Error::LengthMismatch { expected: self.vertex_count(), found: subset.universe() })
        }
    }

    /// Neighbours of `x` with their weights, in ascending id order.
    pub fn neighbors(&self, x: VertexId) -> impl Iterator<Item = (VertexId, f64)> + '_ {
        let (lo, hi) = (self.offsets[x], self.offsets[x + 1]);
        self.targets[lo..hi].iter().copied().zip(self.weights[lo..hi].iter().copied())
    }

    /// `b(x, y)`, zero for non-adjacent pairs.
    pub fn weight(&self, x: VertexId, y: VertexId) -> f64 {
        if x >= self.vertex_count() || y >= self.vertex_count() {
            return 0.0;
        }
        let (lo, hi) = (self.offsets[x], self.offsets[x + 1]);
        match self.targets[lo..hi].binary_search(&y) {
            Ok(k) => self.weights[lo + k],
            Err(_) => 0.0,
        }
    }

    pub fn degree(&self, x: VertexId) -> Result<f64> {
        self.check_vertex(x)?;
        Ok(self.degree_unchecked(x))
    }

    pub(crate) fn degree_unchecked(&self, x: VertexId) -> f64 {
        let mut acc = PairwiseSum::new();
        for (_, b) in self.neighbors(x) {
            acc.push(b);
        }
        acc.total()
    }

    pub fn max_degree(&self) -> f64 {
        (0..self.vertex_count()).map(|x| self.degree_unchecked(x)).fold(0.0, f64::max)
    }

    pub fn measure(&self, x: VertexId) -> f64 {
        self.measure[x]
    }

    pub fn measures(&self) -> &[f64] {
        &self.measure
    }

    pub fn potential(&self, x: VertexId) -> f64 {
        self.potential[x]
    }

    pub fn potentials(&self) -> &[f64] {
        &self.potential
    }

    pub fn interior(&self) -> &VertexSubset {
        &self.interior
    }

    pub fn is_interior(&self, x: VertexId) -> bool {
        self.interior.contains(x)
    }

    /// Undirected edges `x < y`, sorted lexicographically.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        (0..self.vertex_count())
            .flat_map(move |x| self.neighbors(x).filter(move |&(y, _)| y > x).map(move |(y, b)| Edge { x, y, b }))
    }

    /// Vertices outside `subset` adjacent to a vertex of `subset`.
    pub fn boundary(&self, subset: &VertexSubset) -> VertexSubset {
        let mut out = VertexSubset::empty(self.vertex_count());
        for x in subset.iter() {
            if x >= self.vertex_count() {
                continue;
            }
            for (y, _) in self.neighbors(x) {
                if !subset.contains(y) {
                    out.insert(y);
                }
            }
        }
        out
    }

    /// Whether `subset` induces a connected subgraph. Empty and singleton
    /// subsets are connected.
    pub fn is_connected(&self, subset: &VertexSubset) -> bool {
        let Some(start) = subset.iter().next() else {
            return true;
        };
        let mut seen = VertexSubset::empty(self.vertex_count());
        let mut queue = VecDeque::new();
        seen.insert(start);
        queue.push_back(start);
        let mut reached = 1;
        while let Some(x) = queue.pop_front() {
            for (y, _) in self.neighbors(x) {
                if subset.contains(y) && !seen.contains(y) {
                    seen.insert(y);
                    reached += 1;
                    queue.push_back(y);
                }
            }
        }
        reached == subset.count()
    }

    /// Same vertex data, new interior.
    pub fn with_interior(&self, interior: VertexSubset) -> Result<Self> {
        self.check_subset(&interior)?;
        Ok(Self { interior, ..self.clone() })
    }

    pub fn with_potential(&self, potential: Vec<f64>) -> Result<Self> {
        self.check_len(&potential)?;
        if let Some(i) = potential.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFinite { what: "potential", index: i });
        }
        Ok(Self { potential, ..self.clone() })
    }

    /// Same vertex set, measure and interior. Each weight is replaced by
    /// `f(x, y, b)`; zero results drop the edge.
    pub fn reweighted<F: FnMut(VertexId, VertexId, f64) -> f64>(&self, mut f: F) -> Result<Self> {
        let mut builder = GraphBuilder::new(self.vertex_count())
            .measure(self.measure.clone())
            .potential(self.potential.clone())
            .interior(self.interior.clone());
        for e in self.edges() {
            builder.add_edge(e.x, e.y, f(e.x, e.y, e.b));
        }
        builder.build()
    }
}
