//! Exhaustible model graphs with known behaviour.
//!
//! Every family numbers its vertices so that `window(r)` is a prefix of
//! `window(r + 1)`: the ids, edges and weights of the smaller window reappear
//! unchanged in the larger one.

use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::energy::require_interior_support;
use crate::error::{Error, Result};
use crate::graph::{GraphBuilder, VertexId, VertexSubset, WeightedGraph};
use crate::math::{abs, abs_pow, pow, PairwiseSum};
use crate::operators::{schrodinger_unchecked, PExponent};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelFamily {
    /// `{0, ..., r}` with vertex 0 as the Dirichlet boundary.
    NatLine,
    /// `{-r, ..., r}`.
    IntLine,
    /// `{-r, ..., r}^2` with nearest-neighbour edges.
    Grid2d,
    /// A centre joined to `r` leaves.
    Star,
    /// The complete graph on `r + 1` vertices.
    Complete,
    /// A path with prescribed consecutive weights.
    WeightedLine,
}

impl ModelFamily {
    pub const ALL: [ModelFamily; 6] = [
        ModelFamily::NatLine,
        ModelFamily::IntLine,
        ModelFamily::Grid2d,
        ModelFamily::Star,
        ModelFamily::Complete,
        ModelFamily::WeightedLine,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ModelFamily::NatLine => "nat_line",
            ModelFamily::IntLine => "int_line",
            ModelFamily::Grid2d => "grid2d",
            ModelFamily::Star => "star",
            ModelFamily::Complete => "complete",
            ModelFamily::WeightedLine => "weighted_line",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.name() == name)
    }
}

/// A finite window together with the lattice coordinates of its vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct Window {
    pub graph: WeightedGraph,
    pub coords: Vec<[i64; 2]>,
    pub radius: usize,
}

impl Window {
    /// Id of the vertex at `coord`.
    pub fn vertex_at(&self, coord: [i64; 2]) -> Option<VertexId> {
        self.coords.iter().position(|&c| c == coord)
    }

    /// Extends `f` from this window to the larger `other` by zero.
    pub fn extend_by_zero(&self, f: &[f64], other: &Window) -> Result<Vec<f64>> {
        self.graph.check_len(f)?;
        if other.graph.vertex_count() < f.len() {
            return Err(Error::InvalidParameter(String::from("target window is smaller")));
        }
        let mut out = alloc::vec![0.0; other.graph.vertex_count()];
        out[..f.len()].copy_from_slice(f);
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExhaustibleModel {
    pub family: ModelFamily,
    /// Multiplies every edge weight.
    pub edge_scale: f64,
    /// Constant potential on every vertex.
    pub potential: f64,
    /// Consecutive weights, used by [`ModelFamily::WeightedLine`] only.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub weights: Vec<f64>,
}

impl ExhaustibleModel {
    pub fn new(family: ModelFamily) -> Self {
        Self { family, edge_scale: 1.0, potential: 0.0, weights: Vec::new() }
    }

    pub fn weighted_line(weights: Vec<f64>) -> Self {
        Self { weights, ..Self::new(ModelFamily::WeightedLine) }
    }

    pub fn with_edge_scale(mut self, scale: f64) -> Self {
        self.edge_scale = scale;
        self
    }

    pub fn with_potential(mut self, c: f64) -> Self {
        self.potential = c;
        self
    }

    /// Smallest radius the family accepts.
    pub fn min_radius(&self) -> usize {
        match self.family {
            ModelFamily::NatLine => 2,
            _ => 1,
        }
    }

    /// The distinguished vertex: the origin, the centre, or 1 on the half-line.
    pub fn root(&self) -> VertexId {
        match self.family {
            ModelFamily::NatLine | ModelFamily::WeightedLine => 1,
            _ => 0,
        }
    }

    pub fn window(&self, radius: usize) -> Result<Window> {
        if !(self.edge_scale > 0.0) || !self.edge_scale.is_finite() {
            return Err(Error::InvalidParameter(alloc::format!("edge scale {} must be positive", self.edge_scale)));
        }
        if !self.potential.is_finite() {
            return Err(Error::NonFinite { what: "potential", index: 0 });
        }
        if radius < self.min_radius() {
            return Err(Error::InvalidParameter(alloc::format!(
                "{} needs radius >= {}",
                self.family.name(),
                self.min_radius()
            )));
        }
        let s = self.edge_scale;
        let (mut builder, coords, interior): (GraphBuilder, Vec<[i64; 2]>, Vec<bool>) = match self.family {
            ModelFamily::NatLine => {
                let n = radius + 1;
                let mut b = GraphBuilder::new(n);
                for i in 0..radius {
                    b.add_edge(i, i + 1, s);
                }
                let coords = (0..n as i64).map(|i| [i, 0]).collect();
                let interior = (0..n).map(|i| i >= 1 && i < radius).collect();
                (b, coords, interior)
            }
            ModelFamily::IntLine => {
                let coords: Vec<[i64; 2]> = (0..=2 * radius).map(|id| [int_line_coord(id), 0]).collect();
                let mut b = GraphBuilder::new(coords.len());
                for (id, c) in coords.iter().enumerate() {
                    let k = c[0];
                    if k < radius as i64 {
                        b.add_edge(id, int_line_id(k + 1), s);
                    }
                    if k == 0 {
                        b.add_edge(id, int_line_id(-1), s);
                    } else if k < 0 && k > -(radius as i64) {
                        b.add_edge(id, int_line_id(k - 1), s);
                    }
                }
                let interior = coords.iter().map(|c| c[0].abs() < radius as i64).collect();
                (b, coords, interior)
            }
            ModelFamily::Grid2d => {
                let coords = grid_shell_coords(radius as i64);
                let mut b = GraphBuilder::new(coords.len());
                let index = |c: [i64; 2]| coords.iter().position(|&d| d == c);
                for (id, c) in coords.iter().enumerate() {
                    for next in [[c[0] + 1, c[1]], [c[0], c[1] + 1]] {
                        if let Some(j) = index(next) {
                            b.add_edge(id, j, s);
                        }
                    }
                }
                let interior = coords.iter().map(|c| c[0].abs().max(c[1].abs()) < radius as i64).collect();
                (b, coords, interior)
            }
            ModelFamily::Star => {
                let mut b = GraphBuilder::new(radius + 1);
                for leaf in 1..=radius {
                    b.add_edge(0, leaf, s);
                }
                let coords = (0..=radius as i64).map(|i| [i, 0]).collect();
                (b, coords, alloc::vec![true; radius + 1])
            }
            ModelFamily::Complete => {
                let mut b = GraphBuilder::new(radius + 1);
                for x in 0..=radius {
                    for y in x + 1..=radius {
                        b.add_edge(x, y, s);
                    }
                }
                let coords = (0..=radius as i64).map(|i| [i, 0]).collect();
                (b, coords, alloc::vec![true; radius + 1])
            }
            ModelFamily::WeightedLine => {
                if radius > self.weights.len() {
                    return Err(Error::InvalidParameter(alloc::format!(
                        "weighted line has {} weights, radius {} requested",
                        self.weights.len(),
                        radius
                    )));
                }
                let mut b = GraphBuilder::new(radius + 1);
                for (i, &w) in self.weights[..radius].iter().enumerate() {
                    if !(w > 0.0) || !w.is_finite() {
                        return Err(Error::InvalidParameter(alloc::format!(
                            "weight {w} between {i} and {} must be positive",
                            i + 1
                        )));
                    }
                    b.add_edge(i, i + 1, s * w);
                }
                let coords = (0..=radius as i64).map(|i| [i, 0]).collect();
                let interior = (0..=radius).map(|i| i >= 1 && i < radius).collect();
                (b, coords, interior)
            }
        };
        let n = coords.len();
        builder = builder.potential(alloc::vec![self.potential; n]).interior(VertexSubset::from_flags(interior));
        Ok(Window { graph: builder.build()?, coords, radius })
    }
}

/// Integer at id `id` in the order `0, 1, -1, 2, -2, ...`.
pub fn int_line_coord(id: usize) -> i64 {
    if id == 0 {
        0
    } else if id % 2 == 1 {
        id.div_ceil(2) as i64
    } else {
        -((id / 2) as i64)
    }
}

/// Inverse of [`int_line_coord`].
pub fn int_line_id(k: i64) -> VertexId {
    match k {
        0 => 0,
        k if k > 0 => (2 * k - 1) as usize,
        k => (-2 * k) as usize,
    }
}

/// Lattice points of `{-r..r}^2` ordered by sup-norm shell, then by angle-free
/// lexicographic order `(y, x)` within a shell.
fn grid_shell_coords(r: i64) -> Vec<[i64; 2]> {
    let mut out = Vec::with_capacity(((2 * r + 1) * (2 * r + 1)) as usize);
    out.push([0, 0]);
    for k in 1..=r {
        for y in -k..=k {
            for x in -k..=k {
                if x.abs().max(y.abs()) == k {
                    out.push([x, y]);
                }
            }
        }
    }
    out
}

pub fn nat_line(radius: usize) -> Result<WeightedGraph> {
    Ok(ExhaustibleModel::new(ModelFamily::NatLine).window(radius)?.graph)
}

pub fn int_line(radius: usize) -> Result<WeightedGraph> {
    Ok(ExhaustibleModel::new(ModelFamily::IntLine).window(radius)?.graph)
}

pub fn grid2d(radius: usize) -> Result<WeightedGraph> {
    Ok(ExhaustibleModel::new(ModelFamily::Grid2d).window(radius)?.graph)
}

pub fn star(leaves: usize) -> Result<WeightedGraph> {
    Ok(ExhaustibleModel::new(ModelFamily::Star).window(leaves)?.graph)
}

pub fn complete(radius: usize) -> Result<WeightedGraph> {
    Ok(ExhaustibleModel::new(ModelFamily::Complete).window(radius)?.graph)
}

/// Path `0 - 1 - ... - n` with `b(i, i+1) = weights[i]`; the inner vertices
/// form the interior.
pub fn weighted_line(weights: &[f64]) -> Result<WeightedGraph> {
    Ok(ExhaustibleModel::weighted_line(weights.to_vec()).window(weights.len())?.graph)
}

/// `n^((p-1)/p)`.
pub fn hardy_u(n: usize, p: PExponent) -> Result<f64> {
    let p = p.require_superlinear()?.value();
    Ok(pow(n as f64, (p - 1.0) / p))
}

/// [`hardy_u`] on every vertex of a half-line window.
pub fn hardy_u_function(vertex_count: usize, p: PExponent) -> Result<Vec<f64>> {
    (0..vertex_count).map(|n| hardy_u(n, p)).collect()
}

/// `(1 - 1/n)^(1/q)` with `1/q = (p-1)/p`.
pub fn alpha_seq(n: usize, p: PExponent) -> Result<f64> {
    let p = p.require_superlinear()?.value();
    if n < 1 {
        return Err(Error::InvalidParameter(String::from("alpha(n) needs n >= 1")));
    }
    Ok(pow(1.0 - 1.0 / n as f64, (p - 1.0) / p))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DisplayCheck {
    /// `sum_n |phi(n) - phi(n-1)|^p - w(n)|phi(n)|^p`
    pub lhs: f64,
    /// The alpha-sequence form of the simplified energy.
    pub rhs: f64,
    pub ratio: Option<f64>,
    pub degenerate: bool,
}

/// Both sides of the half-line specialisation of the ground state
/// representation for `u(n) = n^((p-1)/p)`, with the weight `w = Hu / u^(p-1)`
/// computed on the window.
pub fn gsr_display_check(radius: usize, p: PExponent, phi: &[f64]) -> Result<DisplayCheck> {
    let pe = p.require_superlinear()?;
    let pv = pe.value();
    let g = nat_line(radius)?;
    g.check_len(phi)?;
    require_interior_support(&g, phi)?;
    let u = hardy_u_function(g.vertex_count(), pe)?;
    let mut lhs = PairwiseSum::new();
    for n in 1..=radius {
        lhs.push(abs_pow(phi[n] - phi[n - 1], pv));
        if g.is_interior(n) {
            let w = schrodinger_unchecked(&g, &u, n, pe) / pow(u[n], pv - 1.0);
            lhs.push(-w * abs_pow(phi[n], pv));
        }
    }
    let mut rhs = PairwiseSum::new();
    for n in 2..=radius {
        let al = alpha_seq(n, pe)?;
        let d = al * phi[n] - phi[n - 1];
        if d == 0.0 {
            continue;
        }
        let inner = pow(al, 0.5) * abs(d) + 0.5 * (al * abs(phi[n]) + abs(phi[n - 1])) * (1.0 - al);
        rhs.push(d * d * pow(inner, pv - 2.0) / pow(al, pv - 1.0));
    }
    let (lhs, rhs) = (lhs.total(), rhs.total());
    let (ratio, degenerate) = if rhs > 0.0 { (Some(lhs / rhs), false) } else { (None, abs(lhs) <= 1e-12) };
    Ok(DisplayCheck { lhs, rhs, ratio, degenerate })
}
