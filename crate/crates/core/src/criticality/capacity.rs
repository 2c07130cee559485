//! Variational capacity `cap(x0, V) = inf { h(phi) : phi in C_c(V), phi(x0) = 1 }`.
//!
//! The minimisation runs a spectral projected gradient method over the
//! nonnegative orthant of the free coordinates: Barzilai-Borwein step lengths
//! with a nonmonotone Armijo search. Restricting to `phi >= 0` loses nothing
//! because `h(|phi|) <= h(phi)`.

use alloc::vec::Vec;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::energy::energy;
use crate::error::{Error, Result};
use crate::graph::{GraphFunction, VertexId, VertexSubset, WeightedGraph};
use crate::math::{abs, abs_pow};
use crate::operators::{phi_p, PExponent};
use crate::random;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapacityOptions {
    /// Value prescribed at the pinned vertex.
    pub pin: f64,
    pub max_iter: usize,
    /// Stop once the sup-norm of the projected gradient falls below this.
    pub grad_tol: f64,
    /// Stop once the best value improved by less than `stall_rel` (relative)
    /// over `stall_iters` consecutive iterations.
    pub stall_iters: usize,
    pub stall_rel: f64,
    /// Random restarts when the potential is negative somewhere in `V`.
    pub restarts: usize,
    pub seed: u64,
    /// Initial iterate; defaults to the indicator of the pinned vertex.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub warm_start: Option<Vec<f64>>,
}

impl Default for CapacityOptions {
    fn default() -> Self {
        Self {
            pin: 1.0,
            max_iter: 50_000,
            grad_tol: 1e-9,
            stall_iters: 50,
            stall_rel: 1e-12,
            restarts: 8,
            seed: 0,
            warm_start: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CapacityStatus {
    /// Convex problem solved to tolerance.
    Certified,
    /// Best value over several starts of a nonconvex problem.
    UpperBound,
    /// The energy decreased without bound.
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapacityResult {
    pub value: f64,
    pub minimizer: GraphFunction,
    pub status: CapacityStatus,
    /// `c >= 0` on `V`, so the objective is convex.
    pub certified_convex: bool,
    pub iterations: usize,
    /// Sup-norm of the projected gradient at the returned point.
    pub gradient_norm: f64,
    /// The gradient tolerance was met.
    pub converged: bool,
    pub starts: usize,
}

struct Problem {
    p: PExponent,
    /// Edges with at least one endpoint in `V`.
    edges: Vec<(VertexId, VertexId, f64)>,
    /// `(vertex, c)` over `V`.
    potential: Vec<(VertexId, f64)>,
    free: Vec<VertexId>,
    n: usize,
}

impl Problem {
    fn new(g: &WeightedGraph, x0: VertexId, v: &VertexSubset, p: PExponent, clamp_potential: bool) -> Self {
        let edges = g.edges().filter(|e| v.contains(e.x) || v.contains(e.y)).map(|e| (e.x, e.y, e.b)).collect();
        let potential =
            v.iter().map(|x| (x, if clamp_potential { g.potential(x).max(0.0) } else { g.potential(x) })).collect();
        let free = v.iter().filter(|&x| x != x0).collect();
        Self { p, edges, potential, free, n: g.vertex_count() }
    }

    fn value(&self, phi: &[f64]) -> f64 {
        let pv = self.p.value();
        let mut s = 0.0;
        for &(x, y, b) in &self.edges {
            s += b * abs_pow(phi[x] - phi[y], pv);
        }
        for &(x, c) in &self.potential {
            s += c * abs_pow(phi[x], pv);
        }
        s
    }

    /// Gradient with respect to the free coordinates; other entries are 0.
    fn gradient(&self, phi: &[f64], out: &mut [f64]) {
        let pv = self.p.value();
        out.iter_mut().for_each(|o| *o = 0.0);
        for &(x, y, b) in &self.edges {
            let flux = b * phi_p(phi[x] - phi[y], self.p);
            out[x] += flux;
            out[y] -= flux;
        }
        for &(x, c) in &self.potential {
            out[x] += c * phi_p(phi[x], self.p);
        }
        let mut masked = alloc::vec![0.0; self.n];
        for &x in &self.free {
            masked[x] = pv * out[x];
        }
        out.copy_from_slice(&masked);
    }

    fn projected_gradient_norm(&self, phi: &[f64], grad: &[f64]) -> f64 {
        self.free.iter().map(|&x| abs((phi[x] - grad[x]).max(0.0) - phi[x])).fold(0.0, f64::max)
    }
}

struct Run {
    phi: Vec<f64>,
    value: f64,
    iterations: usize,
    gradient_norm: f64,
    converged: bool,
    unbounded: bool,
}

const HISTORY: usize = 10;
const ARMIJO: f64 = 1e-4;
const STEP_MIN: f64 = 1e-30;
const STEP_MAX: f64 = 1e30;

fn spg(problem: &Problem, mut phi: Vec<f64>, opts: &CapacityOptions) -> Run {
    for &x in &problem.free {
        phi[x] = phi[x].max(0.0);
    }
    let mut f = problem.value(&phi);
    let unbounded_level = -1e12 * (1.0 + abs(f));
    let mut grad = alloc::vec![0.0; problem.n];
    problem.gradient(&phi, &mut grad);
    let mut pg = problem.projected_gradient_norm(&phi, &grad);
    let mut step = if pg > 0.0 { (1.0 / pg).clamp(STEP_MIN, STEP_MAX) } else { 1.0 };
    let mut history = [f; HISTORY];
    let mut best = (f, phi.clone(), pg);
    let mut reference = f;
    let mut last_progress = 0;
    let mut iterations = 0;
    let mut trial = phi.clone();
    let mut trial_grad = alloc::vec![0.0; problem.n];
    let mut direction = alloc::vec![0.0; problem.n];
    while iterations < opts.max_iter && pg >= opts.grad_tol {
        iterations += 1;
        let mut slope = 0.0;
        for &x in &problem.free {
            direction[x] = (phi[x] - step * grad[x]).max(0.0) - phi[x];
            slope += grad[x] * direction[x];
        }
        if !(slope < 0.0) {
            break;
        }
        let f_ref = history.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut alpha = 1.0;
        let mut f_trial;
        loop {
            for &x in &problem.free {
                trial[x] = phi[x] + alpha * direction[x];
            }
            f_trial = problem.value(&trial);
            if f_trial <= f_ref + ARMIJO * alpha * slope {
                break;
            }
            let denom = f_trial - f - alpha * slope;
            let q = if denom > 0.0 { -0.5 * alpha * alpha * slope / denom } else { 0.5 * alpha };
            alpha = q.clamp(0.1 * alpha, 0.5 * alpha);
            if alpha < 1e-20 {
                break;
            }
        }
        if alpha < 1e-20 {
            break;
        }
        problem.gradient(&trial, &mut trial_grad);
        let (mut ss, mut sy) = (0.0, 0.0);
        for &x in &problem.free {
            let s = trial[x] - phi[x];
            ss += s * s;
            sy += s * (trial_grad[x] - grad[x]);
        }
        step = if sy > 0.0 { (ss / sy).clamp(STEP_MIN, STEP_MAX) } else { STEP_MAX.min(step * 1e3) };
        core::mem::swap(&mut phi, &mut trial);
        core::mem::swap(&mut grad, &mut trial_grad);
        f = f_trial;
        history[iterations % HISTORY] = f;
        pg = problem.projected_gradient_norm(&phi, &grad);
        if f < best.0 {
            best = (f, phi.clone(), pg);
        }
        if f < unbounded_level {
            return Run {
                phi: best.1,
                value: best.0,
                iterations,
                gradient_norm: best.2,
                converged: false,
                unbounded: true,
            };
        }
        if best.0 < reference - opts.stall_rel * abs(reference).max(1e-300) {
            reference = best.0;
            last_progress = iterations;
        } else if iterations - last_progress >= opts.stall_iters {
            break;
        }
    }
    // The final iterate can sit above the best one under a nonmonotone search.
    let (value, phi, gradient_norm) = if f <= best.0 { (f, phi, pg) } else { best };
    Run { phi, value, iterations, converged: gradient_norm < opts.grad_tol, gradient_norm, unbounded: false }
}

/// Minimises `h` over functions supported in `V` with `phi(x0) = pin`.
///
/// `V` must lie in the interior so that every edge touching it is present in
/// the window.
pub fn capacity(
    g: &WeightedGraph,
    x0: VertexId,
    v: &VertexSubset,
    p: PExponent,
    opts: &CapacityOptions,
) -> Result<CapacityResult> {
    let p = p.require_superlinear()?;
    g.check_vertex(x0)?;
    g.check_subset(v)?;
    if !v.contains(x0) {
        return Err(Error::NotInSubset { vertex: x0 });
    }
    if let Some(x) = v.iter().find(|&x| !g.is_interior(x)) {
        return Err(Error::NotInterior { vertex: x });
    }
    if !opts.pin.is_finite() {
        return Err(Error::NonFinite { what: "pin value", index: x0 });
    }
    let n = g.vertex_count();
    let pin = abs(opts.pin);
    let mut start = alloc::vec![0.0; n];
    if let Some(w) = &opts.warm_start {
        g.check_len(w)?;
        for x in v.iter() {
            start[x] = abs(w[x]);
        }
    }
    start[x0] = pin;
    let convex = v.iter().all(|x| g.potential(x) >= 0.0);

    let (run, status, starts) = if convex {
        let run = spg(&Problem::new(g, x0, v, p, false), start, opts);
        (run, CapacityStatus::Certified, 1)
    } else {
        let problem = Problem::new(g, x0, v, p, false);
        let relaxed = spg(&Problem::new(g, x0, v, p, true), start, opts);
        let mut best = spg(&problem, relaxed.phi, opts);
        let mut starts = 2;
        let mut rng = random::rng(opts.seed);
        for _ in 0..opts.restarts {
            if best.unbounded {
                break;
            }
            let mut phi = alloc::vec![0.0; n];
            for x in v.iter() {
                phi[x] = pin * rng.gen::<f64>();
            }
            phi[x0] = pin;
            let run = spg(&problem, phi, opts);
            starts += 1;
            if run.unbounded || run.value < best.value {
                best = run;
            }
        }
        let status = if best.unbounded { CapacityStatus::Unbounded } else { CapacityStatus::UpperBound };
        (best, status, starts)
    };

    let minimizer = GraphFunction::new(run.phi);
    let value = energy(g, &minimizer, p)?.total;
    Ok(CapacityResult {
        value,
        minimizer,
        status,
        certified_convex: convex,
        iterations: run.iterations,
        gradient_norm: run.gradient_norm,
        converged: run.converged,
        starts,
    })
}
