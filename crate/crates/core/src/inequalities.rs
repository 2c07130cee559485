//! Scalar kernels behind the ground state representation and grid scans that
//! estimate or verify their constants.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math::{abs, abs_pow, bracketed_min, exp, golden_section_min, ln, pow, sqrt};
use crate::operators::{phi_p, PExponent};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InequalityPoint {
    pub a: f64,
    pub t: f64,
    pub p: f64,
}

impl InequalityPoint {
    pub fn new(a: f64, t: f64, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::InvalidParameter(alloc::format!("t = {t} must lie in [0, 1]")));
        }
        if !a.is_finite() {
            return Err(Error::NonFinite { what: "a", index: 0 });
        }
        PExponent::new(p)?;
        Ok(Self { a, t, p })
    }
}

/// Left side of the fundamental equivalence:
/// `|a - t|^p - (1 - t)^(p-1) (|a|^p - t)`.
#[inline]
pub(crate) fn ineq2_lhs(a: f64, t: f64, p: f64) -> f64 {
    abs_pow(a - t, p) - abs_pow(1.0 - t, p - 1.0) * (abs_pow(a, p) - t)
}

/// Right side `t |a - 1|^2 (|a - t| + 1 - t)^(p-2)`, zero when `t (a-1)^2 = 0`.
#[inline]
pub(crate) fn ineq2_rhs(a: f64, t: f64, p: f64) -> f64 {
    let pre = t * (a - 1.0) * (a - 1.0);
    if pre == 0.0 {
        0.0
    } else {
        pre * pow(abs(a - t) + 1.0 - t, p - 2.0)
    }
}

/// `t (a-1)^2 (t^(1/2) |a-1| + (1-t)(|a|+1)/2)^(p-2)`: the per-edge form of
/// the simplified energy after normalisation.
#[inline]
pub(crate) fn gsr_like_rhs(a: f64, t: f64, p: f64) -> f64 {
    let d = a - 1.0;
    let pre = t * d * d;
    if pre == 0.0 {
        0.0
    } else {
        pre * pow(sqrt(t) * abs(d) + (1.0 - t) * (abs(a) + 1.0) * 0.5, p - 2.0)
    }
}

/// `t^(p/2) |a-1|^p`: the per-edge form of `h_{u,1}`.
#[inline]
pub(crate) fn h1_like_rhs(a: f64, t: f64, p: f64) -> f64 {
    abs_pow(t, 0.5 * p) * abs_pow(a - 1.0, p)
}

/// Both sides of the fundamental equivalence at `pt`. Requires `p > 1`.
pub fn ineq2_sides(pt: InequalityPoint) -> Result<(f64, f64)> {
    PExponent::superlinear(pt.p)?;
    Ok((ineq2_lhs(pt.a, pt.t, pt.p), ineq2_rhs(pt.a, pt.t, pt.p)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ineq1Outcome {
    /// `|a - t| + 1 - t`
    pub lhs: f64,
    /// `t^(1/2) |a - 1| + (1 - t)(|a| + 1)/2`
    pub rhs: f64,
    /// `lhs <= C rhs`
    pub upper_holds: bool,
    /// `lhs >= C rhs`
    pub lower_holds: bool,
}

const REL_TOL: f64 = 1e-12;

/// Compares `|a - t| + 1 - t` with `C (t^(1/2)|a - 1| + (1 - t)(|a| + 1)/2)`.
pub fn ineq1_check(a: f64, t: f64, c: f64) -> Ineq1Outcome {
    let lhs = abs(a - t) + 1.0 - t;
    let rhs = sqrt(t) * abs(a - 1.0) + (1.0 - t) * (abs(a) + 1.0) * 0.5;
    let scaled = c * rhs;
    let tol = REL_TOL * (lhs + scaled);
    Ineq1Outcome { lhs, rhs, upper_holds: lhs <= scaled + tol, lower_holds: lhs >= scaled - tol }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ineq34Outcome {
    /// `t |a-1|^2 (|a-t| + 1 - t)^(p-2)`
    pub quadratic_side: f64,
    /// `t^(p/2) |a-1|^p`
    pub power_side: f64,
    /// `quadratic <= power` for `p <= 2`, `quadratic >= power` for `p >= 2`.
    pub holds: bool,
}

/// The comparison between the quadratic and the pure power form. For
/// `1 < p <= 2` the quadratic side is the smaller one, for `p >= 2` the larger.
pub fn ineq34_check(a: f64, t: f64, p: PExponent) -> Result<Ineq34Outcome> {
    let p = p.require_superlinear()?.value();
    let quadratic_side = ineq2_rhs(a, t, p);
    let power_side = h1_like_rhs(a, t, p);
    let tol = REL_TOL * (quadratic_side + power_side);
    let holds = if p <= 2.0 { quadratic_side <= power_side + tol } else { quadratic_side + tol >= power_side };
    Ok(Ineq34Outcome { quadratic_side, power_side, holds })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ineq5Outcome {
    /// `alpha^p + beta^p`
    pub sum_of_powers: f64,
    /// `(alpha + beta)^p`
    pub power_of_sum: f64,
    /// `lower (alpha+beta)^p <= alpha^p + beta^p <= upper (alpha+beta)^p`
    pub lower: f64,
    pub upper: f64,
    /// `sum_of_powers / power_of_sum`
    pub ratio: f64,
    pub holds: bool,
}

/// Optimal constants `(lower, upper)` in `lower (a+b)^p <= a^p + b^p <= upper (a+b)^p`.
pub fn ineq5_constants(p: f64) -> (f64, f64) {
    let k = pow(2.0, 1.0 - p);
    if p >= 1.0 {
        (k, 1.0)
    } else {
        (1.0, k)
    }
}

/// Checks `alpha^p + beta^p ≍ (alpha + beta)^p` with the optimal constants for
/// the regime of `p >= 0`. A zero base contributes 0 even at `p = 0`, the
/// limit of `beta^p` as `beta -> 0`.
pub fn ineq5_check(alpha: f64, beta: f64, p: f64) -> Result<Ineq5Outcome> {
    if !(alpha >= 0.0 && beta >= 0.0) {
        return Err(Error::InvalidParameter(alloc::format!("alpha = {alpha} and beta = {beta} must be nonnegative")));
    }
    if !(p >= 0.0) || !p.is_finite() {
        return Err(Error::InvalidExponent { p, reason: "must satisfy p >= 0" });
    }
    let pw = |x: f64| if x == 0.0 { 0.0 } else { pow(x, p) };
    let sum_of_powers = pw(alpha) + pw(beta);
    let power_of_sum = pw(alpha + beta);
    let (lower, upper) = ineq5_constants(p);
    let tol = REL_TOL * power_of_sum;
    let holds = sum_of_powers + tol >= lower * power_of_sum && sum_of_powers <= upper * power_of_sum + tol;
    Ok(Ineq5Outcome {
        sum_of_powers,
        power_of_sum,
        lower,
        upper,
        ratio: if power_of_sum == 0.0 { 1.0 } else { sum_of_powers / power_of_sum },
        holds,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LindqvistOutcome {
    pub constant: f64,
    /// `|a|^p - |b|^p - p phi_p(b)(a - b) - remainder`
    pub slack: f64,
    pub holds: bool,
}

/// Lindqvist's convexity quantification in one dimension.
///
/// For `p >= 2` the remainder is `c |a - b|^p` with `c = 1/(2^(p-1) - 1)`;
/// for `1 < p < 2` it is `c |a - b|^2 / (|a| + |b|)^(2-p)` with
/// `c = 3p(p-1)/16`, the fraction being 0 at `a = b = 0`.
pub fn lindqvist_check(a: f64, b: f64, p: PExponent) -> Result<LindqvistOutcome> {
    let pe = p.require_superlinear()?;
    let p = pe.value();
    let base = abs_pow(a, p) - abs_pow(b, p) - p * phi_p(b, pe) * (a - b);
    let (constant, remainder) = if p >= 2.0 {
        let c = 1.0 / (pow(2.0, p - 1.0) - 1.0);
        (c, c * abs_pow(a - b, p))
    } else {
        let c = 3.0 * p * (p - 1.0) / 16.0;
        let denom = abs(a) + abs(b);
        let frac = if denom == 0.0 { 0.0 } else { (a - b) * (a - b) / pow(denom, 2.0 - p) };
        (c, c * frac)
    };
    let slack = base - remainder;
    let scale = abs_pow(a, p) + abs_pow(b, p);
    Ok(LindqvistOutcome { constant, slack, holds: slack >= -REL_TOL * (1.0 + scale) })
}

/// `c_p = 1/2 min_{t in (0, 1/2)} ((1-t)^p - t^p + p t^(p-1))` for `p >= 2`.
pub fn constant_cp(p: f64) -> Result<f64> {
    if !(p >= 2.0) || !p.is_finite() {
        return Err(Error::InvalidExponent { p, reason: "c_p is defined for p >= 2" });
    }
    let f = |t: f64| pow(1.0 - t, p) - pow(t, p) + p * pow(t, p - 1.0);
    let (_, min) = bracketed_min(f, 0.0, 0.5, 2000, 1e-13);
    Ok(0.5 * min)
}

/// Limit of the per-edge ratio `lhs / h_{u,1}` as `(a, t) -> (1, 1)` along
/// `a = 1 - kappa (1 - t)`.
fn corner_limit(kappa: f64, p: f64) -> f64 {
    (abs_pow(1.0 - kappa, p) - 1.0 + p * kappa) / abs_pow(kappa, p)
}

fn corner_sup(p: f64) -> f64 {
    let mut best = f64::NEG_INFINITY;
    let mut best_log = 0.0;
    let mut best_sign = 1.0;
    let steps = 4000;
    let (lo, hi) = (ln(1e-3), ln(1e4));
    for sign in [1.0, -1.0] {
        for i in 0..=steps {
            let l = lo + (hi - lo) * i as f64 / steps as f64;
            let v = corner_limit(sign * exp(l), p);
            if v > best {
                best = v;
                best_log = l;
                best_sign = sign;
            }
        }
    }
    let h = (hi - lo) / steps as f64;
    let (_, neg) = golden_section_min(|l| -corner_limit(best_sign * exp(l), p), best_log - h, best_log + h, 1e-12);
    best.max(-neg)
}

/// Empirically calibrated constant `c'` with `lhs <= c' h_{u,1}` per edge for
/// `1 < p <= 2`: the larger of the supremum over the default grid and the
/// supremum of the limit ratio at the corner `(a, t) = (1, 1)`.
pub fn corollary_upper_constant(p: f64) -> Result<f64> {
    let pe = PExponent::superlinear(p)?;
    if p > 2.0 {
        return Err(Error::InvalidExponent { p, reason: "the upper constant is defined for p <= 2" });
    }
    if p == 2.0 {
        return Ok(1.0);
    }
    let grid = ScanResult::from_rows(
        (0..ScanGrid::coarse().t_count()).map(|i| scan_row(ScanKernel::CorollaryH1, pe, &ScanGrid::coarse(), i)),
        ScanGrid::coarse(),
        ScanKernel::CorollaryH1,
        p,
    )?;
    // The kernel ratio is h1 / lhs, so its infimum bounds lhs / h1 from above.
    Ok((1.0 / grid.inf_ratio).max(corner_sup(p)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanGrid {
    pub a_min: f64,
    pub a_max: f64,
    pub a_step: f64,
    pub t_min: f64,
    pub t_max: f64,
    pub t_step: f64,
    /// Adds `a in {0, t, 1}` to every row.
    pub special_points: bool,
}

impl Default for ScanGrid {
    fn default() -> Self {
        Self { a_min: -10.0, a_max: 10.0, a_step: 1e-2, t_min: 0.0, t_max: 1.0, t_step: 1e-3, special_points: true }
    }
}

impl ScanGrid {
    /// A cheaper grid over the same ranges.
    pub fn coarse() -> Self {
        Self { a_step: 5e-2, t_step: 5e-3, ..Self::default() }
    }

    fn count(min: f64, max: f64, step: f64) -> usize {
        if !(step > 0.0) || !(max >= min) {
            return 0;
        }
        ((max - min) / step + 1e-9) as usize + 1
    }

    pub fn a_count(&self) -> usize {
        Self::count(self.a_min, self.a_max, self.a_step)
    }

    pub fn t_count(&self) -> usize {
        Self::count(self.t_min, self.t_max, self.t_step)
    }

    pub fn t_value(&self, i: usize) -> f64 {
        (self.t_min + self.t_step * i as f64).min(self.t_max)
    }

    pub fn a_value(&self, j: usize) -> f64 {
        (self.a_min + self.a_step * j as f64).min(self.a_max)
    }

    /// Column count of a row, special points included.
    pub fn row_len(&self) -> usize {
        self.a_count() + if self.special_points { 3 } else { 0 }
    }

    /// `a` at column `j` of the row with parameter `t`.
    pub fn row_a(&self, j: usize, t: f64) -> f64 {
        let n = self.a_count();
        if j < n {
            self.a_value(j)
        } else {
            [0.0, t, 1.0][j - n]
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite =
            [self.a_min, self.a_max, self.a_step, self.t_min, self.t_max, self.t_step].iter().all(|v| v.is_finite());
        if !finite || self.t_min < 0.0 || self.t_max > 1.0 || self.a_count() == 0 || self.t_count() == 0 {
            return Err(Error::EmptyGrid);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanKernel {
    /// The fundamental equivalence with the `(|a-t| + 1 - t)` bracket.
    Ineq2,
    /// The same left side against the simplified-energy bracket.
    GsrLike,
    /// The same left side against the pure power `t^(p/2) |a-1|^p`.
    CorollaryH1,
}

impl ScanKernel {
    #[inline]
    pub fn sides(self, a: f64, t: f64, p: f64) -> (f64, f64) {
        let lhs = ineq2_lhs(a, t, p);
        let rhs = match self {
            ScanKernel::Ineq2 => ineq2_rhs(a, t, p),
            ScanKernel::GsrLike => gsr_like_rhs(a, t, p),
            ScanKernel::CorollaryH1 => h1_like_rhs(a, t, p),
        };
        (lhs, rhs)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanPoint {
    pub a: f64,
    pub t: f64,
    pub ratio: f64,
    pub t_index: usize,
    pub a_index: usize,
}

impl ScanPoint {
    fn key(&self) -> (usize, usize) {
        (self.t_index, self.a_index)
    }

    /// On `t in {0, 1}` or `a in {0, t, 1}`.
    pub fn on_special_set(&self) -> bool {
        self.t == 0.0 || self.t == 1.0 || self.a == 0.0 || self.a == self.t || self.a == 1.0
    }
}

/// Partial scan over one row of the grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RowScan {
    pub min: Option<ScanPoint>,
    pub max: Option<ScanPoint>,
    pub evaluated: usize,
    pub degenerate: usize,
    /// Largest `max(|lhs|, |rhs|)` among skipped points.
    pub degenerate_max_abs: f64,
    /// Points where exactly one side vanishes or the ratio is not finite.
    pub anomalies: usize,
}

impl RowScan {
    fn empty() -> Self {
        Self { min: None, max: None, evaluated: 0, degenerate: 0, degenerate_max_abs: 0.0, anomalies: 0 }
    }

    fn better_min(a: ScanPoint, b: ScanPoint) -> ScanPoint {
        if b.ratio < a.ratio || (b.ratio == a.ratio && b.key() < a.key()) {
            b
        } else {
            a
        }
    }

    fn better_max(a: ScanPoint, b: ScanPoint) -> ScanPoint {
        if b.ratio > a.ratio || (b.ratio == a.ratio && b.key() < a.key()) {
            b
        } else {
            a
        }
    }

    /// Order-independent combination: ties resolve to the smallest grid index.
    pub fn merge(self, other: Self) -> Self {
        let pick = |x: Option<ScanPoint>, y: Option<ScanPoint>, f: fn(ScanPoint, ScanPoint) -> ScanPoint| match (x, y) {
            (Some(x), Some(y)) => Some(f(x, y)),
            (x, None) => x,
            (None, y) => y,
        };
        Self {
            min: pick(self.min, other.min, Self::better_min),
            max: pick(self.max, other.max, Self::better_max),
            evaluated: self.evaluated + other.evaluated,
            degenerate: self.degenerate + other.degenerate,
            degenerate_max_abs: self.degenerate_max_abs.max(other.degenerate_max_abs),
            anomalies: self.anomalies + other.anomalies,
        }
    }
}

/// Treats points whose sides are both below this (relative to the size of the
/// terms involved) as `0/0`.
const DEGENERATE_TOL: f64 = 1e-14;

/// Scans row `t_index` of the grid. The ratio is `rhs / lhs`.
pub fn scan_row(kernel: ScanKernel, p: PExponent, grid: &ScanGrid, t_index: usize) -> RowScan {
    let pv = p.value();
    let t = grid.t_value(t_index);
    let mut row = RowScan::empty();
    for j in 0..grid.row_len() {
        let a = grid.row_a(j, t);
        let (lhs, rhs) = kernel.sides(a, t, pv);
        let scale = 1.0 + abs_pow(a, pv);
        if rhs == 0.0 || abs(lhs) <= DEGENERATE_TOL * scale && abs(rhs) <= DEGENERATE_TOL * scale {
            row.degenerate += 1;
            row.degenerate_max_abs = row.degenerate_max_abs.max(abs(lhs).max(abs(rhs)));
            continue;
        }
        let ratio = rhs / lhs;
        if !ratio.is_finite() || !(lhs > 0.0) {
            row.anomalies += 1;
            continue;
        }
        row.evaluated += 1;
        let pt = ScanPoint { a, t, ratio, t_index, a_index: j };
        row.min = Some(row.min.map_or(pt, |m| RowScan::better_min(m, pt)));
        row.max = Some(row.max.map_or(pt, |m| RowScan::better_max(m, pt)));
    }
    row
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    pub kernel: ScanKernel,
    pub p: f64,
    pub grid: ScanGrid,
    /// `inf rhs/lhs`
    pub inf_ratio: f64,
    /// `sup rhs/lhs`
    pub sup_ratio: f64,
    pub argmin: ScanPoint,
    pub argmax: ScanPoint,
    pub evaluated: usize,
    pub degenerate: usize,
    pub degenerate_max_abs: f64,
    /// Points where one side vanished alone or the left side was negative.
    pub anomalies: usize,
    /// Whether both extremal points lie on `t in {0,1}` or `a in {0,t,1}`.
    pub extremes_on_special_set: bool,
}

impl ScanResult {
    /// Combines row scans; the order of `rows` does not affect the result.
    pub fn from_rows<I: IntoIterator<Item = RowScan>>(
        rows: I,
        grid: ScanGrid,
        kernel: ScanKernel,
        p: f64,
    ) -> Result<Self> {
        let total = rows.into_iter().fold(RowScan::empty(), RowScan::merge);
        let (Some(argmin), Some(argmax)) = (total.min, total.max) else {
            return Err(Error::EmptyGrid);
        };
        Ok(Self {
            kernel,
            p,
            grid,
            inf_ratio: argmin.ratio,
            sup_ratio: argmax.ratio,
            argmin,
            argmax,
            evaluated: total.evaluated,
            degenerate: total.degenerate,
            degenerate_max_abs: total.degenerate_max_abs,
            anomalies: total.anomalies,
            extremes_on_special_set: argmin.on_special_set() && argmax.on_special_set(),
        })
    }
}

/// Infimum and supremum of `rhs / lhs` over the grid, excluding points where
/// both sides vanish.
pub fn scan_equivalence(kernel: ScanKernel, p: PExponent, grid: &ScanGrid) -> Result<ScanResult> {
    let p = p.require_superlinear()?;
    grid.validate()?;
    ScanResult::from_rows((0..grid.t_count()).map(|i| scan_row(kernel, p, grid, i)), *grid, kernel, p.value())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub a: f64,
    pub t: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ineq1GridReport {
    pub constant: f64,
    pub upper_holds: bool,
    pub lower_holds: bool,
    /// First grid point (row-major) where the upper bound fails.
    pub upper_witness: Option<Witness>,
    pub lower_witness: Option<Witness>,
    pub points: usize,
}

fn for_each_point<F: FnMut(f64, f64)>(grid: &ScanGrid, mut f: F) {
    for i in 0..grid.t_count() {
        let t = grid.t_value(i);
        for j in 0..grid.row_len() {
            f(grid.row_a(j, t), t);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityDefect {
    /// Largest `|lhs - rhs| / scale` over the grid, where `scale` is the sum
    /// of the magnitudes of the terms making up the left side.
    pub max_scaled: f64,
    /// Same quantity in units of machine epsilon.
    pub ulps: f64,
    pub worst: Witness,
    pub points: usize,
}

/// At `p = 2` both sides of the fundamental equivalence equal `t (a-1)^2`.
/// Measures how far the evaluated sides drift apart, relative to the size of
/// the terms the left side cancels.
pub fn quadratic_identity_defect(grid: &ScanGrid) -> Result<IdentityDefect> {
    grid.validate()?;
    let mut out = IdentityDefect { max_scaled: 0.0, ulps: 0.0, worst: Witness { a: 0.0, t: 0.0 }, points: 0 };
    for_each_point(grid, |a, t| {
        out.points += 1;
        let scale = (a - t) * (a - t) + (1.0 - t) * (a * a + t) + t * (a - 1.0) * (a - 1.0);
        if scale == 0.0 {
            return;
        }
        let d = abs(ineq2_lhs(a, t, 2.0) - ineq2_rhs(a, t, 2.0)) / scale;
        if d > out.max_scaled {
            out.max_scaled = d;
            out.worst = Witness { a, t };
        }
    });
    out.ulps = out.max_scaled / f64::EPSILON;
    Ok(out)
}

/// Runs [`ineq1_check`] with constant `c` over the whole grid.
pub fn ineq1_grid(c: f64, grid: &ScanGrid) -> Result<Ineq1GridReport> {
    grid.validate()?;
    let mut report = Ineq1GridReport {
        constant: c,
        upper_holds: true,
        lower_holds: true,
        upper_witness: None,
        lower_witness: None,
        points: 0,
    };
    for_each_point(grid, |a, t| {
        let out = ineq1_check(a, t, c);
        report.points += 1;
        if !out.upper_holds && report.upper_witness.is_none() {
            report.upper_holds = false;
            report.upper_witness = Some(Witness { a, t });
        }
        if !out.lower_holds && report.lower_witness.is_none() {
            report.lower_holds = false;
            report.lower_witness = Some(Witness { a, t });
        }
    });
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridCheckReport {
    pub holds: bool,
    pub points: usize,
    pub failures: usize,
    pub first_failure: Option<Witness>,
    /// Smallest normalised slack seen (negative means a violation).
    pub min_slack: f64,
}

/// Runs [`ineq34_check`] over the grid.
pub fn ineq34_grid(p: PExponent, grid: &ScanGrid) -> Result<GridCheckReport> {
    let p = p.require_superlinear()?;
    grid.validate()?;
    let mut report =
        GridCheckReport { holds: true, points: 0, failures: 0, first_failure: None, min_slack: f64::INFINITY };
    let mut err = None;
    for_each_point(grid, |a, t| match ineq34_check(a, t, p) {
        Ok(out) => {
            report.points += 1;
            let diff = if p.value() <= 2.0 {
                out.power_side - out.quadratic_side
            } else {
                out.quadratic_side - out.power_side
            };
            let slack = diff / (1.0 + out.power_side + out.quadratic_side);
            report.min_slack = report.min_slack.min(slack);
            if !out.holds {
                report.failures += 1;
                report.first_failure.get_or_insert(Witness { a, t });
            }
        }
        Err(e) => err = Some(e),
    });
    if let Some(e) = err {
        return Err(e);
    }
    report.holds = report.failures == 0;
    Ok(report)
}

/// Runs [`lindqvist_check`] on the square `[-half_width, half_width]^2` with
/// spacing `step`. The witness stores `(a, b)` in `(a, t)`.
pub fn lindqvist_grid(p: PExponent, half_width: f64, step: f64) -> Result<GridCheckReport> {
    p.require_superlinear()?;
    if !(step > 0.0) || !(half_width >= 0.0) {
        return Err(Error::EmptyGrid);
    }
    let n = (2.0 * half_width / step + 1e-9) as usize + 1;
    let mut report =
        GridCheckReport { holds: true, points: 0, failures: 0, first_failure: None, min_slack: f64::INFINITY };
    for i in 0..n {
        let a = -half_width + step * i as f64;
        for j in 0..n {
            let b = -half_width + step * j as f64;
            let out = lindqvist_check(a, b, p)?;
            report.points += 1;
            report.min_slack = report.min_slack.min(out.slack);
            if !out.holds {
                report.failures += 1;
                report.first_failure.get_or_insert(Witness { a, t: b });
            }
        }
    }
    report.holds = report.failures == 0;
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ineq5Tightness {
    pub p: f64,
    pub lower: f64,
    pub upper: f64,
    /// Ratio at `alpha = beta = 1`.
    pub ratio_equal: f64,
    /// Ratio at `alpha = 1, beta = 0`.
    pub ratio_one_zero: f64,
    /// Both constants are attained at these two inputs.
    pub tight: bool,
}

/// The optimal constants are attained at `alpha = beta` and at `beta = 0`.
pub fn ineq5_tightness(p: f64) -> Result<Ineq5Tightness> {
    let eq = ineq5_check(1.0, 1.0, p)?;
    let zero = ineq5_check(1.0, 0.0, p)?;
    let close = |x: f64, y: f64| abs(x - y) <= 1e-12 * (1.0 + abs(y));
    let (lo, hi) = (eq.lower, eq.upper);
    let tight = eq.holds
        && zero.holds
        && if p >= 1.0 {
            close(eq.ratio, lo) && close(zero.ratio, hi)
        } else {
            close(eq.ratio, hi) && close(zero.ratio, lo)
        };
    Ok(Ineq5Tightness { p, lower: lo, upper: hi, ratio_equal: eq.ratio, ratio_one_zero: zero.ratio, tight })
}

/// Collects the `p` values of a scan battery into results, one per exponent.
pub fn scan_battery(kernel: ScanKernel, ps: &[f64], grid: &ScanGrid) -> Result<Vec<ScanResult>> {
    ps.iter().map(|&p| scan_equivalence(kernel, PExponent::new(p)?, grid)).collect()
}
