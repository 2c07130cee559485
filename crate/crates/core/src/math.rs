//! Float helpers for `no_std` builds.
//!
//! Everything goes through `libm`, so results do not depend on the platform's
//! math library.

#[inline]
pub fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

#[inline]
pub fn pow(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

/// `|x|^y` with `0^0 = 1` and `0^y = 0` for every other `y`, including
/// negative ones. Every caller multiplies the result by a factor that vanishes
/// whenever the base does, which is the `0 * inf = 0` convention.
#[inline]
pub fn abs_pow(x: f64, y: f64) -> f64 {
    let a = abs(x);
    if a == 0.0 {
        if y == 0.0 {
            1.0
        } else {
            0.0
        }
    } else {
        pow(a, y)
    }
}

/// Streaming pairwise (cascade) summation.
///
/// Level `k` holds the sum of a block of `2^k` inputs; pushing a value carries
/// upwards like a binary counter. The result equals tree summation of the
/// input sequence in its arrival order, without allocating.
#[derive(Debug, Clone)]
pub struct PairwiseSum {
    levels: [f64; 64],
    occupied: u64,
}

impl Default for PairwiseSum {
    fn default() -> Self {
        Self::new()
    }
}

impl PairwiseSum {
    pub const fn new() -> Self {
        Self { levels: [0.0; 64], occupied: 0 }
    }

    #[inline]
    pub fn push(&mut self, value: f64) {
        let mut carry = value;
        let mut k = 0;
        while self.occupied & (1 << k) != 0 {
            carry += self.levels[k];
            self.occupied &= !(1 << k);
            k += 1;
        }
        self.levels[k] = carry;
        self.occupied |= 1 << k;
    }

    pub fn total(&self) -> f64 {
        let mut sum = 0.0;
        for k in 0..64 {
            if self.occupied & (1 << k) != 0 {
                sum += self.levels[k];
            }
        }
        sum
    }
}

pub fn pairwise_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut acc = PairwiseSum::new();
    for v in values {
        acc.push(v);
    }
    acc.total()
}

/// Golden-section search for a minimum of a unimodal `f` on `[lo, hi]`.
/// Returns `(argmin, min)`.
pub fn golden_section_min<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut iterations = 0;
    while abs(b - a) > tol && iterations < 500 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        iterations += 1;
    }
    let x = 0.5 * (a + b);
    let fx = f(x);
    // The endpoints of the final bracket can beat the midpoint on a flat tail.
    [(x, fx), (c, fc), (d, fd)].into_iter().fold((x, fx), |best, cand| if cand.1 < best.1 { cand } else { best })
}

/// Minimize `f` over `[lo, hi]`: dense sampling picks a bracket, golden-section
/// refines inside it.
pub fn bracketed_min<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, samples: usize, tol: f64) -> (f64, f64) {
    let samples = samples.max(3);
    let h = (hi - lo) / samples as f64;
    let mut best_i = 0;
    let mut best = f64::INFINITY;
    for i in 0..=samples {
        let v = f(lo + h * i as f64);
        if v < best {
            best = v;
            best_i = i;
        }
    }
    let left = lo + h * best_i.saturating_sub(1) as f64;
    let right = (lo + h * (best_i + 1) as f64).min(hi);
    let (x, fx) = golden_section_min(&mut f, left, right, tol);
    if fx <= best {
        (x, fx)
    } else {
        (lo + h * best_i as f64, best)
    }
}
