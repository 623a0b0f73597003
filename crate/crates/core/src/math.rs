//! Small numerically-stable helpers shared by the modules.

#[allow(unused_imports)]
use num_traits::Float;

/// `log(exp(a) + exp(b))`, exact for infinite arguments.
#[inline]
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// Max-shifted `log Σ exp(x_i)`. Returns `-inf` on empty input.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY || max == f64::INFINITY {
        return max;
    }
    let s: f64 = xs.iter().map(|&x| (x - max).exp()).sum();
    max + s.ln()
}

/// Running log-domain accumulator.
#[derive(Debug, Clone, Copy)]
pub struct LogSum(f64);

impl LogSum {
    pub const fn new() -> Self {
        LogSum(f64::NEG_INFINITY)
    }

    #[inline]
    pub fn add(&mut self, log_term: f64) {
        self.0 = log_add_exp(self.0, log_term);
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl Default for LogSum {
    fn default() -> Self {
        Self::new()
    }
}

/// `x log y` with the `0 log 0 = 0` convention.
#[inline]
pub fn xlogy(x: f64, y: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * y.ln()
    }
}

/// `log n!` through the log-gamma function.
#[inline]
pub fn ln_factorial(n: u64) -> f64 {
    if n < 2 {
        0.0
    } else {
        libm::lgamma(n as f64 + 1.0)
    }
}

pub fn ln_binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// `log (N; n_1, …, n_L)`.
pub fn ln_multinomial(counts: &[u32]) -> f64 {
    let n: u64 = counts.iter().map(|&c| c as u64).sum();
    counts
        .iter()
        .fold(ln_factorial(n), |acc, &c| acc - ln_factorial(c as u64))
}

/// Exact binomial coefficient, `None` on overflow.
pub fn binomial_u128(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) at every step
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

/// Exact multinomial coefficient, `None` on overflow.
pub fn multinomial_u128(counts: &[u32]) -> Option<u128> {
    let mut total: u64 = 0;
    let mut acc: u128 = 1;
    for &c in counts {
        total += c as u64;
        acc = acc.checked_mul(binomial_u128(total, c as u64)?)?;
    }
    Some(acc)
}

/// Number of compositions of `n` into `parts` non-negative parts, as a float
/// (used for cap checks where the exact value may overflow).
pub fn composition_count(n: u64, parts: usize) -> f64 {
    if parts == 0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    match binomial_u128(n + parts as u64 - 1, parts as u64 - 1) {
        Some(c) => c as f64,
        None => ln_binomial(n + parts as u64 - 1, parts as u64 - 1).exp(),
    }
}

/// Ceiling that forgives relative round-off of `1e-9` just above an integer.
pub fn ceil_tolerant(x: f64) -> f64 {
    (x - 1e-9 * x.abs().max(1.0)).ceil().max(0.0)
}

/// Bisection for an increasing function on `[lo, hi]` with `f(lo) <= 0 <= f(hi)`.
/// Runs until the bracket stops shrinking in floating point.
pub fn bisect_increasing<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Golden-section search for a minimum of a unimodal function on `[lo, hi]`.
/// Returns the final bracket.
pub fn golden_section<F: FnMut(f64) -> f64>(
    mut f: F,
    mut lo: f64,
    mut hi: f64,
    width: f64,
) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut iters = 0;
    while hi - lo > width && iters < 500 {
        iters += 1;
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    (lo, hi)
}

/// Composite Simpson rule with `panels` (even) sub-intervals.
pub fn simpson<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, panels: usize) -> f64 {
    let n = if panels % 2 == 1 { panels + 1 } else { panels.max(2) };
    let h = (b - a) / n as f64;
    let mut odd = 0.0;
    let mut even = 0.0;
    for i in 1..n {
        let x = a + h * i as f64;
        if i % 2 == 1 {
            odd += f(x);
        } else {
            even += f(x);
        }
    }
    h / 3.0 * (f(a) + f(b) + 4.0 * odd + 2.0 * even)
}
