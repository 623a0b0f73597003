//! Cumulant generating functions, tilted measures, Legendre rate functions and
//! Cramér tail probabilities.

use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::math::{ln_binomial, LogSum};
use crate::measures::{same_space, ProbMeasure, RandomVar};
use crate::rng::{stream_rng, Sampler};
use crate::types::visit_types;

/// Relative distance to `m` or `M` below which `θ` is treated as the endpoint.
pub const BOUNDARY_SNAP: f64 = 1e-12;

/// The pair `(P, X)` restricted to `supp P`.
#[derive(Debug, Clone)]
pub struct CgfModel {
    p: ProbMeasure,
    support: Vec<usize>,
    ln_w: Vec<f64>,
    x: Vec<f64>,
    min: f64,
    max: f64,
    mean: f64,
}

/// `C(α)`, `C′(α)`, `C″(α)` and `C‴(α)` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CgfDerivs {
    pub c: f64,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
}

impl CgfModel {
    pub fn new(p: &ProbMeasure, x: &RandomVar) -> Result<Self> {
        if !same_space(p.space(), x.space()) {
            return Err(Error::SpaceMismatch);
        }
        let support = p.support();
        let mut ln_w = Vec::with_capacity(support.len());
        let mut xs = Vec::with_capacity(support.len());
        for &k in &support {
            let v = x.value(k);
            if !v.is_finite() {
                return Err(Error::NonFinite { index: k, value: v });
            }
            ln_w.push(p.weight(k).ln());
            xs.push(v);
        }
        let min = xs.iter().copied().fold(f64::INFINITY, f64::min);
        let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mean = support
            .iter()
            .zip(&xs)
            .map(|(&k, &v)| p.weight(k) * v)
            .sum::<f64>()
            .clamp(min, max);
        Ok(CgfModel {
            p: p.clone(),
            support,
            ln_w,
            x: xs,
            min,
            max,
            mean,
        })
    }

    pub fn measure(&self) -> &ProbMeasure {
        &self.p
    }

    /// `m = min_{supp P} X`.
    pub fn min(&self) -> f64 {
        self.min
    }

    /// `M = max_{supp P} X`.
    pub fn max(&self) -> f64 {
        self.max
    }

    /// `E(X)`.
    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn is_degenerate(&self) -> bool {
        self.min == self.max
    }

    /// Values of `X` on `supp P`, in support order.
    pub fn values(&self) -> &[f64] {
        &self.x
    }

    /// `log P(ω)` on `supp P`, in support order.
    pub fn log_weights(&self) -> &[f64] {
        &self.ln_w
    }

    fn shifted(&self, alpha: f64) -> (f64, Vec<f64>) {
        let logs: Vec<f64> = self
            .ln_w
            .iter()
            .zip(&self.x)
            .map(|(&l, &v)| l + alpha * v)
            .collect();
        let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (top, logs.iter().map(|&l| (l - top).exp()).collect())
    }

    /// `C(α) = log E(e^{αX})`.
    pub fn cgf(&self, alpha: f64) -> f64 {
        if alpha == 0.0 {
            return 0.0;
        }
        let (top, w) = self.shifted(alpha);
        top + w.iter().sum::<f64>().ln()
    }

    /// `C′(α) = E_{Q_α}(X)`.
    pub fn cgf_d1(&self, alpha: f64) -> f64 {
        self.derivs(alpha).d1
    }

    /// `C″(α) = Var_{Q_α}(X)`.
    pub fn cgf_d2(&self, alpha: f64) -> f64 {
        self.derivs(alpha).d2
    }

    pub fn derivs(&self, alpha: f64) -> CgfDerivs {
        let (top, w) = self.shifted(alpha);
        let z: f64 = w.iter().sum();
        let mean = w
            .iter()
            .zip(&self.x)
            .map(|(&a, &v)| a * v)
            .sum::<f64>()
            / z;
        let mean = mean.clamp(self.min, self.max);
        let (mut m2, mut m3) = (0.0, 0.0);
        for (&a, &v) in w.iter().zip(&self.x) {
            let d = v - mean;
            m2 += a * d * d;
            m3 += a * d * d * d;
        }
        CgfDerivs {
            c: if alpha == 0.0 { 0.0 } else { top + z.ln() },
            d1: mean,
            d2: m2 / z,
            d3: m3 / z,
        }
    }

    /// `Q_α ∝ e^{αX} P` on the full space.
    pub fn tilted_measure(&self, alpha: f64) -> ProbMeasure {
        let (_, w) = self.shifted(alpha);
        let mut full = vec![0.0; self.p.len()];
        for (&k, &v) in self.support.iter().zip(&w) {
            full[k] = v;
        }
        ProbMeasure::from_unnormalized(self.p.space().clone(), full)
            .expect("tilted weights are positive on the support")
    }

    /// `log P(S_m)`, the mass of the level set where `X = m`.
    pub fn log_prob_min_level(&self) -> f64 {
        self.log_level(self.min)
    }

    /// `log P(S_M)`.
    pub fn log_prob_max_level(&self) -> f64 {
        self.log_level(self.max)
    }

    fn log_level(&self, v: f64) -> f64 {
        let mut acc = LogSum::new();
        for (&l, &x) in self.ln_w.iter().zip(&self.x) {
            if x == v {
                acc.add(l);
            }
        }
        acc.value()
    }

    fn snap_width(&self) -> f64 {
        BOUNDARY_SNAP * (self.max - self.min)
    }

    /// The unique root of `C′(α) = θ` for `θ ∈ (m, M)`.
    pub fn solve_alpha(&self, theta: f64) -> Result<f64> {
        if self.is_degenerate() {
            return Err(Error::DegenerateVariable);
        }
        let snap = self.snap_width();
        if !(theta > self.min + snap && theta < self.max - snap) {
            return Err(Error::ThetaOutOfOpenRange {
                theta,
                lo: self.min,
                hi: self.max,
            });
        }
        if theta == self.mean {
            return Ok(0.0);
        }
        // C′(0) = E(X) fixes the side; the bracket doubles outward from ±1
        let (mut lo, mut hi);
        if theta > self.mean {
            (lo, hi) = (0.0f64, 1.0f64);
            while self.cgf_d1(hi) <= theta {
                lo = hi;
                hi *= 2.0;
            }
        } else {
            (lo, hi) = (-1.0f64, 0.0f64);
            while self.cgf_d1(lo) >= theta {
                hi = lo;
                lo *= 2.0;
            }
        }
        // safeguarded Newton inside the shrinking bracket, run to round-off
        let mut a = 0.5 * (lo + hi);
        for _ in 0..400 {
            let d = self.derivs(a);
            let r = d.d1 - theta;
            if r == 0.0 {
                return Ok(a);
            }
            if r < 0.0 {
                lo = a;
            } else {
                hi = a;
            }
            let newton = if d.d2 > 0.0 { a - r / d.d2 } else { f64::NAN };
            let next = if newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
            let scale = 4.0 * f64::EPSILON * a.abs().max(1.0);
            if (next - a).abs() <= scale || hi - lo <= scale {
                return Ok(next);
            }
            a = next;
        }
        Ok(a)
    }

    /// `I(θ) = sup_α (αθ − C(α))`.
    pub fn rate(&self, theta: f64) -> f64 {
        if theta.is_nan() {
            return f64::NAN;
        }
        if self.is_degenerate() {
            let tol = 1e-12 * self.mean.abs().max(1.0);
            return if (theta - self.mean).abs() <= tol {
                0.0
            } else {
                f64::INFINITY
            };
        }
        let snap = self.snap_width();
        if theta < self.min - snap || theta > self.max + snap {
            return f64::INFINITY;
        }
        if theta <= self.min + snap {
            return -self.log_prob_min_level();
        }
        if theta >= self.max - snap {
            return -self.log_prob_max_level();
        }
        let a = self
            .solve_alpha(theta)
            .expect("theta is interior and the model non-degenerate");
        (a * theta - self.cgf(a)).max(0.0)
    }

    /// `|sup_θ(θα − I(θ)) − C(α)|`, with the supremum taken at `θ = C′(α)`.
    pub fn inverse_legendre_gap(&self, alpha: f64) -> Result<f64> {
        if self.is_degenerate() {
            return Err(Error::DegenerateVariable);
        }
        let theta = self.cgf_d1(alpha);
        let value = theta * alpha - self.rate(theta);
        Ok((value - self.cgf(alpha)).abs())
    }
}

/// Rate function with explicit solver settings.
#[derive(Debug, Clone)]
pub struct RateFunction {
    model: CgfModel,
}

impl RateFunction {
    pub fn new(model: CgfModel) -> Self {
        RateFunction { model }
    }

    pub fn model(&self) -> &CgfModel {
        &self.model
    }

    pub fn eval(&self, theta: f64) -> f64 {
        self.model.rate(theta)
    }

    pub fn alpha(&self, theta: f64) -> Result<f64> {
        self.model.solve_alpha(theta)
    }

    pub fn inverse_legendre_gap(&self, alpha: f64) -> Result<f64> {
        self.model.inverse_legendre_gap(alpha)
    }
}

/// Which way [`moments_cumulants`] converts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentDirection {
    MomentsToCumulants,
    CumulantsToMoments,
}

pub const MAX_MOMENT_ORDER: usize = 20;

/// Converts `(M_1 … M_K)` and `(C_1 … C_K)` through
/// `M_n = Σ_{k<n} binom(n−1, k) C_{k+1} M_{n−1−k}`, `M_0 = 1`.
pub fn moments_cumulants(direction: MomentDirection, values: &[f64]) -> Result<Vec<f64>> {
    let k = values.len();
    if k > MAX_MOMENT_ORDER {
        return Err(Error::OrderTooLarge(k));
    }
    let binom = |n: usize, r: usize| ln_binomial(n as u64, r as u64).exp().round();
    let mut m = vec![1.0; k + 1];
    let mut c = vec![0.0; k + 1];
    for n in 1..=k {
        let mut tail = 0.0;
        for j in 0..n - 1 {
            tail += binom(n - 1, j) * c[j + 1] * m[n - 1 - j];
        }
        match direction {
            MomentDirection::CumulantsToMoments => {
                c[n] = values[n - 1];
                m[n] = tail + c[n];
            }
            MomentDirection::MomentsToCumulants => {
                m[n] = values[n - 1];
                c[n] = m[n] - tail;
            }
        }
    }
    Ok(match direction {
        MomentDirection::CumulantsToMoments => m[1..].to_vec(),
        MomentDirection::MomentsToCumulants => c[1..].to_vec(),
    })
}

fn in_interval(v: f64, a: f64, b: f64) -> bool {
    let ta = 1e-12 * a.abs().max(1.0);
    let tb = 1e-12 * b.abs().max(1.0);
    v >= a - ta && v <= b + tb
}

/// `log P_N{S_N/N ∈ [a, b]}` by summing type classes.
pub fn cramer_exact_log(model: &CgfModel, n: u32, a: f64, b: f64, cap: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument("N must be positive".into()));
    }
    let x = model.values();
    let lw = model.log_weights();
    let nf = n as f64;
    let mut acc = LogSum::new();
    visit_types(x.len(), n, cap, |c| {
        let s: f64 = c.iter().zip(x).map(|(&k, &v)| k as f64 * v).sum();
        if in_interval(s / nf, a, b) {
            let mut l = crate::math::ln_multinomial(c);
            for (&k, &w) in c.iter().zip(lw) {
                l += k as f64 * w;
            }
            acc.add(l);
        }
    })?;
    Ok(acc.value().min(0.0))
}

pub fn cramer_exact(model: &CgfModel, n: u32, a: f64, b: f64, cap: u64) -> Result<f64> {
    Ok(cramer_exact_log(model, n, a, b, cap)?.exp())
}

/// One Monte Carlo replica: does `S_N/N` land in `[a, b]`?
pub fn cramer_mc_replica(model: &CgfModel, n: u32, a: f64, b: f64, seed: u64, replica: u64) -> bool {
    let weights: Vec<f64> = model.log_weights().iter().map(|&l| l.exp()).collect();
    let sampler = Sampler::from_weights(&weights);
    let mut rng = stream_rng(seed, replica);
    let x = model.values();
    let mut s = 0.0;
    for _ in 0..n {
        s += x[sampler.draw(&mut rng)];
    }
    in_interval(s / n as f64, a, b)
}

/// Empirical frequency of `S_N/N ∈ [a, b]` over `reps` seeded replicas.
pub fn cramer_mc(model: &CgfModel, n: u32, a: f64, b: f64, reps: u64, seed: u64) -> Result<f64> {
    if n == 0 || reps == 0 {
        return Err(Error::InvalidArgument("N and reps must be positive".into()));
    }
    let hits = (0..reps)
        .filter(|&r| cramer_mc_replica(model, n, a, b, seed, r))
        .count();
    Ok(hits as f64 / reps as f64)
}
