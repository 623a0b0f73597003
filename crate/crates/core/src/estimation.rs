//! Cramér–Rao bounds, maximum-likelihood estimation on product spaces and
//! efficiency experiments for parametric families.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::empirical_sanov::{empirical_counts, sample_iid_stream};
use crate::error::{Error, Result};
use crate::fisher::{fisher_info, measure_at, ParametricFamily};
use crate::math::{golden_section, ln_binomial};
use crate::measures::{ProbMeasure, ProductIndex, RandomVar};

fn check_theta<F: ParametricFamily + ?Sized>(f: &F, theta: f64) -> Result<ProbMeasure> {
    measure_at(f, theta)
}

/// `E_θ((θ̂ − θ)²) − [Ė_θ(θ̂)]²/𝓘(θ)` for an estimator on `Ω`.
pub fn cramer_rao_gap<F: ParametricFamily + ?Sized>(f: &F, estimator: &RandomVar, theta: f64) -> Result<f64> {
    let p = check_theta(f, theta)?;
    if estimator.values().len() != p.len() {
        return Err(Error::LengthMismatch {
            expected: p.len(),
            got: estimator.values().len(),
        });
    }
    let d1 = f.d1(theta);
    let mut mse = 0.0;
    let mut slope = 0.0;
    for ((&w, &dw), &t) in p.weights().iter().zip(&d1).zip(estimator.values()) {
        mse += w * (t - theta) * (t - theta);
        slope += dw * t;
    }
    bound_gap(mse, slope, fisher_info(f, theta)?, 1.0)
}

fn bound_gap(mse: f64, slope: f64, info: f64, n: f64) -> Result<f64> {
    if info == 0.0 {
        return if slope == 0.0 {
            Ok(mse)
        } else {
            Err(Error::Undefined("estimator mean moves while the Fisher information vanishes"))
        };
    }
    Ok(mse - slope * slope / (n * info))
}

/// Product-space version: `E_{θN}((θ̂ − θ)²) − [Ė_{θN}(θ̂)]²/(N 𝓘(θ))`, with
/// the estimator evaluated on every sequence of `Ω^N` (at most `cap` of them).
pub fn cramer_rao_gap_product<F, E>(f: &F, estimator: E, theta: f64, n: usize, cap: u64) -> Result<f64>
where
    F: ParametricFamily + ?Sized,
    E: Fn(&[usize]) -> f64,
{
    let p = check_theta(f, theta)?;
    let idx = ProductIndex::new(p.space().clone(), n)?;
    let count = match idx.count() {
        Some(c) if c <= cap => c,
        _ => {
            return Err(Error::EnumerationCapExceeded {
                requested: (p.len() as f64).powi(n as i32),
                cap,
            })
        }
    };
    let w = p.weights();
    let score: Vec<f64> = f.d1(theta).iter().zip(w).map(|(d, p)| d / p).collect();
    let mut mse = 0.0;
    let mut slope = 0.0;
    for i in 0..count {
        let seq = idx.decode(i);
        let mut prob = 1.0;
        let mut s = 0.0;
        for &k in &seq {
            prob *= w[k];
            s += score[k];
        }
        let t = estimator(&seq);
        mse += prob * (t - theta) * (t - theta);
        slope += prob * s * t;
    }
    bound_gap(mse, slope, fisher_info(f, theta)?, n as f64)
}

/// Outcome of [`mle`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MleResult {
    pub estimate: f64,
    pub boundary_hit: bool,
    /// `Σ_k log P_θ̂(ω_k)`.
    pub loglik_at_estimate: f64,
    pub grid_points: usize,
}

pub const DEFAULT_GRID_POINTS: usize = 512;
pub const DEFAULT_REFINE_TOL: f64 = 1e-10;

/// `S_{θN}(ω) = −Σ_j c_j log P_θ(j)` from outcome counts.
fn entropy_function(weights: &[f64], counts: &[u32]) -> f64 {
    let mut s = 0.0;
    for (&w, &c) in weights.iter().zip(counts) {
        if c > 0 {
            if !(w > 0.0) {
                return f64::INFINITY;
            }
            s -= c as f64 * w.ln();
        }
    }
    s
}

/// `∂_θ S_{θN} = −Σ_j c_j ṗ_θ(j)/p_θ(j)`.
fn score<F: ParametricFamily + ?Sized>(f: &F, theta: f64, counts: &[u32]) -> f64 {
    let w = f.weights(theta);
    let d = f.d1(theta);
    -counts
        .iter()
        .zip(w.iter().zip(&d))
        .filter(|(&c, _)| c > 0)
        .map(|(&c, (p, dp))| c as f64 * dp / p)
        .sum::<f64>()
}

/// Maximum-likelihood estimate from a sample of outcome indices: grid search,
/// golden-section refinement of the best cell, then a sign-change polish on
/// the score. `refine_tol` is relative to `b − a`. Interior points win exact
/// ties against the endpoints.
pub fn mle<F: ParametricFamily + ?Sized>(
    f: &F,
    sample: &[usize],
    grid_points: usize,
    refine_tol: f64,
) -> Result<MleResult> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    let counts = empirical_counts(f.space().len(), sample)?;
    mle_from_counts(f, &counts, grid_points, refine_tol)
}

/// [`mle`] from outcome counts.
pub fn mle_from_counts<F: ParametricFamily + ?Sized>(
    f: &F,
    counts: &[u32],
    grid_points: usize,
    refine_tol: f64,
) -> Result<MleResult> {
    if counts.iter().all(|&c| c == 0) {
        return Err(Error::EmptySample);
    }
    if counts.len() != f.space().len() {
        return Err(Error::LengthMismatch {
            expected: f.space().len(),
            got: counts.len(),
        });
    }
    if grid_points < 3 || !(refine_tol > 0.0) {
        return Err(Error::InvalidArgument(
            "need at least 3 grid points and a positive tolerance".into(),
        ));
    }
    let (a, b) = f.interval();
    let obj = |t: f64| entropy_function(&f.weights(t), counts);
    let step = (b - a) / (grid_points - 1) as f64;
    let node = |i: usize| if i + 1 == grid_points { b } else { a + i as f64 * step };

    // strict `<` keeps the smallest θ among ties
    let mut best = 0;
    let mut best_v = f64::INFINITY;
    for i in 0..grid_points {
        let v = obj(node(i));
        if v < best_v {
            best_v = v;
            best = i;
        }
    }
    if !best_v.is_finite() {
        return Err(Error::Undefined("likelihood vanishes on the whole grid"));
    }
    let lo = node(best.saturating_sub(1));
    let hi = node((best + 1).min(grid_points - 1));
    let width = refine_tol * (b - a);
    let (glo, ghi) = golden_section(obj, lo, hi, width);
    let mut est = 0.5 * (glo + ghi);

    // objective differences near the optimum sit below round-off, so the
    // estimate is polished on the score where it changes sign over the cell
    let (slo, shi) = (score(f, lo, counts), score(f, hi, counts));
    if slo < 0.0 && shi > 0.0 {
        let (mut l, mut h) = (lo, hi);
        while h - l > 0.0 {
            let m = 0.5 * (l + h);
            if m <= l || m >= h {
                break;
            }
            if score(f, m, counts) < 0.0 {
                l = m;
            } else {
                h = m;
            }
        }
        let root = 0.5 * (l + h);
        if obj(root) <= obj(est) + 1e-12 * obj(est).abs() {
            est = root;
        }
    }
    let mut est_v = obj(est);

    // endpoints win only when strictly better
    let mut boundary_hit = false;
    for edge in [a, b] {
        if (edge - est).abs() <= step {
            let v = obj(edge);
            if v < est_v {
                est = edge;
                est_v = v;
                boundary_hit = true;
            }
        }
    }
    if !boundary_hit && (est - a <= width || b - est <= width) {
        boundary_hit = true;
    }
    Ok(MleResult {
        estimate: est,
        boundary_hit,
        loglik_at_estimate: -est_v,
        grid_points,
    })
}

fn check_bernoulli(a: f64, b: f64, theta: f64, n: u32) -> Result<()> {
    if !(0.0 < a && a < b && b < 1.0) {
        return Err(Error::InvalidArgument("need 0 < a < b < 1".into()));
    }
    if !(theta >= a && theta <= b) {
        return Err(Error::ThetaOutOfRange { theta, lo: a, hi: b });
    }
    if n == 0 {
        return Err(Error::InvalidArgument("N must be positive".into()));
    }
    Ok(())
}

fn binomial_pmf(n: u32, k: u32, theta: f64) -> f64 {
    let (n64, k64) = (n as u64, k as u64);
    let lt = if k == 0 { 0.0 } else { k as f64 * theta.ln() };
    let lf = if k == n { 0.0 } else { (n - k) as f64 * (1.0 - theta).ln() };
    (ln_binomial(n64, k64) + lt + lf).exp()
}

/// Exact `E_{θN}((θ̂ − θ)²)` of the Bernoulli MLE `clamp(k/N, [a, b])`.
pub fn bernoulli_risk_exact(a: f64, b: f64, theta: f64, n: u32) -> Result<f64> {
    check_bernoulli(a, b, theta, n)?;
    Ok((0..=n)
        .map(|k| {
            let e = (k as f64 / n as f64).clamp(a, b) - theta;
            binomial_pmf(n, k, theta) * e * e
        })
        .sum())
}

/// Exact `P_{θN}{|θ̂ − θ| ≥ δ}` for the Bernoulli MLE on `[a, b]`.
pub fn bernoulli_deviation_probability(a: f64, b: f64, theta: f64, n: u32, delta: f64) -> Result<f64> {
    check_bernoulli(a, b, theta, n)?;
    Ok((0..=n)
        .filter(|&k| ((k as f64 / n as f64).clamp(a, b) - theta).abs() >= delta)
        .map(|k| binomial_pmf(n, k, theta))
        .sum())
}

/// `S(θ, θ′) = −Σ P_θ log P_θ′`.
pub fn cross_entropy_surface<F: ParametricFamily + ?Sized>(f: &F, theta: f64, theta_prime: f64) -> Result<f64> {
    let p = check_theta(f, theta)?;
    let q = check_theta(f, theta_prime)?;
    Ok(p
        .weights()
        .iter()
        .zip(q.weights())
        .map(|(a, b)| -a * b.ln())
        .sum())
}

/// `sup_{θ′} |S_{θ′N}(ω)/N − S(θ, θ′)|` for one sample drawn from `P_θ`.
pub fn uniform_lln_deviation<F: ParametricFamily + ?Sized>(
    f: &F,
    theta: f64,
    theta_primes: &[f64],
    sample: &[usize],
) -> Result<f64> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    let counts = empirical_counts(f.space().len(), sample)?;
    let n = sample.len() as f64;
    let mut sup = 0.0f64;
    for &t in theta_primes {
        let w = check_theta(f, t)?;
        let emp = entropy_function(w.weights(), &counts) / n;
        sup = sup.max((emp - cross_entropy_surface(f, theta, t)?).abs());
    }
    Ok(sup)
}

/// `θ̂_{ML,N} − θ` for replica `replica` (its own random substream).
pub fn efficiency_replica<F: ParametricFamily + ?Sized>(
    f: &F,
    theta: f64,
    n: usize,
    seed: u64,
    replica: u64,
) -> Result<MleResult> {
    let p = check_theta(f, theta)?;
    let sample = sample_iid_stream(&p, n, seed, replica);
    mle(f, &sample, DEFAULT_GRID_POINTS, DEFAULT_REFINE_TOL)
}

/// Monte Carlo summary at one `(θ, N)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EfficiencyRow {
    pub theta: f64,
    pub n: usize,
    pub reps: usize,
    /// `N · mean (θ̂ − θ)²`.
    pub scaled_risk: f64,
    pub scaled_risk_se: f64,
    /// `mean |θ̂ − θ|`.
    pub mean_abs_error: f64,
    pub mean_abs_error_se: f64,
    /// `1/𝓘(θ)`.
    pub inverse_info: f64,
    pub boundary_hits: usize,
}

impl EfficiencyRow {
    /// Aggregates replica results in the given order.
    pub fn from_results(theta: f64, n: usize, results: &[MleResult], inverse_info: f64) -> Self {
        let reps = results.len();
        let r = reps as f64;
        let (mut s1, mut s2, mut a1, mut a2) = (0.0, 0.0, 0.0, 0.0);
        for m in results {
            let e = m.estimate - theta;
            let sq = n as f64 * e * e;
            s1 += sq;
            s2 += sq * sq;
            a1 += e.abs();
            a2 += e * e;
        }
        let se = |sum: f64, sq: f64| {
            if reps < 2 {
                f64::NAN
            } else {
                let mean = sum / r;
                ((sq / r - mean * mean).max(0.0) * r / (r - 1.0) / r).sqrt()
            }
        };
        EfficiencyRow {
            theta,
            n,
            reps,
            scaled_risk: s1 / r,
            scaled_risk_se: se(s1, s2),
            mean_abs_error: a1 / r,
            mean_abs_error_se: se(a1, a2),
            inverse_info,
            boundary_hits: results.iter().filter(|m| m.boundary_hit).count(),
        }
    }
}

/// Relative distance from the ends of `[a, b]` below which efficiency is not
/// reported.
pub const EFFICIENCY_MARGIN: f64 = 0.05;

pub fn check_efficiency_theta<F: ParametricFamily + ?Sized>(f: &F, theta: f64) -> Result<()> {
    let (a, b) = f.interval();
    let m = EFFICIENCY_MARGIN * (b - a);
    if theta >= a + m && theta <= b - m {
        Ok(())
    } else {
        Err(Error::ThetaOutOfRange {
            theta,
            lo: a + m,
            hi: b - m,
        })
    }
}

/// Sequential efficiency experiment. Replica `r` uses substream `r` of `seed`
/// at every `(θ, N)`.
pub fn efficiency_experiment<F: ParametricFamily + ?Sized>(
    f: &F,
    thetas: &[f64],
    ns: &[usize],
    reps: usize,
    seed: u64,
) -> Result<Vec<EfficiencyRow>> {
    let mut rows = Vec::with_capacity(thetas.len() * ns.len());
    for &t in thetas {
        check_efficiency_theta(f, t)?;
        let inv = 1.0 / fisher_info(f, t)?;
        for &n in ns {
            let results = (0..reps as u64)
                .map(|r| efficiency_replica(f, t, n, seed, r))
                .collect::<Result<Vec<_>>>()?;
            rows.push(EfficiencyRow::from_results(t, n, &results, inv));
        }
    }
    Ok(rows)
}
