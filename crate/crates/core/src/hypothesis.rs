//! Bayesian and asymmetric hypothesis testing on finite spaces: Neyman–Pearson
//! tests, exact error probabilities of product measures, and the Stein,
//! Chernoff and Hoeffding exponents.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::divergences::{kl_weights, renyi_cgf_weights};
use crate::error::{Error, Result};
use crate::math::{bisect_increasing, ceil_tolerant, ln_multinomial, LogSum};
use crate::measures::{same_space, ProbMeasure, RandomVar};
use crate::simplex;
use crate::types::{sequence_log_probability, visit_types};
use crate::ldp::CgfModel;

fn check_prior(prior: f64) -> Result<()> {
    if prior > 0.0 && prior < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument("prior must lie in (0, 1)".into()))
    }
}

fn check_pair(p: &ProbMeasure, q: &ProbMeasure) -> Result<()> {
    if same_space(p.space(), q.space()) {
        Ok(())
    } else {
        Err(Error::SpaceMismatch)
    }
}

fn faithful(p: &ProbMeasure) -> Result<()> {
    match p.weights().iter().position(|&w| w == 0.0) {
        Some(i) => Err(Error::FaithfulnessError(i)),
        None => Ok(()),
    }
}

/// `T_opt = {ω : prior·p(ω) ≤ (1−prior)·q(ω)}`, the outcomes on which `Q` is chosen.
pub fn optimal_test(p: &ProbMeasure, q: &ProbMeasure, prior: f64) -> Result<Vec<usize>> {
    check_pair(p, q)?;
    check_prior(prior)?;
    Ok((0..p.len())
        .filter(|&k| prior * p.weight(k) <= (1.0 - prior) * q.weight(k))
        .collect())
}

/// `D_p(P, Q, T) = prior·P(T) + (1−prior)·Q(T^c)`.
pub fn bayes_error_of_test(p: &ProbMeasure, q: &ProbMeasure, prior: f64, test: &[usize]) -> Result<f64> {
    check_pair(p, q)?;
    check_prior(prior)?;
    let mut in_t = alloc::vec![false; p.len()];
    for &k in test {
        if k >= p.len() {
            return Err(Error::InvalidArgument("test outcome index out of range".into()));
        }
        in_t[k] = true;
    }
    let mut d = 0.0;
    for (k, &t) in in_t.iter().enumerate() {
        d += if t {
            prior * p.weight(k)
        } else {
            (1.0 - prior) * q.weight(k)
        };
    }
    Ok(d)
}

/// `D_p(P, Q) = Σ min{(1−prior) q, prior p}`.
pub fn bayes_error(p: &ProbMeasure, q: &ProbMeasure, prior: f64) -> Result<f64> {
    check_pair(p, q)?;
    check_prior(prior)?;
    Ok(p.weights()
        .iter()
        .zip(q.weights())
        .map(|(&a, &b)| (prior * a).min((1.0 - prior) * b))
        .sum())
}

/// `prior^α (1−prior)^{1−α} e^{Ŝ_α(P|Q)}` for `α ∈ (0, 1)`.
pub fn chernoff_bound(p: &ProbMeasure, q: &ProbMeasure, prior: f64, alpha: f64) -> Result<f64> {
    check_pair(p, q)?;
    check_prior(prior)?;
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::AlphaOutOfRange(alpha));
    }
    let s = renyi_cgf_weights(p.weights(), q.weights(), alpha);
    Ok((alpha * prior.ln() + (1.0 - alpha) * (1.0 - prior).ln() + s).exp())
}

/// `Σ prior(1−prior) p q / (prior p + (1−prior) q)`, a lower bound on `D_p(P, Q)`.
pub fn bayes_error_lower_bound(p: &ProbMeasure, q: &ProbMeasure, prior: f64) -> Result<f64> {
    check_pair(p, q)?;
    check_prior(prior)?;
    Ok(p.weights()
        .iter()
        .zip(q.weights())
        .filter(|(&a, &b)| a > 0.0 && b > 0.0)
        .map(|(&a, &b)| prior * (1.0 - prior) * a * b / (prior * a + (1.0 - prior) * b))
        .sum())
}

/// `log D_p(P_N, Q_N)`, summed over types.
pub fn bayes_error_product_log(p: &ProbMeasure, q: &ProbMeasure, prior: f64, n: u32, cap: u64) -> Result<f64> {
    check_pair(p, q)?;
    check_prior(prior)?;
    let (lp0, lq0) = (prior.ln(), (1.0 - prior).ln());
    let mut acc = LogSum::new();
    visit_types(p.len(), n, cap, |c| {
        let a = lp0 + sequence_log_probability(p.weights(), c);
        let b = lq0 + sequence_log_probability(q.weights(), c);
        acc.add(ln_multinomial(c) + a.min(b));
    })?;
    Ok(acc.value())
}

/// `(α_min, min_{α∈[0,1]} Ŝ_α(P|Q))`.
///
/// `Ŝ_α(P|Q)` is the cumulant generating function of `log(p/q)` under `Q`, so
/// its slope is a tilted mean and the minimizer is found by bisection on it.
pub fn chernoff_exponent(p: &ProbMeasure, q: &ProbMeasure) -> Result<(f64, f64)> {
    check_pair(p, q)?;
    for k in 0..p.len() {
        if (p.weight(k) > 0.0) != (q.weight(k) > 0.0) {
            return Err(Error::AbsContViolation(k));
        }
    }
    let values = p
        .weights()
        .iter()
        .zip(q.weights())
        .map(|(&a, &b)| if a > 0.0 { (a / b).ln() } else { 0.0 })
        .collect();
    let x = RandomVar::new(q.space().clone(), values)?;
    let model = CgfModel::new(q, &x)?;
    if model.is_degenerate() {
        return Ok((0.5, 0.0));
    }
    let alpha = if model.cgf_d1(0.0) >= 0.0 {
        0.0
    } else if model.cgf_d1(1.0) <= 0.0 {
        1.0
    } else {
        bisect_increasing(|a| model.cgf_d1(a), 0.0, 1.0)
    };
    Ok((alpha, model.cgf(alpha).min(0.0)))
}

/// One Stein point: `s_N(γ)` and `(1/N) log s_N(γ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteinPoint {
    pub n: u32,
    pub gamma: f64,
    pub s_n: f64,
    pub log_s_n: f64,
    pub normalized: f64,
}

/// `s_N(γ) = min Q_N(T)` over `T` with `P_N(T) ≥ γ`, filling `T` in decreasing
/// order of the likelihood ratio `P_N/Q_N`; the last type is taken partially.
pub fn stein_exponent(p: &ProbMeasure, q: &ProbMeasure, gamma: f64, n: u32, cap: u64) -> Result<SteinPoint> {
    check_pair(p, q)?;
    if n == 0 {
        return Err(Error::InvalidArgument("N must be positive".into()));
    }
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::InvalidArgument("gamma must lie in (0, 1)".into()));
    }
    // (log ratio, log P of one sequence, log Q of one sequence, log multiplicity)
    let mut levels: Vec<(f64, f64, f64, f64)> = Vec::new();
    visit_types(p.len(), n, cap, |c| {
        let lp = sequence_log_probability(p.weights(), c);
        if lp == f64::NEG_INFINITY {
            return;
        }
        let lq = sequence_log_probability(q.weights(), c);
        levels.push((lp - lq, lp, lq, ln_multinomial(c)));
    })?;
    levels.sort_by(|a, b| b.0.total_cmp(&a.0));

    let mut mass = 0.0;
    let mut cost = LogSum::new();
    for &(_, lp, lq, lm) in &levels {
        let remaining = gamma - mass;
        let level_mass = (lp + lm).exp();
        if level_mass >= remaining {
            let needed = ceil_tolerant((remaining.ln() - lp).exp()).max(1.0);
            cost.add(needed.ln().min(lm) + lq);
            break;
        }
        mass += level_mass;
        cost.add(lm + lq);
    }
    let log_s = cost.value().min(0.0);
    Ok(SteinPoint {
        n,
        gamma,
        s_n: log_s.exp(),
        log_s_n: log_s,
        normalized: log_s / n as f64,
    })
}

/// A faithful pair `(P, Q)` with the cumulant generating function of
/// `S_{Q|P} = log(q/p)` under `P`, which is `α ↦ Ŝ_α(Q|P)`.
#[derive(Debug, Clone)]
pub struct TiltedPair {
    p: ProbMeasure,
    q: ProbMeasure,
    model: CgfModel,
    s_pq: f64,
    s_qp: f64,
}

/// One Hoeffding point: `ψ(s)` and the root `α_*(s)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HoeffdingPoint {
    pub s: f64,
    pub psi: f64,
    pub alpha: f64,
}

impl TiltedPair {
    pub fn new(p: &ProbMeasure, q: &ProbMeasure) -> Result<Self> {
        check_pair(p, q)?;
        faithful(p)?;
        faithful(q)?;
        let values = p
            .weights()
            .iter()
            .zip(q.weights())
            .map(|(&a, &b)| (b / a).ln())
            .collect();
        let x = RandomVar::new(p.space().clone(), values)?;
        let model = CgfModel::new(p, &x)?;
        if model.is_degenerate() {
            return Err(Error::DegenerateVariable);
        }
        Ok(TiltedPair {
            p: p.clone(),
            q: q.clone(),
            model,
            s_pq: kl_weights(p.weights(), q.weights()),
            s_qp: kl_weights(q.weights(), p.weights()),
        })
    }

    pub fn p(&self) -> &ProbMeasure {
        &self.p
    }

    pub fn q(&self) -> &ProbMeasure {
        &self.q
    }

    pub fn model(&self) -> &CgfModel {
        &self.model
    }

    /// `S(P|Q)`.
    pub fn s_pq(&self) -> f64 {
        self.s_pq
    }

    /// `S(Q|P)`.
    pub fn s_qp(&self) -> f64 {
        self.s_qp
    }

    /// `Ŝ_α(Q|P)`.
    pub fn s_hat(&self, alpha: f64) -> f64 {
        self.model.cgf(alpha)
    }

    /// `G(α) = s + Ŝ_α(Q|P) + (1−α) Ŝ′_α(Q|P)`.
    pub fn g(&self, s: f64, alpha: f64) -> f64 {
        let d = self.model.derivs(alpha);
        s + d.c + (1.0 - alpha) * d.d1
    }

    /// `(ψ(s), α_*(s))`. Endpoints: `ψ(0) = −S(Q|P)` with `α_* = 1`, and
    /// `ψ(s) = 0` with `α_* = 0` for `s ≥ S(P|Q)`.
    pub fn psi(&self, s: f64) -> Result<HoeffdingPoint> {
        if !(s >= 0.0) {
            return Err(Error::SOutOfRange(s));
        }
        if s == 0.0 {
            return Ok(HoeffdingPoint { s, psi: -self.s_qp, alpha: 1.0 });
        }
        if s >= self.s_pq {
            return Ok(HoeffdingPoint { s, psi: 0.0, alpha: 0.0 });
        }
        let alpha = bisect_increasing(|a| self.g(s, a), 0.0, 1.0);
        let psi = (-s - self.model.cgf_d1(alpha)).min(0.0);
        Ok(HoeffdingPoint { s, psi, alpha })
    }

    /// `φ(θ) = sup_{α∈[0,1]} (θα − Ŝ_α(Q|P))`.
    pub fn phi(&self, theta: f64) -> f64 {
        if theta <= -self.s_pq {
            return 0.0;
        }
        if theta >= self.s_qp {
            return theta;
        }
        match self.model.solve_alpha(theta) {
            Ok(a) => {
                let a = a.clamp(0.0, 1.0);
                (a * theta - self.model.cgf(a)).max(0.0).max(theta)
            }
            // θ within round-off of an end of the slope range
            Err(_) => theta.max(0.0),
        }
    }

    /// `φ̂(θ) = φ(θ) − θ`.
    pub fn phi_hat(&self, theta: f64) -> f64 {
        (self.phi(theta) - theta).max(0.0)
    }

    /// The `θ` with `φ̂(θ) = s`, by bisection on `(−S(P|Q), S(Q|P)]`.
    pub fn phi_hat_inverse(&self, s: f64) -> Result<f64> {
        if !(s >= 0.0) {
            return Err(Error::SOutOfRange(s));
        }
        if s == 0.0 {
            return Ok(self.s_qp);
        }
        if s >= self.s_pq {
            return Ok(-s);
        }
        Ok(bisect_increasing(|t| s - self.phi_hat(t), -self.s_pq, self.s_qp))
    }

    /// `R_α ∝ Q^α P^{1−α}`.
    pub fn r_alpha(&self, alpha: f64) -> ProbMeasure {
        self.model.tilted_measure(alpha)
    }

    /// `(S(R_{α_*(s)}|Q), S(R_{α_*(s)}|P))`, which should equal `(s, −ψ(s))`.
    pub fn tilted_attainment(&self, s: f64) -> Result<(f64, f64)> {
        let h = self.psi(s)?;
        let r = self.r_alpha(h.alpha);
        Ok((
            kl_weights(r.weights(), self.q.weights()),
            kl_weights(r.weights(), self.p.weights()),
        ))
    }
}

/// `(ψ(s), α_*(s))` for the pair `(P, Q)`.
pub fn hoeffding_psi(p: &ProbMeasure, q: &ProbMeasure, s: f64) -> Result<HoeffdingPoint> {
    TiltedPair::new(p, q)?.psi(s)
}

/// Result of the brute-force simplex search for `inf{S(R|P) : S(R|Q) ≤ s}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstrainedOracle {
    pub value: f64,
    pub grid_value: f64,
    pub minimizer: Vec<f64>,
}

/// `inf{S(R|P) : S(R|Q) ≤ s}` over the simplex, for alphabets of at most four
/// letters. Equals `−ψ(s)`.
pub fn hoeffding_constrained_oracle(
    p: &ProbMeasure,
    q: &ProbMeasure,
    s: f64,
    resolution: f64,
    cap: u64,
) -> Result<ConstrainedOracle> {
    check_pair(p, q)?;
    if !(s >= 0.0) {
        return Err(Error::SOutOfRange(s));
    }
    let (pw, qw) = (p.weights(), q.weights());
    let slack = 1e-12;
    let m = simplex::minimize(
        p.len(),
        resolution,
        cap,
        |r| kl_weights(r, pw),
        |r| kl_weights(r, qw) <= s + slack,
    )?;
    Ok(ConstrainedOracle {
        value: m.value,
        grid_value: m.grid_value,
        minimizer: m.point,
    })
}

/// Exact `(1/N) log P_N(T_N(θ))` and `(1/N) log Q_N(T_N(θ)^c)` for the
/// threshold test `T_N(θ) = {Q_N ≥ e^{Nθ} P_N}`.
pub fn threshold_test_exponents(p: &ProbMeasure, q: &ProbMeasure, theta: f64, n: u32, cap: u64) -> Result<(f64, f64)> {
    check_pair(p, q)?;
    faithful(p)?;
    faithful(q)?;
    if n == 0 {
        return Err(Error::InvalidArgument("N must be positive".into()));
    }
    let x: Vec<f64> = p
        .weights()
        .iter()
        .zip(q.weights())
        .map(|(&a, &b)| (b / a).ln())
        .collect();
    let nf = n as f64;
    let tol = 1e-12 * theta.abs().max(1.0);
    let mut in_p = LogSum::new();
    let mut out_q = LogSum::new();
    visit_types(p.len(), n, cap, |c| {
        let mean = c.iter().zip(&x).map(|(&k, &v)| k as f64 * v).sum::<f64>() / nf;
        let lm = ln_multinomial(c);
        if mean >= theta - tol {
            in_p.add(lm + sequence_log_probability(p.weights(), c));
        } else {
            out_q.add(lm + sequence_log_probability(q.weights(), c));
        }
    })?;
    Ok((in_p.value().min(0.0) / nf, out_q.value().min(0.0) / nf))
}

/// Stein, Chernoff and Hoeffding exponents of one pair.
#[derive(Debug, Clone, PartialEq)]
pub struct TestingExponents {
    pub stein: Vec<SteinPoint>,
    /// `−S(P|Q)`.
    pub stein_limit: f64,
    /// `(α_min, min Ŝ_α(P|Q))`, absent without mutual absolute continuity.
    pub chernoff: Option<(f64, f64)>,
    pub hoeffding: Vec<HoeffdingPoint>,
}

/// Collects the exponents over the requested `N` and `s` grids. Hoeffding
/// points are skipped when the pair is not faithful or coincides.
pub fn testing_exponents(
    p: &ProbMeasure,
    q: &ProbMeasure,
    gamma: f64,
    ns: &[u32],
    s_grid: &[f64],
    cap: u64,
) -> Result<TestingExponents> {
    check_pair(p, q)?;
    let stein = ns
        .iter()
        .map(|&n| stein_exponent(p, q, gamma, n, cap))
        .collect::<Result<Vec<_>>>()?;
    let chernoff = chernoff_exponent(p, q).ok();
    let hoeffding = match TiltedPair::new(p, q) {
        Ok(pair) => s_grid
            .iter()
            .map(|&s| pair.psi(s))
            .collect::<Result<Vec<_>>>()?,
        Err(_) if s_grid.is_empty() => Vec::new(),
        Err(e) => return Err(e),
    };
    Ok(TestingExponents {
        stein,
        stein_limit: -kl_weights(p.weights(), q.weights()),
        chernoff,
        hoeffding,
    })
}
