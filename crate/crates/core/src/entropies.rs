//! Boltzmann–Gibbs–Shannon, Hartley and Rényi entropies (natural log).

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::math::{log_sum_exp, xlogy};
use crate::measures::{marginals, ProbMeasure, RandomVar};

/// Entropies of one measure. Rényi values are listed as `(α, S_α)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyReport {
    pub shannon: f64,
    pub hartley: f64,
    pub renyi: Vec<(f64, f64)>,
}

pub fn entropy_report(p: &ProbMeasure, alphas: &[f64]) -> EntropyReport {
    EntropyReport {
        shannon: shannon_entropy(p),
        hartley: hartley_entropy(p),
        renyi: alphas.iter().map(|&a| (a, renyi_entropy(p, a))).collect(),
    }
}

/// `S(P) = −Σ p log p`.
pub fn shannon_entropy(p: &ProbMeasure) -> f64 {
    shannon_of_weights(p.weights())
}

pub(crate) fn shannon_of_weights(w: &[f64]) -> f64 {
    let s: f64 = w.iter().map(|&x| -xlogy(x, x)).sum();
    s.max(0.0)
}

/// `S_P(ω) = −log p(ω)`, `+∞` off the support.
pub fn entropy_function(p: &ProbMeasure) -> RandomVar {
    let values = p
        .weights()
        .iter()
        .map(|&w| if w > 0.0 { -w.ln() } else { f64::INFINITY })
        .collect();
    RandomVar::with_sentinels(p.space().clone(), values)
}

/// `log |supp P|`.
pub fn hartley_entropy(p: &ProbMeasure) -> f64 {
    (p.support().len() as f64).ln()
}

/// `S_α(P) = (1−α)⁻¹ log Σ_{supp} p^α`; `α = 1` gives `S`, `α = 0` gives `S_H`.
pub fn renyi_entropy(p: &ProbMeasure, alpha: f64) -> f64 {
    if alpha == 1.0 {
        return shannon_entropy(p);
    }
    if alpha == 0.0 {
        return hartley_entropy(p);
    }
    let logs: Vec<f64> = p
        .weights()
        .iter()
        .filter(|&&w| w > 0.0)
        .map(|&w| alpha * w.ln())
        .collect();
    log_sum_exp(&logs) / (1.0 - alpha)
}

/// `Ŝ_α(P) = log Σ p^{1−α}` for faithful `P`.
pub fn renyi_cgf(p: &ProbMeasure, alpha: f64) -> Result<f64> {
    if let Some(i) = p.weights().iter().position(|&w| w == 0.0) {
        return Err(Error::FaithfulnessError(i));
    }
    if alpha == 0.0 {
        return Ok(0.0);
    }
    let logs: Vec<f64> = p
        .weights()
        .iter()
        .map(|&w| (1.0 - alpha) * w.ln())
        .collect();
    Ok(log_sum_exp(&logs))
}

/// `(S(P), S(P_l), Σ_ω P_l(ω) S(P_{r|l}^ω))` for a measure on a product space.
pub fn conditional_decomposition(p: &ProbMeasure) -> Result<(f64, f64, f64)> {
    let (left, _) = marginals(p)?;
    let (ls, rs) = p.space().factors().ok_or(Error::NotAProductSpace)?;
    let nr = rs.len();
    let mut cond = 0.0;
    for i in 0..ls.len() {
        let pl = left.weight(i);
        if pl == 0.0 {
            continue;
        }
        let row: Vec<f64> = p.weights()[i * nr..(i + 1) * nr]
            .iter()
            .map(|&w| w / pl)
            .collect();
        cond += pl * shannon_of_weights(&row);
    }
    Ok((shannon_entropy(p), shannon_entropy(&left), cond))
}
