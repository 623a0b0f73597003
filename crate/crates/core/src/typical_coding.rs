//! Typical sets, covering exponents and optimal block compression at finite `N`.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::entropies::shannon_entropy;
use crate::error::{Error, Result};
use crate::math::{ceil_tolerant, ln_multinomial, multinomial_u128, LogSum};
use crate::measures::ProbMeasure;
use crate::types::{sequence_log_probability, visit_types};

/// Exact description of `T_{N,ε}`.
#[derive(Debug, Clone, PartialEq)]
pub struct TypicalSetReport {
    pub n: u32,
    pub eps: f64,
    /// `P_N(T_{N,ε})`.
    pub probability: f64,
    /// `log |T_{N,ε}|` (`−∞` when empty).
    pub log_cardinality: f64,
    /// `|T_{N,ε}|` when it fits in a `u128`.
    pub cardinality: Option<u128>,
    /// `log P_N(T) + N(S − ε)`.
    pub log_lower: f64,
    /// `N(S + ε)`.
    pub log_upper: f64,
    pub sandwich_holds: bool,
}

/// `c_N(γ)` together with its normalized logarithm.
#[derive(Debug, Clone, PartialEq)]
pub struct CoveringReport {
    pub n: u32,
    pub gamma: f64,
    /// `c_N(γ)` as a float (may be rounded when large).
    pub c_n: f64,
    /// `c_N(γ)` when it fits in a `u128`.
    pub c_n_exact: Option<u128>,
    pub log_c_n: f64,
    /// `(1/N) log c_N(γ)`.
    pub normalized: f64,
    pub entropy_target: f64,
}

fn faithful(p: &ProbMeasure) -> Result<()> {
    match p.weights().iter().position(|&w| w == 0.0) {
        Some(i) => Err(Error::FaithfulnessError(i)),
        None => Ok(()),
    }
}

/// Weights restricted to the support.
fn support_weights(p: &ProbMeasure) -> Vec<f64> {
    p.weights().iter().copied().filter(|&w| w > 0.0).collect()
}

/// `P_N(T_{N,ε})` and `|T_{N,ε}|`, where a type is typical iff
/// `|−(1/N) Σ n_k log p_k − S(P)| < ε`.
pub fn typical_set_bounds(p: &ProbMeasure, n: u32, eps: f64, cap: u64) -> Result<TypicalSetReport> {
    faithful(p)?;
    if n == 0 || !(eps > 0.0) {
        return Err(Error::InvalidArgument("N and eps must be positive".into()));
    }
    let s = shannon_entropy(p);
    let w = p.weights();
    let nf = n as f64;
    let mut prob = LogSum::new();
    let mut card = LogSum::new();
    let mut exact: Option<u128> = Some(0);
    visit_types(w.len(), n, cap, |c| {
        let seq = sequence_log_probability(w, c);
        if (-seq / nf - s).abs() < eps {
            let lm = ln_multinomial(c);
            prob.add(lm + seq);
            card.add(lm);
            exact = exact.and_then(|e| e.checked_add(multinomial_u128(c)?));
        }
    })?;
    let log_p = prob.value().min(0.0);
    let log_card = card.value();
    let log_lower = log_p + nf * (s - eps);
    let log_upper = nf * (s + eps);
    let sandwich_holds =
        log_card == f64::NEG_INFINITY || (log_lower < log_card && log_card < log_upper);
    Ok(TypicalSetReport {
        n,
        eps,
        probability: log_p.exp(),
        log_cardinality: log_card,
        cardinality: exact,
        log_lower,
        log_upper,
        sandwich_holds,
    })
}

/// `c_N(γ)`: the least number of sequences whose `P_N`-mass reaches `γ`,
/// counted greedily in decreasing order of sequence probability.
pub fn covering_exponent(p: &ProbMeasure, n: u32, gamma: f64, cap: u64) -> Result<CoveringReport> {
    if n == 0 {
        return Err(Error::InvalidArgument("N must be positive".into()));
    }
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::InvalidArgument("gamma must lie in (0, 1)".into()));
    }
    let w = support_weights(p);
    // (log sequence probability, log multiplicity, exact multiplicity)
    let mut levels: Vec<(f64, f64, Option<u128>)> = Vec::new();
    visit_types(w.len(), n, cap, |c| {
        levels.push((sequence_log_probability(&w, c), ln_multinomial(c), multinomial_u128(c)));
    })?;
    levels.sort_by(|a, b| b.0.total_cmp(&a.0));

    let mut mass = 0.0;
    let mut count = LogSum::new();
    let mut exact: Option<u128> = Some(0);
    for &(lp, lm, m) in &levels {
        let remaining = gamma - mass;
        let level_mass = (lp + lm).exp();
        if level_mass >= remaining {
            let needed = ceil_tolerant((remaining.ln() - lp).exp()).max(1.0);
            let needed = match m {
                Some(m) => needed.min(m as f64),
                None => needed,
            };
            count.add(needed.ln());
            exact = exact.and_then(|e| {
                if needed < 1e38 {
                    e.checked_add(needed as u128)
                } else {
                    None
                }
            });
            break;
        }
        mass += level_mass;
        count.add(lm);
        exact = exact.and_then(|e| e.checked_add(m?));
    }
    let log_c = count.value();
    Ok(CoveringReport {
        n,
        gamma,
        c_n: match exact {
            Some(e) => e as f64,
            None => log_c.exp(),
        },
        c_n_exact: exact,
        log_c_n: log_c,
        normalized: log_c / n as f64,
        entropy_target: shannon_entropy(p),
    })
}

/// `M_N = ⌊log₂ c_N(1 − ε)⌋`.
pub fn source_coding_optimum(p: &ProbMeasure, n: u32, eps: f64, cap: u64) -> Result<u64> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidArgument("eps must lie in (0, 1)".into()));
    }
    let r = covering_exponent(p, n, 1.0 - eps, cap)?;
    Ok(match r.c_n_exact {
        Some(c) => (127 - c.leading_zeros()) as u64,
        None => (r.log_c_n / core::f64::consts::LN_2 + 1e-9).floor() as u64,
    })
}
