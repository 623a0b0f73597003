//! Entropy production under an involution `Θ` of the outcome space and the
//! fluctuation relation `Q(−s) = e^{−s} Q(s)`.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::divergences::{kl_weights, renyi_cgf_weights};
use crate::error::{Error, Result};
use crate::measures::{ProbMeasure, RandomVar};

/// Values of the entropy production closer than this are one atom.
pub const MERGE_TOLERANCE: f64 = 1e-9;

/// A permutation `Θ` of the outcome indices with `Θ∘Θ = id`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Involution {
    perm: Vec<usize>,
}

impl Involution {
    pub fn new(perm: Vec<usize>) -> Result<Self> {
        let n = perm.len();
        for (i, &j) in perm.iter().enumerate() {
            if j >= n || perm[j] != i {
                return Err(Error::NotAnInvolution(i));
            }
        }
        Ok(Involution { perm })
    }

    pub fn identity(n: usize) -> Self {
        Involution {
            perm: (0..n).collect(),
        }
    }

    /// `i ↔ n−1−i`.
    pub fn reversal(n: usize) -> Self {
        Involution {
            perm: (0..n).rev().collect(),
        }
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.perm[i]
    }

    /// `P_Θ = P ∘ Θ`.
    pub fn pull_back(&self, p: &ProbMeasure) -> Result<ProbMeasure> {
        self.check_len(p)?;
        let w = self.perm.iter().map(|&j| p.weight(j)).collect();
        ProbMeasure::new(p.space().clone(), w)
    }

    fn check_len(&self, p: &ProbMeasure) -> Result<()> {
        if self.perm.len() == p.len() {
            Ok(())
        } else {
            Err(Error::LengthMismatch {
                expected: p.len(),
                got: self.perm.len(),
            })
        }
    }
}

fn check_support(p: &ProbMeasure, theta: &Involution) -> Result<()> {
    theta.check_len(p)?;
    for k in 0..p.len() {
        if (p.weight(k) > 0.0) != (p.weight(theta.apply(k)) > 0.0) {
            return Err(Error::SupportNotInvariant);
        }
    }
    Ok(())
}

/// `S_{P|P_Θ}(ω) = log p(ω) − log p(Θω)`, zero off the support.
pub fn entropy_production(p: &ProbMeasure, theta: &Involution) -> Result<RandomVar> {
    check_support(p, theta)?;
    let values = (0..p.len())
        .map(|k| {
            let (a, b) = (p.weight(k), p.weight(theta.apply(k)));
            if a > 0.0 {
                a.ln() - b.ln()
            } else {
                0.0
            }
        })
        .collect();
    RandomVar::new(p.space().clone(), values)
}

/// `S(P|P_Θ)`.
pub fn mean_entropy_production(p: &ProbMeasure, theta: &Involution) -> Result<f64> {
    let pt = theta.pull_back(p)?;
    Ok(kl_weights(p.weights(), pt.weights()))
}

/// Law of `S_{P|P_Θ}` under `P`, as `(s, Q(s))` sorted by `s`.
#[derive(Debug, Clone, PartialEq)]
pub struct EpDistribution {
    pub atoms: Vec<(f64, f64)>,
}

impl EpDistribution {
    /// `Q(s)`, matching atoms within [`MERGE_TOLERANCE`].
    pub fn mass_at(&self, s: f64) -> f64 {
        self.atoms
            .iter()
            .filter(|(v, _)| (v - s).abs() <= MERGE_TOLERANCE)
            .map(|&(_, m)| m)
            .sum()
    }
}

pub fn ep_distribution(p: &ProbMeasure, theta: &Involution) -> Result<EpDistribution> {
    let x = entropy_production(p, theta)?;
    let mut pts: Vec<(f64, f64)> = p
        .support()
        .into_iter()
        .map(|k| (x.value(k), p.weight(k)))
        .collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut atoms: Vec<(f64, f64)> = Vec::new();
    let mut anchor = f64::NEG_INFINITY;
    for (s, m) in pts {
        match atoms.last_mut() {
            Some(last) if s - anchor <= MERGE_TOLERANCE => last.1 += m,
            _ => {
                anchor = s;
                atoms.push((s, m));
            }
        }
    }
    Ok(EpDistribution { atoms })
}

/// `max_s |Q(−s) − e^{−s} Q(s)|`.
pub fn fluctuation_check(dist: &EpDistribution) -> f64 {
    dist.atoms
        .iter()
        .map(|&(s, m)| (dist.mass_at(-s) - (-s).exp() * m).abs())
        .fold(0.0, f64::max)
}

/// `max_α |Ŝ_α(P|P_Θ) − Ŝ_{1−α}(P|P_Θ)|` over the grid.
pub fn renyi_symmetry_check(p: &ProbMeasure, theta: &Involution, alphas: &[f64]) -> Result<f64> {
    if let Some(i) = p.weights().iter().position(|&w| w == 0.0) {
        return Err(Error::FaithfulnessError(i));
    }
    let pt = theta.pull_back(p)?;
    let (a, b) = (p.weights(), pt.weights());
    Ok(alphas
        .iter()
        .map(|&al| (renyi_cgf_weights(a, b, al) - renyi_cgf_weights(a, b, 1.0 - al)).abs())
        .fold(0.0, f64::max))
}
