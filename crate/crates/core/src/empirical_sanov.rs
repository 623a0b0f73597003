//! Sampling, empirical measures and Sanov-type probabilities of sets of
//! empirical measures, computed exactly by the method of types.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
#[allow(unused_imports)]
use num_traits::Float;

use crate::divergences::kl_weights;
use crate::error::{Error, Result};
use crate::ldp::CgfModel;
use crate::math::LogSum;
use crate::measures::{same_space, ProbMeasure, RandomVar, Space};
use crate::rng::{stream_rng, Sampler};
use crate::simplex;
use crate::types::{type_class_log_probability, visit_types};

/// Slack used when testing membership of boundary points.
pub const MEMBERSHIP_TOLERANCE: f64 = 1e-12;

/// `N` iid draws from `p` on stream 0 of `seed`.
pub fn sample_iid(p: &ProbMeasure, n: usize, seed: u64) -> Vec<usize> {
    sample_iid_stream(p, n, seed, 0)
}

/// `N` iid draws from `p` on the given substream of `seed`.
pub fn sample_iid_stream(p: &ProbMeasure, n: usize, seed: u64, stream: u64) -> Vec<usize> {
    let sampler = Sampler::new(p);
    let mut rng = stream_rng(seed, stream);
    (0..n).map(|_| sampler.draw(&mut rng)).collect()
}

/// Occurrence counts of each outcome.
pub fn empirical_counts(l: usize, sample: &[usize]) -> Result<Vec<u32>> {
    let mut c = vec![0u32; l];
    for &s in sample {
        if s >= l {
            return Err(Error::InvalidArgument("sample index out of range".into()));
        }
        c[s] += 1;
    }
    Ok(c)
}

/// `δ_ω = (1/N) Σ δ_{ω_k}`.
pub fn empirical_measure(space: &Space, sample: &[usize]) -> Result<ProbMeasure> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    let c = empirical_counts(space.len(), sample)?;
    let n = sample.len() as f64;
    ProbMeasure::new(space.clone(), c.iter().map(|&k| k as f64 / n).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    AtLeast,
    AtMost,
}

pub type Predicate = Arc<dyn Fn(&[f64]) -> bool + Send + Sync>;

/// A set `Γ` of probability vectors.
#[derive(Clone)]
pub enum ConstraintSet {
    /// `{Q : d_V(Q, center) ≤ radius}`, or `<` when open.
    Ball {
        center: ProbMeasure,
        radius: f64,
        closed: bool,
    },
    /// `{Q : ∫X dQ ≥ θ}` (or `≤`), strict when open.
    Halfspace {
        x: RandomVar,
        threshold: f64,
        direction: Direction,
        closed: bool,
    },
    Predicate(Predicate),
}

impl fmt::Debug for ConstraintSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstraintSet::Ball { center, radius, closed } => f
                .debug_struct("Ball")
                .field("center", center)
                .field("radius", radius)
                .field("closed", closed)
                .finish(),
            ConstraintSet::Halfspace { x, threshold, direction, closed } => f
                .debug_struct("Halfspace")
                .field("x", x)
                .field("threshold", threshold)
                .field("direction", direction)
                .field("closed", closed)
                .finish(),
            ConstraintSet::Predicate(_) => f.write_str("Predicate(..)"),
        }
    }
}

impl ConstraintSet {
    /// The whole simplex.
    pub fn whole() -> Self {
        ConstraintSet::Predicate(Arc::new(|_| true))
    }

    pub fn predicate<F: Fn(&[f64]) -> bool + Send + Sync + 'static>(f: F) -> Self {
        ConstraintSet::Predicate(Arc::new(f))
    }

    pub fn ball(center: ProbMeasure, radius: f64, closed: bool) -> Self {
        ConstraintSet::Ball { center, radius, closed }
    }

    pub fn halfspace(x: RandomVar, threshold: f64, direction: Direction, closed: bool) -> Self {
        ConstraintSet::Halfspace { x, threshold, direction, closed }
    }

    pub fn contains(&self, q: &[f64]) -> bool {
        let tol = MEMBERSHIP_TOLERANCE;
        match self {
            ConstraintSet::Ball { center, radius, closed } => {
                let d: f64 = q
                    .iter()
                    .zip(center.weights())
                    .map(|(a, b)| (a - b).abs())
                    .sum();
                if *closed {
                    d <= radius + tol
                } else {
                    d < radius - tol
                }
            }
            ConstraintSet::Halfspace { x, threshold, direction, closed } => {
                let m: f64 = q.iter().zip(x.values()).map(|(a, b)| a * b).sum();
                let t = tol * threshold.abs().max(1.0);
                let signed = match direction {
                    Direction::AtLeast => m - threshold,
                    Direction::AtMost => threshold - m,
                };
                if *closed {
                    signed >= -t
                } else {
                    signed > t
                }
            }
            ConstraintSet::Predicate(f) => f(q),
        }
    }

    /// Same set with the boundary toggled; `None` for predicates.
    pub fn with_closed(&self, closed: bool) -> Option<Self> {
        match self {
            ConstraintSet::Ball { center, radius, .. } => Some(ConstraintSet::Ball {
                center: center.clone(),
                radius: *radius,
                closed,
            }),
            ConstraintSet::Halfspace { x, threshold, direction, .. } => Some(ConstraintSet::Halfspace {
                x: x.clone(),
                threshold: *threshold,
                direction: *direction,
                closed,
            }),
            ConstraintSet::Predicate(_) => None,
        }
    }

    fn check_len(&self, l: usize) -> Result<()> {
        let got = match self {
            ConstraintSet::Ball { center, .. } => center.len(),
            ConstraintSet::Halfspace { x, .. } => x.values().len(),
            ConstraintSet::Predicate(_) => l,
        };
        if got == l {
            Ok(())
        } else {
            Err(Error::LengthMismatch { expected: l, got })
        }
    }
}

fn faithful(p: &ProbMeasure) -> Result<()> {
    match p.weights().iter().position(|&w| w == 0.0) {
        Some(i) => Err(Error::FaithfulnessError(i)),
        None => Ok(()),
    }
}

/// Exact `P_N{δ_ω ∈ Γ}` and `(1/N) log P_N{δ_ω ∈ Γ}`.
pub fn sanov_probability(p: &ProbMeasure, gamma: &ConstraintSet, n: u32, cap: u64) -> Result<(f64, f64)> {
    faithful(p)?;
    gamma.check_len(p.len())?;
    if n == 0 {
        return Err(Error::InvalidArgument("N must be positive".into()));
    }
    let nf = n as f64;
    let mut acc = LogSum::new();
    let mut freq = vec![0.0; p.len()];
    visit_types(p.len(), n, cap, |c| {
        for (f, &k) in freq.iter_mut().zip(c) {
            *f = k as f64 / nf;
        }
        if gamma.contains(&freq) {
            acc.add(type_class_log_probability(p.weights(), c));
        }
    })?;
    let lp = acc.value().min(0.0);
    Ok((lp.exp(), lp / nf))
}

/// How a Sanov rate was obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RateMethod {
    /// Legendre transform of the cumulant generating function of `X`.
    Contraction,
    /// Simplex grid of the given resolution plus local refinement.
    Grid { resolution: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SanovRate {
    pub value: f64,
    pub method: RateMethod,
}

/// `inf_{Q∈Γ} S(Q|P)`.
pub fn sanov_rate(p: &ProbMeasure, gamma: &ConstraintSet, resolution: f64, cap: u64) -> Result<SanovRate> {
    faithful(p)?;
    gamma.check_len(p.len())?;
    if let ConstraintSet::Halfspace { x, threshold, direction, closed } = gamma {
        if !same_space(x.space(), p.space()) {
            return Err(Error::SpaceMismatch);
        }
        return Ok(SanovRate {
            value: halfspace_rate(p, x, *threshold, *direction, *closed)?,
            method: RateMethod::Contraction,
        });
    }
    let pw = p.weights();
    let m = simplex::minimize(p.len(), resolution, cap, |r| kl_weights(r, pw), |r| gamma.contains(r))?;
    Ok(SanovRate {
        value: m.value,
        method: RateMethod::Grid {
            resolution: m.resolution,
        },
    })
}

/// `inf_{θ ∈ S} I(θ)` for the half-line `S` described by the constraint.
fn halfspace_rate(p: &ProbMeasure, x: &RandomVar, threshold: f64, direction: Direction, closed: bool) -> Result<f64> {
    let model = CgfModel::new(p, x)?;
    // reflect so that the constraint reads ∫X ≥ θ
    let (model, theta) = match direction {
        Direction::AtLeast => (model, threshold),
        Direction::AtMost => {
            let neg = RandomVar::new(x.space().clone(), x.values().iter().map(|v| -v).collect())?;
            (CgfModel::new(p, &neg)?, -threshold)
        }
    };
    if theta <= model.mean() {
        return Ok(0.0);
    }
    let snap = 1e-12 * (model.max() - model.min()).max(1.0);
    if !closed && theta >= model.max() - snap {
        return Ok(f64::INFINITY);
    }
    Ok(model.rate(theta))
}

/// `inf{S(Q|P) : ∫X dQ ≥ θ}` (or `≤ θ`) computed on the primal side: cyclic
/// golden-section descent along directions spanning `{∫X dQ = θ}` inside the
/// simplex, started from a mixture of the extreme points of `X`.
pub fn halfspace_rate_primal(p: &ProbMeasure, x: &RandomVar, threshold: f64, direction: Direction) -> Result<f64> {
    faithful(p)?;
    if !same_space(x.space(), p.space()) {
        return Err(Error::SpaceMismatch);
    }
    let sign = match direction {
        Direction::AtLeast => 1.0,
        Direction::AtMost => -1.0,
    };
    let xs: Vec<f64> = x.values().iter().map(|v| sign * v).collect();
    let theta = sign * threshold;
    let pw = p.weights();
    let mean: f64 = pw.iter().zip(&xs).map(|(a, b)| a * b).sum();
    if theta <= mean {
        return Ok(0.0);
    }
    let (mut lo_i, mut hi_i) = (0, 0);
    for (k, &v) in xs.iter().enumerate() {
        if v < xs[lo_i] {
            lo_i = k;
        }
        if v > xs[hi_i] {
            hi_i = k;
        }
    }
    let (m, big) = (xs[lo_i], xs[hi_i]);
    if theta > big {
        return Ok(f64::INFINITY);
    }
    if theta == big {
        let top: f64 = pw.iter().zip(&xs).filter(|(_, &v)| v == big).map(|(w, _)| w).sum();
        return Ok(-top.ln());
    }
    let lambda = (theta - m) / (big - m);
    let mut q = vec![0.0; pw.len()];
    q[hi_i] = lambda;
    q[lo_i] = 1.0 - lambda;
    // direction e_j − a e_hi − b e_lo keeps mass and mean fixed
    let dirs: Vec<(usize, f64, f64)> = (0..pw.len())
        .filter(|&j| j != lo_i && j != hi_i)
        .map(|j| {
            let a = (xs[j] - m) / (big - m);
            (j, a, 1.0 - a)
        })
        .collect();
    let mut value = kl_weights(&q, pw);
    for _ in 0..100_000 {
        let before = value;
        for &(j, a, b) in &dirs {
            let mut t_hi = f64::INFINITY;
            if a > 0.0 {
                t_hi = t_hi.min(q[hi_i] / a);
            }
            if b > 0.0 {
                t_hi = t_hi.min(q[lo_i] / b);
            }
            let t_lo = -q[j];
            let base = q.clone();
            let at = |t: f64| {
                let mut r = base.clone();
                r[j] += t;
                r[hi_i] = (r[hi_i] - a * t).max(0.0);
                r[lo_i] = (r[lo_i] - b * t).max(0.0);
                kl_weights(&r, pw)
            };
            let (l, h) = crate::math::golden_section(&at, t_lo, t_hi, 1e-15 * (t_hi - t_lo).max(1e-300));
            let t = 0.5 * (l + h);
            let v = at(t);
            if v < value {
                value = v;
                q[j] += t;
                q[hi_i] = (q[hi_i] - a * t).max(0.0);
                q[lo_i] = (q[lo_i] - b * t).max(0.0);
            }
        }
        if !(before - value > 1e-17) {
            break;
        }
    }
    Ok(value)
}

/// Whether `inf` over the interior equals `inf` over the closure within `tol`.
/// Only answered for balls and half-spaces.
pub fn is_sanov_nice(p: &ProbMeasure, gamma: &ConstraintSet, resolution: f64, cap: u64, tol: f64) -> Result<Option<bool>> {
    let (open, closed) = match (gamma.with_closed(false), gamma.with_closed(true)) {
        (Some(o), Some(c)) => (o, c),
        _ => return Ok(None),
    };
    let a = sanov_rate(p, &open, resolution, cap)?.value;
    let b = sanov_rate(p, &closed, resolution, cap)?.value;
    Ok(Some(a == b || (a - b).abs() <= tol))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SanovRow {
    pub n: u32,
    pub probability: f64,
    /// `(1/N) log P_N{δ ∈ Γ}`.
    pub exponent: f64,
    /// `|exponent + inf_Γ S(Q|P)|`.
    pub gap: f64,
    pub envelope: f64,
    pub within: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SanovExperiment {
    /// `−inf_Γ S(Q|P)`.
    pub limit: f64,
    pub rate: SanovRate,
    pub rows: Vec<SanovRow>,
    pub all_within: bool,
}

/// Default envelope `L log(N+1)/N + 0.02`.
pub fn default_envelope(l: usize, n: u32) -> f64 {
    l as f64 * ((n + 1) as f64).ln() / n as f64 + 0.02
}

pub fn sanov_experiment(
    p: &ProbMeasure,
    gamma: &ConstraintSet,
    n_grid: &[u32],
    resolution: f64,
    cap: u64,
) -> Result<SanovExperiment> {
    let rate = sanov_rate(p, gamma, resolution, cap)?;
    let limit = -rate.value;
    let mut rows = Vec::with_capacity(n_grid.len());
    for &n in n_grid {
        let (probability, exponent) = sanov_probability(p, gamma, n, cap)?;
        let gap = if exponent == limit { 0.0 } else { (exponent - limit).abs() };
        let envelope = default_envelope(p.len(), n);
        rows.push(SanovRow {
            n,
            probability,
            exponent,
            gap,
            envelope,
            within: gap <= envelope,
        });
    }
    Ok(SanovExperiment {
        limit,
        all_within: rows.iter().all(|r| r.within),
        rate,
        rows,
    })
}
