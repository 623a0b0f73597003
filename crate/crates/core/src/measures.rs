//! Finite outcome spaces, measures, random variables and stochastic maps.
//!
//! All objects are immutable after construction. Outcome spaces are shared
//! through [`Space`] handles so that measures on the same space can be
//! compared cheaply. Supports are combinatorial: an outcome belongs to the
//! support iff its weight is strictly positive.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Default cap on the number of atoms that may be materialized.
pub const DEFAULT_ENUMERATION_CAP: u64 = 10_000_000;

/// Tolerance used when validating that weights sum to one.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-12;

/// Shared handle to an outcome space.
pub type Space = Arc<OutcomeSpace>;

/// A finite labeled set `ω_1 … ω_L`, optionally declared as a two-fold product.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeSpace {
    labels: Vec<String>,
    factors: Option<(Space, Space)>,
}

impl OutcomeSpace {
    pub fn new<S: Into<String>>(labels: Vec<S>) -> Result<Space> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::EmptySpace);
        }
        let mut sorted: Vec<&String> = labels.iter().collect();
        sorted.sort();
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateLabel(w[0].clone()));
            }
        }
        Ok(Arc::new(OutcomeSpace {
            labels,
            factors: None,
        }))
    }

    /// Space with labels `"0"`, `"1"`, …, `"n-1"`.
    ///
    /// Panics if `n == 0`.
    pub fn indexed(n: usize) -> Space {
        assert!(n > 0, "outcome space must be non-empty");
        Arc::new(OutcomeSpace {
            labels: (0..n).map(|i| i.to_string()).collect(),
            factors: None,
        })
    }

    /// The product space `left × right`, enumerated with the left index most
    /// significant. Labels are `"(l,r)"`.
    pub fn product(left: &Space, right: &Space) -> Space {
        let mut labels = Vec::with_capacity(left.len() * right.len());
        for l in &left.labels {
            for r in &right.labels {
                labels.push(format!("({l},{r})"));
            }
        }
        Arc::new(OutcomeSpace {
            labels,
            factors: Some((left.clone(), right.clone())),
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn factors(&self) -> Option<(&Space, &Space)> {
        self.factors.as_ref().map(|(l, r)| (l, r))
    }
}

/// Identity of spaces: same handle, or equal labels and product structure.
pub fn same_space(a: &Space, b: &Space) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

fn ensure_same(a: &Space, b: &Space) -> Result<()> {
    if same_space(a, b) {
        Ok(())
    } else {
        Err(Error::SpaceMismatch)
    }
}

/// A non-negative measure on a finite space.
#[derive(Debug, Clone, PartialEq)]
pub struct Measure {
    space: Space,
    weights: Vec<f64>,
}

impl Measure {
    pub fn new(space: Space, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != space.len() {
            return Err(Error::LengthMismatch {
                expected: space.len(),
                got: weights.len(),
            });
        }
        for (index, &value) in weights.iter().enumerate() {
            if !value.is_finite() || value < 0.0 {
                return Err(Error::InvalidWeight { index, value });
            }
        }
        Ok(Measure { space, weights })
    }

    /// Measure on an indexed space.
    pub fn from_weights(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::EmptySpace);
        }
        Self::new(OutcomeSpace::indexed(weights.len()), weights)
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn support(&self) -> Vec<usize> {
        support(self)
    }

    pub fn is_faithful(&self) -> bool {
        self.weights.iter().all(|&w| w > 0.0)
    }

    /// `∫ f dμ`.
    pub fn integrate(&self, f: &RandomVar) -> Result<f64> {
        ensure_same(&self.space, &f.space)?;
        Ok(self
            .weights
            .iter()
            .zip(&f.values)
            .filter(|(w, _)| **w > 0.0)
            .map(|(w, v)| w * v)
            .sum())
    }

    /// `μ ≪ ρ`: every outcome charged by `μ` is charged by `ρ`.
    pub fn is_absolutely_continuous(&self, rho: &Measure) -> bool {
        self.weights
            .iter()
            .zip(&rho.weights)
            .all(|(&m, &r)| m == 0.0 || r > 0.0)
    }

    /// `μ ⊥ ρ`: disjoint supports.
    pub fn is_singular(&self, rho: &Measure) -> bool {
        self.weights
            .iter()
            .zip(&rho.weights)
            .all(|(&m, &r)| m == 0.0 || r == 0.0)
    }
}

/// A probability measure: a [`Measure`] of total mass one.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbMeasure(Measure);

impl ProbMeasure {
    /// Validates `|Σ w − 1| ≤ 1e-12`, then renormalizes.
    pub fn new(space: Space, weights: Vec<f64>) -> Result<Self> {
        let m = Measure::new(space, weights)?;
        let sum = m.total();
        if (sum - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(Error::NotNormalized { sum });
        }
        Ok(Self::renormalized(m, sum))
    }

    /// Probability measure on an indexed space.
    pub fn from_weights(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::EmptySpace);
        }
        Self::new(OutcomeSpace::indexed(weights.len()), weights)
    }

    /// Normalizes arbitrary non-negative weights with positive total.
    pub fn from_unnormalized(space: Space, weights: Vec<f64>) -> Result<Self> {
        let m = Measure::new(space, weights)?;
        let sum = m.total();
        if sum <= 0.0 {
            return Err(Error::NotNormalized { sum });
        }
        Ok(Self::renormalized(m, sum))
    }

    fn renormalized(mut m: Measure, sum: f64) -> Self {
        if sum != 1.0 {
            for w in m.weights.iter_mut() {
                *w /= sum;
            }
            // push the residual rounding error onto the largest atom
            let (imax, _) = m
                .weights
                .iter()
                .enumerate()
                .fold((0, f64::NEG_INFINITY), |acc, (i, &w)| {
                    if w > acc.1 {
                        (i, w)
                    } else {
                        acc
                    }
                });
            let rest: f64 = m
                .weights
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != imax)
                .map(|(_, w)| w)
                .sum();
            m.weights[imax] = (1.0 - rest).max(0.0);
        }
        ProbMeasure(m)
    }

    /// The chaotic (uniform) measure.
    pub fn uniform(space: Space) -> Self {
        let n = space.len();
        ProbMeasure(Measure {
            space,
            weights: vec![1.0 / n as f64; n],
        })
    }

    /// Point mass at `index`.
    pub fn pure(space: Space, index: usize) -> Self {
        let mut weights = vec![0.0; space.len()];
        weights[index] = 1.0;
        ProbMeasure(Measure { space, weights })
    }

    pub fn as_measure(&self) -> &Measure {
        &self.0
    }

    pub fn into_measure(self) -> Measure {
        self.0
    }

    pub fn space(&self) -> &Space {
        &self.0.space
    }

    pub fn weights(&self) -> &[f64] {
        &self.0.weights
    }

    pub fn weight(&self, index: usize) -> f64 {
        self.0.weights[index]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn support(&self) -> Vec<usize> {
        support(&self.0)
    }

    pub fn is_faithful(&self) -> bool {
        self.0.is_faithful()
    }

    pub fn is_pure(&self) -> bool {
        self.support().len() == 1
    }

    /// `E(X)`.
    pub fn expectation(&self, x: &RandomVar) -> Result<f64> {
        self.0.integrate(x)
    }

    /// Convex combination `λ self + (1 − λ) other`.
    pub fn mix(&self, other: &ProbMeasure, lambda: f64) -> Result<ProbMeasure> {
        ensure_same(self.space(), other.space())?;
        let w = self
            .weights()
            .iter()
            .zip(other.weights())
            .map(|(a, b)| lambda * a + (1.0 - lambda) * b)
            .collect();
        ProbMeasure::from_unnormalized(self.space().clone(), w)
    }
}

/// A real function on a finite space.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomVar {
    space: Space,
    values: Vec<f64>,
}

impl RandomVar {
    pub fn new(space: Space, values: Vec<f64>) -> Result<Self> {
        if values.len() != space.len() {
            return Err(Error::LengthMismatch {
                expected: space.len(),
                got: values.len(),
            });
        }
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| v.is_nan()) {
            return Err(Error::NonFinite { index, value });
        }
        Ok(RandomVar { space, values })
    }

    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySpace);
        }
        Self::new(OutcomeSpace::indexed(values.len()), values)
    }

    /// Random variable whose values may include `±∞` sentinels.
    pub(crate) fn with_sentinels(space: Space, values: Vec<f64>) -> Self {
        RandomVar { space, values }
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, index: usize) -> f64 {
        self.values[index]
    }

    /// Indicator of a set of outcomes.
    pub fn indicator(space: Space, set: &[usize]) -> Self {
        let mut values = vec![0.0; space.len()];
        for &i in set {
            values[i] = 1.0;
        }
        RandomVar { space, values }
    }
}

/// `{k : weight_k > 0}`.
pub fn support(m: &Measure) -> Vec<usize> {
    m.weights
        .iter()
        .enumerate()
        .filter(|(_, &w)| w > 0.0)
        .map(|(i, _)| i)
        .collect()
}

/// `Δ_{p|q}`: `p/q` on `supp p`, zero elsewhere.
pub fn radon_nikodym(p: &Measure, q: &Measure) -> Result<RandomVar> {
    ensure_same(&p.space, &q.space)?;
    let mut values = Vec::with_capacity(p.len());
    for (i, (&pw, &qw)) in p.weights.iter().zip(&q.weights).enumerate() {
        if pw > 0.0 {
            if qw == 0.0 {
                return Err(Error::AbsContViolation(i));
            }
            values.push(pw / qw);
        } else {
            values.push(0.0);
        }
    }
    Ok(RandomVar {
        space: p.space.clone(),
        values,
    })
}

/// Splits `μ` into a part absolutely continuous w.r.t. `ρ` and a singular part.
pub fn lebesgue_decompose(m: &Measure, rho: &Measure) -> Result<(Measure, Measure)> {
    ensure_same(&m.space, &rho.space)?;
    let mut ac = vec![0.0; m.len()];
    let mut sing = vec![0.0; m.len()];
    for (i, (&w, &r)) in m.weights.iter().zip(&rho.weights).enumerate() {
        if r > 0.0 {
            ac[i] = w;
        } else {
            sing[i] = w;
        }
    }
    Ok((
        Measure {
            space: m.space.clone(),
            weights: ac,
        },
        Measure {
            space: m.space.clone(),
            weights: sing,
        },
    ))
}

/// `d_V(P, Q) = Σ |P(ω) − Q(ω)|`.
pub fn variational_distance(p: &ProbMeasure, q: &ProbMeasure) -> Result<f64> {
    ensure_same(p.space(), q.space())?;
    Ok(p
        .weights()
        .iter()
        .zip(q.weights())
        .map(|(a, b)| (a - b).abs())
        .sum())
}

/// Left and right marginals of a measure on a product space.
pub fn marginals(p: &ProbMeasure) -> Result<(ProbMeasure, ProbMeasure)> {
    let (ls, rs) = p.space().factors().ok_or(Error::NotAProductSpace)?;
    let (nl, nr) = (ls.len(), rs.len());
    let mut left = vec![0.0; nl];
    let mut right = vec![0.0; nr];
    for i in 0..nl {
        for j in 0..nr {
            let w = p.weights()[i * nr + j];
            left[i] += w;
            right[j] += w;
        }
    }
    Ok((
        ProbMeasure::from_unnormalized(ls.clone(), left)?,
        ProbMeasure::from_unnormalized(rs.clone(), right)?,
    ))
}

/// `p ⊗ q` on the product space.
pub fn product(p: &ProbMeasure, q: &ProbMeasure) -> ProbMeasure {
    let space = OutcomeSpace::product(p.space(), q.space());
    let mut weights = Vec::with_capacity(p.len() * q.len());
    for &a in p.weights() {
        for &b in q.weights() {
            weights.push(a * b);
        }
    }
    ProbMeasure(Measure { space, weights })
}

/// Lexicographic indexing of `Ω^N` (first coordinate most significant).
#[derive(Debug, Clone, PartialEq)]
pub struct ProductIndex {
    base: Space,
    n: usize,
}

impl ProductIndex {
    pub fn new(base: Space, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("product order must be positive".into()));
        }
        Ok(ProductIndex { base, n })
    }

    pub fn base(&self) -> &Space {
        &self.base
    }

    pub fn order(&self) -> usize {
        self.n
    }

    /// `L^N`, or `None` if it does not fit in a `u64`.
    pub fn count(&self) -> Option<u64> {
        (self.base.len() as u64).checked_pow(self.n as u32)
    }

    pub fn decode(&self, mut index: u64) -> Vec<usize> {
        let l = self.base.len() as u64;
        let mut seq = vec![0usize; self.n];
        for slot in seq.iter_mut().rev() {
            *slot = (index % l) as usize;
            index /= l;
        }
        seq
    }

    pub fn encode(&self, seq: &[usize]) -> u64 {
        let l = self.base.len() as u64;
        seq.iter().fold(0u64, |acc, &s| acc * l + s as u64)
    }

    fn checked_count(&self, cap: u64) -> Result<u64> {
        match self.count() {
            Some(c) if c <= cap => Ok(c),
            _ => Err(Error::EnumerationCapExceeded {
                requested: libm::pow(self.base.len() as f64, self.n as f64),
                cap,
            }),
        }
    }
}

/// `P_N`, the `N`-fold product of `P`, evaluated lazily by index.
#[derive(Debug, Clone, PartialEq)]
pub struct IidPower {
    base: ProbMeasure,
    index: ProductIndex,
}

/// `P_N` for `N ≥ 1`.
pub fn iid_power(p: &ProbMeasure, n: usize) -> Result<IidPower> {
    Ok(IidPower {
        base: p.clone(),
        index: ProductIndex::new(p.space().clone(), n)?,
    })
}

impl IidPower {
    pub fn index(&self) -> &ProductIndex {
        &self.index
    }

    pub fn base(&self) -> &ProbMeasure {
        &self.base
    }

    /// `Π p(ω_k)`.
    pub fn prob(&self, seq: &[usize]) -> f64 {
        seq.iter().map(|&s| self.base.weight(s)).product()
    }

    pub fn prob_at(&self, index: u64) -> f64 {
        self.prob(&self.index.decode(index))
    }

    /// Materializes `P_N` as a measure on `Ω^N` if `L^N ≤ cap`.
    pub fn materialize(&self, cap: u64) -> Result<ProbMeasure> {
        let count = self.index.checked_count(cap)?;
        let mut labels = Vec::with_capacity(count as usize);
        let mut weights = Vec::with_capacity(count as usize);
        for idx in 0..count {
            let seq = self.index.decode(idx);
            let label: Vec<&str> = seq
                .iter()
                .map(|&s| self.base.space().labels()[s].as_str())
                .collect();
            labels.push(label.join(","));
            weights.push(self.prob(&seq));
        }
        let space = Arc::new(OutcomeSpace {
            labels,
            factors: None,
        });
        ProbMeasure::from_unnormalized(space, weights)
    }
}

/// `μ_T(ζ) = Σ_{T(ω) = ζ} μ(ω)` for a map given as `map[ω] = ζ`.
pub fn push_forward(m: &Measure, map: &[usize], target: Space) -> Result<Measure> {
    if map.len() != m.len() {
        return Err(Error::LengthMismatch {
            expected: m.len(),
            got: map.len(),
        });
    }
    let mut weights = vec![0.0; target.len()];
    for (&w, &z) in m.weights.iter().zip(map) {
        if z >= target.len() {
            return Err(Error::InvalidArgument(format!(
                "map value {z} outside target space of size {}",
                target.len()
            )));
        }
        weights[z] += w;
    }
    Measure::new(target, weights)
}

/// Row-stochastic matrix `Φ(ω, ω̂)` from one space to another.
#[derive(Debug, Clone, PartialEq)]
pub struct StochasticMap {
    from: Space,
    to: Space,
    rows: Vec<f64>,
}

impl StochasticMap {
    pub fn new(from: Space, to: Space, rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.len() != from.len() {
            return Err(Error::LengthMismatch {
                expected: from.len(),
                got: rows.len(),
            });
        }
        let mut flat = Vec::with_capacity(from.len() * to.len());
        for (r, row) in rows.into_iter().enumerate() {
            if row.len() != to.len() {
                return Err(Error::LengthMismatch {
                    expected: to.len(),
                    got: row.len(),
                });
            }
            for (index, &value) in row.iter().enumerate() {
                if !value.is_finite() || value < 0.0 {
                    return Err(Error::InvalidWeight { index, value });
                }
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > NORMALIZATION_TOLERANCE {
                return Err(Error::NotStochastic { row: r, sum });
            }
            flat.extend(row);
        }
        Ok(StochasticMap {
            from,
            to,
            rows: flat,
        })
    }

    pub fn identity(space: Space) -> Self {
        let n = space.len();
        let mut rows = vec![0.0; n * n];
        for i in 0..n {
            rows[i * n + i] = 1.0;
        }
        StochasticMap {
            from: space.clone(),
            to: space,
            rows,
        }
    }

    /// Every row equal to `r`: the map sends every measure to `r`.
    pub fn rank_one(from: Space, r: &ProbMeasure) -> Self {
        let mut rows = Vec::with_capacity(from.len() * r.len());
        for _ in 0..from.len() {
            rows.extend_from_slice(r.weights());
        }
        StochasticMap {
            from,
            to: r.space().clone(),
            rows,
        }
    }

    /// Deterministic map `ω ↦ map[ω]`.
    pub fn deterministic(from: Space, to: Space, map: &[usize]) -> Result<Self> {
        let rows = map
            .iter()
            .map(|&z| {
                let mut row = vec![0.0; to.len()];
                if let Some(slot) = row.get_mut(z) {
                    *slot = 1.0;
                }
                row
            })
            .collect();
        Self::new(from, to, rows)
    }

    pub fn from_space(&self) -> &Space {
        &self.from
    }

    pub fn to_space(&self) -> &Space {
        &self.to
    }

    pub fn entry(&self, from: usize, to: usize) -> f64 {
        self.rows[from * self.to.len() + to]
    }

    pub fn row(&self, from: usize) -> &[f64] {
        let n = self.to.len();
        &self.rows[from * n..(from + 1) * n]
    }

    /// Column sums all equal to one (requires square shape).
    pub fn is_doubly_stochastic(&self, tol: f64) -> bool {
        self.from.len() == self.to.len()
            && (0..self.to.len()).all(|j| {
                let s: f64 = (0..self.from.len()).map(|i| self.entry(i, j)).sum();
                (s - 1.0).abs() <= tol
            })
    }

    /// `(ζΦ)(ω̂) = Σ_ω ζ(ω) Φ(ω, ω̂)` for any signed vector `ζ`.
    pub fn apply_vector(&self, zeta: &[f64]) -> Result<Vec<f64>> {
        if zeta.len() != self.from.len() {
            return Err(Error::LengthMismatch {
                expected: self.from.len(),
                got: zeta.len(),
            });
        }
        let m = self.to.len();
        let mut out = vec![0.0; m];
        for (i, &z) in zeta.iter().enumerate() {
            if z == 0.0 {
                continue;
            }
            for (o, &phi) in out.iter_mut().zip(&self.rows[i * m..(i + 1) * m]) {
                *o += z * phi;
            }
        }
        Ok(out)
    }

    pub fn apply(&self, p: &ProbMeasure) -> Result<ProbMeasure> {
        apply_stochastic(self, p)
    }
}

/// `Φ(P)(ω̂) = Σ_ω P(ω) Φ(ω, ω̂)`.
pub fn apply_stochastic(phi: &StochasticMap, p: &ProbMeasure) -> Result<ProbMeasure> {
    ensure_same(&phi.from, p.space())?;
    let out = phi.apply_vector(p.weights())?;
    ProbMeasure::from_unnormalized(phi.to.clone(), out)
}
