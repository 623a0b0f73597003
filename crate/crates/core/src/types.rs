//! Method-of-types engine: compositions of `N` into `L` parts and exact
//! type-class probabilities.

use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::math::{composition_count, ln_multinomial, multinomial_u128};
use crate::measures::{OutcomeSpace, ProbMeasure};

/// Counts `(n_1 … n_L)` with `Σ n_k = N`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TypeVector {
    counts: Vec<u32>,
    n: u32,
}

impl TypeVector {
    pub fn new(counts: Vec<u32>) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::EmptySpace);
        }
        let n = counts.iter().map(|&c| c as u64).sum::<u64>();
        let n = u32::try_from(n).map_err(|_| Error::InvalidArgument("type order overflows u32".into()))?;
        Ok(TypeVector { counts, n })
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn order(&self) -> u32 {
        self.n
    }

    /// Number of sequences in the type class, if it fits in a `u128`.
    pub fn multiplicity(&self) -> Option<u128> {
        multinomial_u128(&self.counts)
    }

    pub fn ln_multiplicity(&self) -> f64 {
        ln_multinomial(&self.counts)
    }

    /// The empirical measure `counts / N` on an indexed space.
    pub fn empirical(&self) -> Result<ProbMeasure> {
        if self.n == 0 {
            return Err(Error::EmptySample);
        }
        let w = self.frequencies();
        ProbMeasure::from_unnormalized(OutcomeSpace::indexed(w.len()), w)
    }

    pub fn frequencies(&self) -> Vec<f64> {
        let n = self.n as f64;
        self.counts.iter().map(|&c| c as f64 / n).collect()
    }
}

/// `binom(N+L−1, L−1)` checked against `cap`.
pub fn check_type_count(l: usize, n: u32, cap: u64) -> Result<u64> {
    let count = composition_count(n as u64, l);
    if count > cap as f64 {
        return Err(Error::EnumerationCapExceeded {
            requested: count,
            cap,
        });
    }
    Ok(count as u64)
}

/// Lexicographic iterator over compositions of `N` into `L` parts.
#[derive(Debug, Clone)]
pub struct TypeIter {
    current: Option<Vec<u32>>,
}

impl Iterator for TypeIter {
    type Item = TypeVector;

    fn next(&mut self) -> Option<TypeVector> {
        let cur = self.current.take()?;
        let mut nxt = cur.clone();
        self.current = if advance(&mut nxt) { Some(nxt) } else { None };
        let n = cur.iter().sum();
        Some(TypeVector { counts: cur, n })
    }
}

/// Steps `c` to the next composition; `false` when `c` was the last one.
fn advance(c: &mut [u32]) -> bool {
    let l = c.len();
    if l < 2 {
        return false;
    }
    let mut tail: u32 = c[l - 1];
    let mut i = l - 1;
    while i > 0 {
        i -= 1;
        if tail > 0 {
            c[i] += 1;
            for slot in c[i + 1..].iter_mut() {
                *slot = 0;
            }
            c[l - 1] = tail - 1;
            return true;
        }
        tail += c[i];
    }
    false
}

/// All types of order `N` on `L` letters, starting at `(0, …, 0, N)`.
pub fn enumerate_types(l: usize, n: u32, cap: u64) -> Result<TypeIter> {
    if l == 0 {
        return Err(Error::EmptySpace);
    }
    check_type_count(l, n, cap)?;
    let mut first = vec![0u32; l];
    first[l - 1] = n;
    Ok(TypeIter {
        current: Some(first),
    })
}

/// Calls `f` on every composition without allocating per type.
pub fn visit_types<F: FnMut(&[u32])>(l: usize, n: u32, cap: u64, mut f: F) -> Result<()> {
    if l == 0 {
        return Err(Error::EmptySpace);
    }
    check_type_count(l, n, cap)?;
    let mut c = vec![0u32; l];
    c[l - 1] = n;
    loop {
        f(&c);
        if !advance(&mut c) {
            return Ok(());
        }
    }
}

/// `log[(N; n) Π p_k^{n_k}]`, `−∞` if a positive count hits a zero weight.
pub fn type_class_log_probability(p: &[f64], counts: &[u32]) -> f64 {
    let mut s = ln_multinomial(counts);
    for (&w, &c) in p.iter().zip(counts) {
        if c > 0 {
            if w == 0.0 {
                return f64::NEG_INFINITY;
            }
            s += c as f64 * w.ln();
        }
    }
    s
}

/// `log Π p_k^{n_k}`: the probability of any single sequence of the type.
pub fn sequence_log_probability(p: &[f64], counts: &[u32]) -> f64 {
    let mut s = 0.0;
    for (&w, &c) in p.iter().zip(counts) {
        if c > 0 {
            if w == 0.0 {
                return f64::NEG_INFINITY;
            }
            s += c as f64 * w.ln();
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::LogSum;
    use crate::measures::DEFAULT_ENUMERATION_CAP as CAP;

    #[test]
    fn enumeration_counts() {
        let all: Vec<Vec<u32>> = enumerate_types(2, 3, CAP)
            .unwrap()
            .map(|t| t.counts().to_vec())
            .collect();
        assert_eq!(all, vec![vec![0, 3], vec![1, 2], vec![2, 1], vec![3, 0]]);
        assert_eq!(enumerate_types(3, 2, CAP).unwrap().count(), 6);
        assert_eq!(enumerate_types(4, 10, CAP).unwrap().count(), 286);
        assert_eq!(enumerate_types(1, 7, CAP).unwrap().count(), 1);
        let mut k = 0;
        visit_types(5, 6, CAP, |c| {
            assert_eq!(c.iter().sum::<u32>(), 6);
            k += 1;
        })
        .unwrap();
        assert_eq!(k, 210);
        assert!(matches!(
            enumerate_types(10, 200, CAP),
            Err(Error::EnumerationCapExceeded { .. })
        ));
    }

    #[test]
    fn enumeration_is_lexicographic() {
        let all: Vec<Vec<u32>> = enumerate_types(3, 4, CAP)
            .unwrap()
            .map(|t| t.counts().to_vec())
            .collect();
        for w in all.windows(2) {
            assert!(w[0] < w[1]);
        }
    }

    #[test]
    fn class_probabilities() {
        let p = [0.2, 0.5, 0.3];
        for k in 0..3 {
            let mut c = [0u32; 3];
            c[k] = 1;
            assert!((type_class_log_probability(&p, &c).exp() - p[k]).abs() < 1e-15);
        }
        let mut total = LogSum::new();
        visit_types(3, 50, CAP, |c| total.add(type_class_log_probability(&p, c))).unwrap();
        assert!(total.value().abs() < 1e-10);
        let coin = type_class_log_probability(&[0.5, 0.5], &[5, 5]).exp();
        assert!((coin - 252.0 / 1024.0).abs() < 1e-14);
        assert_eq!(
            type_class_log_probability(&[1.0, 0.0], &[1, 1]),
            f64::NEG_INFINITY
        );
    }

    #[test]
    fn type_vector_accessors() {
        let t = TypeVector::new(vec![2, 1, 1]).unwrap();
        assert_eq!(t.order(), 4);
        assert_eq!(t.multiplicity(), Some(12));
        assert_eq!(t.empirical().unwrap().weights(), &[0.5, 0.25, 0.25]);
    }
}
