//! Seeded random streams and CDF-inversion sampling.

use alloc::vec::Vec;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::measures::ProbMeasure;

/// The substream `stream` of the master `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniform draw on `[0, 1)` with 53 random bits.
#[inline]
pub fn uniform01<R: RngCore>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Inverse-CDF sampler for a finite measure.
#[derive(Debug, Clone)]
pub struct Sampler {
    cdf: Vec<f64>,
}

impl Sampler {
    pub fn new(p: &ProbMeasure) -> Self {
        Self::from_weights(p.weights())
    }

    pub fn from_weights(w: &[f64]) -> Self {
        let mut cdf = Vec::with_capacity(w.len());
        let mut acc = 0.0;
        for &x in w {
            acc += x;
            cdf.push(acc);
        }
        // the last charged atom closes the CDF exactly
        if let Some(last) = w.iter().rposition(|&x| x > 0.0) {
            for c in cdf[last..].iter_mut() {
                *c = 1.0;
            }
        }
        Sampler { cdf }
    }

    /// First index with `cdf > u`.
    #[inline]
    pub fn draw<R: RngCore>(&self, rng: &mut R) -> usize {
        let u = uniform01(rng);
        self.cdf.partition_point(|&c| c <= u)
    }
}
