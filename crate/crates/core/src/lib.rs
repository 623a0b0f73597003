//! Entropies, divergences, large-deviation rate functions, hypothesis-testing
//! exponents and Fisher geometry on finite probability spaces.
//!
//! The crate is `no_std` and only needs `alloc`. Logarithms are natural
//! throughout; conversion to bits is a presentation concern left to callers.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod divergences;
pub mod empirical_sanov;
pub mod entropies;
pub mod error;
pub mod estimation;
pub mod fisher;
pub mod fluctuation;
pub mod hypothesis;
pub mod ldp;
pub mod math;
pub mod measures;
pub mod rng;
pub mod simplex;
pub mod types;
pub mod typical_coding;

pub use error::{Error, Result};
pub use measures::{
    apply_stochastic, iid_power, lebesgue_decompose, marginals, product, push_forward,
    radon_nikodym, same_space, support, variational_distance, IidPower, Measure, OutcomeSpace,
    ProbMeasure, ProductIndex, RandomVar, Space, StochasticMap, DEFAULT_ENUMERATION_CAP,
};
