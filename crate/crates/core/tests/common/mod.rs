//! Randomized invariants shared by the property tests and the acceptance run.

#![allow(dead_code)]

use entropic_core::divergences::{kl_divergence, renyi_divergence_cgf};
use entropic_core::entropies::{renyi_entropy, shannon_entropy};
use entropic_core::typical_coding::typical_set_bounds;
use entropic_core::{marginals, product, OutcomeSpace, ProbMeasure, StochasticMap};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

pub const SLACK: f64 = 1e-10;

pub fn runner(cases: u32) -> TestRunner {
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn normalize(mut w: Vec<f64>) -> Vec<f64> {
    if w.iter().all(|&x| x == 0.0) {
        w[0] = 1.0;
    }
    let t: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= t);
    w
}

/// Faithful probability vector of length `l`.
pub fn prob(l: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(1e-3f64..1.0, l).prop_map(normalize)
}

/// Probability vector of length `l` that may vanish on some outcomes.
pub fn sparse_prob(l: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(prop_oneof![3 => 1e-3f64..1.0, 1 => Just(0.0)], l).prop_map(normalize)
}

pub fn measure(w: Vec<f64>) -> ProbMeasure {
    ProbMeasure::from_weights(w).unwrap()
}

pub fn on(space: &entropic_core::Space, w: Vec<f64>) -> ProbMeasure {
    ProbMeasure::new(space.clone(), w).unwrap()
}

/// Row-stochastic `l × m` map between indexed spaces.
pub fn stochastic(l: usize, m: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(sparse_prob(m), l)
}

pub fn map(rows: Vec<Vec<f64>>) -> StochasticMap {
    let (l, m) = (rows.len(), rows[0].len());
    StochasticMap::new(OutcomeSpace::indexed(l), OutcomeSpace::indexed(m), rows).unwrap()
}

fn run<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    runner(cases).run(&strategy, test).map_err(|e| e.to_string())
}

/// `S(Φ(P)|Φ(Q)) ≤ S(P|Q)` and `Ŝ_α(Φ(P)|Φ(Q)) ≥ Ŝ_α(P|Q)`.
pub fn data_processing(cases: u32) -> Result<(), String> {
    let s = (2usize..=6, 2usize..=6).prop_flat_map(|(l, m)| {
        (sparse_prob(l), prob(l), stochastic(l, m), 0.01f64..0.99)
    });
    run(cases, s, |(p, q, rows, alpha)| {
        let (p, q, phi) = (measure(p), measure(q), map(rows));
        let (fp, fq) = (phi.apply(&p).unwrap(), phi.apply(&q).unwrap());
        let before = kl_divergence(&p, &q).unwrap();
        let after = kl_divergence(&fp, &fq).unwrap();
        prop_assert!(after <= before + SLACK, "{after} > {before}");
        let before = renyi_divergence_cgf(&p, &q, alpha).unwrap();
        let after = renyi_divergence_cgf(&fp, &fq, alpha).unwrap();
        prop_assert!(after >= before - SLACK, "{after} < {before}");
        Ok(())
    })
}

pub fn joint_convexity(cases: u32) -> Result<(), String> {
    let s = (2usize..=6).prop_flat_map(|l| (sparse_prob(l), sparse_prob(l), prob(l), prob(l), 0.0f64..=1.0));
    run(cases, s, |(p1, p2, q1, q2, lambda)| {
        let (p1, p2, q1, q2) = (measure(p1), measure(p2), measure(q1), measure(q2));
        let lhs = kl_divergence(&p1.mix(&p2, lambda).unwrap(), &q1.mix(&q2, lambda).unwrap()).unwrap();
        let rhs = lambda * kl_divergence(&p1, &q1).unwrap() + (1.0 - lambda) * kl_divergence(&p2, &q2).unwrap();
        prop_assert!(lhs <= rhs + SLACK, "{lhs} > {rhs}");
        Ok(())
    })
}

/// `S(P_l|Q_l) + S(P_r|Q_r) ≤ S(P|Q_l ⊗ Q_r)`, with equality for product `P`.
pub fn super_additivity(cases: u32) -> Result<(), String> {
    let s = (2usize..=4, 2usize..=4).prop_flat_map(|(a, b)| {
        (sparse_prob(a * b), prob(a), prob(b), prob(a), prob(b), Just((a, b)))
    });
    run(cases, s, |(joint, ql, qr, pl, pr, (a, b))| {
        let (ls, rs) = (OutcomeSpace::indexed(a), OutcomeSpace::indexed(b));
        let q = product(&on(&ls, ql), &on(&rs, qr));
        let (ql, qr) = marginals(&q).unwrap();
        let p = on(q.space(), joint);
        let (ml, mr) = marginals(&p).unwrap();
        let sum = kl_divergence(&ml, &ql).unwrap() + kl_divergence(&mr, &qr).unwrap();
        let total = kl_divergence(&p, &q).unwrap();
        prop_assert!(sum <= total + SLACK, "{sum} > {total}");
        let indep = product(&on(&ls, pl), &on(&rs, pr));
        let (ml, mr) = marginals(&indep).unwrap();
        let sum = kl_divergence(&ml, &ql).unwrap() + kl_divergence(&mr, &qr).unwrap();
        let total = kl_divergence(&indep, &q).unwrap();
        prop_assert!((sum - total).abs() <= SLACK, "{sum} != {total}");
        Ok(())
    })
}

/// `Σ a log(a/b) ≥ (Σa) log(Σa/Σb)` for positive reals.
pub fn log_sum(cases: u32) -> Result<(), String> {
    let s = prop::collection::vec((1e-6f64..10.0, 1e-6f64..10.0), 1..8);
    run(cases, s, |pairs| {
        let lhs: f64 = pairs.iter().map(|(a, b)| a * (a / b).ln()).sum();
        let (sa, sb) = pairs.iter().fold((0.0, 0.0), |(x, y), (a, b)| (x + a, y + b));
        let rhs = sa * (sa / sb).ln();
        prop_assert!(lhs >= rhs - SLACK * (1.0 + rhs.abs()), "{lhs} < {rhs}");
        Ok(())
    })
}

/// Entropy of a measure equals the entropy of its block masses plus the
/// mass-weighted entropies within blocks.
pub fn split_additivity(cases: u32) -> Result<(), String> {
    let s = (2usize..=8).prop_flat_map(|n| (sparse_prob(n), prop::collection::vec(any::<bool>(), n - 1)));
    run(cases, s, |(w, cuts)| {
        let mut blocks: Vec<Vec<f64>> = vec![vec![w[0]]];
        for (x, cut) in w[1..].iter().zip(&cuts) {
            if *cut {
                blocks.push(Vec::new());
            }
            blocks.last_mut().unwrap().push(*x);
        }
        let masses: Vec<f64> = blocks.iter().map(|b| b.iter().sum()).collect();
        let mut split = shannon_entropy(&measure(masses.clone()));
        for (b, m) in blocks.iter().zip(&masses) {
            if *m > 0.0 {
                split += m * shannon_entropy(&measure(b.iter().map(|x| x / m).collect()));
            }
        }
        let whole = shannon_entropy(&measure(w));
        prop_assert!((whole - split).abs() <= SLACK, "{whole} != {split}");
        Ok(())
    })
}

/// `S_α(P)` is nonincreasing in `α`.
pub fn renyi_monotonicity(cases: u32) -> Result<(), String> {
    let s = (2usize..=8).prop_flat_map(|n| (sparse_prob(n), 0.0f64..1.0, 0.0f64..1.0));
    run(cases, s, |(w, a, b)| {
        let p = measure(w);
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let (s_lo, s_hi) = (renyi_entropy(&p, lo), renyi_entropy(&p, hi));
        prop_assert!(s_hi <= s_lo + SLACK, "S_{hi}={s_hi} > S_{lo}={s_lo}");
        let s1 = renyi_entropy(&p, 1.0);
        prop_assert!(s1 <= s_hi + SLACK);
        Ok(())
    })
}

/// `P_N(T) e^{N(S−ε)} ≤ |T| ≤ e^{N(S+ε)}` for the typical set `T = T_{N,ε}`.
pub fn covering_sandwich(cases: u32) -> Result<(), String> {
    let s = (2usize..=4).prop_flat_map(|l| (prob(l), 1u32..=24, 0.01f64..0.6));
    run(cases, s, |(w, n, eps)| {
        let r = typical_set_bounds(&measure(w), n, eps, 1 << 20).unwrap();
        if r.log_cardinality > f64::NEG_INFINITY {
            prop_assert!(r.log_lower <= r.log_cardinality + SLACK, "{r:?}");
            prop_assert!(r.log_cardinality <= r.log_upper + SLACK, "{r:?}");
        }
        Ok(())
    })
}

pub const SUITES: [(&str, fn(u32) -> Result<(), String>); 7] = [
    ("data-processing inequality", data_processing),
    ("joint convexity", joint_convexity),
    ("super-additivity", super_additivity),
    ("log-sum inequality", log_sum),
    ("entropy split additivity", split_additivity),
    ("Renyi alpha-monotonicity", renyi_monotonicity),
    ("covering-exponent sandwich", covering_sandwich),
];
