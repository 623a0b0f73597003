//! Acceptance run: one line per criterion, nonzero exit status on any failure.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use entropic_core::divergences::{js_entropy, js_metric, kl_divergence, pinsker_gap};
use entropic_core::empirical_sanov::{halfspace_rate_primal, sanov_probability, sanov_rate, ConstraintSet, Direction};
use entropic_core::estimation::bernoulli_risk_exact;
use entropic_core::fisher::{
    block_splitting, chentsov_monotonicity_check, fisher_info, local_kl_limit, path_energy, Bernoulli,
    ExponentialFamily, SegmentFamily, DEFAULT_EPS_GRID,
};
use entropic_core::fluctuation::{ep_distribution, fluctuation_check, renyi_symmetry_check, Involution};
use entropic_core::hypothesis::{
    bayes_error_product_log, chernoff_exponent, hoeffding_constrained_oracle, stein_exponent, TiltedPair,
};
use entropic_core::ldp::{cramer_exact_log, CgfModel};
use entropic_core::rng::{stream_rng, uniform01};
use entropic_core::{OutcomeSpace, ProbMeasure, RandomVar, StochasticMap, DEFAULT_ENUMERATION_CAP as CAP};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

const SEED: u64 = 20_240_601;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn pm(w: &[f64]) -> ProbMeasure {
    ProbMeasure::from_weights(w.to_vec()).unwrap()
}

fn random_weights(rng: &mut ChaCha8Rng, l: usize, sparse: bool) -> Vec<f64> {
    let mut w: Vec<f64> = (0..l)
        .map(|_| {
            if sparse && uniform01(rng) < 0.2 {
                0.0
            } else {
                1e-3 + uniform01(rng)
            }
        })
        .collect();
    if w.iter().all(|&x| x == 0.0) {
        w[0] = 1.0;
    }
    let t: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= t);
    w
}

fn random_measure(rng: &mut ChaCha8Rng, l: usize, sparse: bool) -> ProbMeasure {
    pm(&random_weights(rng, l, sparse))
}

fn dim(rng: &mut ChaCha8Rng, lo: usize, hi: usize) -> usize {
    lo + (uniform01(rng) * (hi - lo + 1) as f64) as usize
}

fn coin() -> (ProbMeasure, RandomVar, CgfModel) {
    let p = pm(&[0.5, 0.5]);
    let x = RandomVar::new(p.space().clone(), vec![-1.0, 1.0]).unwrap();
    let m = CgfModel::new(&p, &x).unwrap();
    (p, x, m)
}

fn coin_rate(t: f64) -> f64 {
    0.5 * (1.0 + t) * (1.0 + t).ln() + 0.5 * (1.0 - t) * (1.0 - t).ln()
}

fn c1_coin() -> Check {
    let (_, _, m) = coin();
    let mut worst_c = 0.0f64;
    for k in -500..=500 {
        let a = k as f64 / 100.0;
        worst_c = worst_c.max((m.cgf(a) - a.cosh().ln()).abs());
    }
    ensure(worst_c <= 1e-12, || format!("C(α) error {worst_c:e}"))?;
    let (mut worst_a, mut worst_i) = (0.0f64, 0.0f64);
    for k in -9..=9 {
        let t = k as f64 / 10.0;
        worst_a = worst_a.max((m.solve_alpha(t).map_err(|e| e.to_string())? - t.atanh()).abs());
        worst_i = worst_i.max((m.rate(t) - coin_rate(t)).abs());
    }
    ensure(worst_a <= 1e-10 && worst_i <= 1e-10, || {
        format!("α error {worst_a:e}, I error {worst_i:e}")
    })?;
    Ok(format!("max errors C {worst_c:.1e}, α {worst_a:.1e}, I {worst_i:.1e}"))
}

fn c2_cramer() -> Check {
    let (_, _, m) = coin();
    let mut detail = Vec::new();
    for t in [0.2, 0.5] {
        let e = cramer_exact_log(&m, 400, t, 1.0, CAP).map_err(|e| e.to_string())? / 400.0;
        let target = -coin_rate(t);
        ensure((e - target).abs() <= 0.05, || format!("θ={t}: {e} vs {target}"))?;
        detail.push(format!("θ={t}: {e:.4} vs {target:.4}"));
        for n in 1..=400u32 {
            let lp = cramer_exact_log(&m, n, t, 1.0, CAP).map_err(|e| e.to_string())?;
            let bound = -(n as f64) * coin_rate(t);
            ensure(lp <= bound + 1e-12 * (1.0 + bound.abs()), || {
                format!("Chernoff bound fails at θ={t}, N={n}: {lp} > {bound}")
            })?;
        }
    }
    Ok(format!("{}; upper bound holds for N ≤ 400", detail.join(", ")))
}

fn c3_pinsker_js() -> Check {
    let mut rng = stream_rng(SEED, 3);
    let mut min_gap = f64::INFINITY;
    for _ in 0..100_000 {
        let l = dim(&mut rng, 2, 6);
        let p = random_measure(&mut rng, l, true);
        let q = random_measure(&mut rng, l, true);
        let g = pinsker_gap(&p, &q).map_err(|e| e.to_string())?;
        min_gap = min_gap.min(g);
    }
    ensure(min_gap >= -1e-12, || format!("Pinsker gap {min_gap}"))?;
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..10_000 {
        let l = dim(&mut rng, 2, 6);
        let (p, q, r) = (
            random_measure(&mut rng, l, true),
            random_measure(&mut rng, l, true),
            random_measure(&mut rng, l, true),
        );
        let d = |a: &ProbMeasure, b: &ProbMeasure| js_metric(a, b).unwrap();
        worst = worst.max(d(&p, &q) - d(&p, &r) - d(&r, &q));
    }
    ensure(worst <= 1e-12, || format!("JS triangle violated by {worst}"))?;
    let (a, b, mid) = (pm(&[1.0, 0.0]), pm(&[0.0, 1.0]), pm(&[0.5, 0.5]));
    let direct = js_entropy(&a, &b).map_err(|e| e.to_string())?;
    let detour = js_entropy(&a, &mid).unwrap() + js_entropy(&mid, &b).unwrap();
    let (ln2, witness) = (core::f64::consts::LN_2, 1.5 * (4.0f64 / 3.0).ln());
    ensure((direct - ln2).abs() <= 1e-12 && (detour - witness).abs() <= 1e-12 && direct > detour, || {
        format!("witness {direct} vs {detour}")
    })?;
    Ok(format!(
        "min Pinsker gap {min_gap:.2e}; max JS triangle excess {worst:.2e}; witness {direct:.12} > {detour:.12}"
    ))
}

fn c4_stein() -> Check {
    let (p, q) = (pm(&[0.5, 0.5]), pm(&[0.9, 0.1]));
    let s = stein_exponent(&p, &q, 0.5, 400, CAP).map_err(|e| e.to_string())?;
    let target = -kl_divergence(&p, &q).unwrap();
    ensure((s.normalized - target).abs() <= 0.06, || format!("{} vs {target}", s.normalized))?;
    Ok(format!("(1/N) log s_N = {:.4}, −S(P|Q) = {target:.4}", s.normalized))
}

fn c5_chernoff() -> Check {
    let t = 0.9;
    let (p, q) = (pm(&[t, 1.0 - t]), pm(&[1.0 - t, t]));
    let (alpha, value) = chernoff_exponent(&p, &q).map_err(|e| e.to_string())?;
    let target = (2.0 * (t * (1.0 - t)).sqrt()).ln();
    ensure((value - target).abs() <= 1e-8 && (alpha - 0.5).abs() <= 1e-8, || {
        format!("exponent {value} at α {alpha}, expected {target} at ½")
    })?;
    let exact = bayes_error_product_log(&p, &q, 0.5, 400, CAP).map_err(|e| e.to_string())? / 400.0;
    ensure((exact - value).abs() <= 0.05, || format!("exact slope {exact} vs {value}"))?;
    Ok(format!("exponent {value:.10} (α {alpha}), exact N=400 slope {exact:.4}"))
}

fn c6_hoeffding() -> Check {
    let (p, q) = (pm(&[0.5, 0.5]), pm(&[0.9, 0.1]));
    let pair = TiltedPair::new(&p, &q).map_err(|e| e.to_string())?;
    let (mut identity, mut oracle, mut attain) = (0.0f64, 0.0f64, 0.0f64);
    for k in 1..=20 {
        let s = pair.s_pq() * k as f64 / 21.0;
        let psi = pair.psi(s).map_err(|e| e.to_string())?.psi;
        let theta = pair.phi_hat_inverse(s).map_err(|e| e.to_string())?;
        identity = identity.max((psi + pair.phi(theta)).abs());
        let o = hoeffding_constrained_oracle(&p, &q, s, 1e-3, CAP).map_err(|e| e.to_string())?;
        oracle = oracle.max((o.value + psi).abs());
        let (rq, rp) = pair.tilted_attainment(s).map_err(|e| e.to_string())?;
        attain = attain.max((rq - s).abs().max((rp + psi).abs()));
    }
    ensure(identity <= 1e-8 && oracle <= 1e-3 && attain <= 1e-8, || {
        format!("identity {identity:e}, oracle {oracle:e}, attainment {attain:e}")
    })?;
    Ok(format!("identity {identity:.1e}, oracle {oracle:.1e}, attainment {attain:.1e}"))
}

fn random_involution(rng: &mut ChaCha8Rng, l: usize) -> Involution {
    let mut order: Vec<usize> = (0..l).collect();
    for i in (1..l).rev() {
        let j = (uniform01(rng) * (i + 1) as f64) as usize;
        order.swap(i, j);
    }
    let mut perm: Vec<usize> = (0..l).collect();
    for pair in order.chunks_exact(2) {
        if uniform01(rng) < 0.7 {
            perm[pair[0]] = pair[1];
            perm[pair[1]] = pair[0];
        }
    }
    Involution::new(perm).unwrap()
}

fn c7_fluctuation() -> Check {
    let mut rng = stream_rng(SEED, 7);
    let alphas: Vec<f64> = (0..=20).map(|k| k as f64 / 20.0).collect();
    let (mut fl, mut sym) = (0.0f64, 0.0f64);
    for _ in 0..1_000 {
        let l = dim(&mut rng, 2, 8);
        let p = random_measure(&mut rng, l, false);
        let theta = random_involution(&mut rng, l);
        fl = fl.max(fluctuation_check(&ep_distribution(&p, &theta).map_err(|e| e.to_string())?));
        sym = sym.max(renyi_symmetry_check(&p, &theta, &alphas).map_err(|e| e.to_string())?);
    }
    ensure(fl <= 1e-12 && sym <= 1e-10, || format!("fluctuation {fl:e}, Rényi {sym:e}"))?;
    Ok(format!("max |Q(−s) − e^(−s)Q(s)| {fl:.1e}, max Rényi asymmetry {sym:.1e}"))
}

fn c8_sanov() -> Check {
    let p = pm(&[0.5, 0.5]);
    let ind = RandomVar::indicator(p.space().clone(), &[0]);
    let gamma = ConstraintSet::halfspace(ind, 0.8, Direction::AtLeast, true);
    let (_, e) = sanov_probability(&p, &gamma, 400, CAP).map_err(|e| e.to_string())?;
    let target = -kl_divergence(&pm(&[0.8, 0.2]), &p).unwrap();
    ensure((e - target).abs() <= 0.05, || format!("N=400 exponent {e} vs {target}"))?;
    let mut rng = stream_rng(SEED, 8);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let l = dim(&mut rng, 2, 6);
        let p = random_measure(&mut rng, l, false);
        let values: Vec<f64> = (0..l).map(|_| 4.0 * uniform01(&mut rng) - 2.0).collect();
        let x = RandomVar::new(p.space().clone(), values).unwrap();
        let model = CgfModel::new(&p, &x).unwrap();
        let theta = model.mean() + (0.05 + 0.9 * uniform01(&mut rng)) * (model.max() - model.mean());
        let g = ConstraintSet::halfspace(x.clone(), theta, Direction::AtLeast, true);
        let reported = sanov_rate(&p, &g, 0.01, CAP).map_err(|e| e.to_string())?.value;
        let primal = halfspace_rate_primal(&p, &x, theta, Direction::AtLeast).map_err(|e| e.to_string())?;
        let cramer = model.rate(theta);
        worst = worst.max((primal - cramer).abs()).max((reported - cramer).abs());
    }
    ensure(worst <= 1e-8, || format!("halfspace rate differs from I(θ) by {worst:e}"))?;
    Ok(format!("N=400 exponent {e:.4} vs {target:.4}; halfspace vs Cramér {worst:.1e}"))
}

fn c9_fisher() -> Check {
    let b = Bernoulli::new(0.1, 0.9).map_err(|e| e.to_string())?;
    let info = fisher_info(&b, 0.5).map_err(|e| e.to_string())?;
    ensure((info - 4.0).abs() <= 1e-10, || format!("𝓘(½) = {info}"))?;
    let mut local = 0.0f64;
    for t in [0.3, 0.5, 0.7] {
        let (fwd, rev) = local_kl_limit(&b, t, &DEFAULT_EPS_GRID).map_err(|e| e.to_string())?;
        let exact = 1.0 / (t * (1.0 - t));
        local = local.max((2.0 * fwd - exact).abs()).max((2.0 * rev - exact).abs());
    }
    let x = RandomVar::from_values(vec![-1.0, 0.5, 2.0]).unwrap();
    let ef = ExponentialFamily::new(&x, -1.0, 1.0).unwrap();
    for t in [-0.5, 0.2] {
        let (fwd, rev) = local_kl_limit(&ef, t, &DEFAULT_EPS_GRID).map_err(|e| e.to_string())?;
        let exact = ef.variance(t);
        local = local.max((2.0 * fwd - exact).abs()).max((2.0 * rev - exact).abs());
    }
    ensure(local <= 1e-4, || format!("local KL limit error {local:e}"))?;
    let (p, q) = (pm(&[0.2, 0.5, 0.3]), pm(&[0.6, 0.1, 0.3]));
    let energy = path_energy(&SegmentFamily::new(&p, &q).unwrap()).map_err(|e| e.to_string())?.value;
    let sym = kl_divergence(&p, &q).unwrap() + kl_divergence(&q, &p).unwrap();
    ensure((energy - sym).abs() <= 1e-8, || format!("energy {energy} vs {sym}"))?;

    let mut rng = stream_rng(SEED, 9);
    let (mut worst, mut congruent) = (f64::NEG_INFINITY, 0.0f64);
    for _ in 0..10_000 {
        let (l, m) = (dim(&mut rng, 2, 6), dim(&mut rng, 2, 6));
        let p = random_measure(&mut rng, l, false);
        let mut zeta: Vec<f64> = (0..l).map(|_| 2.0 * uniform01(&mut rng) - 1.0).collect();
        let mean = zeta.iter().sum::<f64>() / l as f64;
        zeta.iter_mut().for_each(|z| *z -= mean);
        let rows = (0..l).map(|_| random_weights(&mut rng, m, false)).collect();
        let phi = StochasticMap::new(OutcomeSpace::indexed(l), OutcomeSpace::indexed(m), rows).unwrap();
        worst = worst.max(chentsov_monotonicity_check(&p, &zeta, &phi).map_err(|e| e.to_string())?);
        let parts: Vec<usize> = (0..l).map(|_| dim(&mut rng, 1, 3)).collect();
        let split = block_splitting(p.space(), &parts).map_err(|e| e.to_string())?;
        congruent = congruent.max(chentsov_monotonicity_check(&p, &zeta, &split).unwrap().abs());
    }
    ensure(worst <= 1e-12 && congruent <= 1e-10, || {
        format!("Chentsov max gap {worst:e}, congruent {congruent:e}")
    })?;
    Ok(format!(
        "𝓘(½) = {info}, local limit {local:.1e}, energy {:.1e}, Chentsov max {worst:.1e}, congruent {congruent:.1e}",
        (energy - sym).abs()
    ))
}

fn c10_mle() -> Check {
    let third = 1.0 / 3.0;
    let full = 4096.0 * bernoulli_risk_exact(third, 2.0 * third, 0.5, 4096).map_err(|e| e.to_string())?;
    let half = 4096.0 * bernoulli_risk_exact(0.5, 2.0 * third, 0.5, 4096).map_err(|e| e.to_string())?;
    ensure((full - 0.25).abs() <= 0.02 && (half - 0.125).abs() <= 0.01, || {
        format!("N·risk {full} on [⅓,⅔], {half} on [½,⅔]")
    })?;
    Ok(format!("N·risk {full:.6} on [1/3,2/3], {half:.6} on [1/2,2/3]"))
}

fn c11_properties() -> Check {
    let mut names = Vec::new();
    for (name, suite) in common::SUITES {
        suite(10_000).map_err(|e| format!("{name}: {e}"))?;
        names.push(name);
    }
    Ok(format!("10^4 cases each: {}", names.join(", ")))
}

fn main() -> ExitCode {
    let criteria: [(&str, u64, fn() -> Check); 11] = [
        ("coin closed forms", 1, c1_coin),
        ("Cramér tail at desk scale", 5, c2_cramer),
        ("Pinsker and Jensen-Shannon", 10, c3_pinsker_js),
        ("Stein exponent", 2, c4_stein),
        ("Chernoff exponent", 2, c5_chernoff),
        ("Hoeffding identity", 10, c6_hoeffding),
        ("fluctuation relation", 5, c7_fluctuation),
        ("Sanov", 5, c8_sanov),
        ("Fisher geometry", 10, c9_fisher),
        ("MLE efficiency", 5, c10_mle),
        ("property suites", 30, c11_properties),
    ];
    let mut failures = 0;
    for (k, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let took = start.elapsed();
        let over = took > Duration::from_secs(*budget);
        let (tag, detail) = match (&result, over) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Ok(d), true) => ("FAIL", format!("over the {budget} s budget; {d}")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if tag == "FAIL" {
            failures += 1;
        }
        println!("{tag} {:>2} {name} [{:.2} s] {detail}", k + 1, took.as_secs_f64());
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
