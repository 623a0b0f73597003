//! Monte Carlo replicas on the rayon pool. Each replica owns a substream of
//! the master seed and results are reduced in replica order, so the output
//! does not depend on the number of threads.

use entropic_core::estimation::{check_efficiency_theta, efficiency_replica, EfficiencyRow};
use entropic_core::fisher::{fisher_info, ParametricFamily};
use entropic_core::ldp::{cramer_mc_replica, CgfModel};
use entropic_core::Result;
use rayon::prelude::*;

/// Hit frequency of `S_N/N ∈ [a, b]` and its standard error.
pub fn cramer_mc(model: &CgfModel, n: u32, a: f64, b: f64, reps: u64, seed: u64) -> (f64, f64) {
    let hits = (0..reps)
        .into_par_iter()
        .filter(|&r| cramer_mc_replica(model, n, a, b, seed, r))
        .count() as f64;
    let r = reps as f64;
    let p = hits / r;
    (p, (p * (1.0 - p) / r).sqrt())
}

pub fn efficiency<F: ParametricFamily + Sync + ?Sized>(
    f: &F,
    thetas: &[f64],
    ns: &[usize],
    reps: usize,
    seed: u64,
) -> Result<Vec<EfficiencyRow>> {
    let mut rows = Vec::with_capacity(thetas.len() * ns.len());
    for &t in thetas {
        check_efficiency_theta(f, t)?;
        let inv = 1.0 / fisher_info(f, t)?;
        for &n in ns {
            let results = (0..reps as u64)
                .into_par_iter()
                .map(|r| efficiency_replica(f, t, n, seed, r))
                .collect::<Result<Vec<_>>>()?;
            rows.push(EfficiencyRow::from_results(t, n, &results, inv));
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use entropic_core::estimation::efficiency_experiment;
    use entropic_core::fisher::Bernoulli;
    use entropic_core::{ProbMeasure, RandomVar};

    #[test]
    fn matches_sequential_run() {
        let b = Bernoulli::new(0.2, 0.8).unwrap();
        let par = efficiency(&b, &[0.4, 0.5], &[16, 64], 200, 3).unwrap();
        let seq = efficiency_experiment(&b, &[0.4, 0.5], &[16, 64], 200, 3).unwrap();
        assert_eq!(par, seq);
    }

    #[test]
    fn thread_count_does_not_matter() {
        let p = ProbMeasure::from_weights(vec![0.5, 0.5]).unwrap();
        let x = RandomVar::new(p.space().clone(), vec![-1.0, 1.0]).unwrap();
        let m = CgfModel::new(&p, &x).unwrap();
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let a = one.install(|| cramer_mc(&m, 50, 0.2, 1.0, 4000, 11));
        let b = cramer_mc(&m, 50, 0.2, 1.0, 4000, 11);
        assert_eq!(a, b);
        assert!(a.0 > 0.0 && a.0 < 0.2);
    }
}
