//! Command-line front end. Every subcommand turns its inputs into one
//! [`Report`]; `main` prints it and maps failures to exit statuses.

use std::f64::consts::LN_2;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use entropic_core::divergences::{divergence_report, pinsker_gap};
use entropic_core::empirical_sanov::{sanov_experiment, RateMethod};
use entropic_core::entropies::entropy_report;
use entropic_core::estimation::{mle, DEFAULT_GRID_POINTS, DEFAULT_REFINE_TOL};
use entropic_core::fisher::{fisher_info, geodesic_distance, integrate, path_report, SegmentFamily};
use entropic_core::fluctuation::{ep_distribution, fluctuation_check, mean_entropy_production, renyi_symmetry_check};
use entropic_core::hypothesis::{
    bayes_error, bayes_error_lower_bound, bayes_error_product_log, chernoff_exponent, stein_exponent,
    threshold_test_exponents, TiltedPair,
};
use entropic_core::ldp::{cramer_exact_log, CgfModel};
use entropic_core::typical_coding::{covering_exponent, source_coding_optimum, typical_set_bounds};
use entropic_core::{variational_distance, DEFAULT_ENUMERATION_CAP};
use serde_json::{json, Map, Value};

use crate::error::CliError;
use crate::io::{load_family, load_measure, load_rv, read_json, ConstraintFile, InvolutionFile, SampleFile};
use crate::parallel;
use crate::report::{num, Format, Report};

#[derive(Debug, Parser)]
#[command(name = "entropic", version, about = "Entropies, divergences, large deviations, testing exponents and Fisher geometry on finite spaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format; tables default to CSV and everything else to JSON.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Master seed for Monte Carlo replicas.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Cap on enumerated types or sequences.
    #[arg(long, global = true)]
    pub cap: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Shannon, Hartley and Rényi entropies of a measure.
    Entropy(EntropyArgs),
    /// Relative, Rényi and Jensen-Shannon divergences of two measures.
    Divergence(DivergenceArgs),
    /// Cumulant generating function and rate function on a θ-grid.
    Rate(RateArgs),
    /// Exact (and optionally Monte Carlo) probability of S_N/N in [a, b].
    Cramer(CramerArgs),
    /// Covering exponent, optimal block compression and typical sets.
    Coding(CodingArgs),
    /// Bayes, Stein, Chernoff and Hoeffding testing exponents.
    Testing(TestingArgs),
    /// Entropy-production law under an involution.
    Fluctuation(FluctuationArgs),
    /// Exact probabilities of a set of empirical measures against the Sanov rate.
    Sanov(SanovArgs),
    /// Fisher information of a family on a θ-grid with cumulative energy and length.
    Fisher(FisherArgs),
    /// Geodesic distance between two measures and the straight-segment functionals.
    Geodesic(PairArgs),
    /// Maximum-likelihood estimate from a sample.
    Mle(MleArgs),
    /// Monte Carlo risk of the MLE against the Cramér-Rao limit.
    Efficiency(EfficiencyArgs),
}

#[derive(Debug, Args)]
pub struct EntropyArgs {
    #[arg(long)]
    pub measure: PathBuf,
    #[arg(long, value_delimiter = ',', default_values_t = [0.5, 2.0])]
    pub alpha: Vec<f64>,
    /// Report in bits instead of nats.
    #[arg(long)]
    pub bits: bool,
}

#[derive(Debug, Args)]
pub struct DivergenceArgs {
    #[arg(long)]
    pub p: PathBuf,
    #[arg(long)]
    pub q: PathBuf,
    #[arg(long, value_delimiter = ',', default_values_t = [0.5])]
    pub alpha: Vec<f64>,
    #[arg(long)]
    pub bits: bool,
}

#[derive(Debug, Args)]
pub struct RateArgs {
    #[arg(long)]
    pub measure: PathBuf,
    #[arg(long)]
    pub rv: PathBuf,
    /// `a:b:step` or a comma-separated list.
    #[arg(long = "theta-grid", value_parser = parse_grid, allow_hyphen_values = true)]
    pub theta_grid: Grid,
}

#[derive(Debug, Args)]
pub struct CramerArgs {
    #[arg(long)]
    pub measure: PathBuf,
    #[arg(long)]
    pub rv: PathBuf,
    #[arg(long = "N")]
    pub n: u32,
    #[arg(long, allow_hyphen_values = true)]
    pub a: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub b: f64,
    /// Number of Monte Carlo replicas.
    #[arg(long)]
    pub mc: Option<u64>,
}

#[derive(Debug, Args)]
pub struct CodingArgs {
    #[arg(long)]
    pub measure: PathBuf,
    #[arg(long = "N")]
    pub n: u32,
    #[arg(long, default_value_t = 0.5)]
    pub gamma: f64,
    /// Error tolerance for the optimal block code.
    #[arg(long)]
    pub eps: Option<f64>,
    /// Width of the typical set to describe.
    #[arg(long = "typical-eps")]
    pub typical_eps: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Bayes,
    Stein,
    Chernoff,
    Hoeffding,
}

#[derive(Debug, Args)]
pub struct TestingArgs {
    #[arg(long)]
    pub p: PathBuf,
    #[arg(long)]
    pub q: PathBuf,
    #[arg(long, value_enum)]
    pub mode: Mode,
    #[arg(long, default_value_t = 0.5)]
    pub gamma: f64,
    #[arg(long, default_value_t = 0.5)]
    pub prior: f64,
    #[arg(long = "s-grid", value_parser = parse_grid, allow_hyphen_values = true)]
    pub s_grid: Option<Grid>,
    #[arg(long = "theta-grid", value_parser = parse_grid, allow_hyphen_values = true)]
    pub theta_grid: Option<Grid>,
    /// Sample sizes, `a:b:step` or a comma-separated list.
    #[arg(long = "N", value_parser = parse_n_grid)]
    pub n: Option<NGrid>,
    /// Exchange the roles of the two measures.
    #[arg(long)]
    pub swap: bool,
}

#[derive(Debug, Args)]
pub struct FluctuationArgs {
    #[arg(long)]
    pub measure: PathBuf,
    #[arg(long)]
    pub involution: PathBuf,
}

#[derive(Debug, Args)]
pub struct SanovArgs {
    #[arg(long)]
    pub measure: PathBuf,
    #[arg(long)]
    pub constraint: PathBuf,
    #[arg(long = "N-grid", value_parser = parse_n_grid)]
    pub n_grid: NGrid,
    /// Simplex grid spacing for sets without a closed-form rate.
    #[arg(long, default_value_t = 0.01)]
    pub resolution: f64,
}

#[derive(Debug, Args)]
pub struct FisherArgs {
    #[arg(long)]
    pub family: PathBuf,
    #[arg(long = "theta-grid", value_parser = parse_grid, allow_hyphen_values = true)]
    pub theta_grid: Grid,
}

#[derive(Debug, Args)]
pub struct PairArgs {
    #[arg(long)]
    pub p: PathBuf,
    #[arg(long)]
    pub q: PathBuf,
}

#[derive(Debug, Args)]
pub struct MleArgs {
    #[arg(long)]
    pub family: PathBuf,
    #[arg(long)]
    pub sample: PathBuf,
    #[arg(long = "grid-points", default_value_t = DEFAULT_GRID_POINTS)]
    pub grid_points: usize,
}

#[derive(Debug, Args)]
pub struct EfficiencyArgs {
    #[arg(long)]
    pub family: PathBuf,
    #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
    pub theta: Vec<f64>,
    #[arg(long = "N-grid", value_parser = parse_n_grid)]
    pub n_grid: NGrid,
    #[arg(long, default_value_t = 1000)]
    pub reps: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Grid(pub Vec<f64>);

#[derive(Debug, Clone, PartialEq)]
pub struct NGrid(pub Vec<u32>);

/// `a:b:step` (inclusive of `b` up to rounding) or `x,y,z`.
pub fn parse_grid(s: &str) -> Result<Grid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
    match parts.as_slice() {
        [a, b, step] => {
            let (a, b, step) = (num(a)?, num(b)?, num(step)?);
            if !(step > 0.0) || !(b >= a) || !a.is_finite() || !b.is_finite() {
                return Err("grid needs a ≤ b and step > 0".into());
            }
            let n = ((b - a) / step + 1e-9).floor() as usize;
            if n > 10_000_000 {
                return Err("grid too long".into());
            }
            // trims accumulated representation error such as 1.1e-16 for 0
            let snap = |x: f64| if x.abs() < 1e6 { (x * 1e12).round() / 1e12 } else { x };
            Ok(Grid((0..=n).map(|k| snap(a + k as f64 * step)).collect()))
        }
        [list] => list.split(',').map(num).collect::<Result<_, _>>().map(Grid),
        _ => Err("expected a:b:step or a comma-separated list".into()),
    }
}

pub fn parse_n_grid(s: &str) -> Result<NGrid, String> {
    let int = |t: &str| t.trim().parse::<u32>().map_err(|e| format!("{t:?}: {e}"));
    let parts: Vec<&str> = s.split(':').collect();
    let v: Vec<u32> = match parts.as_slice() {
        [a, b, step] => {
            let (a, b, step) = (int(a)?, int(b)?, int(step)?);
            if step == 0 || b < a {
                return Err("grid needs a ≤ b and step > 0".into());
            }
            (a..=b).step_by(step as usize).collect()
        }
        [list] => list.split(',').map(int).collect::<Result<_, _>>()?,
        _ => return Err("expected a:b:step or a comma-separated list".into()),
    };
    if v.contains(&0) {
        return Err("sample sizes must be positive".into());
    }
    Ok(NGrid(v))
}

fn obj(pairs: Vec<(&str, Value)>) -> Map<String, Value> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn alpha_values(pairs: &[(f64, f64)], scale: f64) -> Value {
    Value::Array(
        pairs
            .iter()
            .map(|&(a, v)| json!({"alpha": num(a), "value": num(v * scale)}))
            .collect(),
    )
}

fn big(x: Option<u128>) -> Value {
    match x {
        Some(v) => u64::try_from(v).map_or_else(|_| Value::String(v.to_string()), Value::from),
        None => Value::Null,
    }
}

/// Runs one parsed command and renders its report.
pub fn run(cli: &Cli) -> Result<String, CliError> {
    let report = build(cli)?;
    Ok(report.render(cli.format.unwrap_or_else(|| report.default_format())))
}

pub fn build(cli: &Cli) -> Result<Report, CliError> {
    let cap = cli.cap.unwrap_or(DEFAULT_ENUMERATION_CAP);
    match &cli.command {
        Command::Entropy(a) => entropy(a),
        Command::Divergence(a) => divergence(a),
        Command::Rate(a) => rate(a),
        Command::Cramer(a) => cramer(a, cap, cli.seed),
        Command::Coding(a) => coding(a, cap),
        Command::Testing(a) => testing(a, cap),
        Command::Fluctuation(a) => fluctuation(a),
        Command::Sanov(a) => sanov(a, cap),
        Command::Fisher(a) => fisher(a),
        Command::Geodesic(a) => geodesic(a),
        Command::Mle(a) => estimate(a),
        Command::Efficiency(a) => efficiency(a, cli.seed),
    }
}

fn entropy(a: &EntropyArgs) -> Result<Report, CliError> {
    let p = load_measure(&a.measure)?;
    let r = entropy_report(&p, &a.alpha);
    let scale = if a.bits { 1.0 / LN_2 } else { 1.0 };
    Ok(Report::object(
        "entropy",
        obj(vec![
            ("unit", (if a.bits { "bit" } else { "nat" }).into()),
            ("outcomes", p.len().into()),
            ("shannon", num(r.shannon * scale)),
            ("hartley", num(r.hartley * scale)),
            ("renyi", alpha_values(&r.renyi, scale)),
        ]),
    ))
}

fn divergence(a: &DivergenceArgs) -> Result<Report, CliError> {
    let (p, q) = (load_measure(&a.p)?, load_measure(&a.q)?);
    let r = divergence_report(&p, &q, &a.alpha)?;
    let scale = if a.bits { 1.0 / LN_2 } else { 1.0 };
    Ok(Report::object(
        "divergence",
        obj(vec![
            ("unit", (if a.bits { "bit" } else { "nat" }).into()),
            ("kl", num(r.kl * scale)),
            ("renyi", alpha_values(&r.renyi, scale)),
            ("renyi_cgf", alpha_values(&r.renyi_cgf, scale)),
            ("js_entropy", num(r.js_entropy * scale)),
            ("js_metric", num((r.js_entropy * scale).sqrt())),
            ("variational", num(variational_distance(&p, &q)?)),
            ("pinsker_gap", num(pinsker_gap(&p, &q)?)),
        ]),
    ))
}

fn model(measure: &std::path::Path, rv: &std::path::Path) -> Result<CgfModel, CliError> {
    let p = load_measure(measure)?;
    let x = load_rv(rv, p.space())?;
    Ok(CgfModel::new(&p, &x)?)
}

fn rate(a: &RateArgs) -> Result<Report, CliError> {
    let m = model(&a.measure, &a.rv)?;
    let rows = a
        .theta_grid
        .0
        .iter()
        .map(|&t| {
            let (alpha, c) = match m.solve_alpha(t) {
                Ok(al) => (num(al), num(m.cgf(al))),
                Err(_) => (Value::Null, Value::Null),
            };
            vec![num(t), alpha, num(m.rate(t)), c]
        })
        .collect();
    let meta = obj(vec![("min", num(m.min())), ("max", num(m.max())), ("mean", num(m.mean()))]);
    Ok(Report::table("rate", &["theta", "alpha", "I", "C"], rows, meta))
}

fn cramer(a: &CramerArgs, cap: u64, seed: u64) -> Result<Report, CliError> {
    if !(a.a <= a.b) || a.n == 0 {
        return Err(CliError::Usage("need a ≤ b and N > 0".into()));
    }
    let m = model(&a.measure, &a.rv)?;
    let log_p = cramer_exact_log(&m, a.n, a.a, a.b, cap)?;
    let mean = m.mean();
    let inf_rate = if mean < a.a {
        m.rate(a.a)
    } else if mean > a.b {
        m.rate(a.b)
    } else {
        0.0
    };
    let mut fields = obj(vec![
        ("N", a.n.into()),
        ("a", num(a.a)),
        ("b", num(a.b)),
        ("log_probability", num(log_p)),
        ("probability", num(log_p.exp())),
        ("normalized", num(log_p / a.n as f64)),
        ("rate_infimum", num(inf_rate)),
        ("limit", num(-inf_rate)),
    ]);
    if let Some(reps) = a.mc {
        if reps == 0 {
            return Err(CliError::Usage("--mc needs at least one replica".into()));
        }
        let (est, se) = parallel::cramer_mc(&m, a.n, a.a, a.b, reps, seed);
        fields.insert(
            "monte_carlo".into(),
            json!({"replicas": reps, "seed": seed, "estimate": num(est), "standard_error": num(se)}),
        );
    }
    Ok(Report::object("cramer", fields))
}

fn coding(a: &CodingArgs, cap: u64) -> Result<Report, CliError> {
    let p = load_measure(&a.measure)?;
    let c = covering_exponent(&p, a.n, a.gamma, cap)?;
    let mut fields = obj(vec![
        ("N", a.n.into()),
        ("gamma", num(c.gamma)),
        ("c_N", num(c.c_n)),
        ("c_N_exact", big(c.c_n_exact)),
        ("log_c_N", num(c.log_c_n)),
        ("normalized", num(c.normalized)),
        ("entropy_target", num(c.entropy_target)),
    ]);
    if let Some(eps) = a.eps {
        let m = source_coding_optimum(&p, a.n, eps, cap)?;
        fields.insert(
            "source_coding".into(),
            json!({"eps": num(eps), "M_N": m, "rate_bits": num(m as f64 / a.n as f64), "target_bits": num(c.entropy_target / LN_2)}),
        );
    }
    if let Some(eps) = a.typical_eps {
        let t = typical_set_bounds(&p, a.n, eps, cap)?;
        fields.insert(
            "typical_set".into(),
            json!({
                "eps": num(eps),
                "probability": num(t.probability),
                "log_cardinality": num(t.log_cardinality),
                "cardinality": big(t.cardinality),
                "log_lower": num(t.log_lower),
                "log_upper": num(t.log_upper),
                "sandwich_holds": t.sandwich_holds,
            }),
        );
    }
    Ok(Report::object("coding", fields))
}

fn testing(a: &TestingArgs, cap: u64) -> Result<Report, CliError> {
    let (mut p, mut q) = (load_measure(&a.p)?, load_measure(&a.q)?);
    if a.swap {
        std::mem::swap(&mut p, &mut q);
    }
    let ns = a.n.as_ref().map(|g| g.0.clone()).unwrap_or_default();
    let swapped = ("swapped", Value::Bool(a.swap));
    match a.mode {
        Mode::Bayes => {
            let exact: Vec<Value> = ns
                .iter()
                .map(|&n| {
                    let l = bayes_error_product_log(&p, &q, a.prior, n, cap)?;
                    Ok(json!({"N": n, "log_error": num(l), "normalized": num(l / n as f64)}))
                })
                .collect::<Result<_, CliError>>()?;
            let chernoff = chernoff_exponent(&p, &q).ok();
            Ok(Report::object(
                "testing",
                obj(vec![
                    ("mode", "bayes".into()),
                    swapped,
                    ("prior", num(a.prior)),
                    ("bayes_error", num(bayes_error(&p, &q, a.prior)?)),
                    ("lower_bound", num(bayes_error_lower_bound(&p, &q, a.prior)?)),
                    ("chernoff_exponent", chernoff.map_or(Value::Null, |c| num(c.1))),
                    ("exact", Value::Array(exact)),
                ]),
            ))
        }
        Mode::Stein => {
            if ns.is_empty() {
                return Err(CliError::Usage("stein mode needs --N".into()));
            }
            let limit = -entropic_core::divergences::kl_divergence(&p, &q)?;
            let rows = ns
                .iter()
                .map(|&n| {
                    let s = stein_exponent(&p, &q, a.gamma, n, cap)?;
                    Ok(vec![n.into(), num(s.s_n), num(s.log_s_n), num(s.normalized), num(limit)])
                })
                .collect::<Result<_, CliError>>()?;
            let meta = obj(vec![("mode", "stein".into()), swapped, ("gamma", num(a.gamma))]);
            Ok(Report::table("testing", &["N", "s_N", "log_s_N", "normalized", "limit"], rows, meta))
        }
        Mode::Chernoff => {
            let (alpha, value) = chernoff_exponent(&p, &q)?;
            Ok(Report::object(
                "testing",
                obj(vec![
                    ("mode", "chernoff".into()),
                    swapped,
                    ("alpha", num(alpha)),
                    ("exponent", num(value)),
                ]),
            ))
        }
        Mode::Hoeffding => {
            let pair = TiltedPair::new(&p, &q)?;
            let meta = obj(vec![
                ("mode", "hoeffding".into()),
                swapped,
                ("S_PQ", num(pair.s_pq())),
                ("S_QP", num(pair.s_qp())),
            ]);
            if let Some(thetas) = &a.theta_grid {
                let n = match ns.as_slice() {
                    [n] => *n,
                    _ => return Err(CliError::Usage("a θ-grid needs exactly one --N".into())),
                };
                let rows = thetas
                    .0
                    .iter()
                    .map(|&t| {
                        let (e1, e2) = threshold_test_exponents(&p, &q, t, n, cap)?;
                        Ok(vec![num(t), num(pair.phi(t)), num(pair.phi_hat(t)), num(e1), num(e2)])
                    })
                    .collect::<Result<_, CliError>>()?;
                let cols = ["theta", "phi", "phi_hat", "type_I_exponent", "type_II_exponent"];
                return Ok(Report::table("testing", &cols, rows, meta));
            }
            let s_grid = match &a.s_grid {
                Some(g) => g.0.clone(),
                None => (1..=20).map(|k| pair.s_pq() * k as f64 / 21.0).collect(),
            };
            let rows = s_grid
                .iter()
                .map(|&s| {
                    let h = pair.psi(s)?;
                    let theta = pair.phi_hat_inverse(s)?;
                    let (rq, rp) = pair.tilted_attainment(s)?;
                    Ok(vec![num(s), num(h.psi), num(h.alpha), num(theta), num(-pair.phi(theta)), num(rq), num(rp)])
                })
                .collect::<Result<_, CliError>>()?;
            let cols = ["s", "psi", "alpha", "theta", "minus_phi", "S_RQ", "S_RP"];
            Ok(Report::table("testing", &cols, rows, meta))
        }
    }
}

fn fluctuation(a: &FluctuationArgs) -> Result<Report, CliError> {
    let p = load_measure(&a.measure)?;
    let theta = read_json::<InvolutionFile>(&a.involution)?.build()?;
    let d = ep_distribution(&p, &theta)?;
    let alphas: Vec<f64> = (0..=20).map(|k| k as f64 / 20.0).collect();
    let renyi = if p.is_faithful() {
        num(renyi_symmetry_check(&p, &theta, &alphas)?)
    } else {
        Value::Null
    };
    Ok(Report::object(
        "fluctuation",
        obj(vec![
            ("atoms", Value::Array(d.atoms.iter().map(|&(s, m)| json!([num(s), num(m)])).collect())),
            ("max_violation", num(fluctuation_check(&d))),
            ("mean_entropy_production", num(mean_entropy_production(&p, &theta)?)),
            ("renyi_asymmetry", renyi),
        ]),
    ))
}

fn sanov(a: &SanovArgs, cap: u64) -> Result<Report, CliError> {
    let p = load_measure(&a.measure)?;
    let gamma = read_json::<ConstraintFile>(&a.constraint)?.build_on(p.space())?;
    let e = sanov_experiment(&p, &gamma, &a.n_grid.0, a.resolution, cap)?;
    let rows = e
        .rows
        .iter()
        .map(|r| {
            vec![
                r.n.into(),
                num(r.probability),
                num(r.exponent),
                num(e.limit),
                num(r.gap),
                num(r.envelope),
                r.within.into(),
            ]
        })
        .collect();
    let method = match e.rate.method {
        RateMethod::Contraction => json!({"kind": "contraction"}),
        RateMethod::Grid { resolution } => json!({"kind": "grid", "resolution": num(resolution)}),
    };
    let meta = obj(vec![
        ("rate", num(e.rate.value)),
        ("method", method),
        ("all_within", e.all_within.into()),
    ]);
    let cols = ["N", "probability", "exponent", "limit", "gap", "envelope", "within"];
    Ok(Report::table("sanov", &cols, rows, meta))
}

fn fisher(a: &FisherArgs) -> Result<Report, CliError> {
    let f = load_family(&a.family)?;
    let grid = &a.theta_grid.0;
    let (mut energy, mut length) = (0.0, 0.0);
    let mut rows = Vec::with_capacity(grid.len());
    for (k, &t) in grid.iter().enumerate() {
        if k > 0 {
            let prev = grid[k - 1];
            energy += integrate(|s| fisher_info(&*f, s), prev, t)?.value;
            length += integrate(|s| Ok(fisher_info(&*f, s)?.sqrt()), prev, t)?.value;
        }
        rows.push(vec![num(t), num(fisher_info(&*f, t)?), num(energy), num(length)]);
    }
    let (lo, hi) = f.interval();
    let meta = obj(vec![("interval", json!([num(lo), num(hi)])), ("analytic", f.analytic().into())]);
    Ok(Report::table("fisher", &["theta", "info", "energy", "length"], rows, meta))
}

fn geodesic(a: &PairArgs) -> Result<Report, CliError> {
    let (p, q) = (load_measure(&a.p)?, load_measure(&a.q)?);
    let mut fields = obj(vec![("distance", num(geodesic_distance(&p, &q)?))]);
    if p.is_faithful() && q.is_faithful() {
        let r = path_report(&SegmentFamily::new(&p, &q)?)?;
        let sym = entropic_core::divergences::kl_divergence(&p, &q)? + entropic_core::divergences::kl_divergence(&q, &p)?;
        fields.insert(
            "segment".into(),
            json!({
                "energy": num(r.energy),
                "length": num(r.length),
                "symmetrized_kl": num(sym),
                "endpoint_distance": num(r.endpoint_distance),
                "cauchy_schwarz_holds": r.cauchy_schwarz_holds,
                "lower_bounds_hold": r.lower_bounds_hold,
            }),
        );
    }
    Ok(Report::object("geodesic", fields))
}

fn estimate(a: &MleArgs) -> Result<Report, CliError> {
    let f = load_family(&a.family)?;
    let sample = read_json::<SampleFile>(&a.sample)?.indices(f.space())?;
    let r = mle(&*f, &sample, a.grid_points, DEFAULT_REFINE_TOL)?;
    let (lo, hi) = f.interval();
    Ok(Report::object(
        "mle",
        obj(vec![
            ("N", sample.len().into()),
            ("interval", json!([num(lo), num(hi)])),
            ("estimate", num(r.estimate)),
            ("boundary_hit", r.boundary_hit.into()),
            ("loglik_at_estimate", num(r.loglik_at_estimate)),
            ("grid_points", r.grid_points.into()),
        ]),
    ))
}

fn efficiency(a: &EfficiencyArgs, seed: u64) -> Result<Report, CliError> {
    if a.reps < 2 {
        return Err(CliError::Usage("--reps must be at least 2".into()));
    }
    let f = load_family(&a.family)?;
    let ns: Vec<usize> = a.n_grid.0.iter().map(|&n| n as usize).collect();
    let rows = parallel::efficiency(&*f, &a.theta, &ns, a.reps, seed)?
        .into_iter()
        .map(|r| {
            vec![
                num(r.theta),
                r.n.into(),
                r.reps.into(),
                num(r.scaled_risk),
                num(r.scaled_risk_se),
                num(r.mean_abs_error),
                num(r.mean_abs_error_se),
                num(r.inverse_info),
                r.boundary_hits.into(),
            ]
        })
        .collect();
    let cols = [
        "theta",
        "N",
        "reps",
        "scaled_risk",
        "scaled_risk_se",
        "mean_abs_error",
        "mean_abs_error_se",
        "inverse_info",
        "boundary_hits",
    ];
    Ok(Report::table("efficiency", &cols, rows, obj(vec![("seed", seed.into())])))
}
