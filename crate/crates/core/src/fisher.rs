//! Parametric families on an interval, Fisher information, local divergence
//! limits, path energy and length, geodesic distance and the Chentsov
//! monotonicity of the Fisher metric.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::cell::Cell;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::math::simpson;
use crate::measures::{OutcomeSpace, ProbMeasure, RandomVar, Space, StochasticMap};

/// A `C²` family `θ ↦ P_θ` of measures on a fixed finite space, `θ ∈ [a, b]`.
///
/// `weights` may be called slightly outside `[a, b]` by finite differences.
pub trait ParametricFamily {
    fn space(&self) -> &Space;
    fn interval(&self) -> (f64, f64);
    fn weights(&self, theta: f64) -> Vec<f64>;

    /// `ṗ_θ`; five-point central differences unless overridden.
    fn d1(&self, theta: f64) -> Vec<f64> {
        let h = fd_step(self.interval(), 1e-6, 1e-5);
        stencil(self, theta, h, &[1.0, -8.0, 0.0, 8.0, -1.0], 12.0 * h)
    }

    /// `p̈_θ`; five-point central differences unless overridden.
    fn d2(&self, theta: f64) -> Vec<f64> {
        let h = fd_step(self.interval(), 1e-4, 1e-3);
        stencil(self, theta, h, &[-1.0, 16.0, -30.0, 16.0, -1.0], 12.0 * h * h)
    }

    /// Whether `d1`/`d2` are exact.
    fn analytic(&self) -> bool {
        false
    }
}

/// `max(floor, rel·(b − a))`.
fn fd_step((a, b): (f64, f64), floor: f64, rel: f64) -> f64 {
    floor.max(rel * (b - a))
}

fn stencil<F: ParametricFamily + ?Sized>(f: &F, theta: f64, h: f64, c: &[f64; 5], denom: f64) -> Vec<f64> {
    let mut out = vec![0.0; f.space().len()];
    for (j, &cj) in c.iter().enumerate() {
        if cj == 0.0 {
            continue;
        }
        let w = f.weights(theta + (j as f64 - 2.0) * h);
        for (o, x) in out.iter_mut().zip(w) {
            *o += cj * x;
        }
    }
    for o in out.iter_mut() {
        *o /= denom;
    }
    out
}

fn check_interval(a: f64, b: f64) -> Result<()> {
    if a.is_finite() && b.is_finite() && a < b {
        Ok(())
    } else {
        Err(Error::InvalidArgument("interval must satisfy a < b".into()))
    }
}

/// `(1 − θ, θ)` on `{0, 1}`.
#[derive(Debug, Clone)]
pub struct Bernoulli {
    space: Space,
    a: f64,
    b: f64,
}

impl Bernoulli {
    /// Requires `0 < a < b < 1`.
    pub fn new(a: f64, b: f64) -> Result<Self> {
        check_interval(a, b)?;
        if !(a > 0.0 && b < 1.0) {
            return Err(Error::InvalidArgument("Bernoulli interval must lie inside (0, 1)".into()));
        }
        Ok(Bernoulli {
            space: OutcomeSpace::indexed(2),
            a,
            b,
        })
    }
}

impl ParametricFamily for Bernoulli {
    fn space(&self) -> &Space {
        &self.space
    }
    fn interval(&self) -> (f64, f64) {
        (self.a, self.b)
    }
    fn weights(&self, theta: f64) -> Vec<f64> {
        vec![1.0 - theta, theta]
    }
    fn d1(&self, _: f64) -> Vec<f64> {
        vec![-1.0, 1.0]
    }
    fn d2(&self, _: f64) -> Vec<f64> {
        vec![0.0, 0.0]
    }
    fn analytic(&self) -> bool {
        true
    }
}

/// `P_θ(ω) ∝ base(ω) e^{θX(ω)}`.
#[derive(Debug, Clone)]
pub struct ExponentialFamily {
    space: Space,
    ln_base: Vec<f64>,
    x: Vec<f64>,
    a: f64,
    b: f64,
}

impl ExponentialFamily {
    /// Uniform base measure.
    pub fn new(x: &RandomVar, a: f64, b: f64) -> Result<Self> {
        Self::with_base(&ProbMeasure::uniform(x.space().clone()), x, a, b)
    }

    pub fn with_base(base: &ProbMeasure, x: &RandomVar, a: f64, b: f64) -> Result<Self> {
        check_interval(a, b)?;
        if !crate::measures::same_space(base.space(), x.space()) {
            return Err(Error::SpaceMismatch);
        }
        if let Some(i) = base.weights().iter().position(|&w| w == 0.0) {
            return Err(Error::FaithfulnessError(i));
        }
        Ok(ExponentialFamily {
            space: base.space().clone(),
            ln_base: base.weights().iter().map(|w| w.ln()).collect(),
            x: x.values().to_vec(),
            a,
            b,
        })
    }

    /// `(P_θ, E_θ X, Var_θ X)`.
    fn moments(&self, theta: f64) -> (Vec<f64>, f64, f64) {
        let logs: Vec<f64> = self
            .ln_base
            .iter()
            .zip(&self.x)
            .map(|(l, v)| l + theta * v)
            .collect();
        let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut w: Vec<f64> = logs.iter().map(|l| (l - top).exp()).collect();
        let z: f64 = w.iter().sum();
        for x in w.iter_mut() {
            *x /= z;
        }
        let mean: f64 = w.iter().zip(&self.x).map(|(p, v)| p * v).sum();
        let var: f64 = w
            .iter()
            .zip(&self.x)
            .map(|(p, v)| p * (v - mean) * (v - mean))
            .sum();
        (w, mean, var)
    }

    /// `Var_θ(X)`.
    pub fn variance(&self, theta: f64) -> f64 {
        self.moments(theta).2
    }
}

impl ParametricFamily for ExponentialFamily {
    fn space(&self) -> &Space {
        &self.space
    }
    fn interval(&self) -> (f64, f64) {
        (self.a, self.b)
    }
    fn weights(&self, theta: f64) -> Vec<f64> {
        self.moments(theta).0
    }
    fn d1(&self, theta: f64) -> Vec<f64> {
        let (w, m, _) = self.moments(theta);
        w.iter().zip(&self.x).map(|(p, v)| p * (v - m)).collect()
    }
    fn d2(&self, theta: f64) -> Vec<f64> {
        let (w, m, var) = self.moments(theta);
        w.iter()
            .zip(&self.x)
            .map(|(p, v)| p * ((v - m) * (v - m) - var))
            .collect()
    }
    fn analytic(&self) -> bool {
        true
    }
}

/// `θ p + (1 − θ) q` on `[0, 1]`.
#[derive(Debug, Clone)]
pub struct SegmentFamily {
    p: ProbMeasure,
    q: ProbMeasure,
}

impl SegmentFamily {
    pub fn new(p: &ProbMeasure, q: &ProbMeasure) -> Result<Self> {
        if !crate::measures::same_space(p.space(), q.space()) {
            return Err(Error::SpaceMismatch);
        }
        Ok(SegmentFamily {
            p: p.clone(),
            q: q.clone(),
        })
    }
}

impl ParametricFamily for SegmentFamily {
    fn space(&self) -> &Space {
        self.p.space()
    }
    fn interval(&self) -> (f64, f64) {
        (0.0, 1.0)
    }
    fn weights(&self, theta: f64) -> Vec<f64> {
        self.p
            .weights()
            .iter()
            .zip(self.q.weights())
            .map(|(a, b)| theta * a + (1.0 - theta) * b)
            .collect()
    }
    fn d1(&self, _: f64) -> Vec<f64> {
        self.p
            .weights()
            .iter()
            .zip(self.q.weights())
            .map(|(a, b)| a - b)
            .collect()
    }
    fn d2(&self, _: f64) -> Vec<f64> {
        vec![0.0; self.p.len()]
    }
    fn analytic(&self) -> bool {
        true
    }
}

/// Piecewise-linear interpolation of tabulated measures, extended linearly
/// beyond the first and last nodes. Derivatives by finite differences.
#[derive(Debug, Clone)]
pub struct TableFamily {
    space: Space,
    thetas: Vec<f64>,
    measures: Vec<Vec<f64>>,
}

impl TableFamily {
    pub fn new(space: Space, thetas: Vec<f64>, measures: Vec<Vec<f64>>) -> Result<Self> {
        if thetas.len() < 2 || thetas.len() != measures.len() {
            return Err(Error::InvalidArgument(
                "table needs at least two nodes and one measure per node".into(),
            ));
        }
        if thetas.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidArgument("table nodes must be strictly increasing".into()));
        }
        for m in &measures {
            ProbMeasure::new(space.clone(), m.clone())?;
        }
        Ok(TableFamily {
            space,
            thetas,
            measures,
        })
    }
}

impl ParametricFamily for TableFamily {
    fn space(&self) -> &Space {
        &self.space
    }
    fn interval(&self) -> (f64, f64) {
        (self.thetas[0], *self.thetas.last().unwrap())
    }
    fn weights(&self, theta: f64) -> Vec<f64> {
        let n = self.thetas.len();
        let i = self.thetas.partition_point(|&t| t <= theta).clamp(1, n - 1) - 1;
        let (t0, t1) = (self.thetas[i], self.thetas[i + 1]);
        let s = (theta - t0) / (t1 - t0);
        self.measures[i]
            .iter()
            .zip(&self.measures[i + 1])
            .map(|(a, b)| a + s * (b - a))
            .collect()
    }
}

pub type WeightFn = Arc<dyn Fn(f64) -> Vec<f64> + Send + Sync>;

/// A family given by closures; derivatives default to finite differences.
#[derive(Clone)]
pub struct FnFamily {
    space: Space,
    a: f64,
    b: f64,
    weights: WeightFn,
    d1: Option<WeightFn>,
    d2: Option<WeightFn>,
}

impl core::fmt::Debug for FnFamily {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("FnFamily")
            .field("space", &self.space)
            .field("interval", &(self.a, self.b))
            .field("analytic", &self.d1.is_some())
            .finish()
    }
}

impl FnFamily {
    pub fn new<F>(space: Space, a: f64, b: f64, weights: F) -> Result<Self>
    where
        F: Fn(f64) -> Vec<f64> + Send + Sync + 'static,
    {
        check_interval(a, b)?;
        Ok(FnFamily {
            space,
            a,
            b,
            weights: Arc::new(weights),
            d1: None,
            d2: None,
        })
    }

    /// Supplies exact first and second derivatives.
    pub fn with_derivatives<G, H>(mut self, d1: G, d2: H) -> Self
    where
        G: Fn(f64) -> Vec<f64> + Send + Sync + 'static,
        H: Fn(f64) -> Vec<f64> + Send + Sync + 'static,
    {
        self.d1 = Some(Arc::new(d1));
        self.d2 = Some(Arc::new(d2));
        self
    }
}

impl ParametricFamily for FnFamily {
    fn space(&self) -> &Space {
        &self.space
    }
    fn interval(&self) -> (f64, f64) {
        (self.a, self.b)
    }
    fn weights(&self, theta: f64) -> Vec<f64> {
        (self.weights)(theta)
    }
    fn d1(&self, theta: f64) -> Vec<f64> {
        match &self.d1 {
            Some(f) => f(theta),
            None => {
                let h = fd_step(self.interval(), 1e-6, 1e-5);
                stencil(self, theta, h, &[1.0, -8.0, 0.0, 8.0, -1.0], 12.0 * h)
            }
        }
    }
    fn d2(&self, theta: f64) -> Vec<f64> {
        match &self.d2 {
            Some(f) => f(theta),
            None => {
                let h = fd_step(self.interval(), 1e-4, 1e-3);
                stencil(self, theta, h, &[-1.0, 16.0, -30.0, 16.0, -1.0], 12.0 * h * h)
            }
        }
    }
    fn analytic(&self) -> bool {
        self.d1.is_some()
    }
}

/// `θ ↦ Φ(P_θ)`; derivatives are pushed through the linear map.
#[derive(Debug, Clone)]
pub struct PushForwardFamily<F> {
    inner: F,
    phi: StochasticMap,
}

impl<F: ParametricFamily> PushForwardFamily<F> {
    pub fn new(inner: F, phi: StochasticMap) -> Result<Self> {
        if !crate::measures::same_space(inner.space(), phi.from_space()) {
            return Err(Error::SpaceMismatch);
        }
        Ok(PushForwardFamily { inner, phi })
    }

    fn push(&self, v: &[f64]) -> Vec<f64> {
        self.phi
            .apply_vector(v)
            .expect("vector length checked at construction")
    }
}

impl<F: ParametricFamily> ParametricFamily for PushForwardFamily<F> {
    fn space(&self) -> &Space {
        self.phi.to_space()
    }
    fn interval(&self) -> (f64, f64) {
        self.inner.interval()
    }
    fn weights(&self, theta: f64) -> Vec<f64> {
        self.push(&self.inner.weights(theta))
    }
    fn d1(&self, theta: f64) -> Vec<f64> {
        self.push(&self.inner.d1(theta))
    }
    fn d2(&self, theta: f64) -> Vec<f64> {
        self.push(&self.inner.d2(theta))
    }
    fn analytic(&self) -> bool {
        self.inner.analytic()
    }
}

fn check_theta<F: ParametricFamily + ?Sized>(f: &F, theta: f64) -> Result<()> {
    let (a, b) = f.interval();
    let slack = 1e-12 * (b - a);
    if theta >= a - slack && theta <= b + slack {
        Ok(())
    } else {
        Err(Error::ThetaOutOfRange { theta, lo: a, hi: b })
    }
}

fn faithful_weights(w: &[f64]) -> Result<()> {
    match w.iter().position(|&x| !(x > 0.0)) {
        Some(i) => Err(Error::FaithfulnessError(i)),
        None => Ok(()),
    }
}

/// `P_θ` after range and faithfulness checks.
pub fn measure_at<F: ParametricFamily + ?Sized>(f: &F, theta: f64) -> Result<ProbMeasure> {
    check_theta(f, theta)?;
    let w = f.weights(theta);
    faithful_weights(&w)?;
    ProbMeasure::new(f.space().clone(), w)
}

/// `𝓘(θ) = Σ ṗ²/p`.
pub fn fisher_info<F: ParametricFamily + ?Sized>(f: &F, theta: f64) -> Result<f64> {
    check_theta(f, theta)?;
    let w = f.weights(theta);
    faithful_weights(&w)?;
    Ok(metric_norm(&w, &f.d1(theta)))
}

/// `g^F_p(ζ, ζ) = Σ ζ²/p`.
fn metric_norm(p: &[f64], zeta: &[f64]) -> f64 {
    p.iter().zip(zeta).map(|(a, z)| z * z / a).sum()
}

/// The three expressions of the Fisher information and the score mean.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FisherDiagnostics {
    /// `Σ ṗ²/p`.
    pub info: f64,
    /// `Var_θ(Ṡ_θ)` with `S_θ = −log p_θ`.
    pub score_variance: f64,
    /// `E_θ(S̈_θ)`.
    pub hessian_mean: f64,
    /// `E_θ(Ṡ_θ)`, zero for a family of probability measures.
    pub score_mean: f64,
    pub analytic: bool,
}

impl FisherDiagnostics {
    /// Largest discrepancy between the three formulas.
    pub fn spread(&self) -> f64 {
        let v = [self.info, self.score_variance, self.hessian_mean];
        let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
        hi - lo
    }
}

pub fn fisher_diagnostics<F: ParametricFamily + ?Sized>(f: &F, theta: f64) -> Result<FisherDiagnostics> {
    check_theta(f, theta)?;
    let w = f.weights(theta);
    faithful_weights(&w)?;
    let d1 = f.d1(theta);
    let d2 = f.d2(theta);
    let mut score_mean = 0.0;
    let mut score_sq = 0.0;
    let mut hessian_mean = 0.0;
    for ((&p, &a), &b) in w.iter().zip(&d1).zip(&d2) {
        let score = -a / p;
        score_mean += p * score;
        score_sq += p * score * score;
        hessian_mean += p * (-b / p + score * score);
    }
    Ok(FisherDiagnostics {
        info: metric_norm(&w, &d1),
        score_variance: score_sq - score_mean * score_mean,
        hessian_mean,
        score_mean,
        analytic: f.analytic(),
    })
}

/// `Σ [a log(a/b) − (a − b)]`: the relative entropy of two probability
/// vectors without the first-order cancellation.
fn kl_close(p: &[f64], q: &[f64]) -> f64 {
    p.iter()
        .zip(q)
        .map(|(&a, &b)| {
            if a == 0.0 {
                b
            } else {
                let d = (a - b) / b;
                a * d.ln_1p() - (a - b)
            }
        })
        .sum()
}

fn js_close(p: &[f64], q: &[f64]) -> f64 {
    let m: Vec<f64> = p.iter().zip(q).map(|(a, b)| 0.5 * (a + b)).collect();
    0.5 * (kl_close(p, &m) + kl_close(q, &m))
}

/// Polynomial extrapolation to `ε = 0` (Neville) of samples `(ε_k, y_k)`.
pub fn extrapolate_to_zero(eps: &[f64], ys: &[f64]) -> f64 {
    let mut t: Vec<f64> = ys.to_vec();
    let n = t.len();
    for m in 1..n {
        for i in 0..n - m {
            let (xi, xj) = (eps[i], eps[i + m]);
            t[i] = (xj * t[i] - xi * t[i + 1]) / (xj - xi);
        }
    }
    t[0]
}

pub const DEFAULT_EPS_GRID: [f64; 3] = [1e-2, 1e-3, 1e-4];

/// Extrapolated small-`ε` limits of divergences between `P_{θ+ε}` and `P_θ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalLimits {
    /// `lim S(P_{θ+ε}|P_θ)/ε²`, expected `𝓘/2`.
    pub kl_forward: f64,
    /// `lim S(P_θ|P_{θ+ε})/ε²`, expected `𝓘/2`.
    pub kl_reverse: f64,
    /// `lim S_JS(P_{θ+ε}, P_θ)/ε²`, expected `𝓘/8`.
    pub js: f64,
    pub info: f64,
}

pub fn local_limits<F: ParametricFamily + ?Sized>(f: &F, theta: f64, eps_grid: &[f64]) -> Result<LocalLimits> {
    if eps_grid.is_empty() {
        return Err(Error::InvalidArgument("empty epsilon grid".into()));
    }
    let info = fisher_info(f, theta)?;
    let p0 = f.weights(theta);
    let mut fwd = Vec::with_capacity(eps_grid.len());
    let mut rev = Vec::with_capacity(eps_grid.len());
    let mut js = Vec::with_capacity(eps_grid.len());
    for &e in eps_grid {
        let pe = measure_at(f, theta + e)?;
        let pe = pe.weights();
        let e2 = e * e;
        fwd.push(kl_close(pe, &p0) / e2);
        rev.push(kl_close(&p0, pe) / e2);
        js.push(js_close(pe, &p0) / e2);
    }
    Ok(LocalLimits {
        kl_forward: extrapolate_to_zero(eps_grid, &fwd),
        kl_reverse: extrapolate_to_zero(eps_grid, &rev),
        js: extrapolate_to_zero(eps_grid, &js),
        info,
    })
}

/// `(forward, reverse)` local relative-entropy limits, each expected `𝓘(θ)/2`.
pub fn local_kl_limit<F: ParametricFamily + ?Sized>(f: &F, theta: f64, eps_grid: &[f64]) -> Result<(f64, f64)> {
    let l = local_limits(f, theta, eps_grid)?;
    Ok((l.kl_forward, l.kl_reverse))
}

/// Result of an adaptive Simpson integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub panels: usize,
}

pub const INITIAL_PANELS: usize = 256;
pub const MAX_PANELS: usize = 1 << 20;
pub const QUADRATURE_RTOL: f64 = 1e-8;

/// Composite Simpson on `[a, b]`, doubling panels until the relative change
/// drops below `1e-8`.
pub fn integrate<G: FnMut(f64) -> Result<f64>>(mut g: G, a: f64, b: f64) -> Result<Quadrature> {
    let err: Cell<Option<Error>> = Cell::new(None);
    let mut eval = |x: f64| match g(x) {
        Ok(v) => v,
        Err(e) => {
            err.set(Some(e));
            f64::NAN
        }
    };
    let mut panels = INITIAL_PANELS;
    let mut prev = simpson(&mut eval, a, b, panels);
    if let Some(e) = err.take() {
        return Err(e);
    }
    while panels < MAX_PANELS {
        panels *= 2;
        let cur = simpson(&mut eval, a, b, panels);
        if let Some(e) = err.take() {
            return Err(e);
        }
        if (cur - prev).abs() <= QUADRATURE_RTOL * cur.abs() || cur == prev {
            return Ok(Quadrature { value: cur, panels });
        }
        prev = cur;
    }
    Err(Error::QuadratureNonConvergence { panels })
}

/// `ℰ = ∫ 𝓘(θ) dθ` over the family interval.
pub fn path_energy<F: ParametricFamily + ?Sized>(f: &F) -> Result<Quadrature> {
    let (a, b) = f.interval();
    integrate(|t| fisher_info(f, t), a, b)
}

/// `ℒ = ∫ √𝓘(θ) dθ` over the family interval.
pub fn path_length<F: ParametricFamily + ?Sized>(f: &F) -> Result<Quadrature> {
    let (a, b) = f.interval();
    integrate(|t| fisher_info(f, t).map(f64::sqrt), a, b)
}

/// Energy, length and the bounds that tie them to the endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathReport {
    pub energy: f64,
    pub length: f64,
    /// `d_V(p_a, p_b)`.
    pub endpoint_distance: f64,
    /// `ℒ² ≤ (b − a) ℰ`.
    pub cauchy_schwarz_holds: bool,
    /// `ℰ ≥ d_V²/(b − a)` and `ℒ ≥ d_V`.
    pub lower_bounds_hold: bool,
}

pub fn path_report<F: ParametricFamily + ?Sized>(f: &F) -> Result<PathReport> {
    let (a, b) = f.interval();
    let energy = path_energy(f)?.value;
    let length = path_length(f)?.value;
    let pa = measure_at(f, a)?;
    let pb = measure_at(f, b)?;
    let dv = crate::measures::variational_distance(&pa, &pb)?;
    let slack = 1e-9 * energy.max(1.0);
    Ok(PathReport {
        energy,
        length,
        endpoint_distance: dv,
        cauchy_schwarz_holds: length * length <= (b - a) * energy + slack,
        lower_bounds_hold: energy + slack >= dv * dv / (b - a) && length + slack >= dv,
    })
}

/// `arccos Σ √(p q)`, with the sum clamped to `[−1, 1]`.
pub fn geodesic_distance(p: &ProbMeasure, q: &ProbMeasure) -> Result<f64> {
    if !crate::measures::same_space(p.space(), q.space()) {
        return Err(Error::SpaceMismatch);
    }
    let bc: f64 = p
        .weights()
        .iter()
        .zip(q.weights())
        .map(|(a, b)| (a * b).sqrt())
        .sum();
    Ok(bc.clamp(-1.0, 1.0).acos())
}

/// `|e(ṡ, ṡ) − 𝓘(θ)/4|` with `s_θ = √p_θ`, where `ṡ` is taken by central
/// differences of the square roots.
pub fn sphere_speed_check<F: ParametricFamily + ?Sized>(f: &F, theta: f64) -> Result<f64> {
    let info = fisher_info(f, theta)?;
    let h = fd_step(f.interval(), 1e-6, 1e-5);
    let mut sdot = vec![0.0; f.space().len()];
    for (j, c) in [1.0, -8.0, 0.0, 8.0, -1.0].iter().enumerate() {
        if *c == 0.0 {
            continue;
        }
        let w = f.weights(theta + (j as f64 - 2.0) * h);
        faithful_weights(&w)?;
        for (s, x) in sdot.iter_mut().zip(w) {
            *s += c * x.sqrt() / (12.0 * h);
        }
    }
    let e: f64 = sdot.iter().map(|v| v * v).sum();
    Ok((e - 0.25 * info).abs())
}

/// `g^F_{Φ(p)}(Φζ, Φζ) − g^F_p(ζ, ζ)`, non-positive for every stochastic map.
pub fn chentsov_monotonicity_check(p: &ProbMeasure, zeta: &[f64], phi: &StochasticMap) -> Result<f64> {
    if !crate::measures::same_space(p.space(), phi.from_space()) {
        return Err(Error::SpaceMismatch);
    }
    if zeta.len() != p.len() {
        return Err(Error::LengthMismatch {
            expected: p.len(),
            got: zeta.len(),
        });
    }
    faithful_weights(p.weights())?;
    let scale: f64 = zeta.iter().map(|z| z.abs()).sum();
    if zeta.iter().sum::<f64>().abs() > 1e-9 * scale.max(1.0) {
        return Err(Error::InvalidArgument("tangent vector must sum to zero".into()));
    }
    let image = phi.apply_vector(p.weights())?;
    faithful_weights(&image)?;
    let image_zeta = phi.apply_vector(zeta)?;
    Ok(metric_norm(&image, &image_zeta) - metric_norm(p.weights(), zeta))
}

/// The congruent embedding splitting outcome `k` into `parts[k]` equal pieces.
pub fn block_splitting(from: &Space, parts: &[usize]) -> Result<StochasticMap> {
    if parts.len() != from.len() {
        return Err(Error::LengthMismatch {
            expected: from.len(),
            got: parts.len(),
        });
    }
    if parts.iter().any(|&l| l == 0) {
        return Err(Error::InvalidArgument("every outcome needs at least one part".into()));
    }
    let total: usize = parts.iter().sum();
    let mut rows = Vec::with_capacity(parts.len());
    let mut offset = 0;
    for &l in parts {
        let mut row = vec![0.0; total];
        for r in row[offset..offset + l].iter_mut() {
            *r = 1.0 / l as f64;
        }
        offset += l;
        rows.push(row);
    }
    StochasticMap::new(from.clone(), OutcomeSpace::indexed(total), rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divergences::kl_divergence;
    use core::f64::consts::FRAC_PI_4;

    fn pm(w: &[f64]) -> ProbMeasure {
        ProbMeasure::from_weights(w.to_vec()).unwrap()
    }

    #[test]
    fn bernoulli_information() {
        let b = Bernoulli::new(0.1, 0.9).unwrap();
        assert!((fisher_info(&b, 0.5).unwrap() - 4.0).abs() < 1e-12);
        for t in [0.2, 0.35, 0.8] {
            let d = fisher_diagnostics(&b, t).unwrap();
            assert!((d.info - 1.0 / (t - t * t)).abs() < 1e-10);
            assert!(d.spread() < 1e-8 && d.score_mean.abs() < 1e-10);
        }
        assert!(matches!(fisher_info(&b, 0.95), Err(Error::ThetaOutOfRange { .. })));
        assert!(Bernoulli::new(0.0, 0.5).is_err());
    }

    #[test]
    fn exponential_family_information_is_variance() {
        let x = RandomVar::from_values([-1.0, 0.3, 2.0].to_vec()).unwrap();
        let f = ExponentialFamily::new(&x, -1.0, 1.0).unwrap();
        for t in [-0.7, 0.0, 0.4] {
            let d = fisher_diagnostics(&f, t).unwrap();
            assert!((d.info - f.variance(t)).abs() < 1e-12);
            assert!(d.spread() < 1e-8);
        }
        // the same family through finite differences
        let xs = x.values().to_vec();
        let fd = FnFamily::new(x.space().clone(), -1.0, 1.0, move |t| {
            let w: Vec<f64> = xs.iter().map(|v| (t * v).exp()).collect();
            let z: f64 = w.iter().sum();
            w.iter().map(|v| v / z).collect()
        })
        .unwrap();
        for t in [-0.7, 0.0, 0.4] {
            let d = fisher_diagnostics(&fd, t).unwrap();
            assert!(!d.analytic);
            assert!((d.info - f.variance(t)).abs() < 1e-8);
            assert!(d.spread() < 1e-5);
        }
    }

    #[test]
    fn constant_family_has_zero_information() {
        let f = FnFamily::new(OutcomeSpace::indexed(3), 0.0, 1.0, |_| vec![0.2, 0.3, 0.5]).unwrap();
        assert!(fisher_info(&f, 0.5).unwrap() < 1e-20);
        let (l, r) = local_kl_limit(&f, 0.5, &DEFAULT_EPS_GRID).unwrap();
        assert!(l.abs() < 1e-12 && r.abs() < 1e-12);
        let e = path_energy(&f).unwrap();
        let len = path_length(&f).unwrap();
        assert!(e.value.abs() < 1e-20 && len.value.abs() < 1e-9);
    }

    #[test]
    fn local_limits_bernoulli() {
        let b = Bernoulli::new(0.1, 0.9).unwrap();
        let l = local_limits(&b, 0.5, &DEFAULT_EPS_GRID).unwrap();
        assert!((l.kl_forward - 2.0).abs() < 1e-6 && (l.kl_reverse - 2.0).abs() < 1e-6);
        // S_JS(P_{θ+ε}, P_θ) ≈ ε²𝓘/8
        assert!((l.js - 0.5).abs() < 1e-6, "{}", l.js);
        let l = local_limits(&b, 0.3, &DEFAULT_EPS_GRID).unwrap();
        assert!((2.0 * l.kl_forward - l.info).abs() < 1e-4);
    }

    #[test]
    fn segment_energy_is_symmetrized_divergence() {
        let (p, q) = (pm(&[0.2, 0.5, 0.3]), pm(&[0.6, 0.1, 0.3]));
        let f = SegmentFamily::new(&p, &q).unwrap();
        let e = path_energy(&f).unwrap().value;
        let want = kl_divergence(&p, &q).unwrap() + kl_divergence(&q, &p).unwrap();
        assert!((e - want).abs() < 1e-8);
        let r = path_report(&f).unwrap();
        assert!(r.cauchy_schwarz_holds && r.lower_bounds_hold);
        // on two letters the segment is a geodesic of length 2 arccos Σ√(pq)
        let (p2, q2) = (pm(&[0.2, 0.8]), pm(&[0.7, 0.3]));
        let len = path_length(&SegmentFamily::new(&p2, &q2).unwrap()).unwrap().value;
        assert!((len - 1.055_017_954_860_772_4).abs() < 1e-8);
        assert!((len - 2.0 * geodesic_distance(&p2, &q2).unwrap()).abs() < 1e-8);
    }

    #[test]
    fn sphere_speed() {
        let f = SegmentFamily::new(&pm(&[0.2, 0.5, 0.3]), &pm(&[0.6, 0.1, 0.3])).unwrap();
        for t in [0.1, 0.5, 0.9] {
            assert!(sphere_speed_check(&f, t).unwrap() < 1e-8);
        }
    }

    #[test]
    fn geodesic_examples() {
        let p = pm(&[0.3, 0.7]);
        assert_eq!(geodesic_distance(&p, &p).unwrap(), 0.0);
        let ch = pm(&[0.5, 0.5]);
        let mut prev = 0.0;
        for e in [1e-2, 1e-6, 1e-12] {
            let d = geodesic_distance(&ch, &pm(&[e, 1.0 - e])).unwrap();
            assert!(d > prev);
            prev = d;
        }
        assert!((prev - FRAC_PI_4).abs() < 1e-5);
    }

    #[test]
    fn chentsov_examples() {
        let p = pm(&[0.2, 0.5, 0.3]);
        let zeta = [0.1, -0.3, 0.2];
        let s = p.space().clone();
        assert_eq!(chentsov_monotonicity_check(&p, &zeta, &StochasticMap::identity(s.clone())).unwrap(), 0.0);
        let r = pm(&[0.5, 0.5]);
        let collapse = StochasticMap::rank_one(s.clone(), &r);
        let d = chentsov_monotonicity_check(&p, &zeta, &collapse).unwrap();
        assert!((d + metric_norm(p.weights(), &zeta)).abs() < 1e-12);
        let split = block_splitting(&s, &[2, 1, 3]).unwrap();
        assert!(chentsov_monotonicity_check(&p, &zeta, &split).unwrap().abs() < 1e-12);
        assert!(chentsov_monotonicity_check(&p, &[0.1, 0.1, 0.1], &split).is_err());
    }

    #[test]
    fn pushed_family_loses_information() {
        let b = Bernoulli::new(0.1, 0.9).unwrap();
        let s = b.space().clone();
        let phi = StochasticMap::new(s.clone(), s, [[0.8, 0.2].to_vec(), [0.3, 0.7].to_vec()].to_vec()).unwrap();
        let pushed = PushForwardFamily::new(b.clone(), phi).unwrap();
        for t in [0.2, 0.5, 0.7] {
            assert!(fisher_info(&pushed, t).unwrap() <= fisher_info(&b, t).unwrap());
        }
    }

    #[test]
    fn table_family() {
        let s = OutcomeSpace::indexed(2);
        let f = TableFamily::new(s, [0.0, 1.0].to_vec(), [[0.8, 0.2].to_vec(), [0.4, 0.6].to_vec()].to_vec()).unwrap();
        let seg = SegmentFamily::new(&pm(&[0.4, 0.6]), &pm(&[0.8, 0.2])).unwrap();
        for t in [0.0, 0.3, 1.0] {
            assert!((fisher_info(&f, t).unwrap() - fisher_info(&seg, t).unwrap()).abs() < 1e-6);
        }
    }

    #[test]
    fn neville_extrapolation_is_exact_on_quadratics() {
        let e = [0.3, 0.1, 0.02];
        let y: Vec<f64> = e.iter().map(|x| 1.5 - 2.0 * x + 7.0 * x * x).collect();
        assert!((extrapolate_to_zero(&e, &y) - 1.5).abs() < 1e-13);
    }
}
