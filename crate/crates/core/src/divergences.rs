//! Relative entropy, Rényi relative entropies, Jensen–Shannon entropy and the
//! variational principles.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::entropies::shannon_entropy;
use crate::error::{Error, Result};
use crate::math::{log_sum_exp, xlogy};
use crate::measures::{same_space, variational_distance, ProbMeasure, RandomVar};

#[derive(Debug, Clone, PartialEq)]
pub struct DivergenceReport {
    pub kl: f64,
    /// `(α, S_α(P|Q))` for `α ∈ (0, 1)`.
    pub renyi: Vec<(f64, f64)>,
    /// `(α, Ŝ_α(P|Q))`.
    pub renyi_cgf: Vec<(f64, f64)>,
    pub js_entropy: f64,
    pub js_metric: f64,
}

pub fn divergence_report(p: &ProbMeasure, q: &ProbMeasure, alphas: &[f64]) -> Result<DivergenceReport> {
    let mut renyi = Vec::new();
    let mut cgf = Vec::with_capacity(alphas.len());
    for &a in alphas {
        if a > 0.0 && a < 1.0 {
            renyi.push((a, renyi_divergence(p, q, a)?));
        }
        cgf.push((a, renyi_divergence_cgf(p, q, a)?));
    }
    let js = js_entropy(p, q)?;
    Ok(DivergenceReport {
        kl: kl_divergence(p, q)?,
        renyi,
        renyi_cgf: cgf,
        js_entropy: js,
        js_metric: js.sqrt(),
    })
}

fn check(p: &ProbMeasure, q: &ProbMeasure) -> Result<()> {
    if same_space(p.space(), q.space()) {
        Ok(())
    } else {
        Err(Error::SpaceMismatch)
    }
}

pub(crate) fn kl_weights(p: &[f64], q: &[f64]) -> f64 {
    let mut s = 0.0;
    for (&a, &b) in p.iter().zip(q) {
        if a > 0.0 {
            if b == 0.0 {
                return f64::INFINITY;
            }
            s += a * (a / b).ln();
        }
    }
    s.max(0.0)
}

/// `S(P|Q)`, `+∞` unless `P ≪ Q`.
pub fn kl_divergence(p: &ProbMeasure, q: &ProbMeasure) -> Result<f64> {
    check(p, q)?;
    Ok(kl_weights(p.weights(), q.weights()))
}

/// `S(P|P_ch) = log L − S(P)`.
pub fn kl_vs_chaotic(p: &ProbMeasure) -> f64 {
    let l = p.len() as f64;
    let s: f64 = p.weights().iter().map(|&w| xlogy(w, w * l)).sum();
    s.max(0.0)
}

/// `S(P|Q) − ½ d_V(P, Q)²`.
pub fn pinsker_gap(p: &ProbMeasure, q: &ProbMeasure) -> Result<f64> {
    let kl = kl_divergence(p, q)?;
    let dv = variational_distance(p, q)?;
    Ok(kl - 0.5 * dv * dv)
}

/// `Ŝ_α(P|Q) = log Σ_T p^α q^{1−α}` over `T = supp P ∩ supp Q`.
pub fn renyi_divergence_cgf(p: &ProbMeasure, q: &ProbMeasure, alpha: f64) -> Result<f64> {
    check(p, q)?;
    Ok(renyi_cgf_weights(p.weights(), q.weights(), alpha))
}

pub(crate) fn renyi_cgf_weights(p: &[f64], q: &[f64], alpha: f64) -> f64 {
    let logs: Vec<f64> = p
        .iter()
        .zip(q)
        .filter(|(&a, &b)| a > 0.0 && b > 0.0)
        .map(|(&a, &b)| alpha * a.ln() + (1.0 - alpha) * b.ln())
        .collect();
    log_sum_exp(&logs)
}

/// `S_α(P|Q) = Ŝ_α(P|Q) / (α − 1)` for `α ∈ (0, 1)`.
pub fn renyi_divergence(p: &ProbMeasure, q: &ProbMeasure, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::AlphaOutOfRange(alpha));
    }
    let c = renyi_divergence_cgf(p, q, alpha)?;
    Ok((c / (alpha - 1.0)).max(0.0))
}

/// `S_JS(P|Q) = ½S(P|M) + ½S(Q|M)` with `M = (P + Q)/2`.
pub fn js_entropy(p: &ProbMeasure, q: &ProbMeasure) -> Result<f64> {
    check(p, q)?;
    let s: f64 = p
        .weights()
        .iter()
        .zip(q.weights())
        .map(|(&a, &b)| js_pointwise_l(a, b))
        .sum();
    Ok((0.5 * s).clamp(0.0, core::f64::consts::LN_2))
}

/// `d_JS = √S_JS`.
pub fn js_metric(p: &ProbMeasure, q: &ProbMeasure) -> Result<f64> {
    Ok(js_entropy(p, q)?.sqrt())
}

/// `L(x, y) = x log(2x/(x+y)) + y log(2y/(x+y))`, with `0 log 0 = 0`.
pub fn js_pointwise_l(x: f64, y: f64) -> f64 {
    let m = x + y;
    if m == 0.0 {
        return 0.0;
    }
    (xlogy(x, 2.0 * x / m) + xlogy(y, 2.0 * y / m)).max(0.0)
}

/// `∫X dP − log ∫_{supp P} e^X dQ`, a lower bound for `S(P|Q)`.
pub fn kl_variational_value(p: &ProbMeasure, q: &ProbMeasure, x: &RandomVar) -> Result<f64> {
    check(p, q)?;
    if !same_space(p.space(), x.space()) {
        return Err(Error::SpaceMismatch);
    }
    let mut mean = 0.0;
    let mut logs = Vec::new();
    for ((&a, &b), &v) in p.weights().iter().zip(q.weights()).zip(x.values()) {
        if a > 0.0 {
            mean += a * v;
            if b > 0.0 {
                logs.push(v + b.ln());
            }
        }
    }
    let lse = log_sum_exp(&logs);
    if lse == f64::NEG_INFINITY {
        return Ok(f64::INFINITY);
    }
    Ok(mean - lse)
}

/// The supremum of [`kl_variational_value`] and its maximizer `S_{P|Q}`
/// (extended by zero off `supp P`).
pub fn kl_variational_sup(p: &ProbMeasure, q: &ProbMeasure) -> Result<(f64, RandomVar)> {
    check(p, q)?;
    let mut values = Vec::with_capacity(p.len());
    for (i, (&a, &b)) in p.weights().iter().zip(q.weights()).enumerate() {
        if a > 0.0 {
            if b == 0.0 {
                return Err(Error::AbsContViolation(i));
            }
            values.push((a / b).ln());
        } else {
            values.push(0.0);
        }
    }
    let x = RandomVar::new(p.space().clone(), values)?;
    Ok((kl_weights(p.weights(), q.weights()), x))
}

/// `P_{X,Q} ∝ e^X Q` and `log ∫ e^X dQ`.
pub fn gibbs_maximizer(q: &ProbMeasure, x: &RandomVar) -> Result<(ProbMeasure, f64)> {
    if !same_space(q.space(), x.space()) {
        return Err(Error::SpaceMismatch);
    }
    let logs: Vec<f64> = q
        .weights()
        .iter()
        .zip(x.values())
        .map(|(&w, &v)| if w > 0.0 { v + w.ln() } else { f64::NEG_INFINITY })
        .collect();
    let lse = log_sum_exp(&logs);
    let w = logs.iter().map(|&l| (l - lse).exp()).collect();
    Ok((ProbMeasure::from_unnormalized(q.space().clone(), w)?, lse))
}

/// Convex combination `Σ λ_k P_k`.
pub fn mixture(weights: &[f64], measures: &[ProbMeasure]) -> Result<ProbMeasure> {
    let first = measures.first().ok_or(Error::EmptySpace)?;
    if weights.len() != measures.len() {
        return Err(Error::LengthMismatch {
            expected: measures.len(),
            got: weights.len(),
        });
    }
    let mut acc = alloc::vec![0.0; first.len()];
    for (&lam, m) in weights.iter().zip(measures) {
        if !same_space(first.space(), m.space()) {
            return Err(Error::SpaceMismatch);
        }
        for (a, &w) in acc.iter_mut().zip(m.weights()) {
            *a += lam * w;
        }
    }
    ProbMeasure::from_unnormalized(first.space().clone(), acc)
}

/// `S(M) − ½S(P) − ½S(Q)`, an independent route to `S_JS`.
pub fn js_entropy_via_mixture(p: &ProbMeasure, q: &ProbMeasure) -> Result<f64> {
    let m = mixture(&[0.5, 0.5], &[p.clone(), q.clone()])?;
    Ok(shannon_entropy(&m) - 0.5 * shannon_entropy(p) - 0.5 * shannon_entropy(q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::OutcomeSpace;
    use core::f64::consts::LN_2;

    fn pm(w: &[f64]) -> ProbMeasure {
        ProbMeasure::from_weights(w.to_vec()).unwrap()
    }

    #[test]
    fn kl_examples() {
        let p = pm(&[0.5, 0.5]);
        assert_eq!(kl_divergence(&p, &p).unwrap(), 0.0);
        assert_eq!(
            kl_divergence(&pm(&[1.0, 0.0]), &pm(&[0.0, 1.0])).unwrap(),
            f64::INFINITY
        );
        let v = kl_divergence(&p, &pm(&[0.25, 0.75])).unwrap();
        assert!((v - 0.5 * (4.0f64 / 3.0).ln()).abs() < 1e-15);
    }

    #[test]
    fn kl_against_chaotic() {
        let ch = ProbMeasure::uniform(OutcomeSpace::indexed(4));
        assert!(kl_vs_chaotic(&ch).abs() < 1e-15);
        let pure = ProbMeasure::pure(OutcomeSpace::indexed(4), 2);
        assert!((kl_vs_chaotic(&pure) - 4f64.ln()).abs() < 1e-15);
        let p = pm(&[0.25, 0.75]);
        assert!((kl_vs_chaotic(&p) - (LN_2 - shannon_entropy(&p))).abs() < 1e-12);
        let d = kl_divergence(&p, &ProbMeasure::uniform(p.space().clone())).unwrap();
        assert!((kl_vs_chaotic(&p) - d).abs() < 1e-12);
    }

    #[test]
    fn pinsker_examples() {
        let p = pm(&[0.5, 0.5]);
        assert_eq!(pinsker_gap(&p, &p).unwrap(), 0.0);
        let t = 1e-3;
        let g = pinsker_gap(&p, &pm(&[0.5 + t, 0.5 - t])).unwrap();
        assert!(g > 0.0 && g < 1e-8, "{g}");
        assert_eq!(
            pinsker_gap(&pm(&[1.0, 0.0]), &pm(&[0.0, 1.0])).unwrap(),
            f64::INFINITY
        );
    }

    #[test]
    fn renyi_divergence_examples() {
        let p = pm(&[0.3, 0.7]);
        let q = pm(&[0.6, 0.4]);
        assert!(renyi_divergence(&p, &p, 0.4).unwrap() < 1e-15);
        assert_eq!(
            renyi_divergence(&pm(&[1.0, 0.0]), &pm(&[0.0, 1.0]), 0.4).unwrap(),
            f64::INFINITY
        );
        // S − S_α ≈ (1−α) Var_P(log p/q) / 2, so 1e-6 at 1−α = 1e-4 needs a close pair
        let (a, b) = (pm(&[0.45, 0.55]), pm(&[0.5, 0.5]));
        let near = renyi_divergence(&a, &b, 1.0 - 1e-4).unwrap();
        assert!((near - kl_divergence(&a, &b).unwrap()).abs() < 1e-6);
        let gap = kl_divergence(&p, &q).unwrap() - renyi_divergence(&p, &q, 1.0 - 1e-4).unwrap();
        assert!((gap - 1.647_913_332_9e-5).abs() < 1e-12);
        assert!(matches!(
            renyi_divergence(&p, &q, 1.0),
            Err(Error::AlphaOutOfRange(_))
        ));
        // skew duality
        for a in [0.1, 0.35, 0.8] {
            let lhs = renyi_divergence(&p, &q, a).unwrap();
            let rhs = a / (1.0 - a) * renyi_divergence(&q, &p, 1.0 - a).unwrap();
            assert!((lhs - rhs).abs() < 1e-14);
        }
    }

    #[test]
    fn renyi_cgf_examples() {
        let p = pm(&[0.3, 0.7]);
        let q = pm(&[0.6, 0.4]);
        assert!(renyi_divergence_cgf(&p, &p, 3.0).unwrap().abs() < 1e-15);
        for a in [0.0, 0.2, 0.5, 0.9, 1.0] {
            assert!(renyi_divergence_cgf(&p, &q, a).unwrap() <= 1e-15);
        }
        for a in [-1.0, -0.1, 1.1, 2.0] {
            assert!(renyi_divergence_cgf(&p, &q, a).unwrap() >= 0.0);
        }
        let h = 1e-5;
        let f = |a: f64| renyi_divergence_cgf(&p, &q, a).unwrap();
        let d1 = (f(1.0 + h) - f(1.0 - h)) / (2.0 * h);
        let d0 = (f(h) - f(-h)) / (2.0 * h);
        assert!((d1 - kl_divergence(&p, &q).unwrap()).abs() < 1e-8);
        assert!((d0 + kl_divergence(&q, &p).unwrap()).abs() < 1e-8);

        let a = pm(&[0.5, 0.5, 0.0]);
        let b = pm(&[0.0, 0.25, 0.75]);
        assert!((renyi_divergence_cgf(&a, &b, 0.0).unwrap() - 0.25f64.ln()).abs() < 1e-15);
        assert!((renyi_divergence_cgf(&a, &b, 1.0).unwrap() - 0.5f64.ln()).abs() < 1e-15);
        let c = pm(&[0.0, 0.0, 1.0]);
        assert_eq!(renyi_divergence_cgf(&a, &c, 0.5).unwrap(), f64::NEG_INFINITY);
    }

    #[test]
    fn jensen_shannon_examples() {
        let p = pm(&[0.2, 0.8]);
        assert_eq!(js_entropy(&p, &p).unwrap(), 0.0);
        let a = pm(&[1.0, 0.0]);
        let b = pm(&[0.0, 1.0]);
        assert!((js_entropy(&a, &b).unwrap() - LN_2).abs() < 1e-15);
        let r = pm(&[0.5, 0.5]);
        let side = js_entropy(&a, &r).unwrap() + js_entropy(&r, &b).unwrap();
        assert!((side - 1.5 * (4.0f64 / 3.0).ln()).abs() < 1e-12);
        assert!(js_entropy(&a, &b).unwrap() > side);

        let q = pm(&[0.6, 0.4]);
        let direct = js_entropy(&p, &q).unwrap();
        assert!((direct - js_entropy_via_mixture(&p, &q).unwrap()).abs() < 1e-14);
        assert!((js_metric(&p, &q).unwrap() - direct.sqrt()).abs() < 1e-16);
    }

    #[test]
    fn pointwise_l() {
        assert_eq!(js_pointwise_l(0.3, 0.3), 0.0);
        assert!((js_pointwise_l(1.0, 0.0) - LN_2).abs() < 1e-15);
        let (p, q) = (0.1, 2.0 / 3.0);
        let target = js_pointwise_l(p, q).sqrt();
        let f = |r: f64| js_pointwise_l(p, r).sqrt() + js_pointwise_l(r, q).sqrt();
        let mut best = (0.0, f64::NEG_INFINITY);
        for k in 1..=900 {
            let r = k as f64 * 1e-3;
            let v = f(r);
            assert!(target <= v + 1e-15, "r = {r}");
            if r > p && r < q && v > best.1 {
                best = (r, v);
            }
        }
        // the interior maximizer sits near 0.28
        assert!((best.0 - 0.28).abs() < 0.01, "{}", best.0);
    }

    #[test]
    fn variational_principle() {
        let p = pm(&[0.2, 0.5, 0.3]);
        let q = pm(&[0.4, 0.4, 0.2]);
        let s = kl_divergence(&p, &q).unwrap();
        let c = RandomVar::new(p.space().clone(), [1.7; 3].to_vec()).unwrap();
        assert!(kl_variational_value(&p, &q, &c).unwrap().abs() < 1e-15);
        let (sup, x) = kl_variational_sup(&p, &q).unwrap();
        assert!((sup - s).abs() < 1e-15);
        assert!((kl_variational_value(&p, &q, &x).unwrap() - s).abs() < 1e-14);
        assert_eq!(
            kl_variational_sup(&pm(&[0.5, 0.5]), &pm(&[1.0, 0.0])).unwrap_err(),
            Error::AbsContViolation(1)
        );
    }

    #[test]
    fn gibbs_examples() {
        let q = pm(&[0.5, 0.5]);
        let zero = RandomVar::new(q.space().clone(), [0.0, 0.0].to_vec()).unwrap();
        let (g, v) = gibbs_maximizer(&q, &zero).unwrap();
        assert_eq!((g.weights(), v), (q.weights(), 0.0));

        let x = RandomVar::new(q.space().clone(), [LN_2, 0.0].to_vec()).unwrap();
        let (g, v) = gibbs_maximizer(&q, &x).unwrap();
        assert!((g.weight(0) - 2.0 / 3.0).abs() < 1e-15);
        assert!((v - 1.5f64.ln()).abs() < 1e-15);
        let dual = g.expectation(&x).unwrap() - kl_divergence(&g, &q).unwrap();
        assert!((dual - v).abs() < 1e-14);

        // against the chaotic measure the value is max_P (∫X dP + S(P)) − log L
        let ch = ProbMeasure::uniform(OutcomeSpace::indexed(3));
        let x = RandomVar::new(ch.space().clone(), [0.3, -1.0, 2.0].to_vec()).unwrap();
        let (g, v) = gibbs_maximizer(&ch, &x).unwrap();
        let lse = log_sum_exp(x.values());
        assert!((v - (lse - 3f64.ln())).abs() < 1e-14);
        let free = g.expectation(&x).unwrap() + shannon_entropy(&g);
        assert!((free - lse).abs() < 1e-14);
    }
}
