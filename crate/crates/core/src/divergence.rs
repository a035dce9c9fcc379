//! f-divergences, Rényi divergences, entropies and the Fenchel conjugate.

use crate::error::{Error, Result};
use crate::ext::{ExtendedReal, Limit};
use crate::generator::{DivergenceKind, Generator};
use crate::numerics::{maximize_1d, Interval};
use crate::pmf::{check_same_len, JointPMF, ProbVec};

/// `D_f(P‖Q) = Σ Q f(P/Q)` with `0·f(0/0) = 0`, `Q·f(0)` where `P = 0 < Q`, and
/// `P · lim f(u)/u` where `Q = 0 < P`.
pub fn f_divergence<G: Generator + ?Sized>(f: &G, p: &ProbVec, q: &ProbVec) -> Result<ExtendedReal> {
    check_same_len(p.len(), q.len())?;
    let mut sum = 0.0;
    for (&pi, &qi) in p.masses().iter().zip(q.masses()) {
        let term = if qi > 0.0 {
            if pi > 0.0 {
                let t = pi / qi;
                let v = f.eval(t);
                if v.is_nan() {
                    return Err(Error::NonFinite { at: t, value: v });
                }
                qi * v
            } else {
                match f.f_at_zero() {
                    Limit::Finite(f0) => qi * f0,
                    Limit::PosInf => return Ok(ExtendedReal::Infinite),
                }
            }
        } else if pi > 0.0 {
            match f.slope_at_infinity() {
                Limit::Finite(s) => pi * s,
                Limit::PosInf => return Ok(ExtendedReal::Infinite),
            }
        } else {
            0.0
        };
        sum += term;
    }
    if sum == f64::INFINITY {
        return Ok(ExtendedReal::Infinite);
    }
    Ok(ExtendedReal::Finite(sum.max(0.0)))
}

/// `D_f(P‖Q)` summed as `Σ Q·[f(P/Q) − f′(1)(P/Q − 1)]` plus boundary terms.
/// Equal to [`f_divergence`] but free of the cancellation in the linear part,
/// which matters when `P` and `Q` are close.
pub fn f_divergence_centered<G: Generator + ?Sized>(f: &G, p: &ProbVec, q: &ProbVec) -> Result<ExtendedReal> {
    check_same_len(p.len(), q.len())?;
    let d1 = f.deriv1(1.0);
    let mut sum = 0.0;
    let mut escaped = 0.0;
    for (&pi, &qi) in p.masses().iter().zip(q.masses()) {
        if qi > 0.0 {
            if pi > 0.0 {
                let t = pi / qi;
                let v = f.bregman_at_one(t);
                if v.is_nan() {
                    return Err(Error::NonFinite { at: t, value: v });
                }
                sum += qi * v;
            } else {
                match f.f_at_zero() {
                    Limit::Finite(f0) => sum += qi * (f0 + d1),
                    Limit::PosInf => return Ok(ExtendedReal::Infinite),
                }
            }
        } else if pi > 0.0 {
            escaped += pi;
        }
    }
    if escaped > 0.0 {
        match f.slope_at_infinity() {
            Limit::Finite(s) => sum += escaped * (s - d1),
            Limit::PosInf => return Ok(ExtendedReal::Infinite),
        }
    }
    if sum == f64::INFINITY {
        return Ok(ExtendedReal::Infinite);
    }
    Ok(ExtendedReal::Finite(sum.max(0.0)))
}

/// Dispatches `kind` to [`f_divergence`] with its catalog generator.
pub fn named_divergence(kind: DivergenceKind, p: &ProbVec, q: &ProbVec) -> Result<ExtendedReal> {
    let g = kind.generator()?;
    f_divergence(&*g, p, q)
}

/// `KL(P‖Q)` in nats.
pub fn kl(p: &ProbVec, q: &ProbVec) -> Result<ExtendedReal> {
    named_divergence(DivergenceKind::Kl, p, q)
}

/// Pearson `χ²(P‖Q)`.
pub fn chi2(p: &ProbVec, q: &ProbVec) -> Result<ExtendedReal> {
    named_divergence(DivergenceKind::Chi2Pearson, p, q)
}

/// `D_α(P‖Q) = (α−1)⁻¹ ln Σ P^α Q^{1−α}` for `α ∈ (0,1) ∪ (1,∞)`.
pub fn renyi_divergence(alpha: f64, p: &ProbVec, q: &ProbVec) -> Result<ExtendedReal> {
    check_same_len(p.len(), q.len())?;
    if !(alpha > 0.0) || alpha == 1.0 || !alpha.is_finite() {
        return Err(Error::Parameter(format!("Renyi order must lie in (0,1) or (1,inf), got {alpha}; use KL at 1")));
    }
    let mut logs = Vec::with_capacity(p.len());
    for (&pi, &qi) in p.masses().iter().zip(q.masses()) {
        if pi > 0.0 && qi > 0.0 {
            logs.push(alpha * pi.ln() + (1.0 - alpha) * qi.ln());
        } else if pi > 0.0 && alpha > 1.0 {
            return Ok(ExtendedReal::Infinite);
        }
    }
    if logs.is_empty() {
        return Ok(ExtendedReal::Infinite);
    }
    let lse = log_sum_exp(&logs);
    Ok(ExtendedReal::Finite((lse / (alpha - 1.0)).max(0.0)))
}

fn log_sum_exp(xs: &[f64]) -> f64 {
    let m = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    m + xs.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

/// `D_α = (α−1)⁻¹ ln(1 + α(α−1) D_A^{(α)})`, mapping an Alpha divergence to the Rényi divergence.
pub fn alpha_renyi_convert(alpha: f64, alpha_div: f64) -> Result<f64> {
    if alpha == 1.0 {
        return Err(Error::Parameter("conversion is undefined at alpha = 1".into()));
    }
    let arg = alpha * (alpha - 1.0) * alpha_div;
    if !(arg > -1.0) {
        return Err(Error::Domain(format!("log argument 1 + {arg} is not positive")));
    }
    Ok(arg.ln_1p() / (alpha - 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EntropyKind {
    Shannon,
    Renyi(f64),
    Tsallis(f64),
}

fn shannon(p: &[f64]) -> f64 {
    -p.iter().filter(|&&x| x > 0.0).map(|&x| x * x.ln()).sum::<f64>()
}

fn power_sum(p: &[f64], alpha: f64) -> f64 {
    p.iter().filter(|&&x| x > 0.0).map(|&x| x.powf(alpha)).sum()
}

/// Shannon, Rényi or Tsallis entropy in nats; order 1 gives Shannon for both parametric kinds.
pub fn entropy(kind: EntropyKind, p: &ProbVec) -> Result<f64> {
    let m = p.masses();
    match kind {
        EntropyKind::Shannon => Ok(shannon(m)),
        EntropyKind::Renyi(a) | EntropyKind::Tsallis(a) if !(a > 0.0) || !a.is_finite() => {
            Err(Error::Parameter(format!("entropy order must be positive and finite, got {a}")))
        }
        EntropyKind::Renyi(1.0) | EntropyKind::Tsallis(1.0) => Ok(shannon(m)),
        EntropyKind::Renyi(a) => Ok(power_sum(m, a).ln() / (1.0 - a)),
        EntropyKind::Tsallis(a) => Ok((power_sum(m, a) - 1.0) / (1.0 - a)),
    }
}

/// `H(X|Y)` in nats.
pub fn conditional_entropy(joint: &JointPMF) -> f64 {
    joint.conditionals().iter().map(|(py, c)| py * shannon(c.masses())).sum()
}

/// Arimoto's conditional Rényi entropy `α/(1−α) · ln E[‖P_{X|Y}(·|Y)‖_α]`; `α = 1` gives `H(X|Y)`.
pub fn arimoto_conditional_entropy(alpha: f64, joint: &JointPMF) -> Result<f64> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::Parameter(format!("Arimoto order must be positive and finite, got {alpha}")));
    }
    if alpha == 1.0 {
        return Ok(conditional_entropy(joint));
    }
    let e: f64 = joint.conditionals().iter().map(|(py, c)| py * power_sum(c.masses(), alpha).powf(1.0 / alpha)).sum();
    Ok(alpha / (1.0 - alpha) * e.ln())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BinaryKind {
    Kl,
    Renyi(f64),
}

/// Binary divergence between `Bern(p)` and `Bern(q)`, continuous at the endpoints.
pub fn binary_divergence(kind: BinaryKind, p: f64, q: f64) -> Result<ExtendedReal> {
    let bp = crate::pmf::ProbVec::bernoulli(p)?;
    let bq = crate::pmf::ProbVec::bernoulli(q)?;
    match kind {
        BinaryKind::Kl => kl(&bp, &bq),
        BinaryKind::Renyi(1.0) => kl(&bp, &bq),
        BinaryKind::Renyi(a) => renyi_divergence(a, &bp, &bq),
    }
}

/// Binary KL `d(p‖q)` in nats as a plain float (`+∞` when unbounded).
pub fn binary_kl(p: f64, q: f64) -> f64 {
    let term = |a: f64, b: f64| {
        if a == 0.0 {
            0.0
        } else if b == 0.0 {
            f64::INFINITY
        } else {
            a * (a / b).ln()
        }
    };
    term(p, q) + term(1.0 - p, 1.0 - q)
}

/// `f*(x) = sup_{t>0} {t x − f(t)}`, searched on `s = ln t`.
pub fn fenchel_conjugate<G: Generator + ?Sized>(f: &G, x: f64) -> Result<Limit> {
    let slope = f.slope_at_infinity();
    if let Limit::Finite(s) = slope {
        if x > s {
            return Ok(Limit::PosInf);
        }
    }
    let at_zero = match f.f_at_zero() {
        Limit::Finite(f0) => -f0,
        Limit::PosInf => f64::NEG_INFINITY,
    };
    let obj = |s: f64| {
        let t = s.exp();
        t * x - f.eval(t)
    };
    // Past t ≈ 2^53 the subtraction t·x − f(t) is dominated by rounding, so a
    // finite slope keeps the search below that; an infinite slope may widen it.
    let mut hi = 36.0;
    loop {
        let r = maximize_1d(obj, Interval::closed(-40.0, hi), 4096, 1e-12)?;
        let near_edge = hi - r.argmax < 2.0 * (hi + 40.0) / 4095.0;
        if !near_edge || hi >= 700.0 || slope != Limit::PosInf {
            if near_edge && slope == Limit::PosInf {
                return Ok(Limit::PosInf);
            }
            return Ok(Limit::Finite(r.max.max(at_zero)));
        }
        hi = (hi * 2.0).min(700.0);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::{Chi2Pearson, FnGenerator, Kl, TotalVariation};

    fn pv(v: &[f64]) -> ProbVec {
        ProbVec::new(v.to_vec()).unwrap()
    }

    #[test]
    fn boundary_conventions() {
        let p = pv(&[1.0, 0.0]);
        let q = pv(&[0.5, 0.5]);
        let d = f_divergence(&Kl, &p, &q).unwrap().to_f64();
        assert!((d - 2f64.ln()).abs() < 1e-15);
        assert_eq!(f_divergence(&Kl, &q, &p).unwrap(), ExtendedReal::Infinite);
        assert_eq!(f_divergence(&Chi2Pearson, &q, &q).unwrap(), ExtendedReal::ZERO);
        let tv = f_divergence(&TotalVariation, &q, &p).unwrap().to_f64();
        assert!((tv - 1.0).abs() < 1e-15);
    }

    #[test]
    fn centered_sum_matches_plain_sum() {
        let p = pv(&[0.0, 0.2, 0.8, 0.0]);
        let q = pv(&[0.3, 0.3, 0.4, 0.0]);
        for g in [DivergenceKind::Kl, DivergenceKind::Hellinger2, DivergenceKind::TotalVariation, DivergenceKind::Alpha(0.5)] {
            let g = g.generator().unwrap();
            let a = f_divergence(&*g, &p, &q).unwrap().to_f64();
            let b = f_divergence_centered(&*g, &p, &q).unwrap().to_f64();
            assert!((a - b).abs() < 1e-14, "{}: {a} vs {b}", g.name());
        }
        let q2 = pv(&[0.3, 0.3, 0.2, 0.2]);
        let a = f_divergence(&TotalVariation, &q2, &q).unwrap().to_f64();
        let b = f_divergence_centered(&TotalVariation, &q2, &q).unwrap().to_f64();
        assert!((a - b).abs() < 1e-14);
    }

    #[test]
    fn chi2_of_bernoullis() {
        let p = ProbVec::bernoulli(0.25).unwrap();
        let q = ProbVec::bernoulli(0.5).unwrap();
        assert!((chi2(&p, &q).unwrap().to_f64() - 0.25).abs() < 1e-15);
        let d2 = renyi_divergence(2.0, &p, &q).unwrap().to_f64();
        assert!((d2 - 1.25f64.ln()).abs() < 1e-15);
        assert!((alpha_renyi_convert(2.0, 0.125).unwrap() - 1.25f64.ln()).abs() < 1e-15);
        assert_eq!(alpha_renyi_convert(3.0, 0.0).unwrap(), 0.0);
        assert!(alpha_renyi_convert(0.5, 5.0).is_err());
    }

    #[test]
    fn dimension_mismatch_and_nan() {
        assert!(f_divergence(&Kl, &pv(&[1.0]), &pv(&[0.5, 0.5])).is_err());
        let bad = FnGenerator::new("nan", |_| f64::NAN, Limit::Finite(0.0), Limit::Finite(0.0));
        assert!(f_divergence(&bad, &pv(&[0.3, 0.7]), &pv(&[0.5, 0.5])).is_err());
        assert!(named_divergence(DivergenceKind::EGamma(0.5), &pv(&[1.0]), &pv(&[1.0])).is_err());
        assert!(named_divergence(DivergenceKind::DeGroot(1.0), &pv(&[1.0]), &pv(&[1.0])).is_err());
    }

    #[test]
    fn entropies() {
        let u4 = ProbVec::uniform(4);
        assert!((entropy(EntropyKind::Shannon, &u4).unwrap() / 2f64.ln() - 2.0).abs() < 1e-15);
        let t = entropy(EntropyKind::Tsallis(2.0), &ProbVec::uniform(5)).unwrap();
        assert!((t - 0.8).abs() < 1e-15);
        let p = pv(&[0.5, 0.3, 0.2]);
        let r2 = entropy(EntropyKind::Renyi(2.0), &p).unwrap();
        assert!((r2 + p.norm2_sq().ln()).abs() < 1e-15);
        assert!(entropy(EntropyKind::Renyi(0.0), &p).is_err());
    }

    #[test]
    fn binary_limits() {
        assert_eq!(binary_divergence(BinaryKind::Kl, 0.3, 0.3).unwrap(), ExtendedReal::ZERO);
        let d = binary_divergence(BinaryKind::Kl, 0.0, 0.5).unwrap().to_f64();
        assert!((d - 2f64.ln()).abs() < 1e-15);
        assert!((binary_kl(0.0, 0.5) - 2f64.ln()).abs() < 1e-15);
        assert_eq!(binary_kl(0.5, 0.0), f64::INFINITY);
    }

    #[test]
    fn conjugates() {
        assert!(fenchel_conjugate(&Chi2Pearson, 0.0).unwrap().to_f64().abs() < 1e-15);
        // t² − 1 differs from (t − 1)² by an affine term; its conjugate at 0 is 1.
        let sq = FnGenerator::new("t^2-1", |t: f64| t * t - 1.0, Limit::Finite(-1.0), Limit::PosInf);
        let c = fenchel_conjugate(&sq, 0.0).unwrap().to_f64();
        assert!((c - 1.0).abs() < 1e-12);
        for &x in &[-2.0, -0.5, 0.0, 0.7, 1.5] {
            let c = fenchel_conjugate(&Kl, x).unwrap().to_f64();
            assert!((c - x.exp_m1()).abs() < 1e-9 * (1.0 + c.abs()), "x = {x}: {c}");
        }
        assert_eq!(fenchel_conjugate(&TotalVariation, 1.5).unwrap(), Limit::PosInf);
        let c = fenchel_conjugate(&TotalVariation, 1.0).unwrap().to_f64();
        assert!((c - 1.0).abs() < 1e-9, "{c}");
        let c = fenchel_conjugate(&TotalVariation, -3.0).unwrap().to_f64();
        assert!((c + 1.0).abs() < 1e-12);
    }
}
