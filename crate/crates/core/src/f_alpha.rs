//! The `f_α` divergences, `f_α(t) = (α+t)² ln(α+t) − (α+1)² ln(α+1)` for `α ≥ e^{−3/2}`.

use crate::divergence::{chi2, f_divergence_centered, kl};
use crate::error::{Error, Result};
use crate::ext::{ExtendedReal, Limit};
use crate::generator::{Generator, Monotonicity};
use crate::pmf::{check_same_len, ProbVec};

/// Smallest admissible `α`; below it `f_α″` changes sign.
pub fn alpha_min() -> f64 {
    (-1.5f64).exp()
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha >= alpha_min()) || !alpha.is_finite() {
        return Err(Error::Parameter(format!("f_alpha needs alpha >= e^(-3/2), got {alpha}")));
    }
    Ok(())
}

/// `(1+u)² ln(1+u) − u`, with its Taylor series near zero.
fn phi(u: f64) -> f64 {
    if u.abs() < 1e-3 {
        let u2 = u * u;
        u2 * (1.5 + u * (1.0 / 3.0 + u * (-1.0 / 12.0 + u * (1.0 / 30.0 + u * (-1.0 / 60.0 + u / 105.0)))))
    } else {
        (1.0 + u) * (1.0 + u) * u.ln_1p() - u
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FAlpha {
    alpha: f64,
}

impl FAlpha {
    pub fn new(alpha: f64) -> Result<FAlpha> {
        check_alpha(alpha)?;
        Ok(FAlpha { alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

impl Generator for FAlpha {
    fn name(&self) -> String {
        format!("f_alpha({})", self.alpha)
    }

    fn eval(&self, t: f64) -> f64 {
        let a = self.alpha + 1.0;
        let s = t - 1.0;
        let u = s / a;
        (2.0 * a * s + s * s) * a.ln() + a * a * (1.0 + u) * (1.0 + u) * u.ln_1p()
    }

    fn deriv1(&self, t: f64) -> f64 {
        let x = self.alpha + t;
        2.0 * x * x.ln() + x
    }

    fn deriv2(&self, t: f64) -> f64 {
        2.0 * (self.alpha + t).ln() + 3.0
    }

    fn f_at_zero(&self) -> Limit {
        let (al, a) = (self.alpha, self.alpha + 1.0);
        Limit::Finite(al * al * al.ln() - a * a * a.ln())
    }

    fn slope_at_infinity(&self) -> Limit {
        Limit::PosInf
    }

    fn d2_monotonicity(&self) -> Monotonicity {
        Monotonicity::Increasing
    }

    fn t3d2_monotonicity(&self) -> Monotonicity {
        Monotonicity::Increasing
    }

    fn bregman_at_one(&self, t: f64) -> f64 {
        let a = self.alpha + 1.0;
        let s = t - 1.0;
        s * s * a.ln() + a * a * phi(s / a)
    }
}

/// `k(α) = ln(α+1) + 3/2 − 1/(3α)`.
pub fn k_alpha(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    Ok((alpha + 1.0).ln() + 1.5 - 1.0 / (3.0 * alpha))
}

/// `D_{f_α}(P‖Q)` for fully supported `Q`.
pub fn d_falpha(alpha: f64, p: &ProbVec, q: &ProbVec) -> Result<ExtendedReal> {
    let g = FAlpha::new(alpha)?;
    check_same_len(p.len(), q.len())?;
    if !q.is_fully_supported() {
        return Err(Error::Precondition("Q must be fully supported".into()));
    }
    f_divergence_centered(&g, p, q)
}

/// `Σ P³/Q² = exp(2 D_3(P‖Q))`.
fn exp_two_d3(p: &ProbVec, q: &ProbVec) -> ExtendedReal {
    let mut s = 0.0;
    for (&pi, &qi) in p.masses().iter().zip(q.masses()) {
        if pi > 0.0 {
            if qi == 0.0 {
                return ExtendedReal::Infinite;
            }
            s += pi * (pi / qi) * (pi / qi);
        }
    }
    ExtendedReal::finite(s)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FAlphaBounds {
    /// `k(α) χ²(P‖Q)`.
    pub lb_chi2: ExtendedReal,
    /// `k(α) (e^{D(P‖Q)} − 1)`.
    pub lb_kl: ExtendedReal,
    /// `[ln(α+1) + 3/2 − 1/(α+1)] χ² + (e^{2D_3} − 1)/(3(α+1))`.
    pub ub: ExtendedReal,
}

pub fn falpha_bounds(alpha: f64, p: &ProbVec, q: &ProbVec) -> Result<FAlphaBounds> {
    let k = k_alpha(alpha)?;
    let a = alpha + 1.0;
    let c = chi2(p, q)?;
    let lb_kl = match kl(p, q)? {
        ExtendedReal::Finite(d) => ExtendedReal::finite(k * d.exp_m1()),
        ExtendedReal::Infinite => ExtendedReal::Infinite,
    };
    let ub = c.scale(a.ln() + 1.5 - 1.0 / a)
        + match exp_two_d3(p, q) {
            ExtendedReal::Finite(s) => ExtendedReal::finite(((s - 1.0) / (3.0 * a)).max(0.0)),
            ExtendedReal::Infinite => ExtendedReal::Infinite,
        };
    Ok(FAlphaBounds { lb_chi2: c.scale(k), lb_kl, ub })
}

/// `ln(α+1) + 3/2`, the large-`α` slope of `D_{f_α}` against `χ²`.
pub fn asymptotic_slope(alpha: f64) -> f64 {
    (alpha + 1.0).ln() + 1.5
}

/// `n`-th derivative of `α ↦ D_{f_α}(P‖Q)` in closed form through divergences
/// from `M = (αQ + P)/(α+1)`.
pub fn falpha_alpha_derivative(order: u32, alpha: f64, p: &ProbVec, q: &ProbVec) -> Result<f64> {
    check_alpha(alpha)?;
    check_same_len(p.len(), q.len())?;
    if order < 1 {
        return Err(Error::Parameter("derivative order must be at least 1".into()));
    }
    if !p.is_fully_supported() || !q.is_fully_supported() {
        return Err(Error::Precondition("P and Q must be fully supported".into()));
    }
    let a = alpha + 1.0;
    let mix = p.mixture(q, 1.0 / a)?;
    Ok(match order {
        1 => 2.0 * a * kl(&mix, q)?.to_f64(),
        2 => -2.0 * kl(q, &mix)?.to_f64(),
        n => {
            let k = (n - 2) as i32;
            let s: f64 = q.masses().iter().zip(mix.masses()).map(|(&qi, &mi)| qi * (qi / mi).powi(k)).sum();
            let fact: f64 = (1..=(n - 3)).map(f64::from).product();
            let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
            2.0 * sign * fact / a.powi(k) * (s - 1.0)
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DifferenceBounds {
    pub lb: f64,
    pub ub: f64,
    /// `(α−β)(α+β+2) D((βQ+P)/(β+1) ‖ Q)`.
    pub ub_mixture: f64,
    /// `2(α−β) D(P‖Q)`.
    pub ub_kl: ExtendedReal,
}

/// Bounds on `D_{f_α}(P‖Q) − D_{f_β}(P‖Q)` for `α ≥ β ≥ e^{−3/2}`.
pub fn falpha_difference_bounds(alpha: f64, beta: f64, p: &ProbVec, q: &ProbVec) -> Result<DifferenceBounds> {
    check_alpha(beta)?;
    check_alpha(alpha)?;
    if alpha < beta {
        return Err(Error::Parameter(format!("need alpha >= beta, got {alpha} < {beta}")));
    }
    let d = alpha - beta;
    let s = alpha + beta + 2.0;
    let mix_a = p.mixture(q, 1.0 / (alpha + 1.0))?;
    let mix_b = p.mixture(q, 1.0 / (beta + 1.0))?;
    let lb = d * s * kl(&mix_a, q)?.to_f64();
    let ub_mixture = d * s * kl(&mix_b, q)?.to_f64();
    let ub_kl = kl(p, q)?.scale(2.0 * d);
    Ok(DifferenceBounds { lb, ub: ub_kl.min(ExtendedReal::finite(ub_mixture)).to_f64(), ub_mixture, ub_kl })
}

/// `κ_α(ξ2) = (f_α(ξ2) + f_α′(1)(1 − ξ2))/(ξ2 − 1)²`.
pub fn kappa_alpha(alpha: f64, xi2: f64) -> Result<f64> {
    let g = FAlpha::new(alpha)?;
    if !(xi2 > 1.0) {
        return Err(Error::Parameter(format!("xi2 must exceed 1, got {xi2}")));
    }
    let s = xi2 - 1.0;
    Ok(g.bregman_at_one(xi2) / (s * s))
}

/// Upper bound on `μ_{f_α}(Q, W)/μ_{χ²}(Q, W)` with `ξ = 1/min Q ≥ 2`.
pub fn contraction_ratio_upper(alpha: f64, xi: f64) -> Result<f64> {
    let g = FAlpha::new(alpha)?;
    if !(xi >= 2.0) {
        return Err(Error::Parameter(format!("xi = 1/min Q must be at least 2, got {xi}")));
    }
    Ok(kappa_alpha(alpha, xi)? / g.bregman_at_one(0.0))
}
