//! Convex generators `f` with `f(1) = 0`, the named catalog, and the dual `t·f(1/t)`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ext::Limit;

/// Monotonicity of `f″` or `t³f″` on `(0, ∞)`, used to read inf/sup off interval endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Monotonicity {
    Increasing,
    Decreasing,
    Constant,
    Unknown,
}

impl Monotonicity {
    /// Monotonicity of `x ↦ h(1/x)` given that of `h`.
    pub fn reversed(self) -> Monotonicity {
        match self {
            Monotonicity::Increasing => Monotonicity::Decreasing,
            Monotonicity::Decreasing => Monotonicity::Increasing,
            other => other,
        }
    }
}

fn fd_step(t: f64, scale: f64) -> f64 {
    let h = scale * t.max(1.0);
    if t > 0.0 {
        h.min(0.5 * t)
    } else {
        h
    }
}

/// A convex function on `(0, ∞)` with `f(1) = 0`.
///
/// Derivatives default to central differences. At a kink, `deriv1` returns the
/// right derivative and `deriv2` returns zero.
pub trait Generator: Send + Sync {
    fn name(&self) -> String;

    fn eval(&self, t: f64) -> f64;

    fn deriv1(&self, t: f64) -> f64 {
        let h = fd_step(t, 1e-6);
        (self.eval(t + h) - self.eval(t - h)) / (2.0 * h)
    }

    fn deriv2(&self, t: f64) -> f64 {
        let h = fd_step(t, 1e-4);
        (self.eval(t + h) - 2.0 * self.eval(t) + self.eval(t - h)) / (h * h)
    }

    /// `f(0+)`.
    fn f_at_zero(&self) -> Limit;

    /// `lim_{u→∞} f(u)/u`.
    fn slope_at_infinity(&self) -> Limit;

    fn d2_monotonicity(&self) -> Monotonicity {
        Monotonicity::Unknown
    }

    fn t3d2_monotonicity(&self) -> Monotonicity {
        Monotonicity::Unknown
    }

    /// Points where `f` is not differentiable.
    fn kinks(&self) -> Vec<f64> {
        Vec::new()
    }

    /// `f(t) − f′(1)(t − 1)`, the numerator of the κ objective. At `t = 0` this is `f(0) + f′(1)`.
    fn bregman_at_one(&self, t: f64) -> f64 {
        if t == 0.0 {
            return self.f_at_zero().to_f64() + self.deriv1(1.0);
        }
        self.eval(t) - self.deriv1(1.0) * (t - 1.0)
    }
}

macro_rules! forward_generator {
    ($ty:ty) => {
        impl<G: Generator + ?Sized> Generator for $ty {
            fn name(&self) -> String {
                (**self).name()
            }
            fn eval(&self, t: f64) -> f64 {
                (**self).eval(t)
            }
            fn deriv1(&self, t: f64) -> f64 {
                (**self).deriv1(t)
            }
            fn deriv2(&self, t: f64) -> f64 {
                (**self).deriv2(t)
            }
            fn f_at_zero(&self) -> Limit {
                (**self).f_at_zero()
            }
            fn slope_at_infinity(&self) -> Limit {
                (**self).slope_at_infinity()
            }
            fn d2_monotonicity(&self) -> Monotonicity {
                (**self).d2_monotonicity()
            }
            fn t3d2_monotonicity(&self) -> Monotonicity {
                (**self).t3d2_monotonicity()
            }
            fn kinks(&self) -> Vec<f64> {
                (**self).kinks()
            }
            fn bregman_at_one(&self, t: f64) -> f64 {
                (**self).bregman_at_one(t)
            }
        }
    };
}

forward_generator!(&G);
forward_generator!(Box<G>);
forward_generator!(Arc<G>);

/// `t ln t + 1 − t`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Kl;

impl Generator for Kl {
    fn name(&self) -> String {
        "kl".into()
    }
    fn eval(&self, t: f64) -> f64 {
        if t == 0.0 {
            1.0
        } else {
            t * t.ln() + 1.0 - t
        }
    }
    fn deriv1(&self, t: f64) -> f64 {
        t.ln()
    }
    fn deriv2(&self, t: f64) -> f64 {
        1.0 / t
    }
    fn f_at_zero(&self) -> Limit {
        Limit::Finite(1.0)
    }
    fn slope_at_infinity(&self) -> Limit {
        Limit::PosInf
    }
    fn d2_monotonicity(&self) -> Monotonicity {
        Monotonicity::Decreasing
    }
    fn t3d2_monotonicity(&self) -> Monotonicity {
        Monotonicity::Increasing
    }
}

/// `−ln t`, giving `D(Q‖P)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct ReverseKl;

impl Generator for ReverseKl {
    fn name(&self) -> String {
        "kl_reverse".into()
    }
    fn eval(&self, t: f64) -> f64 {
        -t.ln()
    }
    fn deriv1(&self, t: f64) -> f64 {
        -1.0 / t
    }
    fn deriv2(&self, t: f64) -> f64 {
        1.0 / (t * t)
    }
    fn f_at_zero(&self) -> Limit {
        Limit::PosInf
    }
    fn slope_at_infinity(&self) -> Limit {
        Limit::Finite(0.0)
    }
    fn d2_monotonicity(&self) -> Monotonicity {
        Monotonicity::Decreasing
    }
    fn t3d2_monotonicity(&self) -> Monotonicity {
        Monotonicity::Increasing
    }
}

/// Pearson: `(t − 1)²`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Chi2Pearson;

impl Generator for Chi2Pearson {
    fn name(&self) -> String {
        "chi2_pearson".into()
    }
    fn eval(&self, t: f64) -> f64 {
        (t - 1.0) * (t - 1.0)
    }
    fn deriv1(&self, t: f64) -> f64 {
        2.0 * (t - 1.0)
    }
    fn deriv2(&self, _t: f64) -> f64 {
        2.0
    }
    fn f_at_zero(&self) -> Limit {
        Limit::Finite(1.0)
    }
    fn slope_at_infinity(&self) -> Limit {
        Limit::PosInf
    }
    fn d2_monotonicity(&self) -> Monotonicity {
        Monotonicity::Constant
    }
    fn t3d2_monotonicity(&self) -> Monotonicity {
        Monotonicity::Increasing
    }
    fn bregman_at_one(&self, t: f64) -> f64 {
        (t - 1.0) * (t - 1.0)
    }
}

/// Neyman: `(t − 1)²/t`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Chi2Neyman;

impl Generator for Chi2Neyman {
    fn name(&self) -> String {
        "chi2_neyman".into()
    }
    fn eval(&self, t: f64) -> f64 {
        (t - 1.0) * (t - 1.0) / t
    }
    fn deriv1(&self, t: f64) -> f64 {
        1.0 - 1.0 / (t * t)
    }
    fn deriv2(&self, t: f64) -> f64 {
        2.0 / (t * t * t)
    }
    fn f_at_zero(&self) -> Limit {
        Limit::PosInf
    }
    fn slope_at_infinity(&self) -> Limit {
        Limit::Finite(1.0)
    }
    fn d2_monotonicity(&self) -> Monotonicity {
        Monotonicity::Decreasing
    }
    fn t3d2_monotonicity(&self) -> Monotonicity {
        Monotonicity::Constant
    }
}

/// `|t − 1|`, so that the divergence is `Σ|P − Q|`.
#[derive(Debug, Clone, Copy, Default)]
pub struct TotalVariation;

impl Generator for TotalVariation {
    fn name(&self) -> String {
        "total_variation".into()
    }
    fn eval(&self, t: f64) -> f64 {
        (t - 1.0).abs()
    }
    fn deriv1(&self, t: f64) -> f64 {
        if t >= 1.0 {
            1.0
        } else {
            -1.0
        }
    }
    fn deriv2(&self, _t: f64) -> f64 {
        0.0
    }
    fn f_at_zero(&self) -> Limit {
        Limit::Finite(1.0)
    }
    fn slope_at_infinity(&self) -> Limit {
        Limit::Finite(1.0)
    }
    fn d2_monotonicity(&self) -> Monotonicity {
        Monotonicity::Constant
    }
    fn kinks(&self) -> Vec<f64> {
        vec![1.0]
    }
}

/// Squared Hellinger distance with the `½(√t − 1)²` normalization.
#[derive(Debug, Clone, Copy, Default)]
pub struct Hellinger2;

impl Generator for Hellinger2 {
    fn name(&self) -> String {
        "hellinger2".into()
    }
    fn eval(&self, t: f64) -> f64 {
        let r = t.sqrt() - 1.0;
        0.5 * r * r
    }
    fn deriv1(&self, t: f64) -> f64 {
        0.5 * (1.0 - 1.0 / t.sqrt())
    }
    fn deriv2(&self, t: f64) -> f64 {
        0.25 * t.powf(-1.5)
    }
    fn f_at_zero(&self) -> Limit {
        Limit::Finite(0.5)
    }
    fn slope_at_infinity(&self) -> Limit {
        Limit::Finite(0.5)
    }
    fn d2_monotonicity(&self) -> Monotonicity {
        Monotonicity::Decreasing
    }
    fn t3d2_monotonicity(&self) -> Monotonicity {
        Monotonicity::Increasing
    }
}

/// `u_α(t) = (t^α − α(t − 1) − 1)/(α(α − 1))`, with `u_1 = t ln t + 1 − t` and `u_0 = −ln t`.
#[derive(Debug, Clone, Copy)]
pub struct Alpha {
    alpha: f64,
}

impl Alpha {
    pub fn new(alpha: f64) -> Result<Alpha> {
        if !alpha.is_finite() {
            return Err(Error::Parameter(format!("alpha must be finite, got {alpha}")));
        }
        Ok(Alpha { alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    fn is_one(&self) -> bool {
        self.alpha == 1.0
    }

    fn is_zero(&self) -> bool {
        self.alpha == 0.0
    }
}

impl Generator for Alpha {
    fn name(&self) -> String {
        format!("alpha({})", self.alpha)
    }
    fn eval(&self, t: f64) -> f64 {
        let a = self.alpha;
        if self.is_one() {
            return Kl.eval(t);
        }
        if self.is_zero() {
            return ReverseKl.eval(t);
        }
        if t == 0.0 {
            return self.f_at_zero().to_f64();
        }
        ((a * t.ln()).exp_m1() - a * (t - 1.0)) / (a * (a - 1.0))
    }
    fn deriv1(&self, t: f64) -> f64 {
        let a = self.alpha;
        if self.is_one() {
            return Kl.deriv1(t);
        }
        if self.is_zero() {
            return ReverseKl.deriv1(t);
        }
        ((a - 1.0) * t.ln()).exp_m1() / (a - 1.0)
    }
    fn deriv2(&self, t: f64) -> f64 {
        t.powf(self.alpha - 2.0)
    }
    fn f_at_zero(&self) -> Limit {
        if self.alpha > 0.0 {
            Limit::Finite(1.0 / self.alpha)
        } else {
            Limit::PosInf
        }
    }
    fn slope_at_infinity(&self) -> Limit {
        if self.alpha >= 1.0 {
            Limit::PosInf
        } else if self.is_zero() {
            Limit::Finite(0.0)
        } else {
            Limit::Finite(1.0 / (1.0 - self.alpha))
        }
    }
    fn d2_monotonicity(&self) -> Monotonicity {
        let e = self.alpha - 2.0;
        if e > 0.0 {
            Monotonicity::Increasing
        } else if e < 0.0 {
            Monotonicity::Decreasing
        } else {
            Monotonicity::Constant
        }
    }
    fn t3d2_monotonicity(&self) -> Monotonicity {
        let e = self.alpha + 1.0;
        if e > 0.0 {
            Monotonicity::Increasing
        } else if e < 0.0 {
            Monotonicity::Decreasing
        } else {
            Monotonicity::Constant
        }
    }
}

/// `E_γ` generator `(t − γ)⁺`, `γ ≥ 1`.
#[derive(Debug, Clone, Copy)]
pub struct EGamma {
    gamma: f64,
}

impl EGamma {
    pub fn new(gamma: f64) -> Result<EGamma> {
        if !(gamma >= 1.0) || !gamma.is_finite() {
            return Err(Error::Parameter(format!("E_gamma needs gamma >= 1, got {gamma}")));
        }
        Ok(EGamma { gamma })
    }
}

impl Generator for EGamma {
    fn name(&self) -> String {
        format!("e_gamma({})", self.gamma)
    }
    fn eval(&self, t: f64) -> f64 {
        (t - self.gamma).max(0.0)
    }
    fn deriv1(&self, t: f64) -> f64 {
        if t >= self.gamma {
            1.0
        } else {
            0.0
        }
    }
    fn deriv2(&self, _t: f64) -> f64 {
        0.0
    }
    fn f_at_zero(&self) -> Limit {
        Limit::Finite(0.0)
    }
    fn slope_at_infinity(&self) -> Limit {
        Limit::Finite(1.0)
    }
    fn d2_monotonicity(&self) -> Monotonicity {
        Monotonicity::Constant
    }
    fn kinks(&self) -> Vec<f64> {
        vec![self.gamma]
    }
}

/// DeGroot statistical information generator `φ_ω(t) = min(ω, 1−ω) − min(ω, 1 − ωt)`.
#[derive(Debug, Clone, Copy)]
pub struct DeGroot {
    omega: f64,
}

impl DeGroot {
    pub fn new(omega: f64) -> Result<DeGroot> {
        if !(omega > 0.0 && omega < 1.0) {
            return Err(Error::Parameter(format!("DeGroot needs omega in (0,1), got {omega}")));
        }
        Ok(DeGroot { omega })
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    fn kink(&self) -> f64 {
        (1.0 - self.omega) / self.omega
    }
}

impl Generator for DeGroot {
    fn name(&self) -> String {
        format!("degroot({})", self.omega)
    }
    fn eval(&self, t: f64) -> f64 {
        let w = self.omega;
        w.min(1.0 - w) - w.min(1.0 - w * t)
    }
    fn deriv1(&self, t: f64) -> f64 {
        if t >= self.kink() {
            self.omega
        } else {
            0.0
        }
    }
    fn deriv2(&self, _t: f64) -> f64 {
        0.0
    }
    fn f_at_zero(&self) -> Limit {
        let w = self.omega;
        Limit::Finite(w.min(1.0 - w) - w)
    }
    fn slope_at_infinity(&self) -> Limit {
        Limit::Finite(self.omega)
    }
    fn d2_monotonicity(&self) -> Monotonicity {
        Monotonicity::Constant
    }
    fn kinks(&self) -> Vec<f64> {
        vec![self.kink()]
    }
}

/// The dual generator `f*(t) = t f(1/t)`, for which `D_{f*}(P‖Q) = D_f(Q‖P)`.
#[derive(Debug, Clone)]
pub struct Dual<G> {
    inner: G,
}

impl<G: Generator> Dual<G> {
    pub fn new(inner: G) -> Dual<G> {
        Dual { inner }
    }

    pub fn inner(&self) -> &G {
        &self.inner
    }
}

/// `f ↦ f*`.
pub fn dual_generator<G: Generator>(f: G) -> Dual<G> {
    Dual::new(f)
}

impl<G: Generator> Generator for Dual<G> {
    fn name(&self) -> String {
        format!("dual({})", self.inner.name())
    }
    fn eval(&self, t: f64) -> f64 {
        if t == 0.0 {
            return self.f_at_zero().to_f64();
        }
        t * self.inner.eval(1.0 / t)
    }
    fn deriv1(&self, t: f64) -> f64 {
        let s = 1.0 / t;
        self.inner.eval(s) - self.inner.deriv1(s) * s
    }
    fn deriv2(&self, t: f64) -> f64 {
        let s = 1.0 / t;
        s * s * s * self.inner.deriv2(s)
    }
    fn f_at_zero(&self) -> Limit {
        self.inner.slope_at_infinity()
    }
    fn slope_at_infinity(&self) -> Limit {
        self.inner.f_at_zero()
    }
    fn d2_monotonicity(&self) -> Monotonicity {
        self.inner.t3d2_monotonicity().reversed()
    }
    fn t3d2_monotonicity(&self) -> Monotonicity {
        self.inner.d2_monotonicity().reversed()
    }
    fn kinks(&self) -> Vec<f64> {
        let mut k: Vec<f64> = self.inner.kinks().into_iter().filter(|&x| x > 0.0).map(|x| 1.0 / x).collect();
        k.sort_by(f64::total_cmp);
        k
    }
}

/// A generator given by a closure; derivatives are numeric.
pub struct FnGenerator<F> {
    name: String,
    f: F,
    f0: Limit,
    slope: Limit,
}

impl<F: Fn(f64) -> f64 + Send + Sync> FnGenerator<F> {
    pub fn new(name: impl Into<String>, f: F, f_at_zero: Limit, slope_at_infinity: Limit) -> FnGenerator<F> {
        FnGenerator { name: name.into(), f, f0: f_at_zero, slope: slope_at_infinity }
    }
}

impl<F> fmt::Debug for FnGenerator<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FnGenerator").field("name", &self.name).finish()
    }
}

impl<F: Fn(f64) -> f64 + Send + Sync> Generator for FnGenerator<F> {
    fn name(&self) -> String {
        self.name.clone()
    }
    fn eval(&self, t: f64) -> f64 {
        (self.f)(t)
    }
    fn f_at_zero(&self) -> Limit {
        self.f0
    }
    fn slope_at_infinity(&self) -> Limit {
        self.slope
    }
}

/// Named divergences and their generators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DivergenceKind {
    Kl,
    KlReverse,
    Chi2Pearson,
    Chi2Neyman,
    TotalVariation,
    Hellinger2,
    Alpha(f64),
    EGamma(f64),
    DeGroot(f64),
}

impl DivergenceKind {
    /// The parameter-free entries.
    pub const BASIC: [DivergenceKind; 6] = [
        DivergenceKind::Kl,
        DivergenceKind::KlReverse,
        DivergenceKind::Chi2Pearson,
        DivergenceKind::Chi2Neyman,
        DivergenceKind::TotalVariation,
        DivergenceKind::Hellinger2,
    ];

    pub fn generator(self) -> Result<Arc<dyn Generator>> {
        Ok(match self {
            DivergenceKind::Kl => Arc::new(Kl),
            DivergenceKind::KlReverse => Arc::new(ReverseKl),
            DivergenceKind::Chi2Pearson => Arc::new(Chi2Pearson),
            DivergenceKind::Chi2Neyman => Arc::new(Chi2Neyman),
            DivergenceKind::TotalVariation => Arc::new(TotalVariation),
            DivergenceKind::Hellinger2 => Arc::new(Hellinger2),
            DivergenceKind::Alpha(a) => Arc::new(Alpha::new(a)?),
            DivergenceKind::EGamma(g) => Arc::new(EGamma::new(g)?),
            DivergenceKind::DeGroot(w) => Arc::new(DeGroot::new(w)?),
        })
    }
}

impl FromStr for DivergenceKind {
    type Err = Error;

    /// Accepts `kl`, `kl_reverse`, `chi2` / `chi2_pearson`, `chi2_neyman`, `tv` /
    /// `total_variation`, `hellinger2`, and `alpha:<a>`, `e_gamma:<g>`, `degroot:<w>`.
    fn from_str(s: &str) -> Result<DivergenceKind> {
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (s, None),
        };
        let param = |what: &str| -> Result<f64> {
            let a = arg.ok_or_else(|| Error::Parameter(format!("{what} needs a parameter, e.g. {what}:2")))?;
            a.trim().parse::<f64>().map_err(|_| Error::Parameter(format!("cannot parse parameter {a:?} of {what}")))
        };
        let kind = match head {
            "kl" => DivergenceKind::Kl,
            "kl_reverse" => DivergenceKind::KlReverse,
            "chi2" | "chi2_pearson" => DivergenceKind::Chi2Pearson,
            "chi2_neyman" => DivergenceKind::Chi2Neyman,
            "tv" | "total_variation" => DivergenceKind::TotalVariation,
            "hellinger2" => DivergenceKind::Hellinger2,
            "alpha" => DivergenceKind::Alpha(param("alpha")?),
            "e_gamma" => DivergenceKind::EGamma(param("e_gamma")?),
            "degroot" => DivergenceKind::DeGroot(param("degroot")?),
            other => return Err(Error::Parameter(format!("unknown divergence kind {other:?}"))),
        };
        if arg.is_some() && !matches!(kind, DivergenceKind::Alpha(_) | DivergenceKind::EGamma(_) | DivergenceKind::DeGroot(_)) {
            return Err(Error::Parameter(format!("{head} takes no parameter")));
        }
        kind.generator()?;
        Ok(kind)
    }
}
