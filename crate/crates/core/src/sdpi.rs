//! Strong data-processing machinery: likelihood-ratio ranges, the `c_f`/`e_f`
//! coefficients, divergence-gap bounds for a channel, their tensorized
//! mixture versions, and κ-based ratio and contraction bounds.

use rayon::prelude::*;

use crate::divergence::{chi2, f_divergence_centered};
use crate::error::{Error, Result};
use crate::ext::{ExtendedReal, Limit};
use crate::generator::{Generator, Monotonicity};
use crate::numerics::{golden_section_max, grid, maximize_1d, Interval, GL10};
use crate::pmf::{check_same_len, ProbVec};

/// A row-stochastic matrix `W(y|x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Channel {
    rows: Vec<Vec<f64>>,
}

impl Channel {
    /// Validates rows summing to one and every output having positive probability from some input.
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Channel> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(Error::InvalidChannel("empty matrix".into()));
        }
        let k = rows[0].len();
        for (x, row) in rows.iter().enumerate() {
            if row.len() != k {
                return Err(Error::InvalidChannel(format!("row {x} has {} entries, expected {k}", row.len())));
            }
            if row.iter().any(|&w| !w.is_finite() || w < 0.0) {
                return Err(Error::InvalidChannel(format!("row {x} has a negative or non-finite entry")));
            }
            let s: f64 = row.iter().sum();
            if (s - 1.0).abs() > crate::pmf::SUM_TOL {
                return Err(Error::InvalidChannel(format!("row {x} sums to {s}")));
            }
        }
        for y in 0..k {
            if rows.iter().all(|r| r[y] == 0.0) {
                return Err(Error::InvalidChannel(format!("output {y} is unreachable")));
            }
        }
        Ok(Channel { rows })
    }

    pub fn identity(n: usize) -> Channel {
        Channel { rows: (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect() }
    }

    /// Binary symmetric channel with crossover probability `delta`.
    pub fn bsc(delta: f64) -> Result<Channel> {
        if !(0.0..=1.0).contains(&delta) {
            return Err(Error::Parameter(format!("crossover probability {delta} outside [0,1]")));
        }
        Channel::new(vec![vec![1.0 - delta, delta], vec![delta, 1.0 - delta]])
    }

    pub fn inputs(&self) -> usize {
        self.rows.len()
    }

    pub fn outputs(&self) -> usize {
        self.rows[0].len()
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }
}

/// Binary convolution `a ∗ b = a(1−b) + (1−a)b`.
pub fn binary_convolution(a: f64, b: f64) -> f64 {
    a * (1.0 - b) + (1.0 - a) * b
}

/// `P W`.
pub fn push_forward(p: &ProbVec, w: &Channel) -> Result<ProbVec> {
    check_same_len(p.len(), w.inputs())?;
    let mut out = vec![0.0; w.outputs()];
    for (&px, row) in p.masses().iter().zip(w.rows()) {
        for (o, &wy) in out.iter_mut().zip(row) {
            *o += px * wy;
        }
    }
    ProbVec::new(out)
}

/// `ξ1 = inf P/Q ∈ [0,1]` and `ξ2 = sup P/Q ∈ [1,∞]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XiRange {
    pub xi1: f64,
    pub xi2: ExtendedReal,
}

impl XiRange {
    pub fn new(xi1: f64, xi2: ExtendedReal) -> Result<XiRange> {
        if !(0.0..=1.0).contains(&xi1) || xi2 < ExtendedReal::finite(1.0) {
            return Err(Error::Parameter(format!("need 0 <= xi1 <= 1 <= xi2, got ({xi1}, {xi2})")));
        }
        Ok(XiRange { xi1, xi2 })
    }

    pub fn finite(xi1: f64, xi2: f64) -> Result<XiRange> {
        XiRange::new(xi1, ExtendedReal::finite(xi2))
    }

    fn is_degenerate(&self) -> bool {
        self.xi1 == 1.0 && self.xi2 == ExtendedReal::finite(1.0)
    }
}

/// Range of `P/Q` over the alphabet; `Q` must be fully supported.
pub fn xi_range(p: &ProbVec, q: &ProbVec) -> Result<XiRange> {
    check_same_len(p.len(), q.len())?;
    if !q.is_fully_supported() {
        return Err(Error::Precondition("the reference pmf Q must be fully supported".into()));
    }
    let mut lo = f64::INFINITY;
    let mut hi: f64 = 0.0;
    for (&pi, &qi) in p.masses().iter().zip(q.masses()) {
        let r = pi / qi;
        lo = lo.min(r);
        hi = hi.max(r);
    }
    Ok(XiRange { xi1: lo.min(1.0), xi2: ExtendedReal::finite(hi.max(1.0)) })
}

/// Half the infimum and supremum of `f″` (`c_f`, `e_f`) and of `t³f″` (`c_dual`, `e_dual`) on `[ξ1, ξ2]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SdpiCoefficients {
    pub c_f: ExtendedReal,
    pub e_f: ExtendedReal,
    pub c_dual: ExtendedReal,
    pub e_dual: ExtendedReal,
}

// Stand-ins for the open ends 0 and ∞ when a limit is read off numerically.
const T_TINY: f64 = 1e-12;
const T_HUGE: f64 = 1e12;

fn nonneg(v: f64) -> ExtendedReal {
    if v.is_nan() || v == f64::INFINITY {
        ExtendedReal::Infinite
    } else {
        ExtendedReal::finite(v.max(0.0))
    }
}

/// `(inf, sup)` of `h` over `[lo, hi]` using monotonicity metadata when available,
/// otherwise a 4096-point log-spaced scan with golden-section refinement.
fn inf_sup<H: Fn(f64) -> f64>(h: H, mono: Monotonicity, lo: f64, hi: f64) -> Result<(f64, f64)> {
    let lo = lo.max(T_TINY);
    let hi = hi.min(T_HUGE);
    match mono {
        Monotonicity::Constant => {
            let v = h(1.0f64.clamp(lo, hi));
            Ok((v, v))
        }
        Monotonicity::Increasing => Ok((h(lo), h(hi))),
        Monotonicity::Decreasing => Ok((h(hi), h(lo))),
        Monotonicity::Unknown => {
            if hi <= lo {
                let v = h(lo);
                return Ok((v, v));
            }
            let pts = grid(lo, hi, 4096, true);
            let vals: Vec<f64> = pts.iter().map(|&t| h(t)).collect();
            if let Some(i) = vals.iter().position(|v| v.is_nan()) {
                return Err(Error::NonFinite { at: pts[i], value: vals[i] });
            }
            let (mut imin, mut imax) = (0, 0);
            for i in 1..vals.len() {
                if vals[i] < vals[imin] {
                    imin = i;
                }
                if vals[i] > vals[imax] {
                    imax = i;
                }
            }
            let cell = |i: usize| (pts[i.saturating_sub(1)].ln(), pts[(i + 1).min(pts.len() - 1)].ln());
            let (a, b) = cell(imax);
            let sup = golden_section_max(|s| h(s.exp()), a, b, 1e-12)?.max.max(vals[imax]);
            let (a, b) = cell(imin);
            let inf = (-golden_section_max(|s| -h(s.exp()), a, b, 1e-12)?.max).min(vals[imin]);
            Ok((inf, sup))
        }
    }
}

/// Coefficients of the gap bounds. A kink of `f` inside the interval gives
/// `c = 0` and `e = ∞`; the degenerate range `{1}` gives `½f″(1)` throughout.
pub fn sdpi_coefficients<G: Generator + ?Sized>(f: &G, xi: &XiRange) -> Result<SdpiCoefficients> {
    let lo = xi.xi1;
    let hi = xi.xi2.to_f64();
    let kinked = f.kinks().iter().any(|&k| k >= lo && k <= hi);
    if kinked {
        return Ok(SdpiCoefficients {
            c_f: ExtendedReal::ZERO,
            e_f: ExtendedReal::Infinite,
            c_dual: ExtendedReal::ZERO,
            e_dual: ExtendedReal::Infinite,
        });
    }
    if xi.is_degenerate() {
        let v = nonneg(0.5 * f.deriv2(1.0));
        return Ok(SdpiCoefficients { c_f: v, e_f: v, c_dual: v, e_dual: v });
    }
    let (i2, s2) = inf_sup(|t| f.deriv2(t), f.d2_monotonicity(), lo, hi)?;
    let (i3, s3) = inf_sup(|t| t * t * t * f.deriv2(t), f.t3d2_monotonicity(), lo, hi)?;
    Ok(SdpiCoefficients {
        c_f: nonneg(0.5 * i2),
        e_f: if lo == 0.0 && f.d2_monotonicity() == Monotonicity::Decreasing && f.deriv2(T_TINY) > 1e6 {
            ExtendedReal::Infinite
        } else {
            nonneg(0.5 * s2)
        },
        c_dual: nonneg(0.5 * i3),
        e_dual: if xi.xi2.is_infinite() && f.t3d2_monotonicity() == Monotonicity::Increasing {
            ExtendedReal::Infinite
        } else {
            nonneg(0.5 * s3)
        },
    })
}

/// Lower and upper bounds on `D_f(P‖Q) − D_f(PW‖QW)` together with its exact value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapBounds {
    pub lower_primal: ExtendedReal,
    pub lower_dual: ExtendedReal,
    pub upper_primal: ExtendedReal,
    pub upper_dual: ExtendedReal,
    pub exact_gap: ExtendedReal,
}

impl GapBounds {
    /// Whether `lower_* ≤ exact ≤ upper_*` holds up to `tol` (relative to the larger side).
    pub fn is_consistent(&self, tol: f64) -> bool {
        let le = |a: ExtendedReal, b: ExtendedReal| match (a, b) {
            (_, ExtendedReal::Infinite) => true,
            (ExtendedReal::Infinite, _) => false,
            (ExtendedReal::Finite(x), ExtendedReal::Finite(y)) => x <= y + tol * (1.0 + x.abs().max(y.abs())),
        };
        le(self.lower_primal, self.exact_gap)
            && le(self.lower_dual, self.exact_gap)
            && le(self.exact_gap, self.upper_primal)
            && le(self.exact_gap, self.upper_dual)
    }
}

fn gap(a: ExtendedReal, b: ExtendedReal) -> Result<f64> {
    match (a, b) {
        (ExtendedReal::Finite(x), ExtendedReal::Finite(y)) => Ok((x - y).max(0.0)),
        _ => Err(Error::Precondition("divergences must be finite; P and Q need full support".into())),
    }
}

/// Gap bounds for `f` and the pair `(P, Q)` through `W`. Both pmfs must be fully supported.
pub fn gap_bounds<G: Generator + ?Sized>(f: &G, p: &ProbVec, q: &ProbVec, w: &Channel) -> Result<GapBounds> {
    if !p.is_fully_supported() || !q.is_fully_supported() {
        return Err(Error::Precondition("gap bounds need fully supported P and Q".into()));
    }
    let pw = push_forward(p, w)?;
    let qw = push_forward(q, w)?;
    let coeff = sdpi_coefficients(f, &xi_range(p, q)?)?;
    let g_primal = ExtendedReal::finite(gap(chi2(p, q)?, chi2(&pw, &qw)?)?);
    let g_dual = ExtendedReal::finite(gap(chi2(q, p)?, chi2(&qw, &pw)?)?);
    let exact = gap(f_divergence_centered(f, p, q)?, f_divergence_centered(f, &pw, &qw)?)?;
    Ok(GapBounds {
        lower_primal: coeff.c_f * g_primal,
        lower_dual: coeff.c_dual * g_dual,
        upper_primal: coeff.e_f * g_primal,
        upper_dual: coeff.e_dual * g_dual,
        exact_gap: ExtendedReal::finite(exact),
    })
}

/// Ratio of the divergence gap to the χ² gap along `P_k = (1 − 1/k) Q + P′/k`,
/// which tends to `½ f″(1)` as `k → ∞`.
pub fn local_tightness_ratio<G: Generator + ?Sized>(f: &G, p_prime: &ProbVec, q: &ProbVec, w: &Channel, k: f64) -> Result<f64> {
    let pk = p_prime.mixture(q, 1.0 / k)?;
    let pw = push_forward(&pk, w)?;
    let qw = push_forward(q, w)?;
    let num = gap(f_divergence_centered(f, &pk, q)?, f_divergence_centered(f, &pw, &qw)?)?;
    let den = gap(chi2(&pk, q)?, chi2(&pw, &qw)?)?;
    if den == 0.0 {
        return Err(Error::Precondition("the chi-squared gap vanishes".into()));
    }
    Ok(num / den)
}

/// `(f(t) + f′(1)(1 − t))/(t − 1)²`, using `∫₀¹ (1−s) f″(1 + s(t−1)) ds` near `t = 1`.
pub fn kappa_objective<G: Generator + ?Sized>(f: &G, t: f64) -> f64 {
    let d = t - 1.0;
    if d.abs() < 1e-3 {
        let mut s = 0.0;
        for &(x, w) in &GL10 {
            for u in [0.5 * (1.0 - x), 0.5 * (1.0 + x)] {
                s += 0.5 * w * (1.0 - u) * f.deriv2(1.0 + u * d);
            }
        }
        return s;
    }
    f.bregman_at_one(t) / (d * d)
}

/// `κ(ξ1, ξ2) = sup_{t ∈ (ξ1,1) ∪ (1,ξ2)} (f(t) + f′(1)(1−t))/(t−1)²`.
pub fn kappa<G: Generator + ?Sized>(f: &G, xi: &XiRange) -> Result<ExtendedReal> {
    if !f.f_at_zero().is_finite() {
        return Err(Error::Precondition("kappa needs a finite f(0)".into()));
    }
    if !(xi.xi1 < 1.0 && xi.xi2 > ExtendedReal::finite(1.0)) {
        return Err(Error::Precondition("kappa needs xi1 < 1 < xi2".into()));
    }
    let obj = |t: f64| kappa_objective(f, t);
    let left = maximize_1d(obj, Interval::closed(xi.xi1, 1.0), 4096, 1e-12)?;
    let right = match xi.xi2 {
        ExtendedReal::Finite(x2) if x2 <= 1e3 => maximize_1d(obj, Interval::closed(1.0, x2), 4096, 1e-12)?.max,
        ExtendedReal::Finite(x2) => {
            maximize_1d(|s: f64| obj(s.exp()), Interval::closed(0.0, x2.ln()), 4096, 1e-12)?.max
        }
        ExtendedReal::Infinite => {
            let r = maximize_1d(|s: f64| obj(s.exp()), Interval::closed(0.0, 300.0), 4096, 1e-12)?;
            if r.argmax > 290.0 {
                return Ok(ExtendedReal::Infinite);
            }
            r.max
        }
    };
    Ok(nonneg(left.max.max(right)))
}

/// Checks on 1024 log-spaced points of `[1e-4, 1e4]` that `g(t) = (f(t) − f(0))/t` is
/// convex, via `t³g″ = t²f″ − 2t f′ + 2(f − f(0)) ≥ 0` with a relative tolerance of `1e-9`.
pub fn check_convex_g_class<G: Generator + ?Sized>(f: &G) -> Result<()> {
    let f0 = f
        .f_at_zero()
        .finite_value()
        .ok_or_else(|| Error::OutsideClass(format!("{} has infinite f(0)", f.name())))?;
    for t in grid(1e-4, 1e4, 1024, true) {
        let (a, b, c) = (t * t * f.deriv2(t), 2.0 * t * f.deriv1(t), 2.0 * (f.eval(t) - f0));
        let scale = a.abs() + b.abs() + c.abs() + 2.0 * f0.abs();
        if a - b + c < -1e-9 * scale.max(1e-300) {
            return Err(Error::OutsideClass(format!("{}: t^3 g''(t) = {} < 0 at t = {t}", f.name(), a - b + c)));
        }
    }
    Ok(())
}

fn bregman_at_zero<G: Generator + ?Sized>(f: &G) -> Result<f64> {
    let v = f.bregman_at_one(0.0);
    if !(v > 0.0) || !v.is_finite() {
        return Err(Error::Precondition(format!("f(0) + f'(1) must be positive and finite, got {v}")));
    }
    Ok(v)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioBound {
    pub kappa: ExtendedReal,
    /// Upper bound on `D_f(PW‖QW)/D_f(P‖Q)`.
    pub bound_on_ratio: ExtendedReal,
    /// Multiplier `m` with `μ_f(Q, W) ≤ m · μ_{χ²}(Q, W)`.
    pub contraction_multiplier: ExtendedReal,
}

/// The κ-based bound on the divergence ratio through `W` and on the contraction coefficient.
pub fn ratio_bound<G: Generator + ?Sized>(f: &G, p: &ProbVec, q: &ProbVec, w: &Channel) -> Result<RatioBound> {
    check_convex_g_class(f)?;
    let denom = bregman_at_zero(f)?;
    let cx = chi2(p, q)?.to_f64();
    if !(cx > 0.0) {
        return Err(Error::Precondition("P and Q must differ".into()));
    }
    let cy = chi2(&push_forward(p, w)?, &push_forward(q, w)?)?.to_f64();
    let k = kappa(f, &xi_range(p, q)?)?;
    let kq = kappa(f, &XiRange::finite(0.0, 1.0 / q.min())?)?;
    Ok(RatioBound {
        kappa: k,
        bound_on_ratio: k.scale(cy / (cx * denom)),
        contraction_multiplier: kq.scale(1.0 / denom),
    })
}

/// Per-coordinate sources, channels and the mixing weight of the tensorized setting.
#[derive(Debug, Clone)]
pub struct MixtureSetup {
    pub sources: Vec<(ProbVec, ProbVec)>,
    pub channels: Vec<Channel>,
    pub lambda: f64,
}

impl MixtureSetup {
    pub fn new(sources: Vec<(ProbVec, ProbVec)>, channels: Vec<Channel>, lambda: f64) -> Result<MixtureSetup> {
        if sources.is_empty() {
            return Err(Error::Parameter("need at least one coordinate".into()));
        }
        check_same_len(sources.len(), channels.len())?;
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::Parameter(format!("lambda {lambda} outside [0,1]")));
        }
        for ((p, q), w) in sources.iter().zip(&channels) {
            check_same_len(p.len(), q.len())?;
            check_same_len(p.len(), w.inputs())?;
            if !p.is_fully_supported() || !q.is_fully_supported() {
                return Err(Error::Precondition("per-coordinate pmfs must be fully supported".into()));
            }
        }
        Ok(MixtureSetup { sources, channels, lambda })
    }

    /// `n` identical coordinates.
    pub fn iid(p: ProbVec, q: ProbVec, w: Channel, n: usize, lambda: f64) -> Result<MixtureSetup> {
        MixtureSetup::new(vec![(p, q); n], vec![w; n], lambda)
    }

    pub fn n(&self) -> usize {
        self.sources.len()
    }

    pub fn with_lambda(&self, lambda: f64) -> Result<MixtureSetup> {
        MixtureSetup::new(self.sources.clone(), self.channels.clone(), lambda)
    }

    /// `(ξ1(n,λ), ξ2(n,λ))`.
    pub fn xi(&self) -> Result<XiRange> {
        let lam = self.lambda;
        let (mut a, mut b) = (1.0, 1.0);
        for (p, q) in &self.sources {
            let r = xi_range(p, q)?;
            a *= 1.0 - lam + lam * r.xi1;
            b *= 1.0 - lam + lam * r.xi2.to_f64();
        }
        XiRange::finite(a.min(1.0), b.max(1.0))
    }

    /// Per-coordinate `(χ²(P_i‖Q_i), χ²(P_iW_i‖Q_iW_i))`.
    pub fn chi2_pairs(&self) -> Result<Vec<(f64, f64)>> {
        self.sources
            .iter()
            .zip(&self.channels)
            .map(|((p, q), w)| {
                let x = chi2(p, q)?.to_f64();
                let y = chi2(&push_forward(p, w)?, &push_forward(q, w)?)?.to_f64();
                Ok((x, y))
            })
            .collect()
    }

    fn input_factors(&self) -> Result<Vec<(ProbVec, ProbVec)>> {
        self.sources.iter().map(|(p, q)| Ok((p.mixture(q, self.lambda)?, q.clone()))).collect()
    }

    fn output_factors(&self) -> Result<Vec<(ProbVec, ProbVec)>> {
        self.sources
            .iter()
            .zip(&self.channels)
            .map(|((p, q), w)| {
                let qy = push_forward(q, w)?;
                Ok((push_forward(p, w)?.mixture(&qy, self.lambda)?, qy))
            })
            .collect()
    }
}

/// Default cap on the number of enumerated product outcomes.
pub const STATE_CAP: usize = 1 << 20;
/// Coordinates beyond this count are never enumerated.
pub const MAX_EXACT_N: usize = 12;
const CHUNK: usize = 1024;

/// `D_f(⊗R_i ‖ ⊗Q_i)` by enumeration, or `None` past the caps. Outcomes are summed
/// in fixed chunks merged in index order, so the value does not depend on the thread count.
pub fn product_divergence<G: Generator + ?Sized>(f: &G, factors: &[(ProbVec, ProbVec)], cap: usize) -> Result<Option<f64>> {
    if factors.len() > MAX_EXACT_N {
        return Ok(None);
    }
    let mut states: usize = 1;
    for (r, q) in factors {
        check_same_len(r.len(), q.len())?;
        states = match states.checked_mul(r.len()) {
            Some(s) if s <= cap => s,
            _ => return Ok(None),
        };
    }
    let d1 = f.deriv1(1.0);
    let f0 = f.f_at_zero();
    let term = |mut idx: usize| -> f64 {
        let mut ratio = 1.0;
        let mut qm = 1.0;
        for (r, q) in factors.iter().rev() {
            let k = r.len();
            let x = idx % k;
            idx /= k;
            ratio *= r.get(x) / q.get(x);
            qm *= q.get(x);
        }
        if qm == 0.0 {
            0.0
        } else if ratio == 0.0 {
            match f0 {
                Limit::Finite(v) => qm * (v + d1),
                Limit::PosInf => f64::INFINITY,
            }
        } else {
            qm * f.bregman_at_one(ratio)
        }
    };
    let chunks: Vec<f64> = (0..states.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| (c * CHUNK..((c + 1) * CHUNK).min(states)).map(term).sum::<f64>())
        .collect();
    let total: f64 = chunks.iter().sum();
    if total.is_nan() {
        return Err(Error::NonFinite { at: f64::NAN, value: total });
    }
    Ok(Some(total.max(0.0)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixtureBounds {
    pub lb1: ExtendedReal,
    pub lb2: ExtendedReal,
    pub ub1: ExtendedReal,
    pub xi1_n: f64,
    pub xi2_n: f64,
    /// `D_f(R_{X^n}‖Q_{X^n})`, when enumerable.
    pub exact_input: Option<f64>,
    /// `D_f(R_{Y^n}‖Q_{Y^n})`, when enumerable.
    pub exact_output: Option<f64>,
    pub exact_gap: Option<f64>,
}

/// Gap bounds for the tensorized mixture `R^{(λ)} = ⊗(λP_i + (1−λ)Q_i)` against `⊗Q_i`.
pub fn mixture_gap_bounds<G: Generator + ?Sized>(setup: &MixtureSetup, f: &G) -> Result<MixtureBounds> {
    let lam2 = setup.lambda * setup.lambda;
    let pairs = setup.chi2_pairs()?;
    let px: f64 = pairs.iter().map(|(x, _)| 1.0 + lam2 * x).product();
    let py: f64 = pairs.iter().map(|(_, y)| 1.0 + lam2 * y).product();
    let prod_gap = ExtendedReal::finite((px - py).max(0.0));
    let sum_gap = ExtendedReal::finite(lam2 * pairs.iter().map(|(x, y)| (x - y).max(0.0)).sum::<f64>());
    let xi = setup.xi()?;
    let coeff = sdpi_coefficients(f, &xi)?;
    let exact_input = product_divergence(f, &setup.input_factors()?, STATE_CAP)?;
    let exact_output = product_divergence(f, &setup.output_factors()?, STATE_CAP)?;
    let exact_gap = match (exact_input, exact_output) {
        (Some(a), Some(b)) => Some((a - b).max(0.0)),
        _ => None,
    };
    Ok(MixtureBounds {
        lb1: coeff.c_f * prod_gap,
        lb2: coeff.c_f * sum_gap,
        ub1: coeff.e_f * prod_gap,
        xi1_n: xi.xi1,
        xi2_n: xi.xi2.to_f64(),
        exact_input,
        exact_output,
        exact_gap,
    })
}

/// Upper bound on `D_f(R_{Y^n}‖Q_{Y^n}) / D_f(R_{X^n}‖Q_{X^n})` for `λ ∈ (0,1]`.
pub fn product_ratio_bound<G: Generator + ?Sized>(setup: &MixtureSetup, f: &G) -> Result<ExtendedReal> {
    check_convex_g_class(f)?;
    if !(setup.lambda > 0.0) {
        return Err(Error::Precondition("lambda must be positive".into()));
    }
    let lam2 = setup.lambda * setup.lambda;
    let pairs = setup.chi2_pairs()?;
    let px: f64 = pairs.iter().map(|(x, _)| 1.0 + lam2 * x).product::<f64>() - 1.0;
    let py: f64 = pairs.iter().map(|(_, y)| 1.0 + lam2 * y).product::<f64>() - 1.0;
    if !(px > 0.0) {
        return Err(Error::Precondition("every coordinate has P = Q; the ratio is undefined".into()));
    }
    let k = kappa(f, &setup.xi()?)?;
    Ok(k.scale(py.max(0.0) / (px * bregman_at_zero(f)?)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductGap {
    pub exact: f64,
    pub linear_lb: f64,
}

/// `∏(1 + a_i u) − ∏(1 + b_i u)` and its lower bound `u Σ(a_i − b_i)` for `a_i ≥ b_i ≥ 0`.
pub fn product_gap_bounds(a: &[f64], b: &[f64], u: f64) -> Result<ProductGap> {
    check_same_len(a.len(), b.len())?;
    if !(u >= 0.0) || a.iter().zip(b).any(|(&x, &y)| !(x >= y && y >= 0.0)) {
        return Err(Error::Precondition("need a_i >= b_i >= 0 and u >= 0".into()));
    }
    let pa: f64 = a.iter().map(|x| 1.0 + x * u).product();
    let pb: f64 = b.iter().map(|y| 1.0 + y * u).product();
    Ok(ProductGap { exact: pa - pb, linear_lb: u * a.iter().zip(b).map(|(x, y)| x - y).sum::<f64>() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::{Chi2Neyman, Chi2Pearson, Kl, TotalVariation};

    fn pv(v: &[f64]) -> ProbVec {
        ProbVec::new(v.to_vec()).unwrap()
    }

    #[test]
    fn push_forward_examples() {
        let p = ProbVec::bernoulli(0.25).unwrap();
        assert_eq!(push_forward(&p, &Channel::identity(2)).unwrap(), p);
        let out = push_forward(&p, &Channel::bsc(0.11).unwrap()).unwrap();
        assert!((out.get(1) - 0.305).abs() < 1e-15);
        assert!((binary_convolution(0.25, 0.11) - 0.305).abs() < 1e-15);
        let r = Channel::new(vec![vec![0.2, 0.8]; 3]).unwrap();
        let out = push_forward(&pv(&[0.1, 0.6, 0.3]), &r).unwrap();
        assert!((out.get(0) - 0.2).abs() < 1e-15);
    }

    #[test]
    fn channel_validation() {
        assert!(Channel::new(vec![vec![0.5, 0.4]]).is_err());
        assert!(Channel::new(vec![vec![1.0, 0.0], vec![1.0, 0.0]]).is_err());
    }

    #[test]
    fn xi_examples() {
        let q = ProbVec::bernoulli(0.5).unwrap();
        let r = xi_range(&q, &q).unwrap();
        assert_eq!((r.xi1, r.xi2), (1.0, ExtendedReal::finite(1.0)));
        let r = xi_range(&ProbVec::bernoulli(0.25).unwrap(), &q).unwrap();
        assert_eq!((r.xi1, r.xi2), (0.5, ExtendedReal::finite(1.5)));
        let r = xi_range(&pv(&[1.0, 0.0]), &q).unwrap();
        assert_eq!((r.xi1, r.xi2), (0.0, ExtendedReal::finite(2.0)));
        assert!(xi_range(&q, &pv(&[1.0, 0.0])).is_err());
    }

    #[test]
    fn coefficient_examples() {
        let xi = XiRange::finite(0.5, 1.5).unwrap();
        let c = sdpi_coefficients(&Chi2Pearson, &xi).unwrap();
        assert_eq!((c.c_f, c.e_f), (ExtendedReal::finite(1.0), ExtendedReal::finite(1.0)));
        assert!((c.c_dual.to_f64() - 0.125).abs() < 1e-15);
        assert!((c.e_dual.to_f64() - 3.375).abs() < 1e-15);
        let one = XiRange::finite(1.0, 1.0).unwrap();
        let c = sdpi_coefficients(&Kl, &one).unwrap();
        assert_eq!(c.c_f, ExtendedReal::finite(0.5));
        assert_eq!(c.e_dual, ExtendedReal::finite(0.5));
        let c = sdpi_coefficients(&TotalVariation, &xi).unwrap();
        assert_eq!((c.c_f, c.e_f), (ExtendedReal::ZERO, ExtendedReal::Infinite));
    }

    #[test]
    fn unknown_monotonicity_uses_scan() {
        let g = crate::generator::FnGenerator::new("kl-fn", |t: f64| t * t.ln() + 1.0 - t, Limit::Finite(1.0), Limit::PosInf);
        let xi = XiRange::finite(0.25, 4.0).unwrap();
        let c = sdpi_coefficients(&g, &xi).unwrap();
        assert!((c.c_f.to_f64() - 0.125).abs() < 1e-6);
        assert!((c.e_f.to_f64() - 2.0).abs() < 2e-6);
        assert!((c.e_dual.to_f64() - 8.0).abs() < 1e-4);
    }

    #[test]
    fn chi2_and_neyman_equalities() {
        let p = pv(&[0.2, 0.5, 0.3]);
        let q = pv(&[0.4, 0.4, 0.2]);
        let w = Channel::new(vec![vec![0.7, 0.3], vec![0.2, 0.8], vec![0.5, 0.5]]).unwrap();
        let g = gap_bounds(&Chi2Pearson, &p, &q, &w).unwrap();
        assert!((g.lower_primal.to_f64() - g.exact_gap.to_f64()).abs() < 1e-12);
        assert!((g.upper_primal.to_f64() - g.exact_gap.to_f64()).abs() < 1e-12);
        let g = gap_bounds(&Chi2Neyman, &p, &q, &w).unwrap();
        assert!((g.lower_dual.to_f64() - g.exact_gap.to_f64()).abs() < 1e-12);
        assert!((g.upper_dual.to_f64() - g.exact_gap.to_f64()).abs() < 1e-12);
        let g = gap_bounds(&Kl, &q, &q, &w).unwrap();
        assert_eq!(g.exact_gap, ExtendedReal::ZERO);
        assert_eq!(g.upper_primal, ExtendedReal::ZERO);
    }

    #[test]
    fn kappa_of_chi2_is_one() {
        let k = kappa(&Chi2Pearson, &XiRange::finite(0.2, 5.0).unwrap()).unwrap();
        assert!((k.to_f64() - 1.0).abs() < 1e-12);
        let k = kappa(&Chi2Pearson, &XiRange::new(0.0, ExtendedReal::Infinite).unwrap()).unwrap();
        assert!((k.to_f64() - 1.0).abs() < 1e-12);
        assert!(kappa(&Chi2Neyman, &XiRange::finite(0.2, 5.0).unwrap()).is_err());
    }

    #[test]
    fn class_check() {
        assert!(check_convex_g_class(&Chi2Pearson).is_ok());
        assert!(matches!(check_convex_g_class(&Kl), Err(Error::OutsideClass(_))));
    }

    #[test]
    fn product_gap_examples() {
        let g = product_gap_bounds(&[1.0, 1.0], &[0.0, 0.0], 1.0).unwrap();
        assert_eq!((g.exact, g.linear_lb), (3.0, 2.0));
        let g = product_gap_bounds(&[0.3, 0.2], &[0.3, 0.2], 2.0).unwrap();
        assert_eq!((g.exact, g.linear_lb), (0.0, 0.0));
        let a = [0.7, 1.3, 0.2];
        let b = [0.1, 0.4, 0.2];
        let g = product_gap_bounds(&a, &b, 1e-6).unwrap();
        assert!((g.exact / 1e-6 - 1.5).abs() / 1.5 <= 1e-4);
        assert!(product_gap_bounds(&[0.1], &[0.2], 1.0).is_err());
    }

    #[test]
    fn mixture_at_zero_lambda_vanishes() {
        let s = MixtureSetup::iid(
            ProbVec::bernoulli(0.25).unwrap(),
            ProbVec::bernoulli(0.5).unwrap(),
            Channel::bsc(0.11).unwrap(),
            3,
            0.0,
        )
        .unwrap();
        let b = mixture_gap_bounds(&s, &Kl).unwrap();
        assert_eq!(b.lb1, ExtendedReal::ZERO);
        assert_eq!(b.ub1, ExtendedReal::ZERO);
        assert_eq!(b.exact_gap, Some(0.0));
    }

    #[test]
    fn product_divergence_matches_single_letter_for_chi2() {
        let r = pv(&[0.3, 0.7]);
        let q = pv(&[0.5, 0.5]);
        let c = chi2(&r, &q).unwrap().to_f64();
        let factors = vec![(r.clone(), q.clone()); 4];
        let d = product_divergence(&Chi2Pearson, &factors, STATE_CAP).unwrap().unwrap();
        assert!((d - ((1.0 + c).powi(4) - 1.0)).abs() < 1e-12);
        assert!(product_divergence(&Chi2Pearson, &factors, 8).unwrap().is_none());
    }
}
