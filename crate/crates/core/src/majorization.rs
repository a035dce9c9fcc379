//! Majorization, the ratio-constrained simplex `P_n(ρ)` and its extremal
//! distributions `Q_β`, and the asymptotic maxima `Δ(α,ρ)` and `Φ(α,ρ)`.

use crate::divergence::{entropy, f_divergence_centered, fenchel_conjugate, EntropyKind};
use crate::error::{Error, Result};
use crate::ext::{ExtendedReal, Limit};
use crate::f_alpha::{alpha_min, FAlpha};
use crate::generator::{Alpha, Dual, Generator};
use crate::numerics::{lambert_w, maximize_1d, maximize_1d_default, Branch, Interval};
use crate::pmf::ProbVec;
use crate::sdpi::{sdpi_coefficients, XiRange};

const MAJ_TOL: f64 = 1e-12;

/// Partial-sum comparison of two pmfs sorted in decreasing order.
#[derive(Debug, Clone, PartialEq)]
pub struct MajorizationReport {
    pub holds: bool,
    /// Smallest `k` (number of leading masses) with `G_Q(k) < G_P(k)`.
    pub first_violated_k: Option<usize>,
    /// `G_Q(k) − G_P(k)` for `k = 1..=n`.
    pub gaps: Vec<f64>,
}

/// Whether `P ≺ Q`, i.e. `Q` majorizes `P`. The shorter vector is padded with zeros.
pub fn majorizes(p: &ProbVec, q: &ProbVec) -> MajorizationReport {
    let n = p.len().max(q.len());
    let mut ps = p.sorted_desc();
    let mut qs = q.sorted_desc();
    ps.resize(n, 0.0);
    qs.resize(n, 0.0);
    let (mut gp, mut gq) = (0.0, 0.0);
    let mut gaps = Vec::with_capacity(n);
    let mut first_violated_k = None;
    for k in 0..n {
        gp += ps[k];
        gq += qs[k];
        let gap = gq - gp;
        if gap < -MAJ_TOL && first_violated_k.is_none() {
            first_violated_k = Some(k + 1);
        }
        gaps.push(gap);
    }
    MajorizationReport { holds: first_violated_k.is_none(), first_violated_k, gaps }
}

fn require_majorized(p: &ProbVec, q: &ProbVec) -> Result<()> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch { left: p.len(), right: q.len() });
    }
    let report = majorizes(p, q);
    match report.first_violated_k {
        None => Ok(()),
        Some(k) => Err(Error::Precondition(format!("P is not majorized by Q (partial sums differ at k = {k})"))),
    }
}

/// Bounds on `D_f(Q‖U_n) − D_f(P‖U_n)` for `P ≺ Q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MajorizationGapBounds {
    pub lb: f64,
    pub ub: ExtendedReal,
    pub exact: f64,
}

pub fn majorization_gap_bounds<G: Generator + ?Sized>(f: &G, p: &ProbVec, q: &ProbVec) -> Result<MajorizationGapBounds> {
    require_majorized(p, q)?;
    let n = q.len();
    let nf = n as f64;
    let u = ProbVec::uniform(n);
    let xi = XiRange::finite((nf * q.min()).min(1.0), (nf * q.max()).max(1.0))?;
    let coeffs = sdpi_coefficients(f, &xi)?;
    let norm_gap = (q.norm2_sq() - p.norm2_sq()).max(0.0);
    let exact = f_divergence_centered(f, q, &u)?.to_f64() - f_divergence_centered(f, p, &u)?.to_f64();
    Ok(MajorizationGapBounds {
        lb: coeffs.c_f.scale(nf * norm_gap).to_f64(),
        ub: coeffs.e_f.scale(nf * norm_gap),
        exact,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormGap {
    pub gap: f64,
    pub bound: f64,
}

/// `0 ≤ ‖Q‖² − ‖P‖² ≤ (ρ−1)²/(4ρn)` for `P ≺ Q` with `q_max/q_min ≤ ρ`.
pub fn norm_gap_bound(p: &ProbVec, q: &ProbVec, rho: f64) -> Result<NormGap> {
    require_majorized(p, q)?;
    let params = RhoSimplexParams::new(q.len(), rho)?;
    if !params.contains(q) {
        return Err(Error::Precondition(format!("Q is not in P_{}({rho})", q.len())));
    }
    let gap = q.norm2_sq() - p.norm2_sq();
    let bound = (rho - 1.0).powi(2) / (4.0 * rho * q.len() as f64);
    if gap < -MAJ_TOL || gap > bound + MAJ_TOL {
        return Err(Error::Domain(format!("norm gap {gap} outside [0, {bound}]")));
    }
    Ok(NormGap { gap: gap.max(0.0), bound })
}

/// The set `P_n(ρ)` of pmfs on `n` letters with `p_max/p_min ≤ ρ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RhoSimplexParams {
    n: usize,
    rho: f64,
}

impl RhoSimplexParams {
    pub fn new(n: usize, rho: f64) -> Result<RhoSimplexParams> {
        if n < 2 {
            return Err(Error::Parameter(format!("n must be at least 2, got {n}")));
        }
        if !(rho >= 1.0) || !rho.is_finite() {
            return Err(Error::Parameter(format!("rho must be a finite number >= 1, got {rho}")));
        }
        Ok(RhoSimplexParams { n, rho })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn contains(&self, p: &ProbVec) -> bool {
        p.len() == self.n && p.is_fully_supported() && p.max() <= self.rho * p.min() * (1.0 + MAJ_TOL)
    }

    /// `Γ_n(ρ) = [1/(1+(n−1)ρ), 1/n]`.
    pub fn gamma(&self) -> (f64, f64) {
        (1.0 / (1.0 + (self.n as f64 - 1.0) * self.rho), 1.0 / self.n as f64)
    }

    /// `β_k = 1/(n + k(ρ−1))` for `k = 0..n`, where `i_β` steps; decreasing in `k`.
    pub fn breakpoints(&self) -> Vec<f64> {
        (0..self.n).map(|k| 1.0 / (self.n as f64 + k as f64 * (self.rho - 1.0))).collect()
    }

    pub fn q_beta(&self, beta: f64) -> Result<QBeta> {
        let (lo, hi) = self.gamma();
        if !(beta >= lo * (1.0 - 1e-12) && beta <= hi * (1.0 + 1e-12)) {
            return Err(Error::Parameter(format!("beta = {beta} outside [{lo}, {hi}]")));
        }
        let beta = beta.clamp(lo, hi);
        let i_beta = if self.rho == 1.0 {
            0
        } else {
            let raw = ((1.0 - self.n as f64 * beta) / ((self.rho - 1.0) * beta)).floor();
            (raw.max(0.0) as usize).min(self.n - 1)
        };
        Ok(QBeta { params: *self, beta, i_beta })
    }

    /// Sum `Σ_j w(Q_β(j))` of the three-block form with `i` leading masses `ρβ`.
    fn block_sum(&self, beta: f64, i: usize, w: impl Fn(f64) -> f64) -> f64 {
        let n = self.n as f64;
        let k = i as f64;
        let mid = 1.0 - (n + k * (self.rho - 1.0) - 1.0) * beta;
        k * w(self.rho * beta) + w(mid) + (n - k - 1.0) * w(beta)
    }
}

/// The extremal pmf `Q_β ∈ P_n(ρ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QBeta {
    pub params: RhoSimplexParams,
    pub beta: f64,
    pub i_beta: usize,
}

impl QBeta {
    pub fn middle_mass(&self) -> f64 {
        let n = self.params.n as f64;
        1.0 - (n + self.i_beta as f64 * (self.params.rho - 1.0) - 1.0) * self.beta
    }

    pub fn masses(&self) -> Vec<f64> {
        let n = self.params.n;
        let mut v = vec![self.params.rho * self.beta; self.i_beta];
        v.push(self.middle_mass());
        v.resize(n, self.beta);
        v
    }

    pub fn to_pmf(&self) -> Result<ProbVec> {
        ProbVec::new(self.masses().into_iter().map(|m| m.max(0.0)).collect())
    }
}

/// Maximum over `β ∈ Γ_n(ρ)` with its maximizer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaOptimum {
    pub value: f64,
    pub beta_star: f64,
}

const BETA_SCAN_POINTS: usize = 2048;

/// Maximizes `Σ_j w(Q_β(j))` piece by piece between consecutive `i_β` breakpoints,
/// so both one-sided limits at each breakpoint are evaluated.
fn beta_scan(params: &RhoSimplexParams, w: impl Fn(f64) -> f64) -> Result<BetaOptimum> {
    let (lo, hi) = params.gamma();
    if params.rho == 1.0 {
        return Ok(BetaOptimum { value: params.block_sum(hi, 0, &w), beta_star: hi });
    }
    let bps = params.breakpoints();
    let total = hi - lo;
    let mut best = BetaOptimum { value: f64::NEG_INFINITY, beta_star: hi };
    for i in 0..params.n - 1 {
        let (a, b) = (bps[i + 1], bps[i]);
        let points = ((BETA_SCAN_POINTS as f64 * (b - a) / total).ceil() as usize).max(3);
        let r = maximize_1d(|beta| params.block_sum(beta, i, &w), Interval::closed(a, b), points, 1e-14)?;
        if r.max > best.value {
            best = BetaOptimum { value: r.max, beta_star: r.argmax };
        }
    }
    Ok(best)
}

/// `u_f(n,ρ) = max_{Q ∈ P_n(ρ)} D_f(Q‖U_n)`, attained on the family `Q_β`.
pub fn u_f<G: Generator + ?Sized>(params: &RhoSimplexParams, f: &G) -> Result<BetaOptimum> {
    let n = params.n as f64;
    let mut r = beta_scan(params, |m| f.eval(n * m) / n)?;
    if params.rho == 1.0 {
        r.value = 0.0;
    }
    Ok(r)
}

/// `v_f(n,ρ) = max_{Q ∈ P_n(ρ)} D_f(U_n‖Q)`.
pub fn v_f<G: Generator + ?Sized>(params: &RhoSimplexParams, f: &G) -> Result<BetaOptimum> {
    let n = params.n as f64;
    let mut r = beta_scan(params, |m| m * f.eval(1.0 / (n * m)))?;
    if params.rho == 1.0 {
        r.value = 0.0;
    }
    Ok(r)
}

/// `g_f(x) = x f(ρ/(1+(ρ−1)x)) + (1−x) f(1/(1+(ρ−1)x))` on `[0,1]`.
pub fn g_f_rho<G: Generator + ?Sized>(f: &G, rho: f64, x: f64) -> f64 {
    let den = 1.0 + (rho - 1.0) * x;
    let mut v = 0.0;
    if x > 0.0 {
        v += x * f.eval(rho / den);
    }
    if x < 1.0 {
        v += (1.0 - x) * f.eval(1.0 / den);
    }
    v
}

fn check_rho(rho: f64) -> Result<()> {
    if !(rho >= 1.0) || !rho.is_finite() {
        return Err(Error::Parameter(format!("rho must be a finite number >= 1, got {rho}")));
    }
    Ok(())
}

/// `lim_n u_f(n,ρ) = max_{x∈[0,1]} g_f(x)`.
pub fn d_f_asymptotic<G: Generator + ?Sized>(f: &G, rho: f64) -> Result<f64> {
    check_rho(rho)?;
    if rho == 1.0 {
        return Ok(0.0);
    }
    Ok(maximize_1d_default(|x| g_f_rho(f, rho, x), Interval::closed(0.0, 1.0))?.max.max(0.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiniteNBounds {
    pub lb: f64,
    pub ub: f64,
}

/// `max_m g_f(m/n) ≤ u_f(n,ρ) ≤ max_x g_f(x)`.
pub fn finite_n_bounds<G: Generator + ?Sized>(f: &G, n: usize, rho: f64) -> Result<FiniteNBounds> {
    RhoSimplexParams::new(n, rho)?;
    let lb = (0..=n).map(|m| g_f_rho(f, rho, m as f64 / n as f64)).fold(0.0, f64::max);
    Ok(FiniteNBounds { lb, ub: d_f_asymptotic(f, rho)? })
}

/// `lim_n v_f(n,ρ)`, which is the asymptotic maximum for the dual generator.
pub fn d_f_asymptotic_dual<G: Generator>(f: G, rho: f64) -> Result<f64> {
    d_f_asymptotic(&Dual::new(f), rho)
}

fn check_delta_rho(rho: f64) -> Result<()> {
    if !(rho > 1.0) || !rho.is_finite() {
        return Err(Error::Parameter(format!("Delta needs a finite rho > 1, got {rho}")));
    }
    Ok(())
}

/// `Δ(α,ρ) = lim_n max_{Q ∈ P_n(ρ)} D_A^{(α)}(Q‖U_n)` in closed form.
pub fn delta_alpha(alpha: f64, rho: f64) -> Result<f64> {
    check_delta_rho(rho)?;
    if !alpha.is_finite() {
        return Err(Error::Parameter(format!("alpha must be finite, got {alpha}")));
    }
    if alpha.abs() < 1e-9 || (alpha - 1.0).abs() < 1e-9 {
        let r = rho * rho.ln() / (rho - 1.0);
        return Ok(r - 1.0 - r.ln());
    }
    let lr = rho.ln();
    // ρ^α − 1 and ρ − ρ^α without cancellation.
    let pa_minus_1 = (alpha * lr).exp_m1();
    let rho_minus_pa = -rho * ((alpha - 1.0) * lr).exp_m1();
    let log_term = alpha * (pa_minus_1 / alpha).ln() + (1.0 - alpha) * (rho_minus_pa / (1.0 - alpha)).ln()
        - (rho - 1.0).ln();
    Ok(log_term.exp_m1() / (alpha * (alpha - 1.0)))
}

/// `Δ(α,ρ)` by direct maximization over `x ∈ [0,1]`.
pub fn delta_alpha_numeric(alpha: f64, rho: f64) -> Result<f64> {
    check_delta_rho(rho)?;
    if alpha == 0.0 || alpha == 1.0 {
        return d_f_asymptotic(&Alpha::new(alpha)?, rho);
    }
    let pa = rho.powf(alpha);
    let scale = alpha * (alpha - 1.0);
    let obj = |x: f64| ((1.0 + (pa - 1.0) * x) / (1.0 + (rho - 1.0) * x).powf(alpha) - 1.0) / scale;
    Ok(maximize_1d_default(obj, Interval::closed(0.0, 1.0))?.max)
}

/// Largest `ρ` with `lim_n max_{Q ∈ P_n(ρ)} D(Q‖U_n) ≤ d` nats, and the simpler sufficient value `1 + √(8d)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KlRhoMax {
    pub exact: f64,
    pub simple: f64,
}

pub fn kl_rho_max(d: f64) -> Result<KlRhoMax> {
    if !(d > 0.0) || !d.is_finite() {
        return Err(Error::Parameter(format!("d must be positive and finite, got {d}")));
    }
    let x = -(-d - 1.0).exp();
    let w0 = lambert_w(Branch::Principal, x)?;
    let wm1 = lambert_w(Branch::Secondary, x)?;
    Ok(KlRhoMax { exact: wm1 / w0, simple: 1.0 + (8.0 * d).sqrt() })
}

fn check_phi_args(alpha: f64, rho: f64) -> Result<()> {
    if !(alpha >= alpha_min()) || !alpha.is_finite() {
        return Err(Error::Parameter(format!("alpha must be >= e^(-3/2), got {alpha}")));
    }
    check_rho(rho)
}

/// `Φ(α,ρ) = lim_n max_{Q ∈ P_n(ρ)} D_{f_α}(Q‖U_n)`.
pub fn phi_alpha(alpha: f64, rho: f64) -> Result<f64> {
    check_phi_args(alpha, rho)?;
    d_f_asymptotic(&FAlpha::new(alpha)?, rho)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiUpperBounds {
    pub ub1: f64,
    pub ub2: f64,
    pub ub3: f64,
}

fn phi_ab(alpha: f64) -> (f64, f64) {
    (4.0 / (81.0 * (alpha + 1.0)), 0.25 * (alpha + 1.0).ln() + 0.375)
}

pub fn phi_upper_bounds(alpha: f64, rho: f64) -> Result<PhiUpperBounds> {
    check_phi_args(alpha, rho)?;
    let r1 = rho - 1.0;
    let base = r1 * r1 / (4.0 * rho);
    let cubic = r1 * (2.0 * rho + 1.0) * (rho + 2.0) / (rho * (rho + 1.0));
    let ub1 = ((alpha + 1.0).ln() + 1.5 - 1.0 / (alpha + 1.0)) * base + cubic * cubic / (81.0 * (alpha + 1.0));
    let ub2 = ((alpha + rho).ln() + 1.5) * base;
    let (a, b) = phi_ab(alpha);
    let ub3 = a * r1 * r1 + b * r1.min(r1 * r1);
    Ok(PhiUpperBounds { ub1, ub2, ub3 })
}

/// Largest `ρ` certified by the loosened bound to keep `Φ(α,ρ) ≤ d` nats.
pub fn phi_rho_max(alpha: f64, d: f64) -> Result<f64> {
    check_phi_args(alpha, 1.0)?;
    if !(d > 0.0) || !d.is_finite() {
        return Err(Error::Parameter(format!("d must be positive and finite, got {d}")));
    }
    let (a, b) = phi_ab(alpha);
    let rho1 = 1.0 + ((b * b + 4.0 * a * d).sqrt() - b) / (2.0 * a);
    let rho2 = 1.0 + (d / (a + b)).sqrt();
    Ok(rho1.max(rho2))
}

/// `ρ ≤ 1 + 4d/M + √(8d/M + 16d²/M²)` keeps `D_f(Q‖U_n) ≤ d` when `f″ ≤ M` everywhere.
pub fn rho_budget(m_f: f64, d: f64) -> Result<f64> {
    if !(m_f > 0.0) || !m_f.is_finite() || !(d >= 0.0) {
        return Err(Error::Parameter(format!("rho budget needs 0 < M < inf and d >= 0, got M = {m_f}, d = {d}")));
    }
    let r = d / m_f;
    Ok(1.0 + 4.0 * r + (8.0 * r + 16.0 * r * r).sqrt())
}

/// Convergence rates and curvature bounds around `u_f(n,ρ)`.
///
/// `k_f` and `k_n` are numerical estimates (grid suprema of `g_f′` and `|f′|`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RhoSimplexExtras {
    pub k_f: f64,
    pub conv_rate_n: f64,
    pub rho_inf_limit: ExtendedReal,
    /// `None` when `f(0) = ∞` or `f′` is unbounded on `(0,n)`.
    pub k_n: Option<f64>,
    pub conv_rate_rho: Option<f64>,
    /// Inf and sup of `f″` on `[1/ρ, ρ]`.
    pub m: f64,
    pub big_m: ExtendedReal,
    /// Sup of `f″` on `(0,∞)`.
    pub m_global: ExtendedReal,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureSandwich {
    pub lower: f64,
    pub exact: f64,
    pub upper: ExtendedReal,
    pub upper_rho: ExtendedReal,
}

impl RhoSimplexExtras {
    /// `½m(n‖Q‖²−1) ≤ D_f(Q‖U_n) ≤ ½M(n‖Q‖²−1) ≤ M(ρ−1)²/(8ρ)`.
    pub fn curvature_sandwich<G: Generator + ?Sized>(&self, f: &G, q: &ProbVec, rho: f64) -> Result<CurvatureSandwich> {
        let n = q.len() as f64;
        let spread = (n * q.norm2_sq() - 1.0).max(0.0);
        let exact = f_divergence_centered(f, q, &ProbVec::uniform(q.len()))?.to_f64();
        Ok(CurvatureSandwich {
            lower: 0.5 * self.m * spread,
            exact,
            upper: self.big_m.scale(0.5 * spread),
            upper_rho: self.big_m.scale((rho - 1.0).powi(2) / (8.0 * rho)),
        })
    }

    pub fn rho_budget(&self, d: f64) -> Result<f64> {
        match self.m_global {
            ExtendedReal::Finite(m) if m > 0.0 => rho_budget(m, d),
            _ => Err(Error::Precondition("f'' is not bounded by a positive constant on (0, inf)".into())),
        }
    }
}

const DERIV_GRID: usize = 4096;

pub fn rho_simplex_extras<G: Generator + ?Sized>(f: &G, n: usize, rho: f64) -> Result<RhoSimplexExtras> {
    RhoSimplexParams::new(n, rho)?;
    let nf = n as f64;

    let h = 1e-6;
    let mut k_f: f64 = 0.0;
    for i in 0..DERIV_GRID {
        let x = h + (1.0 - 2.0 * h) * i as f64 / (DERIV_GRID - 1) as f64;
        let d = (g_f_rho(f, rho, x + h) - g_f_rho(f, rho, x - h)) / (2.0 * h);
        if !d.is_finite() {
            return Err(Error::NonFinite { at: x, value: d });
        }
        k_f = k_f.max(d);
    }

    let f_n = f.eval(nf);
    let (rho_inf_limit, k_n) = match f.f_at_zero() {
        Limit::PosInf => (ExtendedReal::Infinite, None),
        Limit::Finite(f0) => {
            let limit = ExtendedReal::finite(((1.0 - 1.0 / nf) * f0 + f_n / nf).max(0.0));
            // f′ is monotone, so sup |f′| sits at an end of (0, n); the left end
            // is finite when difference quotients at 0 have settled.
            let dq = |d: f64| (f.eval(d) - f0) / d;
            let (a, b) = (dq(1e-10), dq(1e-8));
            let left = if (a - b).abs() <= 1e-3 * (1.0 + a.abs()) { Some(a.abs()) } else { None };
            let hn = 1e-7 * nf;
            let right = ((f_n - f.eval(nf - hn)) / hn).abs();
            (limit, left.map(|l| l.max(right)))
        }
    };
    let conv_rate_rho = k_n.map(|k| 2.0 * k * (nf - 1.0) / (nf + rho - 1.0));

    let local = sdpi_coefficients(f, &XiRange::finite(1.0 / rho, rho)?)?;
    let global = sdpi_coefficients(f, &XiRange::new(0.0, ExtendedReal::Infinite)?)?;
    Ok(RhoSimplexExtras {
        k_f,
        conv_rate_n: k_f / nf,
        rho_inf_limit,
        k_n,
        conv_rate_rho,
        m: 2.0 * local.c_f.to_f64(),
        big_m: local.e_f.scale(2.0),
        m_global: global.e_f.scale(2.0),
    })
}

/// Bounds on the Tsallis-entropy gap `S_α(P) − S_α(Q)` for `P ≺ Q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TsallisBounds {
    pub lower: f64,
    pub upper: ExtendedReal,
    pub exact: f64,
}

pub fn tsallis_gap_bounds(alpha: f64, p: &ProbVec, q: &ProbVec) -> Result<TsallisBounds> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::Parameter(format!("Tsallis order must be positive and finite, got {alpha}")));
    }
    require_majorized(p, q)?;
    let norm_gap = (q.norm2_sq() - p.norm2_sq()).max(0.0);
    let (q_min, q_max) = (q.min(), q.max());
    let coef = |qq: f64| -> ExtendedReal {
        if alpha == 2.0 {
            return ExtendedReal::finite(0.5 * alpha * norm_gap);
        }
        let w = qq.powf(alpha - 2.0);
        if w.is_infinite() {
            if norm_gap == 0.0 {
                ExtendedReal::ZERO
            } else {
                ExtendedReal::Infinite
            }
        } else {
            ExtendedReal::finite(0.5 * alpha * w * norm_gap)
        }
    };
    let (lo, hi) = if alpha <= 2.0 { (coef(q_max), coef(q_min)) } else { (coef(q_min), coef(q_max)) };
    let kind = EntropyKind::Tsallis(alpha);
    let exact = entropy(kind, p)? - entropy(kind, q)?;
    Ok(TsallisBounds { lower: lo.to_f64(), upper: hi, exact })
}

/// Both sides of `E[g(X)] ≤ u_f(n,ρ) + (1/n) Σ_i f̄(g(i))`, where `f̄` is the convex conjugate.
#[derive(Debug, Clone, PartialEq)]
pub struct VariationalCheck {
    pub lhs: f64,
    /// Infinite when some `f̄(g(i))` is; the inequality is then vacuous.
    pub rhs: ExtendedReal,
    pub u_f: f64,
    pub holds: bool,
}

fn mean_conjugate<G: Generator + ?Sized>(f: &G, g: &[f64]) -> Result<Option<f64>> {
    let mut s = 0.0;
    for &gi in g {
        match fenchel_conjugate(f, gi)? {
            Limit::Finite(v) => s += v,
            Limit::PosInf => return Ok(None),
        }
    }
    Ok(Some(s / g.len() as f64))
}

pub fn variational_check<G: Generator + ?Sized>(
    f: &G,
    params: &RhoSimplexParams,
    g: &[f64],
    p: &ProbVec,
) -> Result<VariationalCheck> {
    if g.len() != params.n || p.len() != params.n {
        return Err(Error::DimensionMismatch { left: params.n, right: g.len().min(p.len()) });
    }
    if !params.contains(p) {
        return Err(Error::Precondition(format!("P is not in P_{}({})", params.n, params.rho)));
    }
    let lhs: f64 = p.masses().iter().zip(g).map(|(pi, gi)| pi * gi).sum();
    let u = u_f(params, f)?.value;
    let rhs = match mean_conjugate(f, g)? {
        Some(m) => ExtendedReal::Finite(u + m),
        None => ExtendedReal::Infinite,
    };
    let holds = match rhs {
        ExtendedReal::Finite(r) => lhs <= r + 1e-9,
        ExtendedReal::Infinite => true,
    };
    Ok(VariationalCheck { lhs, rhs, u_f: u, holds })
}

/// A pmf and test function nearly attaining equality in the variational bound.
#[derive(Debug, Clone, PartialEq)]
pub struct VariationalAchiever {
    pub p: ProbVec,
    pub g: Vec<f64>,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs − lhs`.
    pub gap: f64,
}

/// Takes `P = Q_{β*}` and `g(i) = f′(n P(i))`, a subgradient at each likelihood ratio.
pub fn variational_achiever<G: Generator + ?Sized>(f: &G, params: &RhoSimplexParams) -> Result<VariationalAchiever> {
    let opt = u_f(params, f)?;
    let p = params.q_beta(opt.beta_star)?.to_pmf()?;
    let n = params.n as f64;
    let g: Vec<f64> = p.masses().iter().map(|&m| f.deriv1(n * m)).collect();
    let check = variational_check(f, params, &g, &p)?;
    let rhs = check
        .rhs
        .finite_value()
        .ok_or_else(|| Error::Domain("conjugate is infinite at a subgradient".into()))?;
    Ok(VariationalAchiever { p, lhs: check.lhs, rhs, gap: rhs - check.lhs, g })
}
