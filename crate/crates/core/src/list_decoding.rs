//! List decoders on finite joints and lower bounds on their error probability.

use crate::divergence::{arimoto_conditional_entropy, binary_divergence, conditional_entropy, f_divergence, BinaryKind};
use crate::error::{Error, Result};
use crate::ext::ExtendedReal;
use crate::generator::Generator;
use crate::numerics::{golden_section_max, grid};
use crate::pmf::{JointPMF, ProbVec};

/// A list `L(y) ⊆ X` for every output `y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ListDecoder {
    m: usize,
    lists: Vec<Vec<usize>>,
}

impl ListDecoder {
    pub fn new(m: usize, lists: Vec<Vec<usize>>) -> Result<ListDecoder> {
        for (y, list) in lists.iter().enumerate() {
            if list.is_empty() {
                return Err(Error::Parameter(format!("list for y = {y} is empty")));
            }
            let mut seen = vec![false; m];
            for &x in list {
                if x >= m {
                    return Err(Error::Parameter(format!("list for y = {y} contains {x}, outside 0..{m}")));
                }
                if std::mem::replace(&mut seen[x], true) {
                    return Err(Error::Parameter(format!("list for y = {y} repeats {x}")));
                }
            }
        }
        Ok(ListDecoder { m, lists })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn lists(&self) -> &[Vec<usize>] {
        &self.lists
    }

    pub fn list(&self, y: usize) -> &[usize] {
        &self.lists[y]
    }

    /// The common list size, if every list has the same size.
    pub fn fixed_size(&self) -> Option<usize> {
        let l = self.lists.first()?.len();
        self.lists.iter().all(|s| s.len() == l).then_some(l)
    }

    pub fn max_size(&self) -> usize {
        self.lists.iter().map(Vec::len).max().unwrap_or(0)
    }

    fn check_joint(&self, joint: &JointPMF) -> Result<()> {
        if joint.m() != self.m {
            return Err(Error::DimensionMismatch { left: joint.m(), right: self.m });
        }
        if joint.k() != self.lists.len() {
            return Err(Error::DimensionMismatch { left: joint.k(), right: self.lists.len() });
        }
        Ok(())
    }
}

/// List sizes for [`top_l_decoder`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ListSizes {
    Fixed(usize),
    PerOutput(Vec<usize>),
}

/// For each `y`, the indices of the `|L(y)|` largest `P_{XY}(·, y)`; ties go to the smaller index.
pub fn top_l_decoder(joint: &JointPMF, sizes: &ListSizes) -> Result<ListDecoder> {
    let (m, k) = (joint.m(), joint.k());
    let sizes: Vec<usize> = match sizes {
        ListSizes::Fixed(l) => vec![*l; k],
        ListSizes::PerOutput(v) => {
            if v.len() != k {
                return Err(Error::DimensionMismatch { left: v.len(), right: k });
            }
            v.clone()
        }
    };
    let mut lists = Vec::with_capacity(k);
    for (y, &l) in sizes.iter().enumerate() {
        if l == 0 || l >= m {
            return Err(Error::Parameter(format!("list size for y = {y} must be in 1..{m}, got {l}")));
        }
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&a, &b| joint.get(b, y).total_cmp(&joint.get(a, y)).then(a.cmp(&b)));
        order.truncate(l);
        order.sort_unstable();
        lists.push(order);
    }
    ListDecoder::new(m, lists)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorProbReport {
    pub p_l: f64,
    /// `P[X ∉ L(y) | Y = y]`, or `None` when `P_Y(y) = 0`.
    pub conditional: Vec<Option<f64>>,
}

pub fn error_probability(joint: &JointPMF, decoder: &ListDecoder) -> Result<ErrorProbReport> {
    decoder.check_joint(joint)?;
    let mut p_l = 0.0;
    let mut conditional = Vec::with_capacity(joint.k());
    for y in 0..joint.k() {
        let mut inside = vec![false; joint.m()];
        for &x in decoder.list(y) {
            inside[x] = true;
        }
        let py: f64 = (0..joint.m()).map(|x| joint.get(x, y)).sum();
        let miss: f64 = (0..joint.m()).filter(|&x| !inside[x]).map(|x| joint.get(x, y)).sum();
        p_l += miss;
        conditional.push((py > 0.0).then(|| miss / py));
    }
    Ok(ErrorProbReport { p_l, conditional })
}

/// `E[P_{X|Y}(X|Y)] = Σ_{x,y} P_{XY}(x,y) P_{X|Y}(x|y)`.
pub fn expected_posterior(joint: &JointPMF) -> f64 {
    joint.conditionals().iter().map(|(py, c)| py * c.norm2_sq()).sum()
}

/// `sup_{x,y} P_{X|Y}(x|y)` over outputs of positive probability.
pub fn sup_posterior(joint: &JointPMF) -> f64 {
    joint.conditionals().iter().map(|(_, c)| c.max()).fold(0.0, f64::max)
}

/// Smallest `p ∈ [lo, hi]` with `rhs(p) ≥ target`, for quasi-concave `rhs`.
/// Returns `lo` when no `p` qualifies.
fn smallest_feasible(rhs: impl Fn(f64) -> f64, target: f64, lo: f64, hi: f64) -> Result<f64> {
    const TOL: f64 = 1e-12;
    let ok = |p: f64| rhs(p) >= target - TOL;
    if ok(lo) {
        return Ok(lo);
    }
    let pts = grid(lo, hi, 1001, false);
    let mut bracket = None;
    for w in pts.windows(2) {
        if ok(w[1]) {
            bracket = Some((w[0], w[1]));
            break;
        }
    }
    if bracket.is_none() {
        // A feasible window narrower than the grid sits around the maximum.
        let peak = golden_section_max(&rhs, lo, hi, 1e-14)?;
        if peak.max >= target - TOL {
            bracket = Some((lo, peak.argmax));
        }
    }
    let Some((mut a, mut b)) = bracket else {
        return Ok(lo);
    };
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        if ok(mid) {
            b = mid;
        } else {
            a = mid;
        }
    }
    Ok(b)
}

/// Which Fano-type inequality to invert.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FanoVariant {
    Kl,
    Renyi(f64),
    /// Strengthened with the SDPI curvature term, valid for any decoder.
    RefinedA,
    /// Strengthened further, valid for top-`L` decoders.
    RefinedB,
}

/// Smallest `P_L` consistent with the chosen Fano-type inequality for lists of size `L`.
pub fn fano_lower_bound(joint: &JointPMF, l: usize, variant: FanoVariant) -> Result<f64> {
    let m = joint.m();
    if l == 0 || l >= m {
        return Err(Error::Parameter(format!("list size must be in 1..{m}, got {l}")));
    }
    let (lf, mf) = (l as f64, m as f64);
    let q = 1.0 - lf / mf;
    let d = |kind: BinaryKind, p: f64| -> f64 { binary_divergence(kind, p, q).map(ExtendedReal::to_f64).unwrap_or(f64::INFINITY) };
    let ln_m = mf.ln();
    match variant {
        FanoVariant::Kl | FanoVariant::Renyi(_) => {
            let (kind, h) = match variant {
                FanoVariant::Renyi(a) if a != 1.0 => (BinaryKind::Renyi(a), arimoto_conditional_entropy(a, joint)?),
                _ => (BinaryKind::Kl, conditional_entropy(joint)),
            };
            smallest_feasible(|p| ln_m - d(kind, p), h, 0.0, q)
        }
        FanoVariant::RefinedA | FanoVariant::RefinedB => {
            let h = conditional_entropy(joint);
            let ep = expected_posterior(joint);
            let sup = sup_posterior(joint);
            let refined_a = variant == FanoVariant::RefinedA;
            let extra = move |p: f64| {
                let mut gap = ep - (1.0 - p) / lf;
                if refined_a {
                    gap -= p / (mf - lf);
                }
                0.5 * gap.max(0.0) / sup
            };
            smallest_feasible(|p| ln_m - d(BinaryKind::Kl, p) - extra(p), h, 0.0, q)
        }
    }
}

/// Both sides of `E[D_f(P_{X|Y}(·|Y)‖U_M)] ≥ (L/M) f(M(1−P_L)/L) + (1−L/M) f(M P_L/(M−L))`
/// for the top-`L` decoder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FanoF {
    pub lhs: ExtendedReal,
    pub rhs: ExtendedReal,
    pub p_l: f64,
}

pub fn generalized_fano_f<G: Generator + ?Sized>(joint: &JointPMF, l: usize, f: &G) -> Result<FanoF> {
    let decoder = top_l_decoder(joint, &ListSizes::Fixed(l))?;
    let p_l = error_probability(joint, &decoder)?.p_l.clamp(0.0, 1.0);
    let m = joint.m();
    let u = ProbVec::uniform(m);
    let mut lhs = ExtendedReal::ZERO;
    for (py, c) in joint.conditionals() {
        lhs = lhs + f_divergence(f, &c, &u)?.scale(py);
    }
    let q = l as f64 / m as f64;
    let two_point = f_divergence(f, &ProbVec::bernoulli(p_l)?, &ProbVec::bernoulli(1.0 - q)?)?;
    Ok(FanoF { lhs, rhs: two_point, p_l })
}

/// `P_L ≥ 1 − L/M − (L^{1−s} + (M−L)^{1−s})^{−1/s} (E[Σ_x |P_{X|Y}(x|Y) − 1/M|^s])^{1/s}`, clamped at 0.
pub fn s_norm_bound(joint: &JointPMF, l: usize, s: f64) -> Result<f64> {
    let m = joint.m();
    if l == 0 || l >= m {
        return Err(Error::Parameter(format!("list size must be in 1..{m}, got {l}")));
    }
    if !(s >= 1.0) || !s.is_finite() {
        return Err(Error::Parameter(format!("s must be a finite number >= 1, got {s}")));
    }
    let (lf, mf) = (l as f64, m as f64);
    let moment: f64 = joint
        .conditionals()
        .iter()
        .map(|(py, c)| py * c.masses().iter().map(|&v| (v - 1.0 / mf).abs().powf(s)).sum::<f64>())
        .sum();
    let c = (lf.powf(1.0 - s) + (mf - lf).powf(1.0 - s)).powf(-1.0 / s);
    Ok((1.0 - lf / mf - c * moment.powf(1.0 / s)).max(0.0))
}

/// Variable-size Fano inequalities: `H(X|Y) ≤ h(P_L) + E[ln|L(Y)|] + P_L ln M` and
/// `H(X|Y) ≤ h(P_L) + (1−P_L) ln N + P_L ln M` with `N = max_y |L(y)|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AkBounds {
    pub h_cond: f64,
    pub p_l: f64,
    pub rhs_general: f64,
    pub rhs_max_n: f64,
    pub holds_general: bool,
    pub holds_max_n: bool,
    pub implied_pl_general: f64,
    pub implied_pl_max_n: f64,
}

fn binary_entropy(p: f64) -> f64 {
    let t = |x: f64| if x > 0.0 { -x * x.ln() } else { 0.0 };
    t(p) + t(1.0 - p)
}

pub fn ahlswede_korner_bounds(joint: &JointPMF, decoder: &ListDecoder) -> Result<AkBounds> {
    let report = error_probability(joint, decoder)?;
    let p_l = report.p_l;
    let h = conditional_entropy(joint);
    let py = joint.marginal_y();
    let e_log: f64 = (0..joint.k()).map(|y| py.get(y) * (decoder.list(y).len() as f64).ln()).sum();
    let ln_m = (joint.m() as f64).ln();
    let ln_n = (decoder.max_size() as f64).ln();
    let general = |p: f64| binary_entropy(p) + e_log + p * ln_m;
    let max_n = |p: f64| binary_entropy(p) + (1.0 - p) * ln_n + p * ln_m;
    let (rhs_general, rhs_max_n) = (general(p_l), max_n(p_l));
    Ok(AkBounds {
        h_cond: h,
        p_l,
        rhs_general,
        rhs_max_n,
        holds_general: h <= rhs_general + 1e-12,
        holds_max_n: h <= rhs_max_n + 1e-12,
        implied_pl_general: smallest_feasible(general, h, 0.0, 1.0)?,
        implied_pl_max_n: smallest_feasible(max_n, h, 0.0, 1.0)?,
    })
}

/// `P_L ≥ (1+γ)/2 − γ E|L(Y)|/M − ½ E[Σ_x |P_{X|Y}(x|Y) − γ/M|]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VariableListBound {
    pub bound: f64,
    pub gamma_star: f64,
    /// Whether the conditionals have the two-level form that makes the bound tight at `gamma_star`.
    pub equality_diagnosis: bool,
}

fn variable_list_value(joint: &JointPMF, decoder: &ListDecoder, gamma: f64) -> f64 {
    let mf = joint.m() as f64;
    let py = joint.marginal_y();
    let mut e_size = 0.0;
    let mut e_abs = 0.0;
    for y in 0..joint.k() {
        let Some(c) = joint.conditional_x(y) else { continue };
        let w = py.get(y);
        e_size += w * decoder.list(y).len() as f64;
        e_abs += w * c.masses().iter().map(|&v| (v - gamma / mf).abs()).sum::<f64>();
    }
    (1.0 + gamma) / 2.0 - gamma * e_size / mf - 0.5 * e_abs
}

fn two_level_structure(joint: &JointPMF, decoder: &ListDecoder, gamma: f64) -> bool {
    const TOL: f64 = 1e-12;
    let m = joint.m();
    let mf = m as f64;
    for y in 0..joint.k() {
        let Some(c) = joint.conditional_x(y) else { continue };
        let list = decoder.list(y);
        let size = list.len();
        if size as f64 > mf / gamma + TOL {
            return false;
        }
        let alpha = c.get(list[0]);
        if list.iter().any(|&x| (c.get(x) - alpha).abs() > TOL) {
            return false;
        }
        if alpha < gamma / mf - TOL || alpha > 1.0 / size as f64 + TOL {
            return false;
        }
        if size < m {
            let rest = (1.0 - alpha * size as f64) / (m - size) as f64;
            let in_list = |x: usize| list.contains(&x);
            if (0..m).filter(|&x| !in_list(x)).any(|x| (c.get(x) - rest).abs() > TOL) {
                return false;
            }
        }
    }
    true
}

/// Evaluates the bound at `gamma`, or with `scan_gamma` maximizes it over `[1, M / max|L(y)|]`.
/// The bound is piecewise linear in `γ`, so the scan visits the end points and every kink `γ = M P_{X|Y}(x|y)`.
pub fn variable_list_bound(joint: &JointPMF, decoder: &ListDecoder, gamma: f64, scan_gamma: bool) -> Result<VariableListBound> {
    decoder.check_joint(joint)?;
    if !(gamma >= 1.0) || !gamma.is_finite() {
        return Err(Error::Parameter(format!("gamma must be a finite number >= 1, got {gamma}")));
    }
    let mf = joint.m() as f64;
    let mut gamma_star = gamma;
    let mut best = variable_list_value(joint, decoder, gamma);
    if scan_gamma {
        let top = (mf / decoder.max_size() as f64).max(1.0);
        let mut candidates = vec![1.0, top];
        for (_, c) in joint.conditionals() {
            candidates.extend(c.masses().iter().map(|&v| mf * v).filter(|&g| g > 1.0 && g < top));
        }
        candidates.sort_by(f64::total_cmp);
        candidates.dedup();
        best = f64::NEG_INFINITY;
        for g in candidates {
            let v = variable_list_value(joint, decoder, g);
            if v > best {
                best = v;
                gamma_star = g;
            }
        }
    }
    Ok(VariableListBound {
        bound: best.max(0.0),
        gamma_star,
        equality_diagnosis: two_level_structure(joint, decoder, gamma_star),
    })
}

/// The joint on `X = {0..8}`, `Y = {0,1}` used for the fixed-size comparison table.
pub fn fixed_list_joint() -> JointPMF {
    let y0 = [128.0, 64.0, 32.0, 16.0, 8.0, 4.0, 2.0, 1.0, 1.0];
    let y1 = [2.0, 2.0, 2.0, 2.0, 8.0, 16.0, 32.0, 64.0, 128.0];
    let rows = y0.iter().zip(&y1).map(|(a, b)| vec![a / 512.0, b / 512.0]).collect();
    JointPMF::new(rows).expect("valid joint")
}

/// The joint on `X = {0..4}`, `Y = {0,1}` whose variable-size lists meet the `E_γ` bound with equality.
pub fn variable_list_joint() -> JointPMF {
    let rows = vec![
        vec![1.0 / 8.0, 1.0 / 24.0],
        vec![1.0 / 8.0, 1.0 / 24.0],
        vec![1.0 / 8.0, 1.0 / 24.0],
        vec![1.0 / 16.0, 3.0 / 16.0],
        vec![1.0 / 16.0, 3.0 / 16.0],
    ];
    JointPMF::new(rows).expect("valid joint")
}

/// Lists `L(0) = {0,1,2}` and `L(1) = {3,4}` for [`variable_list_joint`].
pub fn variable_list_decoder() -> ListDecoder {
    ListDecoder::new(5, vec![vec![0, 1, 2], vec![3, 4]]).expect("valid lists")
}
