//! Tunstall parse trees and how close their leaf distributions come to uniform.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rand::Rng;

use crate::divergence::{entropy, f_divergence, EntropyKind};
use crate::error::{Error, Result};
use crate::ext::ExtendedReal;
use crate::generator::{DeGroot, Generator};
use crate::majorization::{d_f_asymptotic, delta_alpha, kl_rho_max, u_f, RhoSimplexParams};
use crate::numerics::integrate;
use crate::pmf::ProbVec;

/// A memoryless source over `D ≥ 2` symbols, all with positive probability.
#[derive(Debug, Clone, PartialEq)]
pub struct SourceModel {
    pmf: ProbVec,
}

impl SourceModel {
    pub fn new(pmf: ProbVec) -> Result<SourceModel> {
        if pmf.len() < 2 {
            return Err(Error::Parameter("a source needs at least two symbols".into()));
        }
        if !pmf.is_fully_supported() {
            return Err(Error::Parameter("every source symbol needs positive probability".into()));
        }
        Ok(SourceModel { pmf })
    }

    pub fn pmf(&self) -> &ProbVec {
        &self.pmf
    }

    /// Alphabet size `D`.
    pub fn arity(&self) -> usize {
        self.pmf.len()
    }

    pub fn p_min(&self) -> f64 {
        self.pmf.min()
    }

    /// `ρ = 1/p_min`.
    pub fn rho(&self) -> f64 {
        1.0 / self.p_min()
    }

    pub fn entropy(&self) -> f64 {
        entropy(EntropyKind::Shannon, &self.pmf).expect("Shannon entropy is always defined")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Leaf {
    pub word: Vec<usize>,
    pub prob: f64,
}

impl Leaf {
    pub fn depth(&self) -> usize {
        self.word.len()
    }
}

/// A complete `D`-ary parse tree, stored by its leaves in lexicographic word order.
#[derive(Debug, Clone, PartialEq)]
pub struct TunstallTree {
    arity: usize,
    leaves: Vec<Leaf>,
}

impl TunstallTree {
    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn leaves(&self) -> &[Leaf] {
        &self.leaves
    }

    pub fn n(&self) -> usize {
        self.leaves.len()
    }

    pub fn leaf_pmf(&self) -> ProbVec {
        let w: Vec<f64> = self.leaves.iter().map(|l| l.prob).collect();
        ProbVec::from_weights(&w).expect("leaf probabilities are positive")
    }

    /// `E[parse length] = Σ P(leaf) · depth(leaf)`.
    pub fn expected_length(&self) -> f64 {
        self.leaves.iter().map(|l| l.prob * l.depth() as f64).sum()
    }

    fn from_leaves(arity: usize, mut leaves: Vec<Leaf>) -> TunstallTree {
        leaves.sort_by(|a, b| a.word.cmp(&b.word));
        TunstallTree { arity, leaves }
    }
}

/// Renders a word as digits when `D ≤ 10`, otherwise dot-separated.
pub fn word_label(word: &[usize], arity: usize) -> String {
    if arity <= 10 {
        word.iter().map(|d| char::from(b'0' + *d as u8)).collect()
    } else {
        word.iter().map(usize::to_string).collect::<Vec<_>>().join(".")
    }
}

/// Size of the tree to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TreeTarget {
    Leaves(usize),
    /// Grow while `leaves + (D−1) ≤ |X|^m`.
    CodewordLen { m: u32, code_alphabet: usize },
}

const MAX_LEAVES: usize = 1 << 24;

// Max-heap order: larger probability first, then the lexicographically smaller word.
struct Entry(Leaf);

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.prob.total_cmp(&other.0.prob).then_with(|| other.0.word.cmp(&self.0.word))
    }
}

fn children<'a>(source: &'a SourceModel, leaf: &Leaf) -> impl Iterator<Item = Leaf> + 'a {
    let (word, prob) = (leaf.word.clone(), leaf.prob);
    source.pmf.masses().iter().enumerate().map(move |(s, &p)| {
        let mut w = word.clone();
        w.push(s);
        Leaf { word: w, prob: prob * p }
    })
}

fn leaf_count(source: &SourceModel, target: TreeTarget) -> Result<usize> {
    let step = source.arity() - 1;
    match target {
        TreeTarget::Leaves(n) => {
            if n == 0 || (n - 1) % step != 0 {
                let below = 1 + (n.saturating_sub(1) / step) * step;
                return Err(Error::Parameter(format!(
                    "a {}-ary tree cannot have {n} leaves; nearest feasible counts are {below} and {}",
                    source.arity(),
                    below + step
                )));
            }
            if n > MAX_LEAVES {
                return Err(Error::Parameter(format!("{n} leaves exceeds the limit of {MAX_LEAVES}")));
            }
            Ok(n)
        }
        TreeTarget::CodewordLen { m, code_alphabet } => {
            if code_alphabet < 2 {
                return Err(Error::Parameter(format!("code alphabet needs at least 2 letters, got {code_alphabet}")));
            }
            let cap = (code_alphabet as u128).checked_pow(m).filter(|&c| c <= MAX_LEAVES as u128).ok_or_else(|| {
                Error::Parameter(format!("{code_alphabet}^{m} codewords exceeds the limit of {MAX_LEAVES} leaves"))
            })? as usize;
            if cap == 0 {
                return Err(Error::Parameter("codeword length must be positive".into()));
            }
            Ok(1 + ((cap - 1) / step) * step)
        }
    }
}

/// Greedy Tunstall construction: split the most probable leaf until the target size is reached.
pub fn build_tree(source: &SourceModel, target: TreeTarget) -> Result<TunstallTree> {
    let n = leaf_count(source, target)?;
    let mut heap = BinaryHeap::with_capacity(n);
    heap.push(Entry(Leaf { word: Vec::new(), prob: 1.0 }));
    let mut count = 1;
    while count < n {
        let Entry(top) = heap.pop().expect("heap is never empty");
        heap.extend(children(source, &top).map(Entry));
        count += source.arity() - 1;
    }
    Ok(TunstallTree::from_leaves(source.arity(), heap.into_iter().map(|e| e.0).collect()))
}

/// A complete tree with `n` leaves grown by expanding uniformly chosen leaves.
pub fn random_tree<R: Rng + ?Sized>(source: &SourceModel, n: usize, rng: &mut R) -> Result<TunstallTree> {
    let n = leaf_count(source, TreeTarget::Leaves(n))?;
    let mut leaves = vec![Leaf { word: Vec::new(), prob: 1.0 }];
    while leaves.len() < n {
        let i = rng.random_range(0..leaves.len());
        let leaf = leaves.swap_remove(i);
        leaves.extend(children(source, &leaf));
    }
    Ok(TunstallTree::from_leaves(source.arity(), leaves))
}

/// `d_{ω,n}(P_ℓ) = D_{φ_ω}(P_ℓ‖U_n)`, the DeGroot information between the leaf pmf and uniform.
pub fn degroot_closeness(tree: &TunstallTree, omega: f64) -> Result<f64> {
    let g = DeGroot::new(omega)?;
    let p = tree.leaf_pmf();
    Ok(f_divergence(&g, &p, &ProbVec::uniform(p.len()))?.to_f64())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosenessBounds {
    /// `max_β D_{φ_ω}(Q_β‖U_n)` over `Γ_n(1/p_min)`.
    pub finite_n_bound: f64,
    /// Its limit as `n → ∞`, valid for every `n`.
    pub asymptotic_bound: f64,
}

pub fn closeness_bounds(source: &SourceModel, n: usize, omega: f64) -> Result<ClosenessBounds> {
    let g = DeGroot::new(omega)?;
    let rho = source.rho();
    let finite_n_bound = if n < 2 { 0.0 } else { u_f(&RhoSimplexParams::new(n, rho)?, &g)?.value };
    Ok(ClosenessBounds { finite_n_bound, asymptotic_bound: d_f_asymptotic(&g, rho)? })
}

/// The asymptotic closeness bound as a function of `ρ` alone.
pub fn closeness_asymptotic(rho: f64, omega: f64) -> Result<f64> {
    d_f_asymptotic(&DeGroot::new(omega)?, rho)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralCheck {
    pub direct: f64,
    pub integral: f64,
    pub abs_gap: f64,
}

/// Compares `D_f(P_ℓ‖U_n)` with `∫₀¹ d_{ω,n}(P_ℓ) ω⁻³ f″((1−ω)/ω) dω`.
pub fn integral_representation_check<G: Generator + ?Sized>(tree: &TunstallTree, f: &G) -> Result<IntegralCheck> {
    let p = tree.leaf_pmf();
    let n = p.len();
    let nf = n as f64;
    let direct = f_divergence(f, &p, &ProbVec::uniform(n))?.to_f64();
    let ratios: Vec<f64> = p.masses().iter().map(|&m| nf * m).collect();
    let closeness = |w: f64| -> f64 {
        let g = DeGroot::new(w).expect("omega strictly inside (0,1)");
        ratios.iter().map(|&t| g.eval(t)).sum::<f64>() / nf
    };
    // d_{ω,n} vanishes outside [1/(1+t_max), 1/(1+t_min)].
    let t_max = ratios.iter().cloned().fold(0.0, f64::max);
    let t_min = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    let (a, b) = (1.0 / (1.0 + t_max), 1.0 / (1.0 + t_min));
    if b <= a {
        return Ok(IntegralCheck { direct, integral: 0.0, abs_gap: direct.abs() });
    }
    let mut breaks: Vec<f64> = ratios.iter().map(|&t| 1.0 / (1.0 + t)).filter(|&w| w > a && w < b).collect();
    if 0.5 > a && 0.5 < b {
        breaks.push(0.5);
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let integrand = |w: f64| closeness(w) / (w * w * w) * f.deriv2((1.0 - w) / w);
    let integral = integrate(integrand, a, b, &breaks, 1e-13)?;
    Ok(IntegralCheck { direct, integral, abs_gap: (direct - integral).abs() })
}

/// The `p_min` condition guaranteeing a compression rate within `1+ε` of the source entropy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateGuarantee {
    pub d: f64,
    pub p_min_threshold_exact: f64,
    pub p_min_threshold_simple: f64,
    /// Upper bound on the rate in nats per source symbol; infinite when its denominator is not positive.
    pub rate_upper_bound: ExtendedReal,
    pub guarantee_holds: bool,
}

/// `d(m, ε) = mε ln|X|/(1+ε)`, plus `ln(1 − (D−1)/|X|^m)` when `D > 2`.
pub fn rate_budget(arity: usize, m: u32, code_alphabet: usize, epsilon: f64) -> Result<f64> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::Parameter(format!("epsilon must be positive and finite, got {epsilon}")));
    }
    if code_alphabet < 2 || m == 0 || arity < 2 {
        return Err(Error::Parameter("need m >= 1, |X| >= 2 and D >= 2".into()));
    }
    let ln_x = (code_alphabet as f64).ln();
    let mut d = m as f64 * epsilon * ln_x / (1.0 + epsilon);
    if arity > 2 {
        d += (-((arity - 1) as f64) / (code_alphabet as f64).powi(m as i32)).ln_1p();
    }
    Ok(d)
}

pub fn rate_guarantee(source: &SourceModel, m: u32, code_alphabet: usize, epsilon: f64) -> Result<RateGuarantee> {
    let d = rate_budget(source.arity(), m, code_alphabet, epsilon)?;
    if !(d > 0.0) {
        return Err(Error::Parameter(format!("epsilon = {epsilon} gives d = {d}; it must be positive")));
    }
    let rho_max = kl_rho_max(d)?;
    let rho = source.rho();
    let gap = if rho > 1.0 { delta_alpha(1.0, rho)? } else { 0.0 };
    let ln_x = (code_alphabet as f64).ln();
    let mut den = m as f64 - gap / ln_x;
    if source.arity() > 2 {
        den += (-((source.arity() - 1) as f64) / (code_alphabet as f64).powi(m as i32)).ln_1p() / ln_x;
    }
    let rate_upper_bound =
        if den > 0.0 { ExtendedReal::finite(m as f64 * source.entropy() / den) } else { ExtendedReal::Infinite };
    let p_min_threshold_exact = 1.0 / rho_max.exact;
    Ok(RateGuarantee {
        d,
        p_min_threshold_exact,
        p_min_threshold_simple: 1.0 / rho_max.simple,
        rate_upper_bound,
        guarantee_holds: source.p_min() >= p_min_threshold_exact,
    })
}

/// `m ln|X| / E[parse length]`, nats per source symbol.
pub fn compression_rate(tree: &TunstallTree, m: u32, code_alphabet: usize) -> f64 {
    m as f64 * (code_alphabet as f64).ln() / tree.expected_length()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::{Chi2Pearson, Kl};
    use crate::numerics::{lambert_residual, lambert_w, Branch};

    fn source(v: &[f64]) -> SourceModel {
        SourceModel::new(ProbVec::new(v.to_vec()).unwrap()).unwrap()
    }

    #[test]
    fn fair_coin_gives_uniform_leaves() {
        let t = build_tree(&source(&[0.5, 0.5]), TreeTarget::Leaves(4)).unwrap();
        assert!(t.leaves().iter().all(|l| (l.prob - 0.25).abs() < 1e-15));
        assert!(degroot_closeness(&t, 0.3).unwrap().abs() < 1e-15);
    }

    #[test]
    fn greedy_trace() {
        let t = build_tree(&source(&[0.3, 0.7]), TreeTarget::Leaves(3)).unwrap();
        let got: Vec<(String, f64)> = t.leaves().iter().map(|l| (word_label(&l.word, 2), l.prob)).collect();
        assert_eq!(got[0].0, "0");
        assert_eq!(got[1].0, "10");
        assert_eq!(got[2].0, "11");
        assert!((got[1].1 - 0.21).abs() < 1e-15 && (got[2].1 - 0.49).abs() < 1e-15);
    }

    #[test]
    fn codeword_sizing() {
        let t = build_tree(&source(&[0.3, 0.7]), TreeTarget::CodewordLen { m: 10, code_alphabet: 2 }).unwrap();
        assert_eq!(t.n(), 1024);
        let t3 = build_tree(&source(&[0.5, 0.3, 0.2]), TreeTarget::CodewordLen { m: 3, code_alphabet: 2 }).unwrap();
        assert_eq!(t3.n(), 7);
        let err = build_tree(&source(&[0.5, 0.3, 0.2]), TreeTarget::Leaves(4)).unwrap_err();
        assert!(err.to_string().contains("3 and 5"));
    }

    #[test]
    fn chi2_integral_is_exact() {
        let t = build_tree(&source(&[0.3, 0.7]), TreeTarget::Leaves(9)).unwrap();
        let r = integral_representation_check(&t, &Chi2Pearson).unwrap();
        assert!(r.abs_gap <= 1e-9 * r.direct.max(1.0), "{r:?}");
        let r = integral_representation_check(&build_tree(&source(&[0.3, 0.7]), TreeTarget::Leaves(5)).unwrap(), &Kl).unwrap();
        assert!(r.abs_gap <= 1e-6, "{r:?}");
    }

    #[test]
    fn example_rate_guarantee() {
        let g = rate_guarantee(&source(&[0.5, 0.5]), 10, 2, 0.1).unwrap();
        assert!((g.d - 0.6301).abs() < 5e-5);
        assert!((g.p_min_threshold_exact - 0.0978).abs() < 5e-4);
        assert!(g.p_min_threshold_simple >= g.p_min_threshold_exact);
        let x = -(-g.d - 1.0f64).exp();
        for b in [Branch::Principal, Branch::Secondary] {
            assert!(lambert_residual(lambert_w(b, x).unwrap(), x) <= 1e-12);
        }
    }

    #[test]
    fn closeness_limits() {
        let s = source(&[0.5, 0.5]);
        let b = closeness_bounds(&s, 8, 0.3).unwrap();
        assert_eq!(b.finite_n_bound, 0.0);
        assert_eq!(b.asymptotic_bound, 0.0);
        assert!((closeness_asymptotic(1e6, 0.3).unwrap() - 0.3).abs() < 1e-3);
    }
}
