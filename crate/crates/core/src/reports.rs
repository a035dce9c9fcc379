//! CSV emitters behind the command-line tool: figure sweeps, the list-decoding table and ad-hoc queries.

use std::fmt::Write as _;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;

use crate::divergence::named_divergence;
use crate::error::{Error, Result};
use crate::ext::ExtendedReal;
use crate::f_alpha::{alpha_min, asymptotic_slope, contraction_ratio_upper, d_falpha, falpha_bounds, FAlpha};
use crate::generator::DivergenceKind;
use crate::list_decoding::{
    error_probability, fixed_list_joint, fano_lower_bound, s_norm_bound, top_l_decoder, FanoVariant, ListSizes,
};
use crate::majorization::{kl_rho_max, phi_alpha, phi_upper_bounds};
use crate::numerics::grid;
use crate::pmf::{JointPMF, ProbVec};
use crate::random::{random_channel, random_pmf, seeded_rng};
use crate::sdpi::{gap_bounds, mixture_gap_bounds, product_ratio_bound, Channel, MixtureSetup};
use crate::tunstall::{closeness_asymptotic, rate_budget, word_label, TunstallTree};

/// Logarithm base for information quantities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Base {
    #[default]
    Nats,
    Bits,
}

impl Base {
    pub fn scale(self, nats: f64) -> f64 {
        match self {
            Base::Nats => nats,
            Base::Bits => nats / std::f64::consts::LN_2,
        }
    }

    pub fn unit(self) -> &'static str {
        match self {
            Base::Nats => "nats",
            Base::Bits => "bits",
        }
    }
}

impl FromStr for Base {
    type Err = Error;

    fn from_str(s: &str) -> Result<Base> {
        match s {
            "e" => Ok(Base::Nats),
            "2" => Ok(Base::Bits),
            _ => Err(Error::Input(format!("base must be 'e' or '2', got '{s}'"))),
        }
    }
}

/// A sweep `a:b:steps[:log]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub a: f64,
    pub b: f64,
    pub steps: usize,
    pub log: bool,
}

impl GridSpec {
    pub fn linear(a: f64, b: f64, steps: usize) -> GridSpec {
        GridSpec { a, b, steps, log: false }
    }

    pub fn log(a: f64, b: f64, steps: usize) -> GridSpec {
        GridSpec { a, b, steps, log: true }
    }

    pub fn points(&self) -> Vec<f64> {
        grid(self.a, self.b, self.steps, self.log)
    }
}

impl FromStr for GridSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<GridSpec> {
        let bad = || Error::Input(format!("grid must look like a:b:steps or a:b:steps:log, got '{s}'"));
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() < 3 || parts.len() > 4 {
            return Err(bad());
        }
        let a: f64 = parts[0].trim().parse().map_err(|_| bad())?;
        let b: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let steps: usize = parts[2].trim().parse().map_err(|_| bad())?;
        let log = match parts.get(3).map(|p| p.trim()) {
            None => false,
            Some("log") => true,
            Some(_) => return Err(bad()),
        };
        if !a.is_finite() || !b.is_finite() || a >= b || steps < 2 || (log && a <= 0.0) {
            return Err(Error::Input(format!(
                "grid '{s}' needs finite a < b, at least 2 steps, and a > 0 for log spacing"
            )));
        }
        Ok(GridSpec { a, b, steps, log })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Cell {
        Cell::Num(x)
    }
}

impl From<ExtendedReal> for Cell {
    fn from(x: ExtendedReal) -> Cell {
        Cell::Num(x.to_f64())
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Cell {
        x.map_or(Cell::Empty, Cell::Num)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Cell {
        Cell::Int(x as i64)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Cell {
        Cell::Text(x.to_string())
    }
}

/// Shortest round-trip decimal, `inf` for infinity.
pub fn format_number(x: f64) -> String {
    if x == f64::INFINITY {
        "inf".into()
    } else if x == f64::NEG_INFINITY {
        "-inf".into()
    } else if x == 0.0 {
        "0".into()
    } else {
        format!("{x}")
    }
}

/// `x` to 12 significant digits with trailing zeros removed.
pub fn format_sig12(x: f64) -> String {
    if !x.is_finite() {
        return format_number(x);
    }
    if x == 0.0 {
        return "0".into();
    }
    let exp = x.abs().log10().floor() as i32;
    if !(-5..12).contains(&exp) {
        let s = format!("{x:.11e}");
        let (mant, e) = s.split_once('e').expect("exponent present");
        let mant = mant.trim_end_matches('0').trim_end_matches('.');
        return format!("{mant}e{e}");
    }
    let decimals = (11 - exp).max(0) as usize;
    let s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// A CSV document with `#` comment lines above a header row.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Csv {
    pub comments: Vec<String>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Csv {
    pub fn new(header: &[&str]) -> Csv {
        Csv { comments: Vec::new(), header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn comment(&mut self, line: impl Into<String>) {
        self.comments.push(line.into());
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.comments {
            let _ = writeln!(out, "# {c}");
        }
        let _ = writeln!(out, "{}", self.header.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Cell::Num(x) => format_number(*x),
                    Cell::Int(i) => i.to_string(),
                    Cell::Text(t) => t.clone(),
                    Cell::Empty => String::new(),
                })
                .collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }
}

/// Options shared by the figure sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FigureOptions {
    pub base: Base,
    /// Replaces the figure's default sweep of its horizontal axis.
    pub grid: Option<GridSpec>,
}

// Bernoulli(1/4) against Bernoulli(1/2) sent through a BSC with crossover 0.110.
const MIX_P: f64 = 0.25;
const MIX_Q: f64 = 0.5;
const MIX_DELTA: f64 = 0.110;

fn mixture_setup(n: usize, lambda: f64) -> Result<MixtureSetup> {
    MixtureSetup::iid(ProbVec::bernoulli(MIX_P)?, ProbVec::bernoulli(MIX_Q)?, Channel::bsc(MIX_DELTA)?, n, lambda)
}

pub fn figure(id: u32, opts: &FigureOptions) -> Result<Csv> {
    match id {
        1 => figure1(opts),
        2 => figure2(opts),
        3 => figure3(opts),
        4 => figure4(opts),
        5 => figure5(opts),
        6 => figure6(opts),
        7 => figure7(opts),
        8 => figure8(opts),
        _ => Err(Error::Input(format!("figure id must be 1..8, got {id}"))),
    }
}

fn sweep<T: Send>(points: &[f64], f: impl Fn(f64) -> Result<T> + Sync + Send) -> Result<Vec<T>> {
    points.par_iter().map(|&x| f(x)).collect()
}

fn figure1(opts: &FigureOptions) -> Result<Csv> {
    let lambdas = opts.grid.unwrap_or(GridSpec::linear(0.0, 1.0, 101)).points();
    let f = FAlpha::new(1.0)?;
    let b = opts.base;
    let mut csv = Csv::new(&["n", "lambda", "lb1", "lb2", "ub1", "exact", "check"]);
    csv.comment("gap D_f(R_X^n || Q_X^n) - D_f(R_Y^n || Q_Y^n) for f = f_alpha, alpha = 1");
    csv.comment(format!("R = tensor of lambda*Bern({MIX_P}) + (1-lambda)*Bern({MIX_Q}); Q = Bern({MIX_Q})^n; channel BSC({MIX_DELTA})^n"));
    csv.comment("lb1 = c_f (prod(1+l^2 chi2_X) - prod(1+l^2 chi2_Y)); lb2 = c_f l^2 sum(chi2_X - chi2_Y); ub1 = e_f (same products)");
    csv.comment("exact by enumeration of the product space when it has at most 2^20 outcomes; empty otherwise");
    csv.comment(format!("values in {}", b.unit()));
    let mut all_ok = true;
    for n in [1usize, 10, 50] {
        let rows = sweep(&lambdas, |lam| mixture_gap_bounds(&mixture_setup(n, lam)?, &f))?;
        for (lam, r) in lambdas.iter().zip(rows) {
            let check = match r.exact_gap {
                Some(e) => {
                    let tol = 1e-12 * (1.0 + e.abs());
                    let ok = r.lb1.to_f64() <= e + tol && r.lb2.to_f64() <= e + tol && e <= r.ub1.to_f64() + tol;
                    all_ok &= ok;
                    if ok { "ok" } else { "fail" }
                }
                None => "na",
            };
            csv.push(vec![
                n.into(),
                (*lam).into(),
                b.scale(r.lb1.to_f64()).into(),
                b.scale(r.lb2.to_f64()).into(),
                b.scale(r.ub1.to_f64()).into(),
                r.exact_gap.map(|e| b.scale(e)).into(),
                check.into(),
            ]);
        }
    }
    csv.comment(format!("self-check lower <= exact <= upper: {}", if all_ok { "pass" } else { "FAIL" }));
    Ok(csv)
}

fn figure2(opts: &FigureOptions) -> Result<Csv> {
    let lambdas = opts.grid.unwrap_or(GridSpec::linear(0.01, 1.0, 100)).points();
    let mut csv = Csv::new(&["n", "alpha", "lambda", "ratio_bound", "exact_ratio"]);
    csv.comment("upper bound on D_f(R_Y^n || Q_Y^n) / D_f(R_X^n || Q_X^n) for f = f_alpha");
    csv.comment(format!("same sources and channel as figure 1: Bern({MIX_P}), Bern({MIX_Q}), BSC({MIX_DELTA})"));
    csv.comment("ratio_bound = kappa(xi1, xi2) (prod(1+l^2 chi2_Y) - 1) / ((f(0) + f'(1)) (prod(1+l^2 chi2_X) - 1))");
    for (n, alpha) in [(10usize, 10.0), (10, 100.0), (100, 100.0)] {
        let f = FAlpha::new(alpha)?;
        let rows = sweep(&lambdas, |lam| {
            let setup = mixture_setup(n, lam)?;
            let bound = product_ratio_bound(&setup, &f)?;
            let exact = if n <= 10 {
                let m = mixture_gap_bounds(&setup, &f)?;
                match (m.exact_input, m.exact_output) {
                    (Some(x), Some(y)) if x > 0.0 => Some(y / x),
                    _ => None,
                }
            } else {
                None
            };
            Ok((bound, exact))
        })?;
        for (lam, (bound, exact)) in lambdas.iter().zip(rows) {
            csv.push(vec![n.into(), alpha.into(), (*lam).into(), bound.into(), exact.into()]);
        }
    }
    Ok(csv)
}

fn figure3(opts: &FigureOptions) -> Result<Csv> {
    let alphas = opts.grid.unwrap_or(GridSpec::log(alpha_min(), 1e6, 241)).points();
    let mut csv = Csv::new(&["xi", "alpha", "ratio_upper"]);
    csv.comment("upper bound on mu_{f_alpha}(Q, W) / mu_{chi2}(Q, W) with xi = 1 / min Q");
    csv.comment("ratio_upper = kappa_alpha(xi) / (f_alpha(0) + f_alpha'(1))");
    for xi in [2.0, 10.0, 100.0] {
        let rows = sweep(&alphas, |a| contraction_ratio_upper(a, xi))?;
        for (a, r) in alphas.iter().zip(rows) {
            csv.push(vec![xi.into(), (*a).into(), r.into()]);
        }
    }
    Ok(csv)
}

fn figure4(opts: &FigureOptions) -> Result<Csv> {
    let alphas = opts.grid.unwrap_or(GridSpec::log(alpha_min(), 1000.0, 121)).points();
    let b = opts.base;
    let mut csv = Csv::new(&["p", "q", "alpha", "d_falpha", "lb_chi2", "lb_kl", "ub", "asymptotic"]);
    csv.comment("binary f_alpha divergence d(p || q) with its lower bounds k(alpha) chi2 and k(alpha)(exp(D) - 1)");
    csv.comment("ub = (ln(alpha+1) + 3/2 - 1/(alpha+1)) chi2 + (exp(2 D_3) - 1) / (3(alpha+1)); asymptotic = (ln(alpha+1) + 3/2) chi2");
    csv.comment(format!("values in {}", b.unit()));
    for (p, q) in [(0.1, 0.9), (0.2, 0.8)] {
        let (pp, qq) = (ProbVec::bernoulli(p)?, ProbVec::bernoulli(q)?);
        let chi2 = named_divergence(DivergenceKind::Chi2Pearson, &pp, &qq)?.to_f64();
        let rows = sweep(&alphas, |a| Ok((d_falpha(a, &pp, &qq)?, falpha_bounds(a, &pp, &qq)?)))?;
        for (a, (d, bounds)) in alphas.iter().zip(rows) {
            csv.push(vec![
                p.into(),
                q.into(),
                (*a).into(),
                b.scale(d.to_f64()).into(),
                b.scale(bounds.lb_chi2.to_f64()).into(),
                b.scale(bounds.lb_kl.to_f64()).into(),
                b.scale(bounds.ub.to_f64()).into(),
                b.scale(asymptotic_slope(*a) * chi2).into(),
            ]);
        }
    }
    Ok(csv)
}

fn figure5(opts: &FigureOptions) -> Result<Csv> {
    let ds = opts.grid.unwrap_or(GridSpec::log(1e-3, 10.0, 81)).points();
    let mut csv = Csv::new(&["d", "rho_exact_minus_1", "rho_simple_minus_1"]);
    csv.comment("largest rho with lim_n max over P_n(rho) of D(Q || U_n) <= d nats");
    csv.comment("exact = W_{-1}(-exp(-d-1)) / W_0(-exp(-d-1)); simple = 1 + sqrt(8 d)");
    let rows = sweep(&ds, kl_rho_max)?;
    for (d, r) in ds.iter().zip(rows) {
        csv.push(vec![(*d).into(), (r.exact - 1.0).into(), (r.simple - 1.0).into()]);
    }
    Ok(csv)
}

fn figure6(opts: &FigureOptions) -> Result<Csv> {
    let rhos = opts.grid.unwrap_or(GridSpec::log(1.0, 1000.0, 121)).points();
    let b = opts.base;
    let alpha = 1.0;
    let mut csv = Csv::new(&["rho", "phi", "ub1", "ub2", "ub3"]);
    csv.comment("Phi(alpha, rho) = lim_n max over P_n(rho) of D_{f_alpha}(Q || U_n) at alpha = 1, by 1-D maximization");
    csv.comment("ub1 = [ln(a+1) + 3/2 - 1/(a+1)] (r-1)^2/(4r) + ((r-1)(2r+1)(r+2)/(r(r+1)))^2 / (81(a+1))");
    csv.comment("ub2 = [ln(a+r) + 3/2] (r-1)^2/(4r); ub3 = 4(r-1)^2/(81(a+1)) + (ln(a+1)/4 + 3/8) min(r-1, (r-1)^2)");
    csv.comment(format!("values in {}", b.unit()));
    let rows = sweep(&rhos, |r| Ok((phi_alpha(alpha, r)?, phi_upper_bounds(alpha, r)?)))?;
    for (r, (phi, ub)) in rhos.iter().zip(rows) {
        csv.push(vec![(*r).into(), b.scale(phi).into(), b.scale(ub.ub1).into(), b.scale(ub.ub2).into(), b.scale(ub.ub3).into()]);
    }
    Ok(csv)
}

fn figure7(opts: &FigureOptions) -> Result<Csv> {
    let omegas = opts.grid.unwrap_or(GridSpec::linear(0.0, 1.0, 101)).points();
    let mut csv = Csv::new(&["rho", "omega", "bound"]);
    csv.comment("bound on the DeGroot closeness D_{phi_omega}(P_leaves || U_n) of Tunstall leaves, valid for every n");
    csv.comment("bound = max over x in [0,1] of x phi(rho/(1+(rho-1)x)) + (1-x) phi(1/(1+(rho-1)x)); rho = 1/p_min; rho = inf gives min(omega, 1-omega)");
    for rho in [1.0, 2.0, 4.0, 10.0, 100.0, f64::INFINITY] {
        let rows = sweep(&omegas, |w| {
            if w <= 0.0 || w >= 1.0 {
                Ok(0.0)
            } else if rho.is_infinite() {
                Ok(w.min(1.0 - w))
            } else {
                closeness_asymptotic(rho, w)
            }
        })?;
        for (w, v) in omegas.iter().zip(rows) {
            csv.push(vec![rho.into(), (*w).into(), v.into()]);
        }
    }
    Ok(csv)
}

fn figure8(opts: &FigureOptions) -> Result<Csv> {
    let mut ds = opts.grid.unwrap_or(GridSpec::log(1e-2, 10.0, 61)).points();
    // Binary source, binary code, m = 10, epsilon = 0.1.
    let example = rate_budget(2, 10, 2, 0.1)?;
    if opts.grid.is_none() {
        ds.push(example);
        ds.sort_by(f64::total_cmp);
    }
    let mut csv = Csv::new(&["d", "p_min_exact", "p_min_simple"]);
    csv.comment("smallest source p_min guaranteeing a Tunstall rate within (1 + epsilon) of the entropy, binary source and code");
    csv.comment("p_min_exact = W_0(-exp(-d-1)) / W_{-1}(-exp(-d-1)); p_min_simple = 1 / (1 + sqrt(8 d))");
    csv.comment(format!("includes d = {example} (m = 10, epsilon = 0.1)"));
    let rows = sweep(&ds, kl_rho_max)?;
    for (d, r) in ds.iter().zip(rows) {
        csv.push(vec![(*d).into(), (1.0 / r.exact).into(), (1.0 / r.simple).into()]);
    }
    Ok(csv)
}

/// Exact top-`L` error probability and three lower bounds for `L = 1..=max_l`.
pub fn list_table(joint: &JointPMF, max_l: usize) -> Result<Csv> {
    let m = joint.m();
    if m < 2 {
        return Err(Error::Input("the joint needs at least two values of X".into()));
    }
    let mut csv = Csv::new(&["L", "exact", "fano", "refined", "s2"]);
    csv.comment("exact: P[X not in L(Y)] for the decoder listing the L most probable x given y");
    csv.comment("fano: smallest p with H(X|Y) <= ln M - d(p || 1 - L/M)");
    csv.comment("refined: as fano, minus (E[P(X|Y)] - (1-p)/L)^+ / (2 sup P(x|y))");
    csv.comment("s2: 1 - L/M - sqrt(L/M (1 - L/M)(M E[P(X|Y)] - 1)), clamped at 0");
    for l in 1..=max_l.min(m - 1) {
        let dec = top_l_decoder(joint, &ListSizes::Fixed(l))?;
        csv.push(vec![
            l.into(),
            error_probability(joint, &dec)?.p_l.into(),
            fano_lower_bound(joint, l, FanoVariant::Kl)?.into(),
            fano_lower_bound(joint, l, FanoVariant::RefinedB)?.into(),
            s_norm_bound(joint, l, 2.0)?.into(),
        ]);
    }
    Ok(csv)
}

pub fn table1() -> Result<Csv> {
    list_table(&fixed_list_joint(), 4)
}

/// `D(P‖Q)` for a catalog divergence, in the chosen base.
pub fn eval(kind: DivergenceKind, p: &ProbVec, q: &ProbVec, base: Base) -> Result<f64> {
    let v = named_divergence(kind, p, q)?.to_f64();
    Ok(if v.is_finite() { base.scale(v) } else { v })
}

pub fn sdpi_report(kind: DivergenceKind, p: &ProbVec, q: &ProbVec, w: &Channel, base: Base) -> Result<Csv> {
    let f = kind.generator()?;
    let g = gap_bounds(&f, p, q, w)?;
    let mut csv = Csv::new(&["lower_primal", "lower_dual", "exact_gap", "upper_primal", "upper_dual"]);
    csv.comment(format!("bounds on D_f(P || Q) - D_f(PW || QW) for f = {}, in {}", f.name(), base.unit()));
    let s = |x: ExtendedReal| Cell::Num(if x.is_finite() { base.scale(x.to_f64()) } else { f64::INFINITY });
    csv.push(vec![s(g.lower_primal), s(g.lower_dual), s(g.exact_gap), s(g.upper_primal), s(g.upper_dual)]);
    Ok(csv)
}

pub fn tree_csv(tree: &TunstallTree) -> Csv {
    let mut csv = Csv::new(&["word", "probability", "depth"]);
    csv.comment(format!("{}-ary parse tree with {} leaves", tree.arity(), tree.n()));
    for leaf in tree.leaves() {
        csv.push(vec![Cell::Text(word_label(&leaf.word, tree.arity())), leaf.prob.into(), leaf.depth().into()]);
    }
    csv
}

/// Generators exercised by [`selfcheck`].
pub fn selfcheck_catalog() -> Vec<DivergenceKind> {
    let mut kinds = DivergenceKind::BASIC.to_vec();
    kinds.extend([-1.0, 0.0, 0.5, 2.0, 3.0].map(DivergenceKind::Alpha));
    kinds.push(DivergenceKind::EGamma(1.5));
    kinds.push(DivergenceKind::DeGroot(0.3));
    kinds
}

/// Random `(P, Q, W)` triples with alphabets of size 2..=6, checked against every catalog
/// generator's gap sandwich. Trial `i` draws from its own stream so the output does not
/// depend on scheduling.
pub fn selfcheck(seed: u64, trials: usize) -> Result<Csv> {
    let kinds = selfcheck_catalog();
    let per_trial: Vec<Vec<bool>> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = seeded_rng(seed.wrapping_add(i as u64));
            let nx = rng.random_range(2..=6);
            let ny = rng.random_range(2..=6);
            let p = random_pmf(&mut rng, nx);
            let q = random_pmf(&mut rng, nx);
            let w = random_channel(&mut rng, nx, ny);
            kinds
                .iter()
                .map(|k| {
                    let f = k.generator()?;
                    let g = gap_bounds(&f, &p, &q, &w)?;
                    Ok(g.is_consistent(1e-9) && g.lower_primal.to_f64() >= 0.0 && g.lower_dual.to_f64() >= 0.0)
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    let mut csv = Csv::new(&["generator", "trials", "passed"]);
    csv.comment(format!("lower <= D_f(P||Q) - D_f(PW||QW) <= upper on random triples, seed {seed}"));
    for (j, k) in kinds.iter().enumerate() {
        let passed = per_trial.iter().filter(|t| t[j]).count();
        csv.push(vec![Cell::Text(k.generator()?.name()), trials.into(), passed.into()]);
    }
    Ok(csv)
}
