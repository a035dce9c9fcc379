//! Lambert W, grid-then-golden 1-D maximization, and Gauss–Legendre quadrature.

use crate::error::{Error, Result};

/// A real interval with flags for excluded endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub open_lo: bool,
    pub open_hi: bool,
}

impl Interval {
    pub fn closed(lo: f64, hi: f64) -> Interval {
        assert!(lo <= hi, "interval [{lo}, {hi}] is reversed");
        Interval { lo, hi, open_lo: false, open_hi: false }
    }

    pub fn open(lo: f64, hi: f64) -> Interval {
        assert!(lo <= hi, "interval ({lo}, {hi}) is reversed");
        Interval { lo, hi, open_lo: true, open_hi: true }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        let above = if self.open_lo { x > self.lo } else { x >= self.lo };
        let below = if self.open_hi { x < self.hi } else { x <= self.hi };
        above && below
    }

    /// Evaluation endpoints; open ends are pulled in by `1e-9` of the width.
    fn effective(&self) -> (f64, f64) {
        let nudge = 1e-9 * self.width();
        let lo = if self.open_lo { self.lo + nudge } else { self.lo };
        let hi = if self.open_hi { self.hi - nudge } else { self.hi };
        (lo, hi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptResult {
    pub argmax: f64,
    pub max: f64,
    pub evaluations: usize,
}

/// Real branches of the Lambert W function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// `W₀ ≥ −1`.
    Principal,
    /// `W₋₁ ≤ −1`.
    Secondary,
}

const INV_E: f64 = 0.367_879_441_171_442_33;

/// Solves `w e^w = x` on the requested branch with Halley's method.
pub fn lambert_w(branch: Branch, x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("Lambert W of non-finite {x}")));
    }
    // Inputs like -exp(-1-d) for tiny d can round just past the branch point.
    let slack = 4.0 * f64::EPSILON;
    if x < -INV_E * (1.0 + slack) {
        return Err(Error::Domain(format!("Lambert W undefined below -1/e, got {x}")));
    }
    if branch == Branch::Secondary && x >= 0.0 {
        return Err(Error::Domain(format!("secondary Lambert W branch needs -1/e <= x < 0, got {x}")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let q = (std::f64::consts::E * x + 1.0).max(0.0);
    if q == 0.0 {
        return Ok(-1.0);
    }
    let p = (2.0 * q).sqrt();
    let sign = if branch == Branch::Principal { 1.0 } else { -1.0 };
    let mut w = if p < 0.5 {
        let sp = sign * p;
        -1.0 + sp - sp * sp / 3.0 + 11.0 / 72.0 * sp * sp * sp
    } else {
        match branch {
            Branch::Principal if x < 3.0 => {
                let l = x.ln_1p();
                l * (1.0 - l.ln_1p() / (2.0 + l))
            }
            Branch::Principal => {
                let l1 = x.ln();
                let l2 = l1.ln();
                l1 - l2 + l2 / l1
            }
            Branch::Secondary => {
                let l1 = (-x).ln();
                let l2 = (-l1).ln();
                l1 - l2 + l2 / l1
            }
        }
    };
    for _ in 0..100 {
        let ew = w.exp();
        let r = w * ew - x;
        let wp1 = w + 1.0;
        if wp1 == 0.0 {
            break;
        }
        let denom = ew * wp1 - (w + 2.0) * r / (2.0 * wp1);
        if denom == 0.0 || !denom.is_finite() {
            break;
        }
        let step = r / denom;
        let next = w - step;
        let next = match branch {
            Branch::Principal => next.max(-1.0),
            Branch::Secondary => next.min(-1.0),
        };
        let done = (next - w).abs() <= 4.0 * f64::EPSILON * next.abs().max(1.0);
        w = next;
        if done {
            break;
        }
    }
    Ok(w)
}

/// Relative residual `|w e^w − x| / |x|`.
pub fn lambert_residual(w: f64, x: f64) -> f64 {
    let r = (w * w.exp() - x).abs();
    if x == 0.0 {
        r
    } else {
        r / x.abs()
    }
}

fn check(x: f64, v: f64) -> Result<f64> {
    if v.is_nan() {
        Err(Error::NonFinite { at: x, value: v })
    } else {
        Ok(v)
    }
}

/// Golden-section search for a maximum of a unimodal function on `[a, b]`.
pub fn golden_section_max<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<OptResult> {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (a, b);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = check(c, f(c))?;
    let mut fd = check(d, f(d))?;
    let mut evals = 2;
    while (b - a).abs() > tol && evals < 400 {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = check(c, f(c))?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = check(d, f(d))?;
        }
        evals += 1;
    }
    let (argmax, max) = if fc >= fd { (c, fc) } else { (d, fd) };
    Ok(OptResult { argmax, max, evaluations: evals })
}

/// Maximizes `f` on `interval`: a uniform scan of `grid_points` abscissae, then
/// golden-section refinement inside the two cells around the best sample.
/// Ties go to the lowest abscissa; the result is never below the best sample.
pub fn maximize_1d<F: Fn(f64) -> f64>(f: F, interval: Interval, grid_points: usize, refine_tol: f64) -> Result<OptResult> {
    let (lo, hi) = interval.effective();
    if hi <= lo || grid_points < 2 {
        let v = check(lo, f(lo))?;
        return Ok(OptResult { argmax: lo, max: v, evaluations: 1 });
    }
    let step = (hi - lo) / (grid_points - 1) as f64;
    let abscissa = |i: usize| if i == grid_points - 1 { hi } else { lo + step * i as f64 };
    let mut best_i = 0;
    let mut best_v = f64::NEG_INFINITY;
    for i in 0..grid_points {
        let x = abscissa(i);
        let v = check(x, f(x))?;
        if v > best_v {
            best_v = v;
            best_i = i;
        }
    }
    let mut result = OptResult { argmax: abscissa(best_i), max: best_v, evaluations: grid_points };
    if best_v == f64::INFINITY {
        return Ok(result);
    }
    let a = abscissa(best_i.saturating_sub(1));
    let b = abscissa((best_i + 1).min(grid_points - 1));
    let refined = golden_section_max(&f, a, b, refine_tol.max(f64::EPSILON * (a.abs() + b.abs())))?;
    result.evaluations += refined.evaluations;
    if refined.max > result.max {
        result.argmax = refined.argmax;
        result.max = refined.max;
    }
    Ok(result)
}

/// [`maximize_1d`] with 4096 grid points and tolerance `1e-10`.
pub fn maximize_1d_default<F: Fn(f64) -> f64>(f: F, interval: Interval) -> Result<OptResult> {
    maximize_1d(f, interval, 4096, 1e-10)
}

/// Ten-point Gauss–Legendre nodes on [−1, 1], one half of the symmetric pairs.
#[allow(clippy::excessive_precision)]
pub(crate) const GL10: [(f64, f64); 5] = [
    (0.148_874_338_981_631_21, 0.295_524_224_714_752_87),
    (0.433_395_394_129_247_19, 0.269_266_719_309_996_36),
    (0.679_409_568_299_024_41, 0.219_086_362_515_982_04),
    (0.865_063_366_688_984_51, 0.149_451_349_150_580_59),
    (0.973_906_528_517_171_72, 0.066_671_344_308_688_14),
];

fn gl10<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<f64> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut s = 0.0;
    for &(x, w) in &GL10 {
        let (l, r) = (c - h * x, c + h * x);
        let (fl, fr) = (f(l), f(r));
        if !fl.is_finite() {
            return Err(Error::NonFinite { at: l, value: fl });
        }
        if !fr.is_finite() {
            return Err(Error::NonFinite { at: r, value: fr });
        }
        s += w * (fl + fr);
    }
    Ok(s * h)
}

fn adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> Result<f64> {
    let m = 0.5 * (a + b);
    let left = gl10(f, a, m)?;
    let right = gl10(f, m, b)?;
    let both = left + right;
    if (both - whole).abs() <= tol || depth == 0 || m <= a || m >= b {
        return Ok(both);
    }
    Ok(adaptive(f, a, m, left, 0.5 * tol, depth - 1)? + adaptive(f, m, b, right, 0.5 * tol, depth - 1)?)
}

/// `∫_a^b f` by adaptive 10-point Gauss–Legendre on each piece between breakpoints.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, breakpoints: &[f64], tol: f64) -> Result<f64> {
    if !(a < b) {
        return Err(Error::Domain(format!("integration needs a < b, got [{a}, {b}]")));
    }
    let mut cuts: Vec<f64> = breakpoints.iter().copied().filter(|&x| x > a && x < b).collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut nodes = Vec::with_capacity(cuts.len() + 2);
    nodes.push(a);
    nodes.extend(cuts);
    nodes.push(b);
    let mut total = 0.0;
    for w in nodes.windows(2) {
        let share = tol * (w[1] - w[0]) / (b - a);
        let whole = gl10(&f, w[0], w[1])?;
        total += adaptive(&f, w[0], w[1], whole, share, 40)?;
    }
    Ok(total)
}

/// `n` points from `a` to `b` inclusive, evenly spaced on a linear or log scale.
pub fn grid(a: f64, b: f64, n: usize, log: bool) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    (0..n)
        .map(|i| {
            let s = i as f64 / (n - 1) as f64;
            if i == n - 1 {
                b
            } else if log {
                (a.ln() + s * (b.ln() - a.ln())).exp()
            } else {
                a + s * (b - a)
            }
        })
        .collect()
}
