//! Finite probability mass functions and joint distributions.

use crate::error::{Error, Result};

/// Tolerance on `|Σ p − 1|` accepted by the validating constructors.
pub const SUM_TOL: f64 = 1e-12;

/// A pmf on the alphabet `{0, …, n−1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbVec {
    masses: Vec<f64>,
}

impl ProbVec {
    /// Validates and wraps `masses`. Inputs off by more than [`SUM_TOL`] are
    /// rejected rather than renormalized.
    pub fn new(masses: Vec<f64>) -> Result<ProbVec> {
        if masses.is_empty() {
            return Err(Error::InvalidPmf("empty mass vector".into()));
        }
        for (i, &m) in masses.iter().enumerate() {
            if !m.is_finite() || m < 0.0 {
                return Err(Error::InvalidPmf(format!("mass[{i}] = {m} is not a finite non-negative number")));
            }
        }
        let sum: f64 = masses.iter().sum();
        if (sum - 1.0).abs() > SUM_TOL {
            return Err(Error::InvalidPmf(format!("masses sum to {sum}, not 1")));
        }
        Ok(ProbVec { masses })
    }

    /// Normalizes non-negative weights. For derived quantities such as
    /// conditionals and random draws; user input goes through [`ProbVec::new`].
    pub fn from_weights(weights: &[f64]) -> Result<ProbVec> {
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) || !total.is_finite() || weights.iter().any(|&w| !(w >= 0.0)) {
            return Err(Error::InvalidPmf("weights must be non-negative with positive finite total".into()));
        }
        Ok(ProbVec { masses: weights.iter().map(|w| w / total).collect() })
    }

    pub fn uniform(n: usize) -> ProbVec {
        assert!(n >= 1);
        ProbVec { masses: vec![1.0 / n as f64; n] }
    }

    /// `Bern(p)` as the pmf `(1−p, p)` on `{0, 1}`.
    pub fn bernoulli(p: f64) -> Result<ProbVec> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Parameter(format!("Bernoulli parameter {p} outside [0,1]")));
        }
        Ok(ProbVec { masses: vec![1.0 - p, p] })
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn get(&self, i: usize) -> f64 {
        self.masses[i]
    }

    pub fn min(&self) -> f64 {
        self.masses.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.masses.iter().copied().fold(0.0, f64::max)
    }

    pub fn is_fully_supported(&self) -> bool {
        self.masses.iter().all(|&m| m > 0.0)
    }

    pub fn support(&self) -> Vec<bool> {
        self.masses.iter().map(|&m| m > 0.0).collect()
    }

    /// Masses in non-increasing order.
    pub fn sorted_desc(&self) -> Vec<f64> {
        let mut v = self.masses.clone();
        v.sort_by(|a, b| b.total_cmp(a));
        v
    }

    /// `‖P‖₂²`.
    pub fn norm2_sq(&self) -> f64 {
        self.masses.iter().map(|m| m * m).sum()
    }

    /// Product pmf `P ⊗ R`, indexed `i·|R| + j`.
    pub fn product(&self, other: &ProbVec) -> ProbVec {
        let mut out = Vec::with_capacity(self.len() * other.len());
        for &a in &self.masses {
            for &b in &other.masses {
                out.push(a * b);
            }
        }
        ProbVec { masses: out }
    }

    /// `λ P + (1−λ) Q`.
    pub fn mixture(&self, other: &ProbVec, lambda: f64) -> Result<ProbVec> {
        check_same_len(self.len(), other.len())?;
        Ok(ProbVec {
            masses: self.masses.iter().zip(&other.masses).map(|(p, q)| lambda * p + (1.0 - lambda) * q).collect(),
        })
    }
}

pub(crate) fn check_same_len(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch { left: a, right: b });
    }
    Ok(())
}

/// A joint pmf `P_{XY}` stored as an `M × K` matrix indexed `(x, y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointPMF {
    rows: Vec<Vec<f64>>,
    k: usize,
}

impl JointPMF {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<JointPMF> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(Error::InvalidPmf("joint matrix must be non-empty".into()));
        }
        let k = rows[0].len();
        let mut total = 0.0;
        for (x, row) in rows.iter().enumerate() {
            if row.len() != k {
                return Err(Error::InvalidPmf(format!("row {x} has {} entries, expected {k}", row.len())));
            }
            for (y, &v) in row.iter().enumerate() {
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::InvalidPmf(format!("entry ({x},{y}) = {v} is not a finite non-negative number")));
                }
                total += v;
            }
        }
        if (total - 1.0).abs() > SUM_TOL {
            return Err(Error::InvalidPmf(format!("joint masses sum to {total}, not 1")));
        }
        Ok(JointPMF { rows, k })
    }

    /// Joint of `X ~ px` and `Y` drawn through the row-stochastic `channel`.
    pub fn from_input_and_channel(px: &ProbVec, channel: &[Vec<f64>]) -> Result<JointPMF> {
        check_same_len(px.len(), channel.len())?;
        let rows = px.masses().iter().zip(channel).map(|(&p, row)| row.iter().map(|w| p * w).collect()).collect();
        JointPMF::new(rows)
    }

    /// `|X|`.
    pub fn m(&self) -> usize {
        self.rows.len()
    }

    /// `|Y|`.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.rows[x][y]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn marginal_x(&self) -> ProbVec {
        let w: Vec<f64> = self.rows.iter().map(|r| r.iter().sum()).collect();
        ProbVec::from_weights(&w).expect("joint has positive total mass")
    }

    pub fn marginal_y(&self) -> ProbVec {
        let w: Vec<f64> = (0..self.k).map(|y| self.rows.iter().map(|r| r[y]).sum()).collect();
        ProbVec::from_weights(&w).expect("joint has positive total mass")
    }

    /// `P_{X|Y}(·|y)`, or `None` when `P_Y(y) = 0`.
    pub fn conditional_x(&self, y: usize) -> Option<ProbVec> {
        let col: Vec<f64> = self.rows.iter().map(|r| r[y]).collect();
        if col.iter().sum::<f64>() > 0.0 {
            ProbVec::from_weights(&col).ok()
        } else {
            None
        }
    }

    /// Pairs `(P_Y(y), P_{X|Y}(·|y))` over the support of `Y`.
    pub fn conditionals(&self) -> Vec<(f64, ProbVec)> {
        let py = self.marginal_y();
        (0..self.k).filter_map(|y| self.conditional_x(y).map(|c| (py.get(y), c))).collect()
    }

    /// Joint of two independent copies, indexed `(x1·M + x2, y1·K + y2)`.
    pub fn product(&self, other: &JointPMF) -> JointPMF {
        let mut rows = Vec::with_capacity(self.m() * other.m());
        for r1 in &self.rows {
            for r2 in &other.rows {
                let mut row = Vec::with_capacity(self.k * other.k);
                for &a in r1 {
                    for &b in r2 {
                        row.push(a * b);
                    }
                }
                rows.push(row);
            }
        }
        JointPMF { rows, k: self.k * other.k }
    }
}
