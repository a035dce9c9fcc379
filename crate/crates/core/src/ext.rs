//! Non-negative reals extended with `+∞`, and signed limits used by generators.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul};

/// A value in `[0, +∞]`. Arithmetic saturates at `+∞`, and `0 · ∞ = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedReal {
    Finite(f64),
    Infinite,
}

impl ExtendedReal {
    pub const ZERO: ExtendedReal = ExtendedReal::Finite(0.0);

    /// Builds a finite value; negative round-off below `1e-12` is clamped to zero.
    pub fn finite(x: f64) -> ExtendedReal {
        if x == f64::INFINITY {
            return ExtendedReal::Infinite;
        }
        assert!(!x.is_nan(), "ExtendedReal from NaN");
        assert!(x >= -1e-12, "ExtendedReal from negative value {x}");
        ExtendedReal::Finite(x.max(0.0))
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtendedReal::Finite(_))
    }

    pub fn is_infinite(self) -> bool {
        !self.is_finite()
    }

    /// Lossy conversion; `+∞` maps to `f64::INFINITY`.
    pub fn to_f64(self) -> f64 {
        match self {
            ExtendedReal::Finite(x) => x,
            ExtendedReal::Infinite => f64::INFINITY,
        }
    }

    pub fn finite_value(self) -> Option<f64> {
        match self {
            ExtendedReal::Finite(x) => Some(x),
            ExtendedReal::Infinite => None,
        }
    }

    /// Multiplies by a non-negative scalar with `0 · ∞ = 0`.
    pub fn scale(self, c: f64) -> ExtendedReal {
        assert!(c >= 0.0, "ExtendedReal scaled by negative {c}");
        match self {
            ExtendedReal::Finite(x) => ExtendedReal::finite(x * c),
            ExtendedReal::Infinite if c == 0.0 => ExtendedReal::ZERO,
            ExtendedReal::Infinite => ExtendedReal::Infinite,
        }
    }

    pub fn min(self, other: ExtendedReal) -> ExtendedReal {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: ExtendedReal) -> ExtendedReal {
        if self >= other {
            self
        } else {
            other
        }
    }
}

impl Add for ExtendedReal {
    type Output = ExtendedReal;
    fn add(self, rhs: ExtendedReal) -> ExtendedReal {
        match (self, rhs) {
            (ExtendedReal::Finite(a), ExtendedReal::Finite(b)) => ExtendedReal::finite(a + b),
            _ => ExtendedReal::Infinite,
        }
    }
}

impl Mul for ExtendedReal {
    type Output = ExtendedReal;
    fn mul(self, rhs: ExtendedReal) -> ExtendedReal {
        match (self, rhs) {
            (ExtendedReal::Finite(a), ExtendedReal::Finite(b)) => ExtendedReal::finite(a * b),
            (ExtendedReal::Finite(a), ExtendedReal::Infinite)
            | (ExtendedReal::Infinite, ExtendedReal::Finite(a)) => {
                ExtendedReal::Infinite.scale(a)
            }
            (ExtendedReal::Infinite, ExtendedReal::Infinite) => ExtendedReal::Infinite,
        }
    }
}

impl PartialOrd for ExtendedReal {
    fn partial_cmp(&self, other: &ExtendedReal) -> Option<Ordering> {
        match (self, other) {
            (ExtendedReal::Finite(a), ExtendedReal::Finite(b)) => a.partial_cmp(b),
            (ExtendedReal::Finite(_), ExtendedReal::Infinite) => Some(Ordering::Less),
            (ExtendedReal::Infinite, ExtendedReal::Finite(_)) => Some(Ordering::Greater),
            (ExtendedReal::Infinite, ExtendedReal::Infinite) => Some(Ordering::Equal),
        }
    }
}

impl From<f64> for ExtendedReal {
    fn from(x: f64) -> ExtendedReal {
        ExtendedReal::finite(x)
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedReal::Finite(x) => fmt::Display::fmt(x, f),
            ExtendedReal::Infinite => f.write_str("inf"),
        }
    }
}

/// One-sided limit of a generator, such as `f(0+)` or `lim f(u)/u`.
/// These may be negative, so they are kept apart from [`ExtendedReal`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Limit {
    Finite(f64),
    PosInf,
}

impl Limit {
    pub fn is_finite(self) -> bool {
        matches!(self, Limit::Finite(_))
    }

    pub fn to_f64(self) -> f64 {
        match self {
            Limit::Finite(x) => x,
            Limit::PosInf => f64::INFINITY,
        }
    }

    pub fn finite_value(self) -> Option<f64> {
        match self {
            Limit::Finite(x) => Some(x),
            Limit::PosInf => None,
        }
    }
}
