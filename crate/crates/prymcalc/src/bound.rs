//! Coefficients that are known exactly or only bounded.

use std::fmt;
use std::ops::{Add, Neg};

use crate::scalar::Scalar;

/// A coefficient `c` of one generator.
///
/// Bounds follow the convention of negated boundary coefficients: a class
/// written `… − μ·δ` with `μ ≥ m` has `AtLeast(m)` on `δ`, so
/// `AtLeast(m)` means `c ≤ −m` and `AtMost(m)` means `c ≥ −m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CoeffBound<T> {
    Exact(T),
    AtLeast(T),
    AtMost(T),
    Unknown,
}

impl<T: Scalar> CoeffBound<T> {
    pub fn zero() -> Self {
        CoeffBound::Exact(T::zero())
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, CoeffBound::Exact(v) if v.is_zero())
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, CoeffBound::Exact(_))
    }

    pub fn exact(&self) -> Option<&T> {
        match self {
            CoeffBound::Exact(v) => Some(v),
            _ => None,
        }
    }

    /// Greatest certified lower bound on the coefficient.
    pub fn lower(&self) -> Option<T> {
        match self {
            CoeffBound::Exact(v) => Some(v.clone()),
            CoeffBound::AtMost(m) => Some(-m.clone()),
            CoeffBound::AtLeast(_) | CoeffBound::Unknown => None,
        }
    }

    /// Least certified upper bound on the coefficient.
    pub fn upper(&self) -> Option<T> {
        match self {
            CoeffBound::Exact(v) => Some(v.clone()),
            CoeffBound::AtLeast(m) => Some(-m.clone()),
            CoeffBound::AtMost(_) | CoeffBound::Unknown => None,
        }
    }

    fn from_interval(lo: Option<T>, hi: Option<T>) -> Self {
        match (lo, hi) {
            (Some(a), Some(b)) => {
                debug_assert!(a == b, "bounded non-degenerate interval");
                CoeffBound::Exact(a)
            }
            (None, Some(b)) => CoeffBound::AtLeast(-b),
            (Some(a), None) => CoeffBound::AtMost(-a),
            (None, None) => CoeffBound::Unknown,
        }
    }

    pub fn scale(&self, k: &T) -> Self {
        if k.is_zero() {
            return CoeffBound::zero();
        }
        let mul = |x: Option<T>| x.map(|v| v * k.clone());
        if k.is_positive() {
            CoeffBound::from_interval(mul(self.lower()), mul(self.upper()))
        } else {
            CoeffBound::from_interval(mul(self.upper()), mul(self.lower()))
        }
    }

    pub fn provably_nonnegative(&self) -> bool {
        self.lower().is_some_and(|v| !v.is_negative())
    }

    pub fn provably_positive(&self) -> bool {
        self.lower().is_some_and(|v| v.is_positive())
    }
}

impl<T: Scalar> Add for CoeffBound<T> {
    type Output = CoeffBound<T>;

    fn add(self, rhs: CoeffBound<T>) -> CoeffBound<T> {
        let plus = |a: Option<T>, b: Option<T>| Some(a? + b?);
        CoeffBound::from_interval(plus(self.lower(), rhs.lower()), plus(self.upper(), rhs.upper()))
    }
}

impl<T: Scalar> Neg for CoeffBound<T> {
    type Output = CoeffBound<T>;

    fn neg(self) -> CoeffBound<T> {
        self.scale(&-T::one())
    }
}

impl<T: Scalar> fmt::Display for CoeffBound<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoeffBound::Exact(v) => write!(f, "{v}"),
            CoeffBound::AtLeast(m) => write!(f, "-[>={m}]"),
            CoeffBound::AtMost(m) => write!(f, "-[<={m}]"),
            CoeffBound::Unknown => f.write_str("?"),
        }
    }
}
