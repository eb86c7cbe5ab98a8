use std::fmt;

use serde::Serialize;

use crate::scalar::Scalar;

/// Closed range `[lower, upper]` of robustness values reachable by some completion of a prefix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RobustInterval<S> {
    pub lower: S,
    pub upper: S,
}

impl<S: Scalar> RobustInterval<S> {
    pub fn new(lower: S, upper: S) -> Self {
        Self { lower, upper }
    }

    pub fn point(v: S) -> Self {
        Self { lower: v, upper: v }
    }

    pub fn min(self, other: Self) -> Self {
        Self::new(self.lower.min(other.lower), self.upper.min(other.upper))
    }

    pub fn max(self, other: Self) -> Self {
        Self::new(self.lower.max(other.lower), self.upper.max(other.upper))
    }

    pub fn width(&self) -> S {
        self.upper - self.lower
    }

    pub fn is_point(&self) -> bool {
        self.lower == self.upper
    }

    /// True if `v` lies in the interval, allowing `tol` of slack on both sides.
    pub fn contains(&self, v: S, tol: S) -> bool {
        v >= self.lower - tol && v <= self.upper + tol
    }

    /// Definitely satisfied: every completion has positive robustness.
    pub fn is_satisfied(&self) -> bool {
        self.lower > S::zero()
    }

    /// Definitely violated: every completion has negative robustness.
    pub fn is_violated(&self) -> bool {
        self.upper < S::zero()
    }
}

impl<S: Scalar> std::ops::Neg for RobustInterval<S> {
    type Output = Self;

    fn neg(self) -> Self {
        Self::new(-self.upper, -self.lower)
    }
}

impl<S: Scalar> fmt::Display for RobustInterval<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lower, self.upper)
    }
}
