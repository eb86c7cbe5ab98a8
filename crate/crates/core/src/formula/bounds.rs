//! Conservative robustness bounds of predicates over the declared variable box.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::ast::{Expr, Predicate, VariableDeclarations};

/// Closed real interval used for bound propagation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounds<S> {
    pub lo: S,
    pub hi: S,
}

impl<S: Scalar> Bounds<S> {
    pub fn new(lo: S, hi: S) -> Self {
        debug_assert!(!(lo > hi), "inverted bounds");
        Self { lo, hi }
    }

    pub fn point(x: S) -> Self {
        Self { lo: x, hi: x }
    }

    pub fn contains(&self, x: S) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(S::zero())
    }

    pub fn is_finite(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    fn checked_div(self, rhs: Self) -> Option<Self> {
        if rhs.contains_zero() {
            return None;
        }
        let inv = Bounds::new(S::one() / rhs.hi, S::one() / rhs.lo);
        Some(self * inv)
    }
}

// 0 * inf is taken as 0 so unbounded variables multiplied by a zero constant stay finite.
fn mul_ext<S: Scalar>(a: S, b: S) -> S {
    if a.is_zero() || b.is_zero() {
        S::zero()
    } else {
        a * b
    }
}

impl<S: Scalar> Add for Bounds<S> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Bounds::new(self.lo + rhs.lo, self.hi + rhs.hi)
    }
}

impl<S: Scalar> Sub for Bounds<S> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Bounds::new(self.lo - rhs.hi, self.hi - rhs.lo)
    }
}

impl<S: Scalar> Neg for Bounds<S> {
    type Output = Self;
    fn neg(self) -> Self {
        Bounds::new(-self.hi, -self.lo)
    }
}

impl<S: Scalar> Mul for Bounds<S> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let c = [
            mul_ext(self.lo, rhs.lo),
            mul_ext(self.lo, rhs.hi),
            mul_ext(self.hi, rhs.lo),
            mul_ext(self.hi, rhs.hi),
        ];
        let lo = c.iter().copied().fold(S::infinity(), S::min);
        let hi = c.iter().copied().fold(S::neg_infinity(), S::max);
        Bounds::new(lo, hi)
    }
}

fn eval_bounds<S: Scalar>(
    e: &Expr<S>,
    decls: &VariableDeclarations<S>,
    whole: &Expr<S>,
) -> Result<Bounds<S>> {
    Ok(match e {
        Expr::Const(c) => Bounds::point(*c),
        Expr::Var(name) => match decls.get(name) {
            Some((lo, hi)) => Bounds::new(lo, hi),
            None => Bounds::new(S::neg_infinity(), S::infinity()),
        },
        Expr::Neg(a) => -eval_bounds(a, decls, whole)?,
        Expr::Add(a, b) => eval_bounds(a, decls, whole)? + eval_bounds(b, decls, whole)?,
        Expr::Sub(a, b) => eval_bounds(a, decls, whole)? - eval_bounds(b, decls, whole)?,
        Expr::Mul(a, b) => eval_bounds(a, decls, whole)? * eval_bounds(b, decls, whole)?,
        Expr::Div(a, b) => {
            let num = eval_bounds(a, decls, whole)?;
            let den = eval_bounds(b, decls, whole)?;
            num.checked_div(den)
                .ok_or_else(|| Error::DivisionByIntervalContainingZero(whole.to_string()))?
        }
    })
}

/// Bounds `(r_min, r_max)` on the predicate's function over the declared box.
///
/// A bound hint wins when present; otherwise the bounds come from interval arithmetic and may
/// be wider than the exact range.
pub fn predicate_bounds<S: Scalar>(
    p: &Predicate<S>,
    decls: &VariableDeclarations<S>,
) -> Result<(S, S)> {
    if let Some(hint) = p.bound_hint {
        return Ok(hint);
    }
    let b = eval_bounds(&p.expr, decls, &p.expr)?;
    Ok((b.lo, b.hi))
}
