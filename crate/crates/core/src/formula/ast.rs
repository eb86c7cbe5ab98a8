use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Closed time interval `[lower, upper]` in seconds. `upper == None` is unbounded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeInterval<S> {
    lower: S,
    upper: Option<S>,
}

impl<S: Scalar> TimeInterval<S> {
    pub fn new(lower: S, upper: Option<S>) -> Result<Self> {
        if !lower.is_finite() || lower < S::zero() {
            return Err(Error::NegativeEndpoint(lower.to_string()));
        }
        if let Some(u) = upper {
            if u < S::zero() {
                return Err(Error::NegativeEndpoint(u.to_string()));
            }
            if !u.is_finite() {
                return Ok(Self { lower, upper: None });
            }
            if lower > u {
                return Err(Error::InvertedInterval {
                    lower: lower.to_string(),
                    upper: u.to_string(),
                });
            }
        }
        Ok(Self { lower, upper })
    }

    pub fn bounded(lower: S, upper: S) -> Result<Self> {
        Self::new(lower, Some(upper))
    }

    pub fn unbounded(lower: S) -> Result<Self> {
        Self::new(lower, None)
    }

    pub fn lower(&self) -> S {
        self.lower
    }

    pub fn upper(&self) -> Option<S> {
        self.upper
    }

    pub fn is_unbounded(&self) -> bool {
        self.upper.is_none()
    }

    /// Upper endpoint with an unbounded end replaced by `horizon`.
    pub fn clipped_upper(&self, horizon: S) -> S {
        match self.upper {
            Some(u) => u,
            None => horizon.max(self.lower),
        }
    }
}

impl<S: Scalar> fmt::Display for TimeInterval<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.upper {
            Some(u) => write!(f, "[{},{}]", self.lower, u),
            None => write!(f, "[{},inf]", self.lower),
        }
    }
}

/// Arithmetic expression over named variables.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr<S> {
    Const(S),
    Var(String),
    Neg(Box<Expr<S>>),
    Add(Box<Expr<S>>, Box<Expr<S>>),
    Sub(Box<Expr<S>>, Box<Expr<S>>),
    Mul(Box<Expr<S>>, Box<Expr<S>>),
    Div(Box<Expr<S>>, Box<Expr<S>>),
}

impl<S: Scalar> Expr<S> {
    pub fn var(name: impl Into<String>) -> Self {
        Expr::Var(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(e: Self) -> Self {
        Expr::Neg(Box::new(e))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(a: Self, b: Self) -> Self {
        Expr::Add(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn sub(a: Self, b: Self) -> Self {
        Expr::Sub(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(a: Self, b: Self) -> Self {
        Expr::Mul(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn div(a: Self, b: Self) -> Self {
        Expr::Div(Box::new(a), Box::new(b))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Expr::Const(c) if c.is_zero())
    }

    /// `a - b` with a literal zero on either side folded away.
    pub fn difference(a: Self, b: Self) -> Self {
        if b.is_zero() {
            a
        } else if a.is_zero() {
            Expr::neg(b)
        } else {
            Expr::sub(a, b)
        }
    }

    pub fn eval(&self, lookup: &impl Fn(&str) -> S) -> S {
        match self {
            Expr::Const(c) => *c,
            Expr::Var(name) => lookup(name),
            Expr::Neg(e) => -e.eval(lookup),
            Expr::Add(a, b) => a.eval(lookup) + b.eval(lookup),
            Expr::Sub(a, b) => a.eval(lookup) - b.eval(lookup),
            Expr::Mul(a, b) => a.eval(lookup) * b.eval(lookup),
            Expr::Div(a, b) => a.eval(lookup) / b.eval(lookup),
        }
    }

    pub fn visit_vars<'a>(&'a self, out: &mut impl FnMut(&'a str)) {
        match self {
            Expr::Const(_) => {}
            Expr::Var(name) => out(name),
            Expr::Neg(e) => e.visit_vars(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.visit_vars(out);
                b.visit_vars(out);
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Const(_) | Expr::Var(_) => 4,
        }
    }

    fn fmt_operand(&self, f: &mut fmt::Formatter<'_>, min_prec: u8) -> fmt::Result {
        if self.precedence() < min_prec || matches!(self, Expr::Const(c) if c.is_sign_negative()) {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

impl<S: Scalar> fmt::Display for Expr<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Var(name) => f.write_str(name),
            Expr::Neg(e) => {
                f.write_str("-")?;
                e.fmt_operand(f, 3)
            }
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                let (op, prec) = match self {
                    Expr::Add(..) => ("+", 1),
                    Expr::Sub(..) => ("-", 1),
                    Expr::Mul(..) => ("*", 2),
                    _ => ("/", 2),
                };
                a.fmt_operand(f, prec)?;
                write!(f, " {op} ")?;
                // left-associative: an equal-precedence right operand needs parentheses
                b.fmt_operand(f, prec + 1)
            }
        }
    }
}

/// Atomic predicate `expr > 0`, optionally with user supplied robustness bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct Predicate<S> {
    pub expr: Expr<S>,
    pub bound_hint: Option<(S, S)>,
}

impl<S: Scalar> Predicate<S> {
    pub fn new(expr: Expr<S>) -> Self {
        Self {
            expr,
            bound_hint: None,
        }
    }

    pub fn with_bound_hint(expr: Expr<S>, min: S, max: S) -> Result<Self> {
        if min > max {
            return Err(Error::InvertedInterval {
                lower: min.to_string(),
                upper: max.to_string(),
            });
        }
        Ok(Self {
            expr,
            bound_hint: Some((min, max)),
        })
    }

    /// Predicate with the sign of its function flipped; hints are mirrored.
    pub fn negated(&self) -> Self {
        Self {
            expr: Expr::neg(self.expr.clone()),
            bound_hint: self.bound_hint.map(|(lo, hi)| (-hi, -lo)),
        }
    }
}

impl<S: Scalar> fmt::Display for Predicate<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} > 0", self.expr)
    }
}

/// STL formula tree.
#[derive(Debug, Clone, PartialEq)]
pub enum Formula<S> {
    True,
    Atom(Predicate<S>),
    Not(Box<Formula<S>>),
    And(Box<Formula<S>>, Box<Formula<S>>),
    Or(Box<Formula<S>>, Box<Formula<S>>),
    Implies(Box<Formula<S>>, Box<Formula<S>>),
    Always(TimeInterval<S>, Box<Formula<S>>),
    Eventually(TimeInterval<S>, Box<Formula<S>>),
    Until(TimeInterval<S>, Box<Formula<S>>, Box<Formula<S>>),
}

impl<S: Scalar> Formula<S> {
    pub fn atom(expr: Expr<S>) -> Self {
        Formula::Atom(Predicate::new(expr))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Self) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Self, b: Self) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Self, b: Self) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Self, b: Self) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn always(i: TimeInterval<S>, f: Self) -> Self {
        Formula::Always(i, Box::new(f))
    }

    pub fn eventually(i: TimeInterval<S>, f: Self) -> Self {
        Formula::Eventually(i, Box::new(f))
    }

    pub fn until(i: TimeInterval<S>, a: Self, b: Self) -> Self {
        Formula::Until(i, Box::new(a), Box::new(b))
    }

    /// Left-nested conjunction of `parts`; `True` when empty.
    pub fn conjunction(parts: impl IntoIterator<Item = Self>) -> Self {
        parts
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or(Formula::True)
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::True | Formula::Atom(_) => 0,
            Formula::Not(f) | Formula::Always(_, f) | Formula::Eventually(_, f) => 1 + f.depth(),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Until(_, a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    pub fn is_temporal_free(&self) -> bool {
        match self {
            Formula::True | Formula::Atom(_) => true,
            Formula::Not(f) => f.is_temporal_free(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.is_temporal_free() && b.is_temporal_free()
            }
            Formula::Always(..) | Formula::Eventually(..) | Formula::Until(..) => false,
        }
    }

    /// Calls `out` on every predicate in left-to-right order.
    pub fn visit_atoms<'a>(&'a self, out: &mut impl FnMut(&'a Predicate<S>)) {
        match self {
            Formula::True => {}
            Formula::Atom(p) => out(p),
            Formula::Not(f) | Formula::Always(_, f) | Formula::Eventually(_, f) => {
                f.visit_atoms(out)
            }
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Until(_, a, b) => {
                a.visit_atoms(out);
                b.visit_atoms(out);
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Implies(..) => 0,
            Formula::Or(..) => 1,
            Formula::And(..) => 2,
            _ => 3,
        }
    }

    fn fmt_operand(&self, f: &mut fmt::Formatter<'_>, min_prec: u8) -> fmt::Result {
        if self.precedence() < min_prec {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

impl<S: Scalar> fmt::Display for Formula<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => f.write_str("true"),
            Formula::Atom(p) => write!(f, "{p}"),
            Formula::Not(g) => {
                f.write_str("!")?;
                g.fmt_operand(f, 3)
            }
            Formula::And(a, b) => {
                a.fmt_operand(f, 2)?;
                f.write_str(" && ")?;
                b.fmt_operand(f, 3)
            }
            Formula::Or(a, b) => {
                a.fmt_operand(f, 1)?;
                f.write_str(" || ")?;
                b.fmt_operand(f, 2)
            }
            Formula::Implies(a, b) => {
                a.fmt_operand(f, 1)?;
                f.write_str(" -> ")?;
                b.fmt_operand(f, 0)
            }
            Formula::Always(i, g) => {
                write!(f, "G{i} ")?;
                g.fmt_operand(f, 3)
            }
            Formula::Eventually(i, g) => {
                write!(f, "F{i} ")?;
                g.fmt_operand(f, 3)
            }
            Formula::Until(i, a, b) => write!(f, "({a} U{i} {b})"),
        }
    }
}

/// Declared value ranges of the signal variables (the hyper-rectangle the trace lives in).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct VariableDeclarations<S> {
    entries: BTreeMap<String, (S, S)>,
    order: Vec<String>,
}

impl<S: Scalar> VariableDeclarations<S> {
    pub fn new() -> Self {
        Self {
            entries: BTreeMap::new(),
            order: Vec::new(),
        }
    }

    pub fn declare(&mut self, name: impl Into<String>, min: S, max: S) -> Result<()> {
        let name = name.into();
        if min > max || min.is_nan() || max.is_nan() {
            return Err(Error::InvertedDeclaration {
                name,
                min: min.to_string(),
                max: max.to_string(),
            });
        }
        if self.entries.insert(name.clone(), (min, max)).is_none() {
            self.order.push(name);
        }
        Ok(())
    }

    pub fn with(mut self, name: impl Into<String>, min: S, max: S) -> Result<Self> {
        self.declare(name, min, max)?;
        Ok(self)
    }

    pub fn get(&self, name: &str) -> Option<(S, S)> {
        self.entries.get(name).copied()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.entries.contains_key(name)
    }

    /// Variable names in declaration order.
    pub fn names(&self) -> &[String] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }
}
