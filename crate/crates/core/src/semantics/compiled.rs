//! Formula lowered to an index-addressed node arena for the evaluators.

use std::ops::Range;

use crate::error::{Error, Result};
use crate::formula::{predicate_bounds, Expr, Formula, VariableDeclarations};
use crate::scalar::Scalar;
use crate::trace::offsets_for;

#[derive(Debug, Clone)]
pub(crate) enum ColExpr<S> {
    Const(S),
    Col(usize),
    Neg(Box<ColExpr<S>>),
    Add(Box<ColExpr<S>>, Box<ColExpr<S>>),
    Sub(Box<ColExpr<S>>, Box<ColExpr<S>>),
    Mul(Box<ColExpr<S>>, Box<ColExpr<S>>),
    Div(Box<ColExpr<S>>, Box<ColExpr<S>>),
}

impl<S: Scalar> ColExpr<S> {
    fn lower(e: &Expr<S>, names: &[String]) -> Result<Self> {
        let b = |x: &Expr<S>| Self::lower(x, names).map(Box::new);
        Ok(match e {
            Expr::Const(c) => ColExpr::Const(*c),
            Expr::Var(name) => ColExpr::Col(
                names
                    .iter()
                    .position(|n| n == name)
                    .ok_or_else(|| Error::MissingColumn(name.clone()))?,
            ),
            Expr::Neg(a) => ColExpr::Neg(b(a)?),
            Expr::Add(x, y) => ColExpr::Add(b(x)?, b(y)?),
            Expr::Sub(x, y) => ColExpr::Sub(b(x)?, b(y)?),
            Expr::Mul(x, y) => ColExpr::Mul(b(x)?, b(y)?),
            Expr::Div(x, y) => ColExpr::Div(b(x)?, b(y)?),
        })
    }

    #[inline]
    pub(crate) fn eval(&self, row: &[S]) -> S {
        match self {
            ColExpr::Const(c) => *c,
            ColExpr::Col(i) => row[*i],
            ColExpr::Neg(a) => -a.eval(row),
            ColExpr::Add(a, b) => a.eval(row) + b.eval(row),
            ColExpr::Sub(a, b) => a.eval(row) - b.eval(row),
            ColExpr::Mul(a, b) => a.eval(row) * b.eval(row),
            ColExpr::Div(a, b) => a.eval(row) / b.eval(row),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) enum NodeKind<S> {
    True,
    Atom {
        expr: ColExpr<S>,
    },
    And(usize, usize),
    Or(usize, usize),
    Always {
        window: Range<usize>,
        child: usize,
    },
    Eventually {
        window: Range<usize>,
        child: usize,
    },
    Until {
        window: Range<usize>,
        left: usize,
        right: usize,
    },
}

#[derive(Debug, Clone)]
pub(crate) struct Node<S> {
    pub kind: NodeKind<S>,
    /// Static robustness bounds of the subformula.
    pub lo: S,
    pub hi: S,
}

/// NNF formula with atoms bound to trace columns and intervals converted to sample offsets.
#[derive(Debug, Clone)]
pub struct CompiledFormula<S> {
    pub(crate) nodes: Vec<Node<S>>,
    pub(crate) root: usize,
    unbounded_atom: Option<String>,
    reach: usize,
}

impl<S: Scalar> CompiledFormula<S> {
    /// Lowers `f` (which must be in NNF). Unbounded intervals are clipped to `horizon` seconds.
    pub fn new(
        f: &Formula<S>,
        decls: &VariableDeclarations<S>,
        names: &[String],
        dt: S,
        horizon: S,
    ) -> Result<Self> {
        if !(dt > S::zero()) {
            return Err(Error::InvalidTimeStep(dt.to_string()));
        }
        let mut c = Self {
            nodes: Vec::new(),
            root: 0,
            unbounded_atom: None,
            reach: 0,
        };
        c.root = c.lower(f, decls, names, dt, horizon)?;
        c.reach = c.reach_of(c.root);
        Ok(c)
    }

    fn push(&mut self, kind: NodeKind<S>, lo: S, hi: S) -> usize {
        self.nodes.push(Node { kind, lo, hi });
        self.nodes.len() - 1
    }

    fn lower(
        &mut self,
        f: &Formula<S>,
        decls: &VariableDeclarations<S>,
        names: &[String],
        dt: S,
        horizon: S,
    ) -> Result<usize> {
        let window = |i: &crate::formula::TimeInterval<S>| {
            offsets_for(i.lower(), i.clipped_upper(horizon), dt)
        };
        Ok(match f {
            Formula::True => self.push(NodeKind::True, S::infinity(), S::infinity()),
            Formula::Atom(p) => {
                let (lo, hi) =
                    predicate_bounds(p, decls).unwrap_or((S::neg_infinity(), S::infinity()));
                if !(lo.is_finite() && hi.is_finite()) && self.unbounded_atom.is_none() {
                    self.unbounded_atom = Some(p.to_string());
                }
                let expr = ColExpr::lower(&p.expr, names)?;
                self.push(NodeKind::Atom { expr }, lo, hi)
            }
            Formula::Not(_) => return Err(Error::NonNnfInput("Not")),
            Formula::Implies(..) => return Err(Error::NonNnfInput("Implies")),
            Formula::And(a, b) => {
                let (a, b) = (
                    self.lower(a, decls, names, dt, horizon)?,
                    self.lower(b, decls, names, dt, horizon)?,
                );
                let (na, nb) = (&self.nodes[a], &self.nodes[b]);
                let (lo, hi) = (na.lo.min(nb.lo), na.hi.min(nb.hi));
                self.push(NodeKind::And(a, b), lo, hi)
            }
            Formula::Or(a, b) => {
                let (a, b) = (
                    self.lower(a, decls, names, dt, horizon)?,
                    self.lower(b, decls, names, dt, horizon)?,
                );
                let (na, nb) = (&self.nodes[a], &self.nodes[b]);
                let (lo, hi) = (na.lo.max(nb.lo), na.hi.max(nb.hi));
                self.push(NodeKind::Or(a, b), lo, hi)
            }
            Formula::Always(i, g) => {
                let child = self.lower(g, decls, names, dt, horizon)?;
                let (lo, hi) = (self.nodes[child].lo, self.nodes[child].hi);
                self.push(
                    NodeKind::Always {
                        window: window(i),
                        child,
                    },
                    lo,
                    hi,
                )
            }
            Formula::Eventually(i, g) => {
                let child = self.lower(g, decls, names, dt, horizon)?;
                let (lo, hi) = (self.nodes[child].lo, self.nodes[child].hi);
                self.push(
                    NodeKind::Eventually {
                        window: window(i),
                        child,
                    },
                    lo,
                    hi,
                )
            }
            Formula::Until(i, a, b) => {
                let left = self.lower(a, decls, names, dt, horizon)?;
                let right = self.lower(b, decls, names, dt, horizon)?;
                let (nl, nr) = (&self.nodes[left], &self.nodes[right]);
                let (lo, hi) = (nl.lo.min(nr.lo), nl.hi.min(nr.hi));
                self.push(
                    NodeKind::Until {
                        window: window(i),
                        left,
                        right,
                    },
                    lo,
                    hi,
                )
            }
        })
    }

    fn reach_of(&self, idx: usize) -> usize {
        match &self.nodes[idx].kind {
            NodeKind::True | NodeKind::Atom { .. } => 0,
            NodeKind::And(a, b) | NodeKind::Or(a, b) => self.reach_of(*a).max(self.reach_of(*b)),
            NodeKind::Always { window, child } | NodeKind::Eventually { window, child } => {
                window.end.saturating_sub(1) + self.reach_of(*child)
            }
            NodeKind::Until {
                window,
                left,
                right,
            } => window.end.saturating_sub(1) + self.reach_of(*left).max(self.reach_of(*right)),
        }
    }

    /// Fails with `MissingBounds` unless every atom has finite robustness bounds.
    pub fn require_finite_bounds(&self) -> Result<()> {
        match &self.unbounded_atom {
            Some(label) => Err(Error::MissingBounds(label.clone())),
            None => Ok(()),
        }
    }

    /// Number of sample steps past an instant its value can depend on.
    pub fn reach(&self) -> usize {
        self.reach
    }

    /// Static `(r_min, r_max)` of the whole formula.
    pub fn bounds(&self) -> (S, S) {
        let n = &self.nodes[self.root];
        (n.lo, n.hi)
    }

    /// Smallest and largest atom bound.
    pub fn atom_extremes(&self) -> (S, S) {
        self.nodes
            .iter()
            .filter(|n| matches!(n.kind, NodeKind::Atom { .. }))
            .fold((S::infinity(), S::neg_infinity()), |(lo, hi), n| {
                (lo.min(n.lo), hi.max(n.hi))
            })
    }

    /// Restricts the root temporal operator's window to at most `max_offset` steps.
    pub(crate) fn clip_root(&mut self, max_offset: usize) {
        let root = self.root;
        if let NodeKind::Always { window, .. }
        | NodeKind::Eventually { window, .. }
        | NodeKind::Until { window, .. } = &mut self.nodes[root].kind
        {
            window.end = window.end.min(max_offset + 1).max(window.start);
        }
        self.reach = self.reach_of(root);
    }

    pub(crate) fn len(&self) -> usize {
        self.nodes.len()
    }
}
