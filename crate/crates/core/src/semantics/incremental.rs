//! Exact robust interval at instant 0, maintained as samples arrive.

use super::compiled::{CompiledFormula, NodeKind};
use super::interval::RobustInterval;
use super::smooth::Exact;
use super::tables::{span, tabulate};
use crate::scalar::Scalar;
use crate::trace::Signal;

/// Keeps every node's interval table between pushes. A new sample at `b` can only change a
/// node at instants within its reach before `b`, so only those are recomputed.
#[derive(Debug, Clone)]
pub struct IncrementalInterval<S> {
    cf: CompiledFormula<S>,
    domain: usize,
    observed: usize,
    range: Vec<(usize, usize)>,
    iv: Vec<Vec<RobustInterval<S>>>,
    /// Range-query trees over the child of each always/eventually node.
    trees: Vec<Option<SegTree<S>>>,
}

/// Iterative segment tree of intervals under elementwise min or max.
#[derive(Debug, Clone)]
struct SegTree<S> {
    n: usize,
    offset: usize,
    minimize: bool,
    data: Vec<RobustInterval<S>>,
}

impl<S: Scalar> SegTree<S> {
    fn new(offset: usize, values: &[RobustInterval<S>], minimize: bool) -> Self {
        let n = values.len();
        let id = Self::identity(minimize);
        let mut data = vec![id; 2 * n];
        data[n..].copy_from_slice(values);
        let mut t = Self {
            n,
            offset,
            minimize,
            data,
        };
        for i in (1..n).rev() {
            t.data[i] = t.op(t.data[2 * i], t.data[2 * i + 1]);
        }
        t
    }

    fn identity(minimize: bool) -> RobustInterval<S> {
        if minimize {
            RobustInterval::point(S::infinity())
        } else {
            RobustInterval::point(S::neg_infinity())
        }
    }

    #[inline]
    fn op(&self, a: RobustInterval<S>, b: RobustInterval<S>) -> RobustInterval<S> {
        if self.minimize {
            a.min(b)
        } else {
            a.max(b)
        }
    }

    fn set(&mut self, t: usize, v: RobustInterval<S>) {
        let mut i = t - self.offset + self.n;
        self.data[i] = v;
        while i > 1 {
            i /= 2;
            self.data[i] = self.op(self.data[2 * i], self.data[2 * i + 1]);
        }
    }

    /// Aggregate over instants `lo..=hi`.
    fn query(&self, lo: usize, hi: usize) -> RobustInterval<S> {
        let mut acc = Self::identity(self.minimize);
        let (mut l, mut r) = (lo - self.offset + self.n, hi - self.offset + self.n + 1);
        while l < r {
            if l & 1 == 1 {
                acc = self.op(acc, self.data[l]);
                l += 1;
            }
            if r & 1 == 1 {
                r -= 1;
                acc = self.op(acc, self.data[r]);
            }
            l /= 2;
            r /= 2;
        }
        acc
    }
}

impl<S: Scalar> IncrementalInterval<S> {
    /// Tracker over instants `0..domain`, nothing observed yet.
    pub fn new(cf: CompiledFormula<S>, domain: usize) -> Self {
        let domain = domain.max(1);
        let t = tabulate(&cf, &NoRows, 0, domain, 0, &Exact, false);
        let mut s = Self {
            cf,
            domain,
            observed: 0,
            range: t.range,
            iv: t.intervals,
            trees: Vec::new(),
        };
        s.build_trees();
        s
    }

    fn build_trees(&mut self) {
        self.trees = (0..self.cf.len())
            .map(|i| match &self.cf.nodes[i].kind {
                NodeKind::Always { child, .. } | NodeKind::Eventually { child, .. } => {
                    let minimize = matches!(self.cf.nodes[i].kind, NodeKind::Always { .. });
                    let (a, e) = self.range[*child];
                    (a < e).then(|| SegTree::new(a, &self.iv[*child], minimize))
                }
                _ => None,
            })
            .collect();
    }

    pub fn observed(&self) -> usize {
        self.observed
    }

    pub fn domain(&self) -> usize {
        self.domain
    }

    pub fn current(&self) -> RobustInterval<S> {
        self.iv[self.cf.root][0]
    }

    fn get(&self, node: usize, t: usize) -> RobustInterval<S> {
        self.iv[node][t - self.range[node].0]
    }

    /// Observes the newest row of `sig`, which must be exactly one row longer than last time.
    /// Past the initial domain end the tables are rebuilt from all of `sig`.
    pub fn push<G: Signal<S> + ?Sized>(&mut self, sig: &G) -> RobustInterval<S> {
        assert_eq!(sig.len(), self.observed + 1, "one new sample per push");
        let b = self.observed;
        let row = sig.row(b);
        self.observed += 1;
        if self.observed > self.domain {
            self.domain = self.observed;
            let t = tabulate(&self.cf, sig, self.observed, self.domain, 0, &Exact, false);
            self.range = t.range;
            self.iv = t.intervals;
            self.build_trees();
            return self.current();
        }
        let n = self.cf.len();
        let mut dirty: Vec<Option<(usize, usize)>> = vec![None; n];
        for i in 0..n {
            let (a, e) = self.range[i];
            if a >= e {
                continue;
            }
            let clip = |lo: isize, hi: isize| -> Option<(usize, usize)> {
                let lo = lo.max(a as isize);
                let hi = hi.min(e as isize - 1);
                (lo <= hi).then_some((lo as usize, hi as usize))
            };
            let union = |x: Option<(usize, usize)>, y: Option<(usize, usize)>| match (x, y) {
                (Some(x), Some(y)) => Some((x.0.min(y.0), x.1.max(y.1))),
                (x, None) => x,
                (None, y) => y,
            };
            let back = |w: &std::ops::Range<usize>, d: Option<(usize, usize)>, upto_start: bool| {
                let (c0, c1) = d?;
                if w.is_empty() {
                    return None;
                }
                let lo = c0 as isize - (w.end as isize - 1);
                let hi = if upto_start {
                    c1 as isize - w.start as isize
                } else {
                    c1 as isize
                };
                clip(lo, hi)
            };
            let affected = match &self.cf.nodes[i].kind {
                NodeKind::True => None,
                NodeKind::Atom { expr } => {
                    if b >= a && b < e {
                        self.iv[i][b - a] = RobustInterval::point(expr.eval(row));
                        dirty[i] = Some((b, b));
                    }
                    continue;
                }
                NodeKind::And(x, y) | NodeKind::Or(x, y) => {
                    union(dirty[*x], dirty[*y]).and_then(|(l, h)| clip(l as isize, h as isize))
                }
                NodeKind::Always { window, child } | NodeKind::Eventually { window, child } => {
                    if let (Some(tree), Some((c0, c1))) = (self.trees[i].as_mut(), dirty[*child]) {
                        let (ca, _) = self.range[*child];
                        for t in c0..=c1 {
                            tree.set(t, self.iv[*child][t - ca]);
                        }
                    }
                    back(window, dirty[*child], true)
                }
                NodeKind::Until {
                    window,
                    left,
                    right,
                } => union(
                    back(window, dirty[*left], false),
                    back(window, dirty[*right], true),
                ),
            };
            if let Some((lo, hi)) = affected {
                for mu in lo..=hi {
                    let v = self.recompute(i, mu);
                    self.iv[i][mu - a] = v;
                }
                dirty[i] = Some((lo, hi));
            }
        }
        self.current()
    }

    fn recompute(&self, i: usize, mu: usize) -> RobustInterval<S> {
        let node = &self.cf.nodes[i];
        match &node.kind {
            NodeKind::True | NodeKind::Atom { .. } => unreachable!("leaves are set directly"),
            NodeKind::And(x, y) => self.get(*x, mu).min(self.get(*y, mu)),
            NodeKind::Or(x, y) => self.get(*x, mu).max(self.get(*y, mu)),
            NodeKind::Always { window, .. } | NodeKind::Eventually { window, .. } => {
                let empty = if matches!(node.kind, NodeKind::Always { .. }) {
                    node.hi
                } else {
                    node.lo
                };
                match (span(mu, window, self.domain), &self.trees[i]) {
                    (Some((lo, hi)), Some(tree)) => tree.query(lo, hi),
                    _ => RobustInterval::point(empty),
                }
            }
            NodeKind::Until {
                window,
                left,
                right,
            } => {
                let Some((lo, hi)) = span(mu, window, self.domain) else {
                    return RobustInterval::point(node.lo);
                };
                let mut inner = RobustInterval::point(S::infinity());
                let mut any = false;
                for t in mu..lo {
                    inner = inner.min(self.get(*left, t));
                    any = true;
                }
                let empty = RobustInterval::point(self.cf.nodes[*left].hi);
                let mut out: Option<RobustInterval<S>> = None;
                for t in lo..=hi {
                    let term = self.get(*right, t).min(if any { inner } else { empty });
                    out = Some(out.map_or(term, |o| o.max(term)));
                    inner = inner.min(self.get(*left, t));
                    any = true;
                }
                out.unwrap()
            }
        }
    }
}

/// Signal with no rows, for the all-unobserved initial tables.
struct NoRows;

impl<S> Signal<S> for NoRows {
    fn len(&self) -> usize {
        0
    }

    fn row(&self, _: usize) -> &[S] {
        unreachable!("no rows are observed")
    }
}
