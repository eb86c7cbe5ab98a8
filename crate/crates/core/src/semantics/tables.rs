//! Bottom-up tabulation of robust intervals and causation values per node.

use std::collections::VecDeque;
use std::ops::Range;

use super::compiled::{CompiledFormula, NodeKind};
use super::interval::RobustInterval;
use super::smooth::Aggregator;
use crate::scalar::Scalar;
use crate::trace::Signal;

pub(crate) struct Tables<S> {
    pub range: Vec<(usize, usize)>,
    pub intervals: Vec<Vec<RobustInterval<S>>>,
    causation: Vec<Vec<S>>,
    root: usize,
}

impl<S: Scalar> Tables<S> {
    pub fn root_interval(&self) -> RobustInterval<S> {
        self.intervals[self.root][0]
    }

    pub fn root_causation(&self) -> Option<S> {
        self.causation.get(self.root).map(|c| c[0])
    }
}

#[inline]
fn at<T: Copy>(tab: &[Vec<T>], range: &[(usize, usize)], node: usize, t: usize) -> T {
    tab[node][t - range[node].0]
}

/// Instants `[lo, hi]` covered by `window` from `mu`, clipped to the domain.
#[inline]
pub(crate) fn span(mu: usize, w: &Range<usize>, domain: usize) -> Option<(usize, usize)> {
    if w.is_empty() {
        return None;
    }
    let lo = mu + w.start;
    let hi = (mu + w.end - 1).min(domain - 1);
    (lo <= hi).then_some((lo, hi))
}

/// Aggregate of `get` over the window of every instant in `a..b`.
fn window_agg<S: Scalar, A: Aggregator<S>>(
    agg: &A,
    minimize: bool,
    (a, b): (usize, usize),
    w: &Range<usize>,
    domain: usize,
    get: impl Fn(usize) -> S,
) -> Vec<Option<S>> {
    if !agg.is_exact() {
        return (a..b)
            .map(|mu| {
                let (lo, hi) = span(mu, w, domain)?;
                let mut f = agg.fold(minimize);
                (lo..=hi).for_each(|t| f.push(get(t)));
                agg.finish(&f)
            })
            .collect();
    }
    // monotone deque, both window ends only move forward
    let dominates = |x: S, y: S| if minimize { x <= y } else { x >= y };
    let mut dq: VecDeque<(usize, S)> = VecDeque::new();
    let mut next = 0;
    (a..b)
        .map(|mu| {
            let (lo, hi) = span(mu, w, domain)?;
            next = next.max(lo);
            while next <= hi {
                let v = get(next);
                while dq.back().is_some_and(|&(_, u)| dominates(v, u)) {
                    dq.pop_back();
                }
                dq.push_back((next, v));
                next += 1;
            }
            while dq.front().is_some_and(|&(j, _)| j < lo) {
                dq.pop_front();
            }
            dq.front().map(|&(_, v)| v)
        })
        .collect()
}

/// Evaluates `cf` at instant `mu` given the first `observed` rows of `sig`.
///
/// Instants in `observed..domain` are unobserved: atoms there take their whole bound range.
/// Causation is relative to the newest observed instant.
pub(crate) fn tabulate<S, A, G>(
    cf: &CompiledFormula<S>,
    sig: &G,
    observed: usize,
    domain: usize,
    mu: usize,
    agg: &A,
    with_causation: bool,
) -> Tables<S>
where
    S: Scalar,
    A: Aggregator<S>,
    G: Signal<S> + ?Sized,
{
    debug_assert!(observed <= domain && mu < domain && (observed >= 1 || !with_causation));
    let n = cf.len();
    let mut range = vec![(0usize, 0usize); n];
    range[cf.root] = (mu, mu + 1);
    for i in (0..n).rev() {
        let (a, b) = range[i];
        let end = |w: &Range<usize>| {
            if a >= b || w.is_empty() {
                0
            } else {
                (b - 1 + w.end - 1).min(domain - 1) + 1
            }
        };
        let clip = |s: usize, e: usize| if s < e { (s, e) } else { (0, 0) };
        match &cf.nodes[i].kind {
            NodeKind::True | NodeKind::Atom { .. } => {}
            NodeKind::And(x, y) | NodeKind::Or(x, y) => {
                range[*x] = (a, b);
                range[*y] = (a, b);
            }
            NodeKind::Always { window, child } | NodeKind::Eventually { window, child } => {
                range[*child] = clip(a + window.start, end(window));
            }
            NodeKind::Until {
                window,
                left,
                right,
            } => {
                let e = end(window);
                range[*left] = clip(a, e);
                range[*right] = clip(a + window.start, e);
            }
        }
    }

    let mut iv: Vec<Vec<RobustInterval<S>>> = Vec::with_capacity(n);
    for i in 0..n {
        let (a, b) = range[i];
        let node = &cf.nodes[i];
        let get = |j: usize, t: usize| at(&iv, &range, j, t);
        let col: Vec<RobustInterval<S>> = match &node.kind {
            NodeKind::True => vec![RobustInterval::point(S::infinity()); b - a],
            NodeKind::Atom { expr, .. } => (a..b)
                .map(|t| {
                    if t < observed {
                        RobustInterval::point(expr.eval(sig.row(t)))
                    } else {
                        RobustInterval::new(node.lo, node.hi)
                    }
                })
                .collect(),
            NodeKind::And(x, y) => (a..b)
                .map(|t| {
                    let (p, q) = (get(*x, t), get(*y, t));
                    RobustInterval::new(agg.min2(p.lower, q.lower), agg.min2(p.upper, q.upper))
                })
                .collect(),
            NodeKind::Or(x, y) => (a..b)
                .map(|t| {
                    let (p, q) = (get(*x, t), get(*y, t));
                    RobustInterval::new(agg.max2(p.lower, q.lower), agg.max2(p.upper, q.upper))
                })
                .collect(),
            NodeKind::Always { window, child } | NodeKind::Eventually { window, child } => {
                let minimize = matches!(node.kind, NodeKind::Always { .. });
                let empty = if minimize { node.hi } else { node.lo };
                let lo = window_agg(agg, minimize, (a, b), window, domain, |t| {
                    get(*child, t).lower
                });
                let hi = window_agg(agg, minimize, (a, b), window, domain, |t| {
                    get(*child, t).upper
                });
                lo.into_iter()
                    .zip(hi)
                    .map(|(l, h)| match (l, h) {
                        (Some(l), Some(h)) => RobustInterval::new(l, h),
                        _ => RobustInterval::point(empty),
                    })
                    .collect()
            }
            NodeKind::Until {
                window,
                left,
                right,
            } => {
                let inner_empty = cf.nodes[*left].hi;
                (a..b)
                    .map(|mu| {
                        let Some((lo, hi)) = span(mu, window, domain) else {
                            return RobustInterval::point(node.lo);
                        };
                        let (mut in_lo, mut in_hi) = (agg.fold(true), agg.fold(true));
                        let (mut out_lo, mut out_hi) = (agg.fold(false), agg.fold(false));
                        for t in mu..lo {
                            let l = get(*left, t);
                            in_lo.push(l.lower);
                            in_hi.push(l.upper);
                        }
                        for t in lo..=hi {
                            let r = get(*right, t);
                            let il = agg.finish(&in_lo).unwrap_or(inner_empty);
                            let ih = agg.finish(&in_hi).unwrap_or(inner_empty);
                            out_lo.push(agg.min2(il, r.lower));
                            out_hi.push(agg.min2(ih, r.upper));
                            let l = get(*left, t);
                            in_lo.push(l.lower);
                            in_hi.push(l.upper);
                        }
                        RobustInterval::new(
                            agg.finish(&out_lo).unwrap_or(node.lo),
                            agg.finish(&out_hi).unwrap_or(node.lo),
                        )
                    })
                    .collect()
            }
        };
        iv.push(col);
    }

    let mut cau: Vec<Vec<S>> = Vec::new();
    if with_causation {
        let cur = observed - 1;
        cau.reserve(n);
        for i in 0..n {
            let (a, b) = range[i];
            let node = &cf.nodes[i];
            let c = |j: usize, t: usize| at(&cau, &range, j, t);
            let u = |j: usize, t: usize| at(&iv, &range, j, t).upper;
            let col: Vec<S> = match &node.kind {
                NodeKind::True => vec![S::infinity(); b - a],
                NodeKind::Atom { expr, .. } => (a..b)
                    .map(|t| {
                        if t == cur {
                            expr.eval(sig.row(t))
                        } else {
                            node.hi
                        }
                    })
                    .collect(),
                NodeKind::And(x, y) => (a..b).map(|t| agg.min2(c(*x, t), c(*y, t))).collect(),
                NodeKind::Or(x, y) => (a..b)
                    .map(|t| agg.min2(agg.max2(c(*x, t), u(*y, t)), agg.max2(u(*x, t), c(*y, t))))
                    .collect(),
                NodeKind::Always { window, child } => {
                    window_agg(agg, true, (a, b), window, domain, |t| c(*child, t))
                        .into_iter()
                        .map(|v| v.unwrap_or(cf.nodes[*child].hi))
                        .collect()
                }
                NodeKind::Eventually { window, child } => {
                    let empty = cf.nodes[*child].hi;
                    if agg.is_exact() {
                        window_agg(agg, true, (a, b), window, domain, |t| c(*child, t))
                            .into_iter()
                            .zip(a..b)
                            .map(|(v, mu)| v.map_or(empty, |v| v.max(u(i, mu))))
                            .collect()
                    } else {
                        (a..b)
                            .map(|mu| {
                                let Some((lo, hi)) = span(mu, window, domain) else {
                                    return empty;
                                };
                                let own = u(i, mu);
                                let mut f = agg.fold(true);
                                (lo..=hi).for_each(|t| f.push(agg.max2(c(*child, t), own)));
                                agg.finish(&f).unwrap_or(empty)
                            })
                            .collect()
                    }
                }
                NodeKind::Until {
                    window,
                    left,
                    right,
                } => {
                    let inner_empty = cf.nodes[*left].hi;
                    (a..b)
                        .map(|mu| {
                            let Some((lo, hi)) = span(mu, window, domain) else {
                                return node.hi;
                            };
                            let own = u(i, mu);
                            let mut inner = agg.fold(true);
                            let mut outer = agg.fold(true);
                            (mu..lo).for_each(|t| inner.push(c(*left, t)));
                            for t in lo..=hi {
                                let iv1 = agg.finish(&inner).unwrap_or(inner_empty);
                                outer.push(agg.max2(agg.min2(iv1, c(*right, t)), own));
                                inner.push(c(*left, t));
                            }
                            agg.finish(&outer).unwrap_or(node.hi)
                        })
                        .collect()
                }
            };
            cau.push(col);
        }
    }

    Tables {
        range,
        intervals: iv,
        causation: cau,
        root: cf.root,
    }
}
