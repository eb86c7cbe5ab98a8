use crate::scalar::Scalar;

use super::ast::{Formula, TimeInterval};

/// Minimum sampling window of `f` at current time `b`, reported as `[0, u]`.
///
/// Follows the recursion literally: atoms and `true` contribute nothing, Boolean nodes take the
/// union of their children, and a temporal node contributes its interval together with its
/// children's windows only once `b` is past the interval's upper end. Unbounded intervals are
/// clipped to `horizon` first. An empty union is reported as `[0, 0]`.
pub fn min_sampling_window<S: Scalar>(f: &Formula<S>, b: S, horizon: S) -> TimeInterval<S> {
    let u = union_upper(f, b, horizon).unwrap_or_else(S::zero);
    TimeInterval::new(S::zero(), Some(u)).unwrap_or_else(|_| {
        TimeInterval::new(S::zero(), None).expect("zero lower bound is always valid")
    })
}

/// Largest upper endpoint of the union, `None` for the empty set.
fn union_upper<S: Scalar>(f: &Formula<S>, b: S, horizon: S) -> Option<S> {
    let merge = |x: Option<S>, y: Option<S>| match (x, y) {
        (Some(x), Some(y)) => Some(x.max(y)),
        (x, None) => x,
        (None, y) => y,
    };
    match f {
        Formula::True | Formula::Atom(_) => None,
        Formula::Not(g) => union_upper(g, b, horizon),
        Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => {
            merge(union_upper(l, b, horizon), union_upper(r, b, horizon))
        }
        Formula::Always(i, g) | Formula::Eventually(i, g) => {
            let top = i.clipped_upper(horizon);
            if b > top {
                merge(Some(top), union_upper(g, b, horizon))
            } else {
                None
            }
        }
        Formula::Until(i, l, r) => {
            let top = i.clipped_upper(horizon);
            if b > top {
                let children = merge(union_upper(l, b, horizon), union_upper(r, b, horizon));
                merge(Some(top), children)
            } else {
                None
            }
        }
    }
}

/// Number of samples `ceil(u / dt) + 1` a window must hold to cover `[0, u]`.
pub fn aggregation_k<S: Scalar>(window_upper: S, dt: S) -> usize {
    let steps = (window_upper / dt - S::grid_eps()).ceil().max(S::zero());
    steps.to_usize().unwrap_or(usize::MAX - 1) + 1
}

/// How far into the future (in seconds) the value of `f` at an instant can depend.
pub fn horizon<S: Scalar>(f: &Formula<S>, episode_horizon: S) -> S {
    match f {
        Formula::True | Formula::Atom(_) => S::zero(),
        Formula::Not(g) => horizon(g, episode_horizon),
        Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => {
            horizon(l, episode_horizon).max(horizon(r, episode_horizon))
        }
        Formula::Always(i, g) | Formula::Eventually(i, g) => {
            i.clipped_upper(episode_horizon) + horizon(g, episode_horizon)
        }
        Formula::Until(i, l, r) => {
            i.clipped_upper(episode_horizon)
                + horizon(l, episode_horizon).max(horizon(r, episode_horizon))
        }
    }
}
