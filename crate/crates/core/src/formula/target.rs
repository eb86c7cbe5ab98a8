use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::ast::{Formula, TimeInterval};
use super::window::{aggregation_k, min_sampling_window};

/// An always-rooted specification `G_I body`, the shape the reward is computed on.
///
/// Bounded liveness conjuncts at the root are nested under the always operator, so
/// `G[0,inf] safe && F[0,t] goal` becomes `G[0,inf] (F[0,t] goal && safe)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetSpec<S> {
    interval: TimeInterval<S>,
    body: Formula<S>,
}

fn flatten<S: Scalar>(f: &Formula<S>, out: &mut Vec<Formula<S>>) {
    match f {
        Formula::And(a, b) => {
            flatten(a, out);
            flatten(b, out);
        }
        other => out.push(other.clone()),
    }
}

fn has_unbounded<S: Scalar>(f: &Formula<S>) -> bool {
    match f {
        Formula::True | Formula::Atom(_) => false,
        Formula::Not(g) => has_unbounded(g),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            has_unbounded(a) || has_unbounded(b)
        }
        Formula::Always(i, g) | Formula::Eventually(i, g) => i.is_unbounded() || has_unbounded(g),
        Formula::Until(i, a, b) => i.is_unbounded() || has_unbounded(a) || has_unbounded(b),
    }
}

impl<S: Scalar> TargetSpec<S> {
    /// Normalizes an NNF formula into target form.
    pub fn new(f: &Formula<S>) -> Result<Self> {
        if let Formula::Always(i, body) = f {
            return Ok(Self {
                interval: *i,
                body: (**body).clone(),
            });
        }
        let mut conjuncts = Vec::new();
        flatten(f, &mut conjuncts);
        let mut interval: Option<TimeInterval<S>> = None;
        let mut liveness = Vec::new();
        let mut safety = Vec::new();
        for c in conjuncts {
            match c {
                Formula::Always(i, body) => {
                    if interval.is_some_and(|j| j != i) {
                        return Err(Error::NotTargetForm(
                            "always conjuncts with different intervals".into(),
                        ));
                    }
                    interval = Some(i);
                    flatten(&body, &mut safety);
                }
                ev @ Formula::Eventually(..) => liveness.push(ev),
                other => {
                    return Err(Error::NotTargetForm(format!(
                        "root conjunct `{other}` is neither an always nor an eventually formula"
                    )))
                }
            }
        }
        let interval = match interval {
            Some(i) => i,
            None => TimeInterval::unbounded(S::zero())?,
        };
        Ok(Self {
            interval,
            body: Formula::conjunction(liveness.into_iter().chain(safety)),
        })
    }

    pub fn interval(&self) -> TimeInterval<S> {
        self.interval
    }

    pub fn body(&self) -> &Formula<S> {
        &self.body
    }

    pub fn formula(&self) -> Formula<S> {
        Formula::always(self.interval, self.body.clone())
    }

    /// `G_I` over the body conjuncts that involve no temporal operator.
    pub fn safety_component(&self) -> Option<Formula<S>> {
        let mut parts = Vec::new();
        flatten(&self.body, &mut parts);
        let safe: Vec<_> = parts.into_iter().filter(|p| p.is_temporal_free()).collect();
        if safe.is_empty() {
            None
        } else {
            Some(Formula::always(self.interval, Formula::conjunction(safe)))
        }
    }

    /// Upper end `u` of the sampling window `[0, u]` the body needs in steady state.
    /// Infinite when a nested interval is unbounded and `horizon` is not finite.
    pub fn window_upper(&self, horizon: S) -> S {
        if !horizon.is_finite() && has_unbounded(&self.body) {
            return S::infinity();
        }
        let w = min_sampling_window(&self.body, S::infinity(), horizon);
        w.upper().unwrap_or_else(S::infinity)
    }

    /// Window length in samples, `None` if an unbounded nested interval has no horizon.
    pub fn window_k(&self, dt: S, horizon: S) -> Option<usize> {
        let u = self.window_upper(horizon);
        u.is_finite().then(|| aggregation_k(u, dt))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse_spec, to_nnf};

    fn target(src: &str) -> TargetSpec<f64> {
        let spec = parse_spec::<f64>(src).unwrap();
        TargetSpec::new(&to_nnf(&spec.formula).unwrap()).unwrap()
    }

    const CART_POLE: &str = "var x in [-2.4, 2.4]\nvar xdot in [-5, 5]\nvar theta in [-0.21, 0.21]\nvar thetadot in [-5, 5]\nspec G[0,inf] (F[0,10] (|xdot| < 0.1) && |x| < 0.5 && |theta| < 0.1)";

    #[test]
    fn cart_pole_window() {
        let t = target(CART_POLE);
        assert_eq!(t.window_upper(500.0), 10.0);
        assert_eq!(t.window_k(1.0, 500.0), Some(11));
    }

    #[test]
    fn safety_only_spec_needs_one_sample() {
        let t = target("var x in [-1, 1]\nspec G[0,inf] (x > 0)");
        assert_eq!(t.window_k(1.0, 100.0), Some(1));
    }

    #[test]
    fn root_conjunction_is_merged() {
        let t = target("var x in [-10, 10]\nspec F[0,10] (x >= 1) && G[0,inf] (x < 2)");
        assert!(t.interval().is_unbounded());
        assert!(matches!(t.body(), Formula::And(a, _) if matches!(**a, Formula::Eventually(..))));
        assert_eq!(t.window_k(1.0, 100.0), Some(11));
    }

    #[test]
    fn safety_component_drops_liveness() {
        let t = target(CART_POLE);
        let s = t.safety_component().unwrap();
        match s {
            Formula::Always(_, body) => assert!(body.is_temporal_free()),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn bare_atom_is_not_a_target() {
        let spec = parse_spec::<f64>("var x in [-1, 1]\nspec x > 0 && G[0,1] x > 0").unwrap();
        assert!(matches!(
            TargetSpec::new(&spec.formula),
            Err(Error::NotTargetForm(_))
        ));
    }

    #[test]
    fn nested_unbounded_needs_horizon() {
        let t = target("var x in [-1, 1]\nspec G[0,inf] (F[2,inf] (x > 0))");
        assert_eq!(t.window_k(1.0, f64::INFINITY), None);
        assert_eq!(t.window_k(1.0, 30.0), Some(31));
        // the root interval alone never needs a horizon
        let t = target("var x in [-1, 1]\nspec G[0,inf] (F[0,3] (x > 0))");
        assert_eq!(t.window_k(1.0, f64::INFINITY), Some(4));
    }
}
