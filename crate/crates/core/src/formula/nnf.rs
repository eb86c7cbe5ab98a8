use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::ast::Formula;

/// Rewrites `f` so that no `Not` or `Implies` node remains.
///
/// Negated atoms become atoms over the negated function. Negation cannot be pushed through
/// `Until` (its dual has no causation rule) nor through `true`, both are rejected.
pub fn to_nnf<S: Scalar>(f: &Formula<S>) -> Result<Formula<S>> {
    push(f, false)
}

fn push<S: Scalar>(f: &Formula<S>, negate: bool) -> Result<Formula<S>> {
    Ok(match (f, negate) {
        (Formula::True, false) => Formula::True,
        (Formula::True, true) => return Err(Error::NnfUnsupported("the constant `true`")),
        (Formula::Atom(p), false) => Formula::Atom(p.clone()),
        (Formula::Atom(p), true) => Formula::Atom(p.negated()),
        (Formula::Not(g), n) => push(g, !n)?,
        (Formula::And(a, b), false) => Formula::and(push(a, false)?, push(b, false)?),
        (Formula::And(a, b), true) => Formula::or(push(a, true)?, push(b, true)?),
        (Formula::Or(a, b), false) => Formula::or(push(a, false)?, push(b, false)?),
        (Formula::Or(a, b), true) => Formula::and(push(a, true)?, push(b, true)?),
        (Formula::Implies(a, b), false) => Formula::or(push(a, true)?, push(b, false)?),
        (Formula::Implies(a, b), true) => Formula::and(push(a, false)?, push(b, true)?),
        (Formula::Always(i, g), false) => Formula::always(*i, push(g, false)?),
        (Formula::Always(i, g), true) => Formula::eventually(*i, push(g, true)?),
        (Formula::Eventually(i, g), false) => Formula::eventually(*i, push(g, false)?),
        (Formula::Eventually(i, g), true) => Formula::always(*i, push(g, true)?),
        (Formula::Until(i, a, b), false) => Formula::until(*i, push(a, false)?, push(b, false)?),
        (Formula::Until(..), true) => return Err(Error::NnfUnsupported("an Until operator")),
    })
}

/// Fails with `NonNnfInput` if `f` still contains `Not` or `Implies`.
pub fn check_nnf<S: Scalar>(f: &Formula<S>) -> Result<()> {
    match f {
        Formula::True | Formula::Atom(_) => Ok(()),
        Formula::Not(_) => Err(Error::NonNnfInput("Not")),
        Formula::Implies(..) => Err(Error::NonNnfInput("Implies")),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Until(_, a, b) => {
            check_nnf(a)?;
            check_nnf(b)
        }
        Formula::Always(_, g) | Formula::Eventually(_, g) => check_nnf(g),
    }
}
