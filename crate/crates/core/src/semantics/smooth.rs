//! Aggregation strategies: exact min/max or shifted log-sum-exp.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Streaming min or max accumulator.
///
/// The log-sum-exp variant keeps a running maximum `m` and `s = sum exp(beta (x - m))`, so
/// infinite inputs and large spreads never overflow.
#[derive(Debug, Clone, Copy)]
pub struct Fold<S> {
    beta: Option<S>,
    minimize: bool,
    m: S,
    s: S,
    n: usize,
}

impl<S: Scalar> Fold<S> {
    pub fn new(beta: Option<S>, minimize: bool) -> Self {
        Self {
            beta,
            minimize,
            m: S::neg_infinity(),
            s: S::zero(),
            n: 0,
        }
    }

    pub fn push(&mut self, x: S) {
        let x = if self.minimize { -x } else { x };
        self.n += 1;
        let Some(beta) = self.beta else {
            self.m = self.m.max(x);
            return;
        };
        if self.n == 1 {
            self.m = x;
            self.s = S::one();
        } else if x == self.m {
            self.s = self.s + S::one();
        } else if x > self.m {
            self.s = self.s * (beta * (self.m - x)).exp() + S::one();
            self.m = x;
        } else {
            self.s = self.s + (beta * (x - self.m)).exp();
        }
    }

    pub fn count(&self) -> usize {
        self.n
    }

    /// Current aggregate, `None` before the first push.
    pub fn value(&self) -> Option<S> {
        if self.n == 0 {
            return None;
        }
        let v = match self.beta {
            None => self.m,
            Some(beta) => self.m + self.s.ln() / beta,
        };
        Some(if self.minimize { -v } else { v })
    }
}

/// How min and max are taken by the evaluators.
pub trait Aggregator<S: Scalar> {
    /// `None` for exact aggregation, otherwise the log-sum-exp temperature.
    fn beta(&self) -> Option<S>;

    /// Hook called whenever a fold is read. Instrumented aggregators count here.
    fn finish(&self, fold: &Fold<S>) -> Option<S> {
        fold.value()
    }

    fn fold(&self, minimize: bool) -> Fold<S> {
        Fold::new(self.beta(), minimize)
    }

    fn is_exact(&self) -> bool {
        self.beta().is_none()
    }

    fn min_of(&self, xs: impl IntoIterator<Item = S>) -> Option<S>
    where
        Self: Sized,
    {
        let mut f = self.fold(true);
        xs.into_iter().for_each(|x| f.push(x));
        self.finish(&f)
    }

    fn max_of(&self, xs: impl IntoIterator<Item = S>) -> Option<S>
    where
        Self: Sized,
    {
        let mut f = self.fold(false);
        xs.into_iter().for_each(|x| f.push(x));
        self.finish(&f)
    }

    fn min2(&self, a: S, b: S) -> S
    where
        Self: Sized,
    {
        match self.beta() {
            None => a.min(b),
            Some(_) => self.min_of([a, b]).unwrap_or(a),
        }
    }

    fn max2(&self, a: S, b: S) -> S
    where
        Self: Sized,
    {
        match self.beta() {
            None => a.max(b),
            Some(_) => self.max_of([a, b]).unwrap_or(a),
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Exact;

impl<S: Scalar> Aggregator<S> for Exact {
    fn beta(&self) -> Option<S> {
        None
    }
}

#[derive(Debug, Clone, Copy)]
pub struct LogSumExp<S> {
    beta: S,
}

impl<S: Scalar> LogSumExp<S> {
    pub fn new(beta: S) -> Result<Self> {
        check_beta(beta)?;
        Ok(Self { beta })
    }
}

impl<S: Scalar> Aggregator<S> for LogSumExp<S> {
    fn beta(&self) -> Option<S> {
        Some(self.beta)
    }
}

pub(crate) fn check_beta<S: Scalar>(beta: S) -> Result<()> {
    if beta > S::zero() && beta.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidBeta(beta.to_string()))
    }
}

/// `(1/beta) ln sum exp(beta x_i)`, computed with the maximum factored out.
pub fn smooth_max<S: Scalar>(xs: &[S], beta: S) -> Result<S> {
    LogSumExp::new(beta)?
        .max_of(xs.iter().copied())
        .ok_or(Error::EmptyInput)
}

/// `-(1/beta) ln sum exp(-beta x_i)`.
pub fn smooth_min<S: Scalar>(xs: &[S], beta: S) -> Result<S> {
    LogSumExp::new(beta)?
        .min_of(xs.iter().copied())
        .ok_or(Error::EmptyInput)
}
