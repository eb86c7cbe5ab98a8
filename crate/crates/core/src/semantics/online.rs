use super::compiled::CompiledFormula;
use super::interval::RobustInterval;
use super::smooth::{Aggregator, Exact, LogSumExp};
use super::tables::tabulate;
use super::{CausationConfig, CausationMode, CausationResult};
use crate::error::{Error, Result};
use crate::formula::{Formula, VariableDeclarations};
use crate::scalar::Scalar;
use crate::trace::{offsets_for, time_to_index, PrefixView, SampledTrace, Signal};

/// Compiled formula plus the extent of the time domain, reusable across steps.
#[derive(Debug, Clone)]
pub struct OnlineEvaluator<S> {
    cf: CompiledFormula<S>,
    min_domain: usize,
}

impl<S: Scalar> OnlineEvaluator<S> {
    /// Evaluator over a domain reaching at least `horizon` seconds. Requires bounded atoms.
    pub fn new(
        f: &Formula<S>,
        decls: &VariableDeclarations<S>,
        names: &[String],
        dt: S,
        horizon: S,
    ) -> Result<Self> {
        let cf = CompiledFormula::new(f, decls, names, dt, horizon)?;
        cf.require_finite_bounds()?;
        Ok(Self {
            cf,
            min_domain: offsets_for(S::zero(), horizon, dt).end.max(1),
        })
    }

    pub fn from_compiled(cf: CompiledFormula<S>, min_domain: usize) -> Self {
        Self {
            cf,
            min_domain: min_domain.max(1),
        }
    }

    pub fn compiled(&self) -> &CompiledFormula<S> {
        &self.cf
    }

    pub fn domain_for(&self, observed: usize) -> usize {
        self.min_domain.max(observed)
    }

    fn check<G: Signal<S> + ?Sized>(&self, sig: &G, mu: usize) -> Result<usize> {
        if sig.is_empty() {
            return Err(Error::EmptyTrace);
        }
        let d = self.domain_for(sig.len());
        if mu >= d {
            return Err(Error::GridMismatch(format!(
                "instant {mu} lies past the domain end {d}"
            )));
        }
        Ok(d)
    }

    /// Robust interval at sample `mu`, every row of `sig` observed.
    pub fn interval<G: Signal<S> + ?Sized>(&self, sig: &G, mu: usize) -> Result<RobustInterval<S>> {
        self.interval_with(sig, mu, &Exact)
    }

    pub fn interval_with<G, A>(&self, sig: &G, mu: usize, agg: &A) -> Result<RobustInterval<S>>
    where
        G: Signal<S> + ?Sized,
        A: Aggregator<S>,
    {
        let d = self.check(sig, mu)?;
        Ok(tabulate(&self.cf, sig, sig.len(), d, mu, agg, false).root_interval())
    }

    /// Causation distance at `mu` relative to the newest row of `sig`.
    pub fn causation_with<G, A>(&self, sig: &G, mu: usize, agg: &A) -> Result<S>
    where
        G: Signal<S> + ?Sized,
        A: Aggregator<S>,
    {
        let d = self.check(sig, mu)?;
        let t = tabulate(&self.cf, sig, sig.len(), d, mu, agg, true);
        Ok(t.root_causation().expect("causation tabulated"))
    }

    pub fn causation<G: Signal<S> + ?Sized>(
        &self,
        sig: &G,
        mu: usize,
        mode: CausationMode<S>,
    ) -> Result<S> {
        match mode {
            CausationMode::Exact => self.causation_with(sig, mu, &Exact),
            CausationMode::Smooth { beta } => self.causation_with(sig, mu, &LogSumExp::new(beta)?),
        }
    }
}

/// Quantitative robustness `rho(phi, v, mu)` of a complete trace.
///
/// `horizon` clips unbounded intervals and defaults to the trace duration. Empty index sets
/// take the subformula's static bound, infinite when a variable is undeclared.
pub fn offline_robustness<S: Scalar>(
    trace: &SampledTrace<S>,
    f: &Formula<S>,
    decls: &VariableDeclarations<S>,
    mu: S,
    horizon: Option<S>,
) -> Result<S> {
    if trace.is_empty() {
        return Err(Error::EmptyTrace);
    }
    let idx = time_to_index(mu, trace.dt())?;
    let n = trace.len();
    if idx >= n {
        return Err(Error::GridMismatch(mu.to_string()));
    }
    let h = horizon.unwrap_or_else(|| trace.duration());
    let cf = CompiledFormula::new(f, decls, trace.names(), trace.dt(), h)?;
    Ok(tabulate(&cf, trace, n, n, idx, &Exact, false)
        .root_interval()
        .lower)
}

fn prefix_horizon<S: Scalar>(prefix: &PrefixView<'_, S>, horizon: Option<S>) -> S {
    horizon.unwrap_or_else(|| prefix.base().duration())
}

/// Interval containing the robustness of every completion of the prefix.
///
/// The domain runs to `horizon` (default: the duration of the underlying trace) or to the
/// newest observed instant, whichever is later.
pub fn online_robust_interval<S: Scalar>(
    prefix: &PrefixView<'_, S>,
    f: &Formula<S>,
    decls: &VariableDeclarations<S>,
    mu: S,
    horizon: Option<S>,
) -> Result<RobustInterval<S>> {
    let h = prefix_horizon(prefix, horizon);
    let ev = OnlineEvaluator::new(f, decls, prefix.base().names(), prefix.dt(), h)?;
    ev.interval(prefix, time_to_index(mu, prefix.dt())?)
}

/// Violation causation distance at the prefix end, exact or smoothed per `cfg.mode`.
pub fn violation_causation<S: Scalar>(
    prefix: &PrefixView<'_, S>,
    f: &Formula<S>,
    decls: &VariableDeclarations<S>,
    mu: S,
    cfg: &CausationConfig<S>,
) -> Result<CausationResult<S>> {
    let ev = OnlineEvaluator::new(
        f,
        decls,
        prefix.base().names(),
        prefix.dt(),
        cfg.episode_horizon,
    )?;
    let value = ev.causation(prefix, time_to_index(mu, prefix.dt())?, cfg.mode)?;
    Ok(CausationResult {
        value,
        config: *cfg,
    })
}

/// Causation with every min and max replaced by log-sum-exp at temperature `beta`.
pub fn smooth_violation_causation<S: Scalar>(
    prefix: &PrefixView<'_, S>,
    f: &Formula<S>,
    decls: &VariableDeclarations<S>,
    mu: S,
    beta: S,
    episode_horizon: S,
) -> Result<CausationResult<S>> {
    let cfg = CausationConfig::smooth(beta, episode_horizon)?;
    violation_causation(prefix, f, decls, mu, &cfg)
}
