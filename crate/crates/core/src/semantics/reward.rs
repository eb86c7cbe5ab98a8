use super::compiled::CompiledFormula;
use super::online::OnlineEvaluator;
use super::{CausationConfig, CausationMode};
use crate::error::{Error, Result};
use crate::formula::{TargetSpec, VariableDeclarations};
use crate::scalar::Scalar;
use crate::trace::{Signal, WindowView};

/// Causation reward over a window of the last `k` states.
///
/// The root operator of the target is restricted to the window span. Nested operators keep
/// their full intervals and see the instants past the newest state as unobserved, so the
/// window value matches the full-prefix causation whenever the window covers the dependency.
#[derive(Debug, Clone)]
pub struct WindowReward<S> {
    eval: OnlineEvaluator<S>,
    k: usize,
    mode: CausationMode<S>,
}

impl<S: Scalar> WindowReward<S> {
    pub fn new(
        target: &TargetSpec<S>,
        decls: &VariableDeclarations<S>,
        names: &[String],
        dt: S,
        k: usize,
        cfg: &CausationConfig<S>,
    ) -> Result<Self> {
        if k == 0 {
            return Err(Error::WindowTooShort {
                required: 1,
                found: 0,
            });
        }
        let mut cf =
            CompiledFormula::new(&target.formula(), decls, names, dt, cfg.episode_horizon)?;
        cf.require_finite_bounds()?;
        cf.clip_root(k - 1);
        let domain = cf.reach() + 1;
        Ok(Self {
            eval: OnlineEvaluator::from_compiled(cf, domain.max(k)),
            k,
            mode: cfg.mode,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn mode(&self) -> CausationMode<S> {
        self.mode
    }

    /// Reward for a window whose rows are states `s_{t-k+1} .. s_t`.
    pub fn evaluate<G: Signal<S> + ?Sized>(&self, window: &G) -> Result<S> {
        if window.len() < self.k {
            return Err(Error::WindowTooShort {
                required: self.k,
                found: window.len(),
            });
        }
        self.eval.causation(&Last(window, self.k), 0, self.mode)
    }
}

/// The newest `k` rows of a longer signal.
struct Last<'a, G: ?Sized>(&'a G, usize);

impl<S, G: Signal<S> + ?Sized> Signal<S> for Last<'_, G> {
    fn len(&self) -> usize {
        self.1
    }

    fn row(&self, index: usize) -> &[S] {
        self.0.row(self.0.len() - self.1 + index)
    }
}

/// One-shot [`WindowReward`] evaluation with `k` taken from the window.
pub fn window_reward<S: Scalar>(
    window: &WindowView<S>,
    target: &TargetSpec<S>,
    decls: &VariableDeclarations<S>,
    names: &[String],
    cfg: &CausationConfig<S>,
) -> Result<S> {
    WindowReward::new(target, decls, names, window.dt(), window.k(), cfg)?.evaluate(window)
}
