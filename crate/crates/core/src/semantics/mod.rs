//! Offline robustness, online robust intervals and violation causation.

mod compiled;
mod incremental;
mod interval;
mod online;
mod reward;
mod smooth;
mod tables;

pub use compiled::CompiledFormula;
pub use incremental::IncrementalInterval;
pub use interval::RobustInterval;
pub use online::{
    offline_robustness, online_robust_interval, smooth_violation_causation, violation_causation,
    OnlineEvaluator,
};
pub use reward::{window_reward, WindowReward};
pub use smooth::{smooth_max, smooth_min, Aggregator, Exact, Fold, LogSumExp};

use serde::Serialize;

use crate::error::Result;
use crate::scalar::Scalar;

/// Temperature used when none is given.
pub const DEFAULT_BETA: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum CausationMode<S> {
    Exact,
    Smooth { beta: S },
}

impl<S: Scalar> CausationMode<S> {
    pub fn smooth(beta: S) -> Result<Self> {
        smooth::check_beta(beta)?;
        Ok(Self::Smooth { beta })
    }

    pub fn beta(&self) -> Option<S> {
        match self {
            Self::Exact => None,
            Self::Smooth { beta } => Some(*beta),
        }
    }
}

/// Settings for a causation evaluation. `episode_horizon` (seconds) clips unbounded intervals
/// and sets how far ahead unobserved instants are considered.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CausationConfig<S> {
    pub mode: CausationMode<S>,
    pub episode_horizon: S,
}

impl<S: Scalar> CausationConfig<S> {
    pub fn exact(episode_horizon: S) -> Self {
        Self {
            mode: CausationMode::Exact,
            episode_horizon,
        }
    }

    pub fn smooth(beta: S, episode_horizon: S) -> Result<Self> {
        Ok(Self {
            mode: CausationMode::smooth(beta)?,
            episode_horizon,
        })
    }
}

/// A causation value with the settings that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CausationResult<S> {
    pub value: S,
    pub config: CausationConfig<S>,
}

impl<S: Scalar> CausationResult<S> {
    pub fn is_smooth(&self) -> bool {
        matches!(self.config.mode, CausationMode::Smooth { .. })
    }
}
