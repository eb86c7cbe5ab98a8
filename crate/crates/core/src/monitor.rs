//! Per-step monitoring of a trace against a target specification, and episode indicators.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::formula::{Formula, TargetSpec, VariableDeclarations};
use crate::scalar::Scalar;
use crate::semantics::{
    offline_robustness, CausationConfig, CausationMode, IncrementalInterval, LogSumExp,
    OnlineEvaluator, RobustInterval, WindowReward,
};
use crate::trace::{SampledTrace, WindowView};

/// Which per-step value is reported as the reward.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RewardMode {
    /// Violation causation distance over the window.
    #[serde(rename = "CAU")]
    Cau,
    /// Upper end of the online robust interval.
    #[serde(rename = "CLS")]
    Cls,
    /// Log-sum-exp smoothed upper end.
    #[serde(rename = "LSE")]
    Lse,
}

impl std::str::FromStr for RewardMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cau" => Ok(Self::Cau),
            "cls" => Ok(Self::Cls),
            "lse" => Ok(Self::Lse),
            _ => Err(Error::Syntax {
                line: 1,
                col: 1,
                msg: format!("unknown reward mode `{s}`"),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonitorConfig<S> {
    pub dt: S,
    pub reward: RewardMode,
    pub smooth: bool,
    pub beta: S,
    /// Window length; computed from the spec when absent.
    pub k: Option<usize>,
    /// Episode length in seconds, clips unbounded intervals.
    pub horizon: S,
}

impl<S: Scalar> MonitorConfig<S> {
    pub fn new(dt: S, horizon: S) -> Self {
        Self {
            dt,
            reward: RewardMode::Cau,
            smooth: false,
            beta: S::lit(crate::semantics::DEFAULT_BETA),
            k: None,
            horizon,
        }
    }

    fn causation_mode(&self) -> Result<CausationMode<S>> {
        if self.smooth {
            CausationMode::smooth(self.beta)
        } else {
            Ok(CausationMode::Exact)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StepRecord<S> {
    pub step: usize,
    pub time: S,
    pub causation: S,
    pub robust_lower: S,
    pub robust_upper: S,
    pub reward: S,
    pub reward_mode: RewardMode,
    pub smooth: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<S>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EpisodeReport<S> {
    pub full_sat: u8,
    pub safety_sat: u8,
    pub cost_return: S,
    pub episode_length: usize,
}

/// Causation source: windowed on a target spec, or the whole prefix when the spec is not one.
#[derive(Debug, Clone)]
enum Causation<S> {
    Window(WindowReward<S>),
    Prefix,
}

/// Evaluates one step at a time. Feed rows with [`StreamMonitor::push`].
#[derive(Debug, Clone)]
pub struct StreamMonitor<S> {
    cfg: MonitorConfig<S>,
    mode: CausationMode<S>,
    full: OnlineEvaluator<S>,
    tracker: IncrementalInterval<S>,
    causation: Causation<S>,
    window: WindowView<S>,
    trace: SampledTrace<S>,
}

/// Window length the spec needs, `None` when it is not in target form.
pub fn required_k<S: Scalar>(f: &Formula<S>, dt: S, horizon: S) -> Result<Option<usize>> {
    match TargetSpec::new(f) {
        Ok(t) => t
            .window_k(dt, horizon)
            .map(Some)
            .ok_or(Error::UnboundedWithoutHorizon),
        Err(Error::NotTargetForm(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

impl<S: Scalar> StreamMonitor<S> {
    /// `f` must be in NNF; `names` is the column order of incoming rows.
    pub fn new(
        f: &Formula<S>,
        decls: &VariableDeclarations<S>,
        names: &[String],
        cfg: MonitorConfig<S>,
    ) -> Result<Self> {
        let mode = cfg.causation_mode()?;
        let ccfg = CausationConfig {
            mode,
            episode_horizon: cfg.horizon,
        };
        let full = OnlineEvaluator::new(f, decls, names, cfg.dt, cfg.horizon)?;
        let (causation, k) = match TargetSpec::new(f) {
            Ok(target) => {
                let need = target
                    .window_k(cfg.dt, cfg.horizon)
                    .ok_or(Error::UnboundedWithoutHorizon)?;
                let k = cfg.k.unwrap_or(need);
                if k < need {
                    return Err(Error::WindowTooShort {
                        required: need,
                        found: k,
                    });
                }
                let r = WindowReward::new(&target, decls, names, cfg.dt, k, &ccfg)?;
                (Causation::Window(r), k)
            }
            Err(Error::NotTargetForm(_)) => (Causation::Prefix, cfg.k.unwrap_or(1)),
            Err(e) => return Err(e),
        };
        let tracker = IncrementalInterval::new(full.compiled().clone(), full.domain_for(1));
        Ok(Self {
            cfg,
            mode,
            tracker,
            full,
            causation,
            window: WindowView::new(k, cfg.dt),
            trace: SampledTrace::empty(cfg.dt, names.to_vec())?,
        })
    }

    pub fn k(&self) -> usize {
        self.window.k()
    }

    pub fn trace(&self) -> &SampledTrace<S> {
        &self.trace
    }

    pub fn into_trace(self) -> SampledTrace<S> {
        self.trace
    }

    pub fn push(&mut self, row: Vec<S>) -> Result<StepRecord<S>> {
        self.trace.push(row.clone())?;
        self.window.push(row)?;
        let step = self.trace.len() - 1;
        let causation = match &self.causation {
            Causation::Window(r) => r.evaluate(&self.window)?,
            Causation::Prefix => self.full.causation(&self.trace, 0, self.mode)?,
        };
        let ri = self.tracker.push(&self.trace);
        step_record(&self.cfg, &self.full, &self.trace, step, causation, ri)
    }
}

fn step_record<S: Scalar>(
    cfg: &MonitorConfig<S>,
    full: &OnlineEvaluator<S>,
    prefix: &impl crate::trace::Signal<S>,
    step: usize,
    causation: S,
    ri: RobustInterval<S>,
) -> Result<StepRecord<S>> {
    let reward = match cfg.reward {
        RewardMode::Cau => causation,
        RewardMode::Cls => ri.upper,
        RewardMode::Lse => {
            full.interval_with(prefix, 0, &LogSumExp::new(cfg.beta)?)?
                .upper
        }
    };
    Ok(StepRecord {
        step,
        time: S::from_usize(step).unwrap() * cfg.dt,
        causation,
        robust_lower: ri.lower,
        robust_upper: ri.upper,
        reward,
        reward_mode: cfg.reward,
        smooth: cfg.smooth,
        beta: cfg.smooth.then_some(cfg.beta),
    })
}

/// Batch evaluation of every step of a complete trace, each from its own prefix and window.
pub fn monitor_offline<S: Scalar>(
    trace: &SampledTrace<S>,
    f: &Formula<S>,
    decls: &VariableDeclarations<S>,
    cfg: MonitorConfig<S>,
) -> Result<Vec<StepRecord<S>>> {
    if trace.is_empty() {
        return Err(Error::EmptyTrace);
    }
    // the stream monitor validates k and builds the evaluators
    let proto = StreamMonitor::new(f, decls, trace.names(), cfg)?;
    let k = proto.k();
    (0..trace.len())
        .map(|b| {
            let prefix = trace.prefix(b)?;
            let causation = match &proto.causation {
                Causation::Window(r) => {
                    r.evaluate(&WindowView::from_samples(prefix.last_k(k), b, cfg.dt)?)?
                }
                Causation::Prefix => proto.full.causation(&prefix, 0, proto.mode)?,
            };
            let ri = proto.full.interval(&prefix, 0)?;
            step_record(&cfg, &proto.full, &prefix, b, causation, ri)
        })
        .collect()
}

/// The instantaneous part of a safety spec: its body when always-rooted, itself otherwise.
pub fn instantaneous<S: Scalar>(safety: &Formula<S>) -> &Formula<S> {
    match safety {
        Formula::Always(_, body) => body,
        other => other,
    }
}

/// Full-SAT, Safety-SAT and cost return for one complete episode.
///
/// `safety` defaults to the temporal-free part of the target, or to `f` itself. A step costs
/// `cost` when the instantaneous safety formula is negative there.
pub fn episode_report<S: Scalar>(
    trace: &SampledTrace<S>,
    f: &Formula<S>,
    safety: Option<&Formula<S>>,
    decls: &VariableDeclarations<S>,
    cost: S,
    horizon: Option<S>,
) -> Result<EpisodeReport<S>> {
    if trace.is_empty() {
        return Err(Error::EmptyTrace);
    }
    let derived;
    let safety = match safety {
        Some(s) => s,
        None => {
            derived = TargetSpec::new(f).ok().and_then(|t| t.safety_component());
            derived.as_ref().unwrap_or(f)
        }
    };
    let sat = |g: &Formula<S>| -> Result<u8> {
        Ok(u8::from(
            offline_robustness(trace, g, decls, S::zero(), horizon)? >= S::zero(),
        ))
    };
    let inst = instantaneous(safety);
    let mut cost_return = S::zero();
    for t in 0..trace.len() {
        if offline_robustness(trace, inst, decls, trace.time_of(t), horizon)? < S::zero() {
            cost_return = cost_return + cost;
        }
    }
    Ok(EpisodeReport {
        full_sat: sat(f)?,
        safety_sat: sat(safety)?,
        cost_return,
        episode_length: trace.len(),
    })
}
