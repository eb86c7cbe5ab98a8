//! Aggregate statistics over episode reports.

use serde::Serialize;

use crate::monitor::EpisodeReport;
use crate::scalar::Scalar;

/// Population mean and standard deviation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeanStd<S> {
    pub mean: S,
    pub std: S,
}

impl<S: Scalar> MeanStd<S> {
    pub fn of(xs: &[S]) -> Option<Self> {
        if xs.is_empty() {
            return None;
        }
        let n = S::from_usize(xs.len()).unwrap();
        let mean = xs.iter().fold(S::zero(), |a, &x| a + x) / n;
        let var = xs
            .iter()
            .fold(S::zero(), |a, &x| a + (x - mean) * (x - mean))
            / n;
        Some(Self {
            mean,
            std: var.sqrt(),
        })
    }
}

impl<S: Scalar> std::fmt::Display for MeanStd<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:.4} ± {:.4}", self.mean, self.std)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AggregateReport<S> {
    pub episodes: usize,
    pub full_sat: MeanStd<S>,
    pub safety_sat: MeanStd<S>,
    pub cost_return: MeanStd<S>,
}

impl<S: Scalar> AggregateReport<S> {
    /// `None` for an empty episode list.
    pub fn from_reports(reports: &[EpisodeReport<S>]) -> Option<Self> {
        let col =
            |f: &dyn Fn(&EpisodeReport<S>) -> S| -> Vec<S> { reports.iter().map(f).collect() };
        Some(Self {
            episodes: reports.len(),
            full_sat: MeanStd::of(&col(&|r| S::from_u8(r.full_sat).unwrap()))?,
            safety_sat: MeanStd::of(&col(&|r| S::from_u8(r.safety_sat).unwrap()))?,
            cost_return: MeanStd::of(&col(&|r| r.cost_return))?,
        })
    }
}
