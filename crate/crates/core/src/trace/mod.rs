//! Uniformly sampled signals, prefix views and rolling windows.

mod csv_io;
mod window;

use std::ops::Range;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub use csv_io::{load_csv, read_csv, write_csv, TraceReader};
pub use window::{project_original, TauWindow, WindowView};

/// Row access shared by traces, prefixes and windows.
pub trait Signal<S> {
    fn len(&self) -> usize;
    fn row(&self, index: usize) -> &[S];

    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Multi-variable signal sampled every `dt` seconds.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledTrace<S> {
    dt: S,
    names: Vec<String>,
    samples: Vec<Vec<S>>,
}

impl<S: Scalar> SampledTrace<S> {
    pub fn new(dt: S, names: Vec<String>, samples: Vec<Vec<S>>) -> Result<Self> {
        let mut t = Self::empty(dt, names)?;
        for row in samples {
            t.push(row)?;
        }
        Ok(t)
    }

    /// Trace with columns but no samples yet, for incremental construction.
    pub fn empty(dt: S, names: Vec<String>) -> Result<Self> {
        if !(dt > S::zero()) || !dt.is_finite() {
            return Err(Error::InvalidTimeStep(dt.to_string()));
        }
        Ok(Self {
            dt,
            names,
            samples: Vec::new(),
        })
    }

    pub fn push(&mut self, row: Vec<S>) -> Result<()> {
        if row.len() != self.names.len() {
            return Err(Error::ArityMismatch {
                expected: self.names.len(),
                found: row.len(),
            });
        }
        if let Some(col) = row.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                row: self.samples.len(),
                column: self.names[col].clone(),
            });
        }
        self.samples.push(row);
        Ok(())
    }

    pub fn dt(&self) -> S {
        self.dt
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn samples(&self) -> &[Vec<S>] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// `(n - 1) * dt`.
    pub fn duration(&self) -> S {
        match self.samples.len() {
            0 => S::zero(),
            n => S::from_usize(n - 1).unwrap() * self.dt,
        }
    }

    pub fn time_of(&self, index: usize) -> S {
        S::from_usize(index).unwrap() * self.dt
    }

    /// Sample index of time `t`, or `GridMismatch` when `t` is off the grid.
    pub fn index_of(&self, t: S) -> Result<usize> {
        time_to_index(t, self.dt)
    }

    pub fn prefix(&self, end_index: usize) -> Result<PrefixView<'_, S>> {
        PrefixView::new(self, end_index)
    }
}

pub(crate) fn time_to_index<S: Scalar>(t: S, dt: S) -> Result<usize> {
    let q = t / dt;
    let r = q.round();
    if !(t >= S::zero()) || (q - r).abs() > S::grid_eps() {
        return Err(Error::GridMismatch(t.to_string()));
    }
    r.to_usize()
        .ok_or_else(|| Error::GridMismatch(t.to_string()))
}

/// Indices whose times fall in `[offset + lower, offset + upper]`, relative to an on-grid instant.
pub(crate) fn offsets_for<S: Scalar>(lower: S, upper: S, dt: S) -> Range<usize> {
    let eps = S::grid_eps();
    let lo = (lower / dt - eps).ceil().max(S::zero());
    let hi = (upper / dt + eps).floor();
    let lo = lo.to_usize().unwrap_or(usize::MAX);
    if hi < S::zero() {
        return lo..lo;
    }
    let hi = hi.to_usize().unwrap_or(usize::MAX - 1);
    lo..hi.saturating_add(1).max(lo)
}

impl<S: Scalar> Signal<S> for SampledTrace<S> {
    fn len(&self) -> usize {
        self.samples.len()
    }

    fn row(&self, index: usize) -> &[S] {
        &self.samples[index]
    }
}

/// The prefix `v_{0:b}` of a trace, `b = end_index`.
#[derive(Debug, Clone, Copy)]
pub struct PrefixView<'a, S> {
    base: &'a SampledTrace<S>,
    end_index: usize,
}

impl<'a, S: Scalar> PrefixView<'a, S> {
    pub fn new(base: &'a SampledTrace<S>, end_index: usize) -> Result<Self> {
        if end_index >= base.len() {
            return Err(Error::EmptyTrace);
        }
        Ok(Self { base, end_index })
    }

    pub fn base(&self) -> &'a SampledTrace<S> {
        self.base
    }

    pub fn end_index(&self) -> usize {
        self.end_index
    }

    pub fn end_time(&self) -> S {
        self.base.time_of(self.end_index)
    }

    pub fn dt(&self) -> S {
        self.base.dt
    }

    /// The last `k` samples, left-padded with the first sample when the prefix is shorter.
    pub fn last_k(&self, k: usize) -> Vec<Vec<S>> {
        let b = self.end_index;
        (0..k)
            .map(|j| {
                let back = k - 1 - j;
                let idx = b.saturating_sub(back);
                self.base.samples[idx].clone()
            })
            .collect()
    }
}

impl<S: Scalar> Signal<S> for PrefixView<'_, S> {
    fn len(&self) -> usize {
        self.end_index + 1
    }

    fn row(&self, index: usize) -> &[S] {
        debug_assert!(index <= self.end_index);
        &self.base.samples[index]
    }
}
