use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::Signal;

/// Rolling buffer of the last `k` environment states.
///
/// The first push fills the whole buffer with that state, so the buffer always holds exactly
/// `k` states: `(s_0)^(k-t-1) . s_{0:t}` before it is full, `s_{t-k+1:t}` afterwards.
#[derive(Debug, Clone, PartialEq)]
pub struct TauWindow<S> {
    k: usize,
    states: VecDeque<Vec<S>>,
}

impl<S: Scalar> TauWindow<S> {
    pub fn new(k: usize) -> Self {
        assert!(k >= 1, "window length must be positive");
        Self {
            k,
            states: VecDeque::with_capacity(k),
        }
    }

    /// Window initialized to `(s_0)^k`.
    pub fn with_initial(k: usize, s0: Vec<S>) -> Self {
        let mut w = Self::new(k);
        w.push(s0).expect("fresh window accepts any arity");
        w
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn arity(&self) -> Option<usize> {
        self.states.front().map(Vec::len)
    }

    pub fn is_initialized(&self) -> bool {
        !self.states.is_empty()
    }

    pub fn push(&mut self, s: Vec<S>) -> Result<()> {
        match self.arity() {
            None => {
                for _ in 1..self.k {
                    self.states.push_back(s.clone());
                }
                self.states.push_back(s);
            }
            Some(d) if d != s.len() => {
                return Err(Error::ArityMismatch {
                    expected: d,
                    found: s.len(),
                })
            }
            Some(_) => {
                self.states.pop_front();
                self.states.push_back(s);
            }
        }
        Ok(())
    }

    pub fn states(&self) -> impl ExactSizeIterator<Item = &[S]> {
        self.states.iter().map(Vec::as_slice)
    }

    pub fn last(&self) -> Option<&[S]> {
        self.states.back().map(Vec::as_slice)
    }

    /// Concatenated states, oldest first (`k * d` values).
    pub fn flatten(&self) -> Vec<S> {
        self.states.iter().flatten().copied().collect()
    }
}

impl<S: Scalar> Signal<S> for TauWindow<S> {
    fn len(&self) -> usize {
        self.states.len()
    }

    fn row(&self, index: usize) -> &[S] {
        &self.states[index]
    }
}

/// A [`TauWindow`] that also tracks the absolute time of its newest sample.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowView<S> {
    window: TauWindow<S>,
    pushes: usize,
    dt: S,
}

impl<S: Scalar> WindowView<S> {
    pub fn new(k: usize, dt: S) -> Self {
        Self {
            window: TauWindow::new(k),
            pushes: 0,
            dt,
        }
    }

    /// Window over explicit samples (already padded), whose newest sample is at `step`.
    pub fn from_samples(samples: Vec<Vec<S>>, step: usize, dt: S) -> Result<Self> {
        let k = samples.len();
        if k == 0 {
            return Err(Error::EmptyInput);
        }
        let d = samples[0].len();
        if let Some(bad) = samples.iter().find(|s| s.len() != d) {
            return Err(Error::ArityMismatch {
                expected: d,
                found: bad.len(),
            });
        }
        let window = TauWindow {
            k,
            states: samples.into(),
        };
        Ok(Self {
            window,
            pushes: step + 1,
            dt,
        })
    }

    pub fn push(&mut self, s: Vec<S>) -> Result<()> {
        self.window.push(s)?;
        self.pushes += 1;
        Ok(())
    }

    pub fn k(&self) -> usize {
        self.window.k
    }

    pub fn dt(&self) -> S {
        self.dt
    }

    pub fn window(&self) -> &TauWindow<S> {
        &self.window
    }

    /// Sample index of the newest state.
    pub fn current_step(&self) -> Option<usize> {
        self.pushes.checked_sub(1)
    }

    pub fn current_time(&self) -> Option<S> {
        self.current_step()
            .map(|b| S::from_usize(b).unwrap() * self.dt)
    }
}

impl<S: Scalar> Signal<S> for WindowView<S> {
    fn len(&self) -> usize {
        self.window.len()
    }

    fn row(&self, index: usize) -> &[S] {
        self.window.row(index)
    }
}

/// Maps a trajectory of windows back to the underlying state trajectory (newest state of each).
pub fn project_original<S: Scalar>(tau_trajectory: &[TauWindow<S>]) -> Vec<Vec<S>> {
    tau_trajectory
        .iter()
        .filter_map(|w| w.last().map(<[S]>::to_vec))
        .collect()
}
