use alloc::vec::Vec;

use crate::error::{invalid, Result};

/// Uniform grid `0 = t_0 < … < t_N = T`.
///
/// Only `(t_end, n_steps)` is stored; node times are recomputed on demand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    t_end: f64,
    n_steps: usize,
}

impl TimeGrid {
    pub fn new(t_end: f64, n_steps: usize) -> Result<Self> {
        if !(t_end.is_finite() && t_end > 0.0) {
            return Err(invalid("time horizon must be positive and finite"));
        }
        if n_steps == 0 {
            return Err(invalid("time grid needs at least one step"));
        }
        Ok(Self { t_end, n_steps })
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn dt(&self) -> f64 {
        self.t_end / self.n_steps as f64
    }

    pub fn time(&self, i: usize) -> f64 {
        debug_assert!(i <= self.n_steps);
        if i == self.n_steps {
            self.t_end
        } else {
            self.t_end * i as f64 / self.n_steps as f64
        }
    }

    pub fn times(&self) -> Vec<f64> {
        (0..=self.n_steps).map(|i| self.time(i)).collect()
    }

    /// Index of the node closest to `t` (clamped to the grid).
    pub fn index_of(&self, t: f64) -> usize {
        let k = crate::math::round(t / self.dt());
        if k <= 0.0 {
            0
        } else if k >= self.n_steps as f64 {
            self.n_steps
        } else {
            k as usize
        }
    }

    /// The grid that keeps every `stride`-th node.
    pub fn coarsen(&self, stride: usize) -> Result<Self> {
        if stride == 0 || !self.n_steps.is_multiple_of(stride) {
            return Err(invalid("stride must divide the number of steps"));
        }
        Self::new(self.t_end, self.n_steps / stride)
    }
}

pub fn make_grid(t_end: f64, n_steps: usize) -> Result<TimeGrid> {
    TimeGrid::new(t_end, n_steps)
}
