use alloc::vec;
use alloc::vec::Vec;

use super::estimators::in_window;
use super::mollifier::check_eps;
use crate::error::{invalid, Result};
use crate::grid::TimeGrid;
use crate::sampler::SamplePath;

/// Window local times `L^{a_j}_{t_k}` over a level grid and a time grid.
///
/// `grid` is the recording grid: every `stride`-th node of the path's grid.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalTimeField {
    levels: Vec<f64>,
    grid: TimeGrid,
    stride: usize,
    eps: f64,
    values: Vec<Vec<f64>>,
}

impl LocalTimeField {
    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    /// Path steps between two recorded columns.
    pub fn stride(&self) -> usize {
        self.stride
    }

    pub fn bandwidth(&self) -> f64 {
        self.eps
    }

    /// Row `j`: `L^{a_j}` at every recorded time.
    pub fn row(&self, j: usize) -> &[f64] {
        &self.values[j]
    }

    pub fn at(&self, j: usize, k: usize) -> f64 {
        self.values[j][k]
    }

    pub fn column(&self, k: usize) -> Vec<f64> {
        self.values.iter().map(|r| r[k]).collect()
    }

    pub fn n_times(&self) -> usize {
        self.grid.n_steps() + 1
    }
}

pub fn local_time_field(path: &SamplePath, levels: &[f64], eps: f64) -> Result<LocalTimeField> {
    local_time_field_strided(path, levels, eps, 1)
}

/// Field recorded at every `stride`-th time node.
///
/// Each step touches only the levels within `ε` of `B_{t_i}` (found by
/// bisection), so the cost is `O(N log A + A·N/stride)`. Rows agree bit for
/// bit with [`super::window_local_time`] at the recorded nodes.
pub fn local_time_field_strided(
    path: &SamplePath,
    levels: &[f64],
    eps: f64,
    stride: usize,
) -> Result<LocalTimeField> {
    check_eps(eps)?;
    if levels.is_empty() {
        return Err(invalid("need at least one level"));
    }
    if !levels.windows(2).all(|w| w[0] < w[1]) {
        return Err(invalid("levels must be strictly increasing"));
    }
    let grid = path.grid().coarsen(stride)?;
    let two_eps = 2.0 * eps;
    let n_cols = grid.n_steps() + 1;
    let mut values = vec![Vec::with_capacity(n_cols); levels.len()];
    let mut occ = vec![0.0; levels.len()];
    for row in values.iter_mut() {
        row.push(0.0);
    }
    let vals = path.values();
    for (i, &d) in path.qv_increments().iter().enumerate() {
        let b = vals[i];
        let lo = levels.partition_point(|&a| a + eps <= b);
        let hi = levels.partition_point(|&a| a - eps < b);
        for j in lo..hi {
            if in_window(b, levels[j], eps) {
                occ[j] += d;
            }
        }
        if (i + 1) % stride == 0 {
            for (row, o) in values.iter_mut().zip(&occ) {
                row.push(o / two_eps);
            }
        }
    }
    Ok(LocalTimeField {
        levels: levels.to_vec(),
        grid,
        stride,
        eps,
        values,
    })
}
