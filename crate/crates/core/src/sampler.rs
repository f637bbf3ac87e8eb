//! Discrete G-Brownian paths under a volatility control.
//!
//! Under the measure selected by a control `σ`, `B` is the martingale
//! `∫ σ dW`. On a uniform grid with piecewise-constant `σ` this is simulated
//! exactly: `B_{i+1} = B_i + σ_i √dt ξ_i` and `⟨B⟩_{i+1} = ⟨B⟩_i + σ_i² dt`.

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{check_len, invalid, Result};
use crate::grid::TimeGrid;
use crate::math::sqrt;
use crate::params::GParams;

/// Piecewise-constant volatility, one value per interval `[t_i, t_{i+1})`.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlPath {
    grid: TimeGrid,
    sigmas: Vec<f64>,
}

impl ControlPath {
    pub fn new(grid: TimeGrid, sigmas: Vec<f64>, params: &GParams) -> Result<Self> {
        check_len("control values", grid.n_steps(), sigmas.len())?;
        if let Some(i) = sigmas.iter().position(|&s| !params.contains(s)) {
            return Err(invalid(alloc::format!(
                "control value {} on interval {} lies outside [{}, {}]",
                sigmas[i],
                i,
                params.sigma_lo(),
                params.sigma_hi()
            )));
        }
        Ok(Self { grid, sigmas })
    }

    pub fn constant(grid: TimeGrid, sigma: f64, params: &GParams) -> Result<Self> {
        Self::new(grid, alloc::vec![sigma; grid.n_steps()], params)
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn sigmas(&self) -> &[f64] {
        &self.sigmas
    }

    /// Lexicographic order of the value sequence; used to break ties.
    pub fn signature_cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.sigmas.iter().zip(&other.sigmas) {
            match a.total_cmp(b) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        self.sigmas.len().cmp(&other.sigmas.len())
    }
}

/// Values of `B` and of its quadratic variation on the grid nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplePath {
    grid: TimeGrid,
    values: Vec<f64>,
    qv: Vec<f64>,
    dqv: Vec<f64>,
}

impl SamplePath {
    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    /// `B_{t_0}, …, B_{t_N}`.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `⟨B⟩_{t_0}, …, ⟨B⟩_{t_N}`.
    pub fn qv(&self) -> &[f64] {
        &self.qv
    }

    /// Per-interval increments `σ_i² dt` of `⟨B⟩`; `qv` is their running sum.
    pub fn qv_increments(&self) -> &[f64] {
        &self.dqv
    }

    pub fn n_steps(&self) -> usize {
        self.grid.n_steps()
    }

    pub fn terminal(&self) -> f64 {
        self.values[self.values.len() - 1]
    }
}

pub fn sample_path(control: &ControlPath, noise: &[f64]) -> Result<SamplePath> {
    let n = control.grid.n_steps();
    check_len("noise", n, noise.len())?;
    let dt = control.grid.dt();
    let sq = sqrt(dt);
    let mut values = Vec::with_capacity(n + 1);
    let mut qv = Vec::with_capacity(n + 1);
    let mut dqv = Vec::with_capacity(n);
    let (mut b, mut q) = (0.0, 0.0);
    values.push(b);
    qv.push(q);
    for (&s, &xi) in control.sigmas.iter().zip(noise) {
        b += s * sq * xi;
        let d = s * s * dt;
        q += d;
        values.push(b);
        qv.push(q);
        dqv.push(d);
    }
    Ok(SamplePath {
        grid: control.grid,
        values,
        qv,
        dqv,
    })
}

/// Partial sums `S_k = Σ_{i<k} η_i (B_{i+1} − B_i)` of a step integrand.
///
/// Runs of equal integrand values are summed as `η (B_end − B_start)`, so a
/// piecewise-constant integrand telescopes exactly (`η ≡ 1` returns `B`).
pub fn ito_sum(path: &SamplePath, integrand: &[f64]) -> Result<Vec<f64>> {
    check_len("integrand", path.n_steps(), integrand.len())?;
    Ok(ito_sum_unchecked(&path.values, integrand))
}

pub(crate) fn ito_sum_unchecked(values: &[f64], integrand: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(values.len());
    out.push(0.0);
    let mut run_start = 0;
    let mut base = 0.0;
    for k in 1..values.len() {
        let eta = integrand[k - 1];
        if k - 1 > run_start && eta != integrand[run_start] {
            base = out[k - 1];
            run_start = k - 1;
        }
        out.push(base + eta * (values[k] - values[run_start]));
    }
    out
}

/// Running realized variance `Σ_{i<k} (B_{i+1} − B_i)²`.
pub fn qv_from_increments(path: &SamplePath) -> Vec<f64> {
    let mut out = Vec::with_capacity(path.values.len());
    let mut acc = 0.0;
    out.push(acc);
    for w in path.values.windows(2) {
        let d = w[1] - w[0];
        acc += d * d;
        out.push(acc);
    }
    out
}
