//! Explicit monotone scheme for the G-heat equation `∂_t u = G(∂_xx u)`.
//!
//! `u(t, x) = Ê[φ(x + √t ξ)]` with `ξ` G-normal, which makes the solver an
//! oracle for the Monte Carlo sup estimator that does not share any code
//! with it.

use alloc::vec::Vec;

use crate::error::{invalid, Result};
use crate::math::{ceil, floor, sqrt};
use crate::params::GParams;

/// Truncation half-width in units of `σ̄√t`.
pub const DEFAULT_HALF_WIDTH_SDS: f64 = 8.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaceGrid {
    x_lo: f64,
    x_hi: f64,
    n_cells: usize,
}

impl SpaceGrid {
    pub fn new(x_lo: f64, x_hi: f64, n_cells: usize) -> Result<Self> {
        if !(x_lo.is_finite() && x_hi.is_finite() && x_lo < x_hi) {
            return Err(invalid("space grid needs finite x_lo < x_hi"));
        }
        if n_cells < 2 {
            return Err(invalid("space grid needs at least two cells"));
        }
        Ok(Self { x_lo, x_hi, n_cells })
    }

    /// Symmetric grid `[-m dx, m dx]` with `m dx ≥ half_width`; `0` is a node.
    pub fn centered(half_width: f64, dx: f64) -> Result<Self> {
        if !(dx > 0.0 && dx.is_finite() && half_width >= 0.0) {
            return Err(invalid("spacing must be positive"));
        }
        let m = (ceil(half_width / dx) as usize).max(1);
        Self::new(-(m as f64) * dx, m as f64 * dx, 2 * m)
    }

    /// The default truncation `[-8σ̄√t, 8σ̄√t]` at spacing `dx`.
    pub fn for_horizon(params: &GParams, t: f64, dx: f64) -> Result<Self> {
        Self::centered(DEFAULT_HALF_WIDTH_SDS * params.sigma_hi() * sqrt(t.max(0.0)), dx)
    }

    pub fn x_lo(&self) -> f64 {
        self.x_lo
    }

    pub fn x_hi(&self) -> f64 {
        self.x_hi
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn dx(&self) -> f64 {
        (self.x_hi - self.x_lo) / self.n_cells as f64
    }

    pub fn node(&self, j: usize) -> f64 {
        if j == self.n_cells {
            self.x_hi
        } else {
            self.x_lo + j as f64 * self.dx()
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..=self.n_cells).map(|j| self.node(j)).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PdeSolution {
    pub grid: SpaceGrid,
    pub t_end: f64,
    /// `u(t_end, x_j)` for every node.
    pub values: Vec<f64>,
    pub dt_used: f64,
    pub steps: usize,
}

impl PdeSolution {
    /// Linear interpolation of `u(t_end, ·)` at `x`.
    pub fn at(&self, x: f64) -> Result<f64> {
        let (lo, hi) = (self.grid.x_lo(), self.grid.x_hi());
        if !(x >= lo && x <= hi) {
            return Err(invalid("evaluation point outside the space grid"));
        }
        let dx = self.grid.dx();
        let s = (x - lo) / dx;
        let j = (floor(s) as usize).min(self.grid.n_cells() - 1);
        let w = s - j as f64;
        if w == 0.0 {
            return Ok(self.values[j]);
        }
        Ok(self.values[j] + (self.values[j + 1] - self.values[j]) * w)
    }
}

/// Solves up to time `t` with `dt = min(t / ⌈tσ̄²/dx²⌉, dx²/σ̄²)`.
///
/// Boundary nodes see zero curvature (linear extrapolation outside the
/// domain), so they keep their initial values.
pub fn solve_gheat<F>(phi: F, t: f64, params: &GParams, grid: &SpaceGrid) -> Result<PdeSolution>
where
    F: Fn(f64) -> f64,
{
    if !(t >= 0.0 && t.is_finite()) {
        return Err(invalid("PDE horizon must be non-negative"));
    }
    let mut u: Vec<f64> = Vec::with_capacity(grid.n_cells() + 1);
    for j in 0..=grid.n_cells() {
        let x = grid.node(j);
        let v = phi(x);
        if !v.is_finite() {
            return Err(invalid(alloc::format!("initial data is not finite at x = {x}")));
        }
        u.push(v);
    }
    let dx = grid.dx();
    let s2 = params.sigma_hi() * params.sigma_hi();
    let cfl = dx * dx / s2;
    let (steps, dt) = if t == 0.0 {
        (0, 0.0)
    } else {
        let n = ceil(t * s2 / (dx * dx)).max(1.0);
        ((n as usize), (t / n).min(cfl))
    };
    let inv_dx2 = 1.0 / (dx * dx);
    let mut next = u.clone();
    let last = u.len() - 1;
    for _ in 0..steps {
        for j in 1..last {
            let d2 = (u[j + 1] - 2.0 * u[j] + u[j - 1]) * inv_dx2;
            next[j] = u[j] + dt * params.g(d2);
        }
        next[0] = u[0];
        next[last] = u[last];
        core::mem::swap(&mut u, &mut next);
    }
    Ok(PdeSolution {
        grid: *grid,
        t_end: t,
        values: u,
        dt_used: dt,
        steps,
    })
}

/// `Ê[φ(√t ξ)]`, i.e. `u(t, 0)`.
pub fn gnormal_expectation<F>(phi: F, t: f64, params: &GParams, grid: &SpaceGrid) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if !(grid.x_lo() <= 0.0 && grid.x_hi() >= 0.0) {
        return Err(invalid("space grid must contain 0"));
    }
    if t == 0.0 {
        let v = phi(0.0);
        if !v.is_finite() {
            return Err(invalid("initial data is not finite at x = 0"));
        }
        return Ok(v);
    }
    solve_gheat(phi, t, params, grid)?.at(0.0)
}
