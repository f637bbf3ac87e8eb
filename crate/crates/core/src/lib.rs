//! Numerics for the one-dimensional G-Brownian motion.
//!
//! The crate is `no_std` (it needs `alloc`) and holds every algorithm:
//!
//! * [`params`], [`grid`], [`rng`]: the volatility band, uniform time grids
//!   and a counter-based normal stream keyed by `(seed, stream_id)`.
//! * [`sampler`]: paths of `B` under a piecewise-constant volatility control,
//!   left-endpoint Itô sums and realized quadratic variation.
//! * [`expectation`]: the sublinear expectation as a supremum of Monte Carlo
//!   means over a family of controls, plus BDG moment checks.
//! * [`gheat`]: an explicit monotone scheme for `∂_t u = G(∂_xx u)`.
//! * [`localtime`]: local time estimators, the Tanaka and occupation-time
//!   identities, quadratic variation of local time and the Itô formula for
//!   convex functions.
//!
//! IO, configuration and the command line live in the companion `gcalc` crate.

#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod error;
pub mod exec;
pub mod expectation;
pub mod gheat;
pub mod grid;
pub mod localtime;
mod math;
pub mod params;
pub mod rng;
pub mod sampler;
pub mod stats;

pub use error::{Error, Result};
pub use exec::{Executor, Serial};
pub use expectation::{
    bdg_check, sample_table, sublinear_expectation, BdgReport, ControlFamily, EstimateReport,
    PathTable,
};
pub use gheat::{gnormal_expectation, solve_gheat, PdeSolution, SpaceGrid};
pub use grid::{make_grid, TimeGrid};
pub use params::{g_function, GParams};
pub use rng::{fill_normals, normal_stream, SeedSpec};
pub use sampler::{ito_sum, qv_from_increments, sample_path, ControlPath, SamplePath};
