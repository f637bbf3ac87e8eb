//! Experiment harness for `gcalc-core`: configuration, a rayon executor,
//! the experiment registry, and CSV/SVG output.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod config;
pub mod error;
pub mod exec;
pub mod experiments;
pub mod registry;
pub mod report;
pub mod svg;

pub use config::{parse_config, EpsRule, ExperimentConfig, Integrand, Payoff};
pub use error::{Error, Result};
pub use exec::{RayonExecutor, THREADS_ENV};
pub use experiments::{compute, run_experiment, run_experiment_with, Outcome};
pub use registry::{render_manifest, Experiment, Manifest, MANIFEST};
pub use report::{Assertion, Cell, RunReport, Status, Table};
