//! Runnable checks, one per registry entry.

mod expectation;
mod field;
mod paths;

use std::path::{Path, PathBuf};
use std::time::Instant;

use gcalc_core::{
    fill_normals, make_grid, sample_path, ControlFamily, Executor, GParams, SamplePath, SeedSpec,
    TimeGrid,
};

use crate::config::ExperimentConfig;
use crate::error::{Error, Result};
use crate::exec::RayonExecutor;
use crate::registry::Experiment;
use crate::report::{Assertion, RunReport, Table};
use crate::svg::LinePlot;

/// What an experiment computes, before anything touches the file system.
pub struct Outcome {
    pub table: Table,
    pub summary: Vec<(&'static str, f64)>,
    pub assertions: Vec<Assertion>,
    pub plot: Option<LinePlot>,
}

struct Ctx<'a, E> {
    cfg: &'a ExperimentConfig,
    exec: &'a E,
    params: GParams,
    seeds: SeedSpec,
}

impl<'a, E: Executor> Ctx<'a, E> {
    fn grid(&self, n_steps: usize) -> gcalc_core::Result<TimeGrid> {
        make_grid(self.cfg.t_end, n_steps)
    }

    fn family(&self, grid: TimeGrid) -> gcalc_core::Result<ControlFamily> {
        ControlFamily::new(grid, self.params, self.cfg.blocks, self.cfg.ladder)
    }

    fn eps(&self, grid: &TimeGrid) -> f64 {
        self.cfg.eps_rule.bandwidth(grid.dt())
    }

    /// Path `p` under control `p mod |family|`, driven by noise stream `p`.
    fn path(&self, family: &ControlFamily, p: usize) -> gcalc_core::Result<SamplePath> {
        let controls = family.controls();
        let mut noise = vec![0.0; family.grid().n_steps()];
        fill_normals(self.seeds.offset(p), &mut noise);
        sample_path(&controls[p % controls.len()], &noise)
    }

    /// Maps `f` over all paths and surfaces the first error in path order.
    fn per_path<T, F>(&self, f: F) -> gcalc_core::Result<Vec<T>>
    where
        T: Send,
        F: Fn(usize) -> gcalc_core::Result<T> + Sync + Send,
    {
        self.exec.map(self.cfg.n_paths, f).into_iter().collect()
    }
}

/// Runs on a pool sized by `G_CALC_THREADS`.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RunReport> {
    run_experiment_with(cfg, &RayonExecutor::from_env()?)
}

pub fn run_experiment_with<E: Executor + Sync>(cfg: &ExperimentConfig, exec: &E) -> Result<RunReport> {
    cfg.validate()?;
    let start = Instant::now();
    let outcome = compute(cfg, exec).map_err(|source| Error::Experiment {
        experiment: cfg.experiment.name(),
        source,
    })?;

    let manifest = cfg.experiment.manifest();
    assert_eq!(outcome.table.columns, manifest.columns, "columns diverge from the manifest");
    let names: Vec<_> = outcome.assertions.iter().map(|a| a.name).collect();
    assert_eq!(names, manifest.assertions, "assertions diverge from the manifest");

    let csv = cfg.csv_path();
    let svg = cfg.svg_path();
    let plot = outcome.plot.filter(|_| cfg.plot);
    let mut written = Vec::new();
    let res = (|| {
        std::fs::create_dir_all(&cfg.out_dir).map_err(|e| io(&cfg.out_dir, e))?;
        write(&csv, &outcome.table.to_csv(), &mut written)?;
        if let Some(p) = &plot {
            write(&svg, p.render().as_bytes(), &mut written)?;
        }
        Ok(())
    })();
    if let Err(e) = res {
        for p in &written {
            let _ = std::fs::remove_file(p);
        }
        return Err(e);
    }

    Ok(RunReport {
        experiment: cfg.experiment.name(),
        seed: cfg.seed,
        csv_paths: vec![csv],
        svg_path: plot.map(|_| svg),
        summary: outcome.summary,
        assertions: outcome.assertions,
        wall_seconds: start.elapsed().as_secs_f64(),
    })
}

/// Runs the experiment without writing any output.
pub fn compute<E: Executor + Sync>(cfg: &ExperimentConfig, exec: &E) -> gcalc_core::Result<Outcome> {
    let ctx = Ctx {
        cfg,
        exec,
        params: cfg.params(),
        seeds: SeedSpec::new(cfg.seed, 0),
    };
    match cfg.experiment {
        Experiment::GheatOracle => expectation::gheat_oracle(&ctx),
        Experiment::Bdg => expectation::bdg(&ctx),
        Experiment::DeltaBound => expectation::delta_bound(&ctx),
        Experiment::Tanaka => paths::tanaka(&ctx),
        Experiment::Occupation => paths::occupation(&ctx),
        Experiment::ConvexIto => paths::convex_ito(&ctx),
        Experiment::Fubini => paths::fubini(&ctx),
        Experiment::QvLocaltime => field::qv_localtime(&ctx),
        Experiment::HolderField => field::holder_field(&ctx),
    }
}

fn io(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn write(path: &Path, bytes: &[u8], written: &mut Vec<PathBuf>) -> Result<()> {
    written.push(path.to_path_buf());
    std::fs::write(path, bytes).map_err(|e| io(path, e))
}

fn mean_se(xs: &[f64]) -> (f64, f64) {
    gcalc_core::stats::mean_and_std_error(xs.iter().copied())
}

fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// `E|X − a| − |a|` for `X ~ N(0, s²)`: the mean local time at `a` when
/// `s² = σ²t`.
fn expected_local_time(a: f64, s: f64) -> f64 {
    if s == 0.0 {
        return 0.0;
    }
    let z = a / s;
    s * (2.0 / std::f64::consts::PI).sqrt() * (-0.5 * z * z).exp() + a * (2.0 * normal_cdf(z) - 1.0) - a.abs()
}

/// `σ² ∫₀ᵗ P(a < σB_s < b) ds` for standard Brownian `B`.
fn expected_occupation(a: f64, b: f64, sigma: f64, t: f64) -> f64 {
    if sigma == 0.0 {
        return 0.0;
    }
    // s = t u² removes the 1/√s behaviour at 0.
    let f = |u: f64| {
        if u == 0.0 {
            return 0.0;
        }
        let sd = sigma * u * t.sqrt();
        (normal_cdf(b / sd) - normal_cdf(a / sd)) * 2.0 * t * u
    };
    let m = 4000;
    let h = 1.0 / m as f64;
    let mut acc = f(0.0) + f(1.0);
    for i in 1..m {
        acc += if i % 2 == 1 { 4.0 } else { 2.0 } * f(i as f64 * h);
    }
    sigma * sigma * acc * h / 3.0
}
