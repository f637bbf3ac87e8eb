//! Command-line front end.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::Parser;

use crate::config::parse_config;
use crate::exec::RayonExecutor;
use crate::experiments::run_experiment_with;
use crate::registry::render_manifest;

/// All assertions held, or `--check`/`--list` succeeded.
pub const EXIT_PASS: u8 = 0;
/// An assertion failed, or `--check` rejected the config.
pub const EXIT_FAIL: u8 = 1;
/// Usage, configuration, or runtime error.
pub const EXIT_ERROR: u8 = 2;

/// Runs a G-Brownian motion experiment described by a `key = value` config.
#[derive(Parser, Debug)]
#[command(name = "gcalc", version)]
struct Cli {
    /// Config file.
    #[arg(required_unless_present = "list")]
    config: Option<PathBuf>,
    /// Overrides `seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides `out_dir`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Prints the experiment registry and exits.
    #[arg(long)]
    list: bool,
    /// Parses and validates the config without running it.
    #[arg(long)]
    check: bool,
}

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_PASS };
        }
    };
    if cli.list {
        let _ = write!(out, "{}", render_manifest());
        return EXIT_PASS;
    }
    let path = cli.config.expect("clap enforces a config path");
    let text = match std::fs::read_to_string(&path) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(err, "error: {}: {e}", path.display());
            return EXIT_ERROR;
        }
    };
    let mut cfg = match parse_config(&text) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(err, "error: {}: {e}", path.display());
            return if cli.check { EXIT_FAIL } else { EXIT_ERROR };
        }
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(dir) = cli.out {
        cfg.out_dir = dir;
    }
    if cli.check {
        return match cfg.validate() {
            Ok(()) => {
                let _ = writeln!(out, "experiment = {}\nvalid = true", cfg.experiment);
                EXIT_PASS
            }
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                EXIT_FAIL
            }
        };
    }
    let report = RayonExecutor::from_env().and_then(|exec| run_experiment_with(&cfg, &exec));
    match report {
        Ok(report) => {
            let _ = write!(out, "{}", report.render());
            if report.passed() {
                EXIT_PASS
            } else {
                EXIT_FAIL
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}
