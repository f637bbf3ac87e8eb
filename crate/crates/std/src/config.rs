//! `key = value` experiment configuration.

use std::collections::HashMap;
use std::path::PathBuf;

use gcalc_core::expectation::MAX_BLOCKS;
use gcalc_core::GParams;

use crate::error::{Error, Result};
use crate::registry::Experiment;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EpsRule {
    SqrtDt,
    Fixed(f64),
}

impl EpsRule {
    pub fn bandwidth(self, dt: f64) -> f64 {
        match self {
            EpsRule::SqrtDt => dt.sqrt(),
            EpsRule::Fixed(e) => e,
        }
    }
}

/// Terminal payoff of the gheat-oracle experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Payoff {
    Square,
    NegSquare,
    Abs,
    NegAbs,
}

impl Payoff {
    pub fn eval(self, x: f64) -> f64 {
        match self {
            Payoff::Square => x * x,
            Payoff::NegSquare => -(x * x),
            Payoff::Abs => x.abs(),
            Payoff::NegAbs => -x.abs(),
        }
    }

    /// `Ê[φ(B_t)]` in closed form.
    pub fn exact(self, params: &GParams, t: f64) -> f64 {
        let c = (2.0 * t / std::f64::consts::PI).sqrt();
        let (lo, hi) = (params.sigma_lo(), params.sigma_hi());
        match self {
            Payoff::Square => hi * hi * t,
            Payoff::NegSquare => -(lo * lo * t),
            Payoff::Abs => hi * c,
            Payoff::NegAbs => -(lo * c),
        }
    }

    /// The scheme is exact on quadratics; the kink of `|x|` costs accuracy.
    pub fn pde_tolerance(self) -> f64 {
        match self {
            Payoff::Square | Payoff::NegSquare => 1e-6,
            Payoff::Abs | Payoff::NegAbs => 1e-3,
        }
    }

    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "x2" => Payoff::Square,
            "neg-x2" => Payoff::NegSquare,
            "abs" => Payoff::Abs,
            "neg-abs" => Payoff::NegAbs,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Integrand {
    One,
    Sign,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub sigma_lo: f64,
    pub sigma_hi: f64,
    pub t_end: f64,
    pub n_steps: usize,
    pub n_paths: usize,
    pub eps_rule: EpsRule,
    pub blocks: usize,
    pub ladder: usize,
    pub seed: u64,
    pub out_dir: PathBuf,
    pub payoff: Payoff,
    pub dx: f64,
    pub level: f64,
    pub kink: f64,
    pub a: f64,
    pub b: f64,
    pub bins: usize,
    pub deltas: Vec<f64>,
    pub refinements: u32,
    pub dyadic_min: u32,
    pub dyadic_max: u32,
    pub n_levels: usize,
    pub max_step: usize,
    pub integrand: Integrand,
    pub p: f64,
    pub c_p: f64,
    pub tanaka_tol: f64,
    pub convex_tol: f64,
    pub holder_min: f64,
    pub plot: bool,
}

pub const KEYS: [&str; 31] = [
    "experiment",
    "sigma_lo",
    "sigma_hi",
    "t_end",
    "n_steps",
    "n_paths",
    "eps_rule",
    "blocks",
    "ladder",
    "seed",
    "out_dir",
    "payoff",
    "dx",
    "level",
    "kink",
    "a",
    "b",
    "bins",
    "deltas",
    "refinements",
    "dyadic_min",
    "dyadic_max",
    "n_levels",
    "max_step",
    "integrand",
    "p",
    "c_p",
    "tanaka_tol",
    "convex_tol",
    "holder_min",
    "plot",
];

impl ExperimentConfig {
    pub fn with_defaults(experiment: Experiment) -> Self {
        Self {
            experiment,
            sigma_lo: 0.5,
            sigma_hi: 1.0,
            t_end: 1.0,
            n_steps: 1024,
            n_paths: 1000,
            eps_rule: EpsRule::SqrtDt,
            blocks: 4,
            ladder: 3,
            seed: 0,
            out_dir: PathBuf::from("out"),
            payoff: Payoff::Abs,
            dx: 0.05,
            level: 0.0,
            kink: 0.3,
            a: -1.0,
            b: 1.0,
            bins: 64,
            deltas: vec![0.4, 0.2, 0.1],
            refinements: 3,
            dyadic_min: 5,
            dyadic_max: 7,
            n_levels: 64,
            max_step: 8,
            integrand: Integrand::One,
            p: 1.0,
            c_p: 4.0,
            tanaka_tol: 0.05,
            convex_tol: 0.1,
            holder_min: 0.35,
            plot: true,
        }
    }

    pub fn params(&self) -> GParams {
        GParams::new(self.sigma_lo, self.sigma_hi).expect("validated config")
    }

    /// Step counts of the refinement ladder, coarsest first.
    pub fn refinement_steps(&self) -> Vec<usize> {
        (0..self.refinements)
            .rev()
            .map(|k| self.n_steps >> (2 * k))
            .collect()
    }

    pub fn csv_path(&self) -> PathBuf {
        self.out_dir.join(format!("{}-{}.csv", self.experiment, self.seed))
    }

    pub fn svg_path(&self) -> PathBuf {
        self.out_dir.join(format!("{}-{}.svg", self.experiment, self.seed))
    }

    /// Checks the preconditions of the modules the experiment drives.
    pub fn validate(&self) -> Result<()> {
        self.validate_at(&HashMap::new())
    }

    fn validate_at(&self, lines: &HashMap<&str, usize>) -> Result<()> {
        let line = |keys: &[&str]| keys.iter().filter_map(|k| lines.get(k).copied()).max().unwrap_or(0);
        let fail = |keys: &[&str], msg: String| Err(Error::Config { line: line(keys), msg });

        if let Err(e) = GParams::new(self.sigma_lo, self.sigma_hi) {
            return fail(&["sigma_lo", "sigma_hi"], e.to_string());
        }
        if !(self.t_end > 0.0) {
            return fail(&["t_end"], "t_end must be positive".into());
        }
        if self.n_steps == 0 {
            return fail(&["n_steps"], "n_steps must be positive".into());
        }
        if self.n_paths < 2 {
            return fail(&["n_paths"], "n_paths must be at least 2".into());
        }
        if let EpsRule::Fixed(e) = self.eps_rule {
            if !(e > 0.0) {
                return fail(&["eps_rule"], "fixed bandwidth must be positive".into());
            }
        }
        if self.ladder < 2 {
            return fail(&["ladder"], "ladder needs at least 2 rungs".into());
        }
        if !(1..=MAX_BLOCKS).contains(&self.blocks) {
            return fail(&["blocks"], format!("blocks must lie in 1..={MAX_BLOCKS}"));
        }
        if !(self.dx > 0.0) {
            return fail(&["dx"], "dx must be positive".into());
        }
        if !(self.a < self.b) {
            return fail(&["a", "b"], "need a < b".into());
        }
        if self.bins == 0 {
            return fail(&["bins"], "bins must be positive".into());
        }
        if self.deltas.is_empty()
            || !self.deltas.iter().all(|d| *d > 0.0)
            || !self.deltas.windows(2).all(|w| w[0] > w[1])
        {
            return fail(&["deltas"], "deltas must be positive and strictly decreasing".into());
        }
        if !(self.p >= 1.0) {
            return fail(&["p"], "p must be at least 1".into());
        }
        if !(self.c_p >= 1.0) {
            return fail(&["c_p"], "c_p must be at least 1".into());
        }
        for (key, v) in [("tanaka_tol", self.tanaka_tol), ("convex_tol", self.convex_tol)] {
            if !(v > 0.0) {
                return fail(&[key], format!("{key} must be positive"));
            }
        }

        match self.experiment {
            Experiment::Tanaka => {
                if self.refinements < 2 {
                    return fail(&["refinements"], "need at least 2 refinements".into());
                }
                let coarsest = 1usize << (2 * (self.refinements - 1));
                if !self.n_steps.is_multiple_of(coarsest) {
                    return fail(
                        &["n_steps", "refinements"],
                        format!("n_steps must be divisible by 4^(refinements-1) = {coarsest}"),
                    );
                }
                if self.blocks > self.n_steps / coarsest {
                    return fail(&["blocks"], "blocks exceeds the coarsest step count".into());
                }
            }
            Experiment::QvLocaltime => {
                if self.sigma_lo <= 0.0 {
                    return fail(
                        &["sigma_lo"],
                        "qv-localtime requires sigma_lo > 0: the quadratic variation of local time \
                         in the level variable is only established for a nondegenerate band"
                            .into(),
                    );
                }
                if !(1..=self.dyadic_max).contains(&self.dyadic_min) || self.dyadic_max > 20 {
                    return fail(&["dyadic_min", "dyadic_max"], "need 1 <= dyadic_min <= dyadic_max <= 20".into());
                }
                if self.dyadic_max - self.dyadic_min < 1 {
                    return fail(&["dyadic_min", "dyadic_max"], "need at least two dyadic levels".into());
                }
            }
            Experiment::HolderField => {
                if self.n_levels < 3 {
                    return fail(&["n_levels"], "n_levels must be at least 3".into());
                }
                if self.max_step < 2 {
                    return fail(&["max_step"], "max_step must be at least 2".into());
                }
            }
            _ => {}
        }
        if self.experiment != Experiment::Tanaka && self.blocks > self.n_steps {
            return fail(&["blocks", "n_steps"], "blocks exceeds n_steps".into());
        }
        Ok(())
    }
}

/// Parses and validates a configuration. Errors name the offending line.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let mut entries: HashMap<&str, (usize, &str)> = HashMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(Error::Config {
                line,
                msg: format!("expected `key = value`, found `{content}`"),
            });
        };
        let (key, value) = (key.trim(), value.trim());
        let Some(&key) = KEYS.iter().find(|k| **k == key) else {
            return Err(Error::Config {
                line,
                msg: format!("unknown key `{key}`"),
            });
        };
        if value.is_empty() {
            return Err(Error::Config {
                line,
                msg: format!("missing value for `{key}`"),
            });
        }
        if let Some(&(first, _)) = entries.get(key) {
            return Err(Error::DuplicateKey {
                key: key.to_string(),
                first,
                second: line,
            });
        }
        entries.insert(key, (line, value));
    }

    let &(line, name) = entries.get("experiment").ok_or(Error::MissingKey("experiment"))?;
    let experiment = name.parse().map_err(|msg| Error::Config { line, msg })?;
    let mut cfg = ExperimentConfig::with_defaults(experiment);

    for key in KEYS {
        let Some(&(line, v)) = entries.get(key) else {
            continue;
        };
        let err = |msg: String| Error::Config { line, msg };
        let float = || parse_float(key, v).map_err(err);
        let int = || {
            v.parse::<usize>()
                .map_err(|_| err(format!("`{key}` expects a non-negative integer, found `{v}`")))
        };
        match key {
            "experiment" => {}
            "sigma_lo" => cfg.sigma_lo = float()?,
            "sigma_hi" => cfg.sigma_hi = float()?,
            "t_end" => cfg.t_end = float()?,
            "n_steps" => cfg.n_steps = int()?,
            "n_paths" => cfg.n_paths = int()?,
            "eps_rule" => cfg.eps_rule = parse_eps_rule(v).map_err(err)?,
            "blocks" => cfg.blocks = int()?,
            "ladder" => cfg.ladder = int()?,
            "seed" => {
                cfg.seed = v
                    .parse()
                    .map_err(|_| err(format!("`seed` expects an unsigned 64-bit integer, found `{v}`")))?
            }
            "out_dir" => cfg.out_dir = PathBuf::from(v),
            "payoff" => {
                cfg.payoff = Payoff::parse(v)
                    .ok_or_else(|| err(format!("unknown payoff `{v}` (expected x2, neg-x2, abs or neg-abs)")))?
            }
            "dx" => cfg.dx = float()?,
            "level" => cfg.level = float()?,
            "kink" => cfg.kink = float()?,
            "a" => cfg.a = float()?,
            "b" => cfg.b = float()?,
            "bins" => cfg.bins = int()?,
            "deltas" => {
                cfg.deltas = v
                    .split(',')
                    .map(|s| parse_float(key, s.trim()))
                    .collect::<std::result::Result<_, _>>()
                    .map_err(err)?
            }
            "refinements" => cfg.refinements = small(int()?, key).map_err(err)?,
            "dyadic_min" => cfg.dyadic_min = small(int()?, key).map_err(err)?,
            "dyadic_max" => cfg.dyadic_max = small(int()?, key).map_err(err)?,
            "n_levels" => cfg.n_levels = int()?,
            "max_step" => cfg.max_step = int()?,
            "integrand" => {
                cfg.integrand = match v {
                    "one" => Integrand::One,
                    "sign" => Integrand::Sign,
                    _ => return Err(err(format!("unknown integrand `{v}` (expected one or sign)"))),
                }
            }
            "p" => cfg.p = float()?,
            "c_p" => cfg.c_p = float()?,
            "tanaka_tol" => cfg.tanaka_tol = float()?,
            "convex_tol" => cfg.convex_tol = float()?,
            "holder_min" => cfg.holder_min = float()?,
            "plot" => {
                cfg.plot = v
                    .parse()
                    .map_err(|_| err(format!("`plot` expects true or false, found `{v}`")))?
            }
            _ => unreachable!("key list and match arms diverged"),
        }
    }

    let lines: HashMap<&str, usize> = entries.iter().map(|(k, (l, _))| (*k, *l)).collect();
    cfg.validate_at(&lines)?;
    Ok(cfg)
}

fn parse_float(key: &str, v: &str) -> std::result::Result<f64, String> {
    match v.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err(format!("`{key}` expects a finite number, found `{v}`")),
    }
}

fn parse_eps_rule(v: &str) -> std::result::Result<EpsRule, String> {
    if v == "sqrt-dt" {
        return Ok(EpsRule::SqrtDt);
    }
    match v.strip_prefix("fixed:") {
        Some(x) => parse_float("eps_rule", x.trim()).map(EpsRule::Fixed),
        None => Err(format!("`eps_rule` expects sqrt-dt or fixed:<value>, found `{v}`")),
    }
}

fn small(v: usize, key: &str) -> std::result::Result<u32, String> {
    u32::try_from(v)
        .ok()
        .filter(|&x| x <= 20)
        .ok_or_else(|| format!("`{key}` must be at most 20"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_fill_missing_keys() {
        let cfg = parse_config("experiment = tanaka\nseed = 7").unwrap();
        let mut expected = ExperimentConfig::with_defaults(Experiment::Tanaka);
        expected.seed = 7;
        assert_eq!(cfg, expected);
    }

    #[test]
    fn order_comments_and_whitespace_do_not_matter() {
        let a = parse_config("# header\nexperiment = gheat-oracle\npayoff = x2\n\n  dx=0.1  # trailing\n").unwrap();
        let b = parse_config("dx = 0.1\npayoff = x2\nexperiment = gheat-oracle").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.payoff, Payoff::Square);
        assert_eq!(a.dx, 0.1);
    }

    #[test]
    fn eps_rules() {
        let c = parse_config("experiment = tanaka\neps_rule = fixed:0.01").unwrap();
        assert_eq!(c.eps_rule, EpsRule::Fixed(0.01));
        let c = parse_config("experiment = tanaka\neps_rule = sqrt-dt").unwrap();
        assert_eq!(c.eps_rule, EpsRule::SqrtDt);
        assert!(parse_config("experiment = tanaka\neps_rule = fixed:-1").is_err());
        assert!(parse_config("experiment = tanaka\neps_rule = wide").is_err());
    }

    fn line_of(err: Error) -> usize {
        match err {
            Error::Config { line, .. } => line,
            e => panic!("unexpected error {e}"),
        }
    }

    #[test]
    fn unknown_experiment_names_line_one() {
        let e = parse_config("experiment = bogus").unwrap_err();
        assert!(e.to_string().starts_with("line 1:"), "{e}");
        assert_eq!(line_of(e), 1);
    }

    #[test]
    fn unknown_key_names_its_line() {
        let e = parse_config("experiment = bdg\nsigma = 1").unwrap_err();
        assert!(e.to_string().contains("unknown key `sigma`"), "{e}");
        assert_eq!(line_of(e), 2);
    }

    #[test]
    fn duplicate_key_cites_both_lines() {
        let e = parse_config("seed = 1\nexperiment = bdg\nseed = 2").unwrap_err();
        match e {
            Error::DuplicateKey { key, first, second } => {
                assert_eq!((key.as_str(), first, second), ("seed", 1, 3));
            }
            e => panic!("{e}"),
        }
    }

    #[test]
    fn malformed_values_name_their_line() {
        for (text, line) in [
            ("experiment = bdg\nn_paths = many", 2),
            ("experiment = bdg\n\nsigma_hi = 1..0", 3),
            ("experiment = bdg\nt_end = nan", 2),
            ("experiment = bdg\nn_steps = -4", 2),
            ("experiment = bdg\nseed", 2),
            ("experiment = bdg\nseed =", 2),
            ("experiment = bdg\nplot = yes", 2),
            ("experiment = bdg\ndeltas = 0.4,x", 2),
        ] {
            assert_eq!(line_of(parse_config(text).unwrap_err()), line, "{text}");
        }
    }

    #[test]
    fn invariant_violations_name_their_line() {
        for (text, line) in [
            ("experiment = bdg\nsigma_lo = 2\nsigma_hi = 1", 3),
            ("experiment = bdg\nsigma_lo = -0.1", 2),
            ("experiment = bdg\nn_paths = 1", 2),
            ("experiment = bdg\nblocks = 13", 2),
            ("experiment = bdg\nladder = 1", 2),
            ("experiment = occupation\na = 1\nb = 0", 3),
            ("experiment = delta-bound\ndeltas = 0.1, 0.2", 2),
            ("experiment = tanaka\nn_steps = 1000", 2),
            ("experiment = holder-field\nn_levels = 2", 2),
        ] {
            assert_eq!(line_of(parse_config(text).unwrap_err()), line, "{text}");
        }
    }

    #[test]
    fn qv_localtime_refuses_degenerate_band() {
        let e = parse_config("experiment = qv-localtime\nsigma_lo = 0").unwrap_err();
        let msg = e.to_string();
        assert!(msg.contains("sigma_lo > 0"), "{msg}");
        assert_eq!(line_of(e), 2);
        // The same band is fine elsewhere.
        assert!(parse_config("experiment = tanaka\nsigma_lo = 0").is_ok());
    }

    #[test]
    fn experiment_is_required() {
        assert!(matches!(parse_config("seed = 3"), Err(Error::MissingKey("experiment"))));
    }

    #[test]
    fn every_registry_entry_parses() {
        for e in Experiment::ALL {
            let cfg = parse_config(&format!("experiment = {e}")).unwrap();
            assert_eq!(cfg.experiment, e);
            cfg.validate().unwrap();
        }
    }
}
