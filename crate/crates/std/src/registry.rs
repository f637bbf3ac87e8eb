//! The experiment registry and its manifest.
//!
//! Every experiment declares its CSV columns and the names of its pass/fail
//! assertions here; a run must report exactly these assertions, in order.

use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Experiment {
    GheatOracle,
    Tanaka,
    DeltaBound,
    Occupation,
    QvLocaltime,
    ConvexIto,
    Bdg,
    HolderField,
    Fubini,
}

impl Experiment {
    pub const ALL: [Experiment; 9] = [
        Experiment::GheatOracle,
        Experiment::Tanaka,
        Experiment::DeltaBound,
        Experiment::Occupation,
        Experiment::QvLocaltime,
        Experiment::ConvexIto,
        Experiment::Bdg,
        Experiment::HolderField,
        Experiment::Fubini,
    ];

    pub fn name(self) -> &'static str {
        self.manifest().name
    }

    pub fn manifest(self) -> &'static Manifest {
        &MANIFEST[self as usize]
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = MANIFEST.iter().map(|m| m.name).collect();
                format!("unknown experiment `{s}` (expected one of {})", names.join(", "))
            })
    }
}

#[derive(Debug)]
pub struct Manifest {
    pub name: &'static str,
    pub description: &'static str,
    pub columns: &'static [&'static str],
    pub assertions: &'static [&'static str],
    pub plot: bool,
}

pub static MANIFEST: [Manifest; 9] = [
    Manifest {
        name: "gheat-oracle",
        description: "G-heat finite differences against closed forms and the sup Monte-Carlo estimate",
        columns: &["dx", "pde", "exact", "pde_error", "mc", "mc_std_error", "mc_argmax"],
        assertions: &["pde_matches_exact", "mc_within_3se"],
        plot: true,
    },
    Manifest {
        name: "tanaka",
        description: "window local time against the Tanaka local time under refinement",
        columns: &[
            "n_steps",
            "eps",
            "l2_terminal_residual",
            "l2_sup_residual",
            "mean_window_lt",
            "window_lt_std_error",
            "mean_tanaka_lt",
            "oracle_lt",
        ],
        assertions: &["residual_decreasing", "residual_below_tol", "mean_lt_matches_oracle"],
        plot: true,
    },
    Manifest {
        name: "delta-bound",
        description: "sup occupation of [a, a+delta] is linear in delta",
        columns: &["delta", "estimate", "std_error", "slope", "ratio_to_next", "argmax"],
        assertions: &["ratios_in_range", "estimates_monotone"],
        plot: true,
    },
    Manifest {
        name: "occupation",
        description: "occupation-time identity with histogram and window local times",
        columns: &["path", "control", "lhs", "rhs", "diff", "rhs_window", "diff_window"],
        assertions: &["identity_exact", "lhs_matches_oracle"],
        plot: true,
    },
    Manifest {
        name: "qv-localtime",
        description: "quadratic variation of the local time in the level variable",
        columns: &[
            "n",
            "intervals",
            "mean_ratio",
            "ratio_std_error",
            "mean_gap",
            "mean_sum_sq",
            "mean_target",
            "mean_ratio_mid",
        ],
        assertions: &["ratio_in_band", "gap_decreasing"],
        plot: true,
    },
    Manifest {
        name: "convex-ito",
        description: "Ito formula for convex functions with the local-time correction",
        columns: &[
            "path",
            "affine_sup",
            "affine_scale",
            "abs_sup",
            "tanaka_sup",
            "plus_sup",
            "half_tanaka_sup",
            "piecewise_terminal",
        ],
        assertions: &["affine_exact", "abs_matches_tanaka", "positive_part_half", "piecewise_mean_below_tol"],
        plot: false,
    },
    Manifest {
        name: "bdg",
        description: "two-sided moment bounds for a step integrand",
        columns: &[
            "p", "lhs", "mid", "hi", "lo", "ratio", "c_p", "integral", "integral_std_error", "ordered",
        ],
        assertions: &["ratio_within_constant", "pathwise_ordered", "estimates_ordered", "integral_within_3se"],
        plot: false,
    },
    Manifest {
        name: "holder-field",
        description: "level-direction Hoelder exponent of the local-time field",
        columns: &["spacing", "increment"],
        assertions: &["exponent_above_min"],
        plot: true,
    },
    Manifest {
        name: "fubini",
        description: "exchange of a level integral and the Ito sum",
        columns: &["path", "lhs", "rhs", "diff"],
        assertions: &["exchange_exact"],
        plot: false,
    },
];

/// The manifest as `key = value` lines.
pub fn render_manifest() -> String {
    let mut out = String::new();
    for m in &MANIFEST {
        out.push_str(&format!("{}.description = {}\n", m.name, m.description));
        out.push_str(&format!("{}.columns = {}\n", m.name, m.columns.join(",")));
        out.push_str(&format!("{}.assertions = {}\n", m.name, m.assertions.join(",")));
        out.push_str(&format!("{}.plot = {}\n", m.name, m.plot));
    }
    out
}
