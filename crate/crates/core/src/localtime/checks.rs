//! Checks of the identities satisfied by local time.

use alloc::vec::Vec;

use super::estimators::bin_index;
use super::field::{local_time_field, LocalTimeField};
use crate::error::{invalid, Error, Result};
use crate::exec::Executor;
use crate::expectation::{sample_table, ControlFamily, EstimateReport};
use crate::math::{ln, sgn, sqrt};
use crate::params::GParams;
use crate::rng::SeedSpec;
use crate::sampler::{ito_sum_unchecked, SamplePath};
use crate::stats::{ols_slope, trapezoid};

#[derive(Debug, Clone, PartialEq)]
pub struct DeltaBoundReport {
    pub level: f64,
    pub t: f64,
    pub deltas: Vec<f64>,
    /// Sup-estimates of `∫₀ᵗ 1_[a,a+δ](B_s) d⟨B⟩_s`, one per `δ`.
    pub estimates: Vec<EstimateReport>,
    /// `estimate(δ_i) / estimate(δ_{i+1})`; `NaN` when the denominator is 0.
    pub ratios: Vec<f64>,
}

impl DeltaBoundReport {
    pub fn values(&self) -> Vec<f64> {
        self.estimates.iter().map(|e| e.value).collect()
    }

    /// `estimate(δ) / δ` per `δ`: the fitted constant of the linear bound.
    pub fn slopes(&self) -> Vec<f64> {
        self.estimates
            .iter()
            .zip(&self.deltas)
            .map(|(e, d)| e.value / d)
            .collect()
    }
}

/// Sup-estimates of the occupation of `[a, a+δ]` up to `t` for several `δ`.
pub fn delta_bound_check<E: Executor>(
    family: &ControlFamily,
    a: f64,
    deltas: &[f64],
    t: f64,
    n_paths: usize,
    seeds: SeedSpec,
    exec: &E,
) -> Result<DeltaBoundReport> {
    if deltas.is_empty() || !deltas.iter().all(|d| *d > 0.0 && d.is_finite()) {
        return Err(invalid("deltas must be positive"));
    }
    if !deltas.windows(2).all(|w| w[0] > w[1]) {
        return Err(invalid("deltas must be strictly decreasing"));
    }
    if !(t > 0.0 && t <= family.grid().t_end()) {
        return Err(invalid("t must lie in (0, T]"));
    }
    if n_paths < 2 {
        return Err(invalid("need at least two paths"));
    }
    let k = family.grid().index_of(t);
    let ds = deltas.to_vec();
    let table = sample_table(family, n_paths, seeds, ds.len(), exec, |path, out| {
        out.fill(0.0);
        for (&b, &d) in path.values()[..k].iter().zip(path.qv_increments()) {
            for (o, &delta) in out.iter_mut().zip(&ds) {
                if a <= b && b <= a + delta {
                    *o += d;
                }
            }
        }
    })?;
    let estimates: Vec<EstimateReport> = (0..ds.len()).map(|j| table.estimate(family, j)).collect();
    let ratios = estimates
        .windows(2)
        .map(|w| if w[1].value == 0.0 { f64::NAN } else { w[0].value / w[1].value })
        .collect();
    Ok(DeltaBoundReport {
        level: a,
        t,
        deltas: ds,
        estimates,
        ratios,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OccupationReport {
    /// `∫₀ᵗ 1_(a,b)(B_s) d⟨B⟩_s`.
    pub lhs: f64,
    /// `Σ_j L^{x_j}_t Δx` with bin-aligned histogram local times.
    pub rhs: f64,
    pub diff: f64,
    /// Same sum with window local times at bandwidth `√dt` at the bin centers.
    pub rhs_window: f64,
    pub diff_window: f64,
}

/// Occupation-time identity at the terminal time of `path`.
pub fn occupation_check(path: &SamplePath, a: f64, b: f64, n_bins: usize) -> Result<OccupationReport> {
    if !(a < b) {
        return Err(invalid("occupation interval needs a < b"));
    }
    if n_bins == 0 {
        return Err(invalid("need at least one bin"));
    }
    let dx = (b - a) / n_bins as f64;
    let mut lhs = 0.0;
    let mut occ = alloc::vec![0.0; n_bins];
    for (&x, &d) in path.values().iter().zip(path.qv_increments()) {
        if a < x && x < b {
            lhs += d;
            occ[bin_index(x, a, dx, n_bins)] += d;
        }
    }
    let rhs: f64 = occ.iter().map(|o| (o / dx) * dx).sum();

    let centers: Vec<f64> = (0..n_bins).map(|j| a + (j as f64 + 0.5) * dx).collect();
    let field = local_time_field(path, &centers, sqrt(path.grid().dt()))?;
    let n = path.n_steps();
    let rhs_window: f64 = (0..n_bins).map(|j| field.at(j, n) * dx).sum();
    Ok(OccupationReport {
        lhs,
        rhs,
        diff: lhs - rhs,
        rhs_window,
        diff_window: lhs - rhs_window,
    })
}

/// `a + i(b−a)/2ⁿ`, `i = 0..=2ⁿ`, with the right end pinned to `b`.
pub fn dyadic_levels(a: f64, b: f64, n: u32) -> Vec<f64> {
    let m = 1usize << n;
    (0..=m)
        .map(|i| if i == m { b } else { a + (b - a) * i as f64 / m as f64 })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QvReport {
    /// `Σ_i (L^{a_{i+1}}_t − L^{a_i}_t)²` over the dyadic partition.
    pub sum_sq: f64,
    /// `4 ∫_a^b L^x_t dx` by the trapezoid rule over the field's levels.
    pub target: f64,
    /// `sum_sq / target`, `1` when both vanish.
    pub ratio: f64,
}

/// Quadratic variation of `x ↦ L^x_t` along the `n`-th dyadic partition of
/// `[a, b]`. Requires `σ̲ > 0`.
pub fn qv_of_local_time(
    field: &LocalTimeField,
    a: f64,
    b: f64,
    n: u32,
    t_index: usize,
    params: &GParams,
) -> Result<QvReport> {
    if params.sigma_lo() <= 0.0 {
        return Err(Error::Hypothesis(
            "quadratic variation of local time requires sigma_lo > 0",
        ));
    }
    if !(a < b) {
        return Err(invalid("interval needs a < b"));
    }
    if t_index >= field.n_times() {
        return Err(invalid("time index beyond the field"));
    }
    let levels = field.levels();
    let find = |x: f64| -> Result<usize> {
        let tol = 1e-12 * (1.0 + x.abs());
        let j = levels.partition_point(|&l| l < x - tol);
        if j < levels.len() && (levels[j] - x).abs() <= tol {
            Ok(j)
        } else {
            Err(invalid(alloc::format!("field has no level at {x}")))
        }
    };
    let idx: Vec<usize> = dyadic_levels(a, b, n)
        .into_iter()
        .map(find)
        .collect::<Result<_>>()?;
    let sum_sq = idx
        .windows(2)
        .map(|w| {
            let d = field.at(w[1], t_index) - field.at(w[0], t_index);
            d * d
        })
        .sum::<f64>();
    let (j0, j1) = (idx[0], idx[idx.len() - 1]);
    let xs = &levels[j0..=j1];
    let ys: Vec<f64> = (j0..=j1).map(|j| field.at(j, t_index)).collect();
    let target = 4.0 * trapezoid(xs, &ys);
    let ratio = if target == 0.0 {
        if sum_sq == 0.0 {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        sum_sq / target
    };
    Ok(QvReport {
        sum_sq,
        target,
        ratio,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FubiniReport {
    /// `∫ w(a) (∫₀ᵀ sgn(B−a) dB) da`.
    pub lhs: f64,
    /// `∫₀ᵀ (∫ w(a) sgn(B−a) da) dB`.
    pub rhs: f64,
    pub diff: f64,
}

/// Exchange of the level integral and the Itô sum, with the level integral
/// done by the trapezoid rule over `levels`.
pub fn stochastic_fubini_check<W>(path: &SamplePath, weight: W, levels: &[f64]) -> Result<FubiniReport>
where
    W: Fn(f64) -> f64,
{
    if levels.len() < 2 || !levels.windows(2).all(|w| w[0] < w[1]) {
        return Err(invalid("need at least two increasing levels"));
    }
    let values = path.values();
    let n = path.n_steps();
    let w: Vec<f64> = levels.iter().map(|&a| weight(a)).collect();

    let per_level: Vec<f64> = levels
        .iter()
        .map(|&a| {
            let eta: Vec<f64> = values[..n].iter().map(|&b| sgn(b - a)).collect();
            ito_sum_unchecked(values, &eta)[n]
        })
        .collect();
    let ys: Vec<f64> = w.iter().zip(&per_level).map(|(w, i)| w * i).collect();
    let lhs = trapezoid(levels, &ys);

    let eta: Vec<f64> = values[..n]
        .iter()
        .map(|&b| {
            let ys: Vec<f64> = w.iter().zip(levels).map(|(w, &a)| w * sgn(b - a)).collect();
            trapezoid(levels, &ys)
        })
        .collect();
    let rhs = ito_sum_unchecked(values, &eta)[n];
    Ok(FubiniReport {
        lhs,
        rhs,
        diff: lhs - rhs,
    })
}

/// Mean over level pairs `(a_j, a_{j+step})` of `max_t |L^{a_{j+step}}_t − L^{a_j}_t|`.
pub fn level_increment(field: &LocalTimeField, step: usize) -> f64 {
    let nl = field.levels().len();
    if step == 0 || step >= nl {
        return 0.0;
    }
    let mut acc = 0.0;
    for j in 0..nl - step {
        let (r0, r1) = (field.row(j), field.row(j + step));
        acc += r0
            .iter()
            .zip(r1)
            .fold(0.0f64, |m, (x, y)| m.max((y - x).abs()));
    }
    acc / (nl - step) as f64
}

#[derive(Debug, Clone, PartialEq)]
pub struct HolderReport {
    pub spacings: Vec<f64>,
    /// Path-averaged [`level_increment`] per spacing.
    pub increments: Vec<f64>,
    /// Least-squares slope of `log increment` on `log spacing`.
    pub exponent: f64,
}

/// Level-direction Hölder exponent from a set of fields sharing one uniform
/// level grid, using dyadic spacings `1, 2, 4, …, max_step` level steps.
pub fn holder_exponent(fields: &[LocalTimeField], max_step: usize) -> Result<HolderReport> {
    let first = fields.first().ok_or_else(|| invalid("no fields"))?;
    let levels = first.levels();
    if levels.len() < 3 {
        return Err(invalid("need at least three levels"));
    }
    if fields.iter().any(|f| f.levels() != levels) {
        return Err(invalid("fields use different level grids"));
    }
    let h0 = levels[1] - levels[0];
    let mut steps = Vec::new();
    let mut s = 1;
    while s <= max_step && s < levels.len() {
        steps.push(s);
        s *= 2;
    }
    if steps.len() < 2 {
        return Err(invalid("need at least two spacings"));
    }
    let spacings: Vec<f64> = steps.iter().map(|&s| s as f64 * h0).collect();
    let increments: Vec<f64> = steps
        .iter()
        .map(|&s| fields.iter().map(|f| level_increment(f, s)).sum::<f64>() / fields.len() as f64)
        .collect();
    if increments.iter().any(|d| !(*d > 0.0)) {
        return Err(invalid("vanishing increments; the levels are not visited"));
    }
    let xs: Vec<f64> = spacings.iter().map(|&h| ln(h)).collect();
    let ys: Vec<f64> = increments.iter().map(|&d| ln(d)).collect();
    Ok(HolderReport {
        exponent: ols_slope(&xs, &ys),
        spacings,
        increments,
    })
}
