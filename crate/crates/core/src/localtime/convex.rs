//! Itô formula for convex functions with a finite curvature measure.

use alloc::boxed::Box;
use alloc::vec::Vec;

use super::field::local_time_field;
use super::mollifier::check_eps;
use crate::error::{invalid, Result};
use crate::math::ceil;
use crate::sampler::{ito_sum_unchecked, SamplePath};
use crate::stats::trapezoid;

type RealFn = Box<dyn Fn(f64) -> f64 + Send + Sync>;

/// Piecewise-constant non-negative density on `[breaks[0], breaks[m]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseDensity {
    breaks: Vec<f64>,
    values: Vec<f64>,
}

impl PiecewiseDensity {
    pub fn new(breaks: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if breaks.len() != values.len() + 1 || values.is_empty() {
            return Err(invalid("density needs one value per break interval"));
        }
        if !breaks.windows(2).all(|w| w[0] < w[1]) || !breaks.iter().all(|b| b.is_finite()) {
            return Err(invalid("density breaks must be finite and increasing"));
        }
        if !values.iter().all(|v| *v >= 0.0 && v.is_finite()) {
            return Err(invalid("density values must be finite and non-negative"));
        }
        Ok(Self { breaks, values })
    }

    pub fn breaks(&self) -> &[f64] {
        &self.breaks
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `∫_a^b ρ`.
    pub fn mass(&self, a: f64, b: f64) -> f64 {
        let mut m = 0.0;
        for (w, v) in self.breaks.windows(2).zip(&self.values) {
            let lo = w[0].max(a);
            let hi = w[1].min(b);
            if hi > lo {
                m += v * (hi - lo);
            }
        }
        m
    }
}

/// A convex `f` given with its left derivative and `μ = f''`.
pub struct ConvexSpec {
    f: RealFn,
    f_left: RealFn,
    atoms: Vec<(f64, f64)>,
    density: Option<PiecewiseDensity>,
}

impl core::fmt::Debug for ConvexSpec {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("ConvexSpec")
            .field("atoms", &self.atoms)
            .field("density", &self.density)
            .finish_non_exhaustive()
    }
}

const PROBES: usize = 257;
const CONSISTENCY_TOL: f64 = 1e-8;

impl ConvexSpec {
    /// Builds and checks `f'_−(b) − f'_−(a) = μ[a, b)` on a probe grid that
    /// straddles the support.
    pub fn new<F, D>(
        f: F,
        f_left: D,
        atoms: Vec<(f64, f64)>,
        density: Option<PiecewiseDensity>,
    ) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
        D: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if !atoms.iter().all(|(x, w)| x.is_finite() && w.is_finite() && *w >= 0.0) {
            return Err(invalid("atoms need finite locations and non-negative weights"));
        }
        let spec = Self {
            f: Box::new(f),
            f_left: Box::new(f_left),
            atoms,
            density,
        };
        spec.check_consistency()?;
        Ok(spec)
    }

    pub fn affine(slope: f64, intercept: f64) -> Result<Self> {
        Self::new(move |x| slope * x + intercept, move |_| slope, Vec::new(), None)
    }

    /// `|x − a|`, `μ = 2δ_a`.
    pub fn abs_at(a: f64) -> Result<Self> {
        Self::new(
            move |x| (x - a).abs(),
            move |x| if x <= a { -1.0 } else { 1.0 },
            alloc::vec![(a, 2.0)],
            None,
        )
    }

    /// `(x − a)⁺`, `μ = δ_a`.
    pub fn positive_part(a: f64) -> Result<Self> {
        Self::new(
            move |x| (x - a).max(0.0),
            move |x| if x <= a { 0.0 } else { 1.0 },
            alloc::vec![(a, 1.0)],
            None,
        )
    }

    /// `(x − a)⁻`, `μ = δ_a`.
    pub fn negative_part(a: f64) -> Result<Self> {
        Self::new(
            move |x| (a - x).max(0.0),
            move |x| if x <= a { -1.0 } else { 0.0 },
            alloc::vec![(a, 1.0)],
            None,
        )
    }

    /// `c + s x + Σ_j w_j (x − k_j)⁺` with slope jumps `w_j ≥ 0` at kinks `k_j`.
    pub fn piecewise_linear(intercept: f64, slope: f64, kinks: Vec<(f64, f64)>) -> Result<Self> {
        let kf = kinks.clone();
        let kd = kinks.clone();
        Self::new(
            move |x| {
                kf.iter()
                    .fold(intercept + slope * x, |acc, &(k, w)| acc + w * (x - k).max(0.0))
            },
            move |x| {
                kd.iter()
                    .fold(slope, |acc, &(k, w)| if x > k { acc + w } else { acc })
            },
            kinks,
            None,
        )
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.f)(x)
    }

    pub fn left_derivative(&self, x: f64) -> f64 {
        (self.f_left)(x)
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    pub fn density(&self) -> Option<&PiecewiseDensity> {
        self.density.as_ref()
    }

    /// Smallest interval containing the support of `μ`, if `μ ≠ 0`.
    pub fn support(&self) -> Option<(f64, f64)> {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for &(x, w) in &self.atoms {
            if w > 0.0 {
                lo = lo.min(x);
                hi = hi.max(x);
            }
        }
        if let Some(d) = &self.density {
            lo = lo.min(d.breaks[0]);
            hi = hi.max(d.breaks[d.breaks.len() - 1]);
        }
        (lo <= hi).then_some((lo, hi))
    }

    /// `μ[a, b)`.
    pub fn measure(&self, a: f64, b: f64) -> f64 {
        let atoms: f64 = self
            .atoms
            .iter()
            .filter(|(x, _)| a <= *x && *x < b)
            .map(|(_, w)| w)
            .sum();
        atoms + self.density.as_ref().map_or(0.0, |d| d.mass(a, b))
    }

    pub fn total_mass(&self) -> f64 {
        self.measure(f64::NEG_INFINITY, f64::INFINITY)
    }

    fn atom_mass_at(&self, x: f64) -> f64 {
        self.atoms.iter().filter(|(a, _)| *a == x).map(|(_, w)| w).sum()
    }

    /// Integrand used for `∫ f'(B) dB`: `f'_−(x) + ½μ({x})`.
    ///
    /// Off the atoms this is `f'_−`; on an atom it is the mean of the one-sided
    /// derivatives, the value that matches `sgn(0) = 0` for `f = |x|`.
    pub fn ito_integrand(&self, x: f64) -> f64 {
        let m = self.atom_mass_at(x);
        if m == 0.0 {
            (self.f_left)(x)
        } else {
            (self.f_left)(x) + 0.5 * m
        }
    }

    fn check_consistency(&self) -> Result<()> {
        let (lo, hi) = self.support().unwrap_or((-1.0, 1.0));
        let pad = 0.25 * (hi - lo) + 1.0;
        let (lo, hi) = (lo - pad, hi + pad);
        let scale = 1.0 + self.total_mass();
        let probe = |i: usize| lo + (hi - lo) * i as f64 / (PROBES - 1) as f64;
        let x0 = probe(0);
        let d0 = (self.f_left)(x0);
        for i in 1..PROBES {
            let x = probe(i);
            let lhs = (self.f_left)(x) - d0;
            let rhs = self.measure(x0, x);
            if !((lhs - rhs).abs() <= CONSISTENCY_TOL * scale) {
                return Err(invalid(alloc::format!(
                    "left derivative increment {lhs} on [{x0}, {x}) does not match curvature mass {rhs}"
                )));
            }
        }
        // Atom locations are probed from both sides.
        for &(a, _) in &self.atoms {
            let b = a + 1e-9 * (1.0 + a.abs());
            let lhs = (self.f_left)(b) - (self.f_left)(a);
            let rhs = self.measure(a, b);
            if !((lhs - rhs).abs() <= CONSISTENCY_TOL * scale) {
                return Err(invalid(alloc::format!(
                    "left derivative jump {lhs} at {a} does not match curvature mass {rhs}"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvexItoReport {
    /// Signed residual at every time node.
    pub residuals: Vec<f64>,
    /// `sup_k |residual_k|`.
    pub sup_abs: f64,
    pub terminal: f64,
}

/// Residual of `f(B_t) = f(0) + ∫ f'_−(B) dB + ½∫ L^a_t μ(da)` on one path.
///
/// Local times come from the window estimator with bandwidth `eps`; the
/// density part of `μ` is integrated by the trapezoid rule on a level grid
/// with spacing at most `eps`.
pub fn convex_ito_check(spec: &ConvexSpec, path: &SamplePath, eps: f64) -> Result<ConvexItoReport> {
    check_eps(eps)?;
    let values = path.values();
    let n = path.n_steps();
    let eta: Vec<f64> = values[..n].iter().map(|&b| spec.ito_integrand(b)).collect();
    let ito = ito_sum_unchecked(values, &eta);

    let mut lt = alloc::vec![0.0; n + 1];
    if !spec.atoms.is_empty() {
        let mut locs: Vec<f64> = spec.atoms.iter().map(|a| a.0).collect();
        locs.sort_by(|a, b| a.total_cmp(b));
        locs.dedup();
        let field = local_time_field(path, &locs, eps)?;
        for &(x, w) in &spec.atoms {
            let j = locs.partition_point(|&l| l < x);
            for (acc, l) in lt.iter_mut().zip(field.row(j)) {
                *acc += w * l;
            }
        }
    }
    if let Some(d) = &spec.density {
        let mut levels = Vec::new();
        let mut pieces = Vec::with_capacity(d.values.len());
        for w in d.breaks.windows(2) {
            let m = (ceil((w[1] - w[0]) / eps) as usize).max(1);
            let start = levels.len();
            for i in 0..=m {
                levels.push(if i == m { w[1] } else { w[0] + (w[1] - w[0]) * i as f64 / m as f64 });
            }
            pieces.push(start..levels.len());
        }
        let mut sorted = levels.clone();
        sorted.sort_by(|a, b| a.total_cmp(b));
        sorted.dedup();
        let field = local_time_field(path, &sorted, eps)?;
        for (range, &rho) in pieces.into_iter().zip(&d.values) {
            let xs = &levels[range];
            let rows: Vec<usize> = xs.iter().map(|x| sorted.partition_point(|l| l < x)).collect();
            for (k, acc) in lt.iter_mut().enumerate() {
                let ys: Vec<f64> = rows.iter().map(|&j| field.at(j, k)).collect();
                *acc += rho * trapezoid(xs, &ys);
            }
        }
    }

    let f0 = spec.eval(0.0);
    let residuals: Vec<f64> = values
        .iter()
        .zip(&ito)
        .zip(&lt)
        .map(|((&b, &s), &l)| ((spec.eval(b) - f0) - s) - 0.5 * l)
        .collect();
    let sup_abs = residuals.iter().fold(0.0f64, |m, r| m.max(r.abs()));
    Ok(ConvexItoReport {
        terminal: residuals[n],
        sup_abs,
        residuals,
    })
}
