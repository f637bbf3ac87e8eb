//! Sublinear expectation as a supremum of Monte Carlo means over controls.
//!
//! Every control in a [`ControlFamily`] is driven by the same noise streams
//! (common random numbers): path `p` always uses `seeds.offset(p)`. The
//! resulting estimator is itself a sublinear functional on the fixed sample,
//! so monotonicity, constant preservation, subadditivity and positive
//! homogeneity hold exactly rather than statistically.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{invalid, Error, Result};
use crate::exec::Executor;
use crate::grid::TimeGrid;
use crate::math::powf;
use crate::params::GParams;
use crate::rng::{fill_normals, SeedSpec};
use crate::sampler::{ito_sum_unchecked, sample_path, ControlPath, SamplePath};
use crate::stats::mean_and_std_error;

pub const MAX_BLOCKS: usize = 12;

/// A finite set of deterministic controls standing in for the measure family.
///
/// Controls are stored deduplicated and sorted by signature, so results never
/// depend on the order in which candidates were supplied.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlFamily {
    grid: TimeGrid,
    params: GParams,
    blocks: usize,
    ladder: usize,
    controls: Vec<ControlPath>,
}

impl ControlFamily {
    /// Bang-bang controls on `blocks` coarse blocks (all `2^blocks` patterns)
    /// together with the constants on a `ladder`-point ladder in `[σ̲, σ̄]`.
    pub fn new(grid: TimeGrid, params: GParams, blocks: usize, ladder: usize) -> Result<Self> {
        if blocks == 0 || blocks > MAX_BLOCKS {
            return Err(invalid(alloc::format!("block count must be in 1..={MAX_BLOCKS}")));
        }
        if blocks > grid.n_steps() {
            return Err(invalid("more control blocks than time steps"));
        }
        if ladder < 2 {
            return Err(invalid("ladder needs at least the two endpoints"));
        }
        let n = grid.n_steps();
        let (lo, hi) = (params.sigma_lo(), params.sigma_hi());
        let mut controls = Vec::with_capacity((1 << blocks) + ladder);
        for mask in 0u32..(1u32 << blocks) {
            let sigmas = (0..n)
                .map(|i| {
                    let b = i * blocks / n;
                    if mask & (1 << b) != 0 {
                        hi
                    } else {
                        lo
                    }
                })
                .collect();
            controls.push(ControlPath::new(grid, sigmas, &params)?);
        }
        for m in 0..ladder {
            let s = if m == ladder - 1 {
                hi
            } else {
                lo + (hi - lo) * m as f64 / (ladder - 1) as f64
            };
            controls.push(ControlPath::constant(grid, s, &params)?);
        }
        Ok(Self::assemble(grid, params, blocks, ladder, controls))
    }

    /// Family made of the given controls plus the two extreme constants.
    pub fn from_controls(grid: TimeGrid, params: GParams, controls: Vec<ControlPath>) -> Result<Self> {
        let mut all = Vec::with_capacity(controls.len() + 2);
        for c in controls {
            if c.grid() != &grid {
                return Err(invalid("control grid differs from family grid"));
            }
            all.push(ControlPath::new(grid, c.sigmas().to_vec(), &params)?);
        }
        all.push(ControlPath::constant(grid, params.sigma_lo(), &params)?);
        all.push(ControlPath::constant(grid, params.sigma_hi(), &params)?);
        Ok(Self::assemble(grid, params, 0, 0, all))
    }

    /// Family made of exactly the given controls, without the endpoint
    /// constants. Useful for single-measure (classical) estimates.
    pub fn exact(grid: TimeGrid, params: GParams, controls: Vec<ControlPath>) -> Result<Self> {
        if controls.is_empty() {
            return Err(invalid("empty control family"));
        }
        for c in &controls {
            if c.grid() != &grid {
                return Err(invalid("control grid differs from family grid"));
            }
            ControlPath::new(grid, c.sigmas().to_vec(), &params)?;
        }
        Ok(Self::assemble(grid, params, 0, 0, controls))
    }

    /// Union with another family on the same grid and band.
    pub fn union(&self, other: &Self) -> Result<Self> {
        if self.grid != other.grid || self.params != other.params {
            return Err(invalid("families live on different grids or bands"));
        }
        let mut all = self.controls.clone();
        all.extend(other.controls.iter().cloned());
        Ok(Self::assemble(self.grid, self.params, self.blocks, self.ladder, all))
    }

    fn assemble(
        grid: TimeGrid,
        params: GParams,
        blocks: usize,
        ladder: usize,
        mut controls: Vec<ControlPath>,
    ) -> Self {
        controls.sort_by(|a, b| a.signature_cmp(b));
        controls.dedup_by(|a, b| a.signature_cmp(b).is_eq());
        Self {
            grid,
            params,
            blocks,
            ladder,
            controls,
        }
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn params(&self) -> &GParams {
        &self.params
    }

    pub fn block_count(&self) -> usize {
        self.blocks
    }

    pub fn ladder_size(&self) -> usize {
        self.ladder
    }

    pub fn controls(&self) -> &[ControlPath] {
        &self.controls
    }

    pub fn len(&self) -> usize {
        self.controls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.controls.is_empty()
    }
}

/// Functional values of every (path, control) pair, `width` numbers each.
#[derive(Debug, Clone, PartialEq)]
pub struct PathTable {
    n_paths: usize,
    n_controls: usize,
    width: usize,
    data: Vec<f64>,
}

impl PathTable {
    pub fn n_paths(&self) -> usize {
        self.n_paths
    }

    pub fn n_controls(&self) -> usize {
        self.n_controls
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn get(&self, path: usize, control: usize, k: usize) -> f64 {
        self.data[(path * self.n_controls + control) * self.width + k]
    }

    /// Column `k` of control `c` across paths, in path order.
    pub fn column(&self, control: usize, k: usize) -> impl Iterator<Item = f64> + Clone + '_ {
        (0..self.n_paths).map(move |p| self.get(p, control, k))
    }

    fn check_finite(&self) -> Result<()> {
        for p in 0..self.n_paths {
            for c in 0..self.n_controls {
                for k in 0..self.width {
                    let v = self.get(p, c, k);
                    if !v.is_finite() {
                        return Err(Error::NonFinite {
                            control: c,
                            path: p,
                            value: v,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Sup over controls of the mean of column `k`.
    pub fn estimate(&self, family: &ControlFamily, k: usize) -> EstimateReport {
        let mut means = Vec::with_capacity(self.n_controls);
        let mut errors = Vec::with_capacity(self.n_controls);
        for c in 0..self.n_controls {
            let (m, se) = mean_and_std_error(self.column(c, k));
            means.push(m);
            errors.push(se);
        }
        // Controls are sorted by signature, so the first maximum is the
        // lexicographically smallest maximizer.
        let mut best = 0;
        for c in 1..means.len() {
            if means[c] > means[best] {
                best = c;
            }
        }
        EstimateReport {
            value: means[best],
            argmax_index: best,
            argmax_control: family.controls[best].clone(),
            std_error: errors[best],
            n_paths: self.n_paths,
            per_control_means: means,
            per_control_std_errors: errors,
        }
    }
}

/// Evaluates `functional` on every control of `family` for `n_paths` common
/// noise streams. `functional` writes `width` numbers per path.
pub fn sample_table<F, E>(
    family: &ControlFamily,
    n_paths: usize,
    seeds: SeedSpec,
    width: usize,
    exec: &E,
    functional: F,
) -> Result<PathTable>
where
    F: Fn(&SamplePath, &mut [f64]) + Sync + Send,
    E: Executor,
{
    let n = family.grid.n_steps();
    let nc = family.controls.len();
    let rows: Vec<Result<Vec<f64>>> = exec.map(n_paths, |p| {
        let mut noise = vec![0.0; n];
        fill_normals(seeds.offset(p), &mut noise);
        let mut row = vec![0.0; nc * width];
        for (c, control) in family.controls.iter().enumerate() {
            let path = sample_path(control, &noise)?;
            functional(&path, &mut row[c * width..(c + 1) * width]);
        }
        Ok(row)
    });
    let mut data = Vec::with_capacity(n_paths * nc * width);
    for r in rows {
        data.extend_from_slice(&r?);
    }
    let table = PathTable {
        n_paths,
        n_controls: nc,
        width,
        data,
    };
    table.check_finite()?;
    Ok(table)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimateReport {
    /// Maximum of `per_control_means`.
    pub value: f64,
    pub argmax_index: usize,
    pub argmax_control: ControlPath,
    /// Standard error of the maximizing control's mean.
    pub std_error: f64,
    pub n_paths: usize,
    pub per_control_means: Vec<f64>,
    pub per_control_std_errors: Vec<f64>,
}

pub fn sublinear_expectation<F, E>(
    functional: F,
    family: &ControlFamily,
    n_paths: usize,
    seeds: SeedSpec,
    exec: &E,
) -> Result<EstimateReport>
where
    F: Fn(&SamplePath) -> f64 + Sync + Send,
    E: Executor,
{
    if n_paths < 2 {
        return Err(invalid("need at least two paths"));
    }
    let table = sample_table(family, n_paths, seeds, 1, exec, |path, out| {
        out[0] = functional(path)
    })?;
    Ok(table.estimate(family, 0))
}

/// Moment estimates of the BDG-type check for a step integrand.
#[derive(Debug, Clone, PartialEq)]
pub struct BdgReport {
    pub p: f64,
    /// `Ê[sup_t |∫η dB|^{2p}]`.
    pub lhs: f64,
    /// `Ê[(∫η² d⟨B⟩)^p]`.
    pub mid: f64,
    /// `σ̄^{2p} Ê[(∫η² ds)^p]`.
    pub hi: f64,
    /// `σ̲^{2p} Ê[(∫η² ds)^p]`.
    pub lo: f64,
    /// `Ê[∫₀ᵀ η dB]`; zero in theory.
    pub integral: EstimateReport,
    /// Whether `lo ≤ mid ≤ hi` held on every (path, control) pair.
    pub pathwise_ordered: bool,
    pub c_p: f64,
}

impl BdgReport {
    pub fn ratio(&self) -> f64 {
        if self.mid == 0.0 {
            if self.lhs == 0.0 {
                1.0
            } else {
                f64::INFINITY
            }
        } else {
            self.lhs / self.mid
        }
    }

    /// `lhs / mid ∈ [1/c_p, c_p]` (vacuous when everything vanishes).
    pub fn within_constant(&self) -> bool {
        if self.lhs == 0.0 && self.mid == 0.0 {
            return true;
        }
        let r = self.ratio();
        r >= 1.0 / self.c_p && r <= self.c_p
    }
}

pub fn bdg_check<I, E>(
    integrand: I,
    family: &ControlFamily,
    p: f64,
    c_p: f64,
    n_paths: usize,
    seeds: SeedSpec,
    exec: &E,
) -> Result<BdgReport>
where
    I: Fn(&SamplePath) -> Vec<f64> + Sync + Send,
    E: Executor,
{
    if !(p >= 1.0 && p.is_finite()) {
        return Err(invalid("BDG exponent p must be >= 1"));
    }
    if !(c_p >= 1.0) {
        return Err(invalid("BDG constant must be >= 1"));
    }
    if n_paths < 2 {
        return Err(invalid("need at least two paths"));
    }
    let n = family.grid.n_steps();
    let dt = family.grid.dt();
    let (slo, shi) = (family.params.sigma_lo(), family.params.sigma_hi());
    let (lo_step, hi_step) = (slo * slo * dt, shi * shi * dt);
    let pw = move |x: f64| if p == 1.0 { x } else { powf(x, p) };
    // Columns: sup|I|^{2p}, mid, hi, lo, I_T, ordered flag.
    let table = sample_table(family, n_paths, seeds, 6, exec, |path, out| {
        let eta = integrand(path);
        if eta.len() != n {
            out.fill(f64::NAN);
            return;
        }
        let ito = ito_sum_unchecked(path.values(), &eta);
        let sup = ito.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let (mut mid, mut hi, mut lo) = (0.0, 0.0, 0.0);
        for (e, d) in eta.iter().zip(path.qv_increments()) {
            let e2 = e * e;
            mid += e2 * d;
            hi += e2 * hi_step;
            lo += e2 * lo_step;
        }
        let (mid, hi, lo) = (pw(mid), pw(hi), pw(lo));
        out[0] = pw(sup * sup);
        out[1] = mid;
        out[2] = hi;
        out[3] = lo;
        out[4] = ito[n];
        out[5] = if lo <= mid && mid <= hi { 1.0 } else { 0.0 };
    })?;
    let pathwise_ordered = (0..table.n_controls()).all(|c| table.column(c, 5).all(|v| v == 1.0));
    Ok(BdgReport {
        p,
        lhs: table.estimate(family, 0).value,
        mid: table.estimate(family, 1).value,
        hi: table.estimate(family, 2).value,
        lo: table.estimate(family, 3).value,
        integral: table.estimate(family, 4),
        pathwise_ordered,
        c_p,
    })
}
