use alloc::vec::Vec;

use super::mollifier::check_eps;
use crate::error::{invalid, Result};
use crate::math::{floor, sgn};
use crate::sampler::{ito_sum_unchecked, SamplePath};

/// `|x − a| − |a|`, written as `s·x` when `x − a` and `−a` share the sign
/// `s`, which is the same number without the cancellation.
pub(crate) fn abs_shift(x: f64, a: f64) -> f64 {
    let s = sgn(x - a);
    if s != 0.0 && s == sgn(-a) {
        s * x
    } else {
        (x - a).abs() - a.abs()
    }
}

#[inline]
pub(crate) fn in_window(b: f64, a: f64, eps: f64) -> bool {
    a - eps < b && b < a + eps
}

/// `(1/2ε) Σ_{i<k} 1_(a−ε,a+ε)(B_{t_i}) Δ⟨B⟩_i` for every `k`.
pub fn window_local_time(path: &SamplePath, a: f64, eps: f64) -> Result<Vec<f64>> {
    check_eps(eps)?;
    let two_eps = 2.0 * eps;
    let mut out = Vec::with_capacity(path.values().len());
    let mut occ = 0.0;
    out.push(0.0);
    for (&b, &d) in path.values().iter().zip(path.qv_increments()) {
        if in_window(b, a, eps) {
            occ += d;
        }
        out.push(occ / two_eps);
    }
    Ok(out)
}

/// `|B_{t_k} − a| − |a| − Σ_{i<k} sgn(B_{t_i} − a) ΔB_i` for every `k`.
pub fn tanaka_local_time(path: &SamplePath, a: f64) -> Vec<f64> {
    let values = path.values();
    let eta: Vec<f64> = values[..values.len() - 1].iter().map(|&b| sgn(b - a)).collect();
    let ito = ito_sum_unchecked(values, &eta);
    values
        .iter()
        .zip(&ito)
        .map(|(&b, &s)| abs_shift(b, a) - s)
        .collect()
}

/// `sup_k |L^{window}_k − L^{Tanaka}_k|`.
pub fn tanaka_residual(path: &SamplePath, a: f64, eps: f64) -> Result<f64> {
    let w = window_local_time(path, a, eps)?;
    let t = tanaka_local_time(path, a);
    Ok(w.iter()
        .zip(&t)
        .fold(0.0f64, |m, (x, y)| m.max((y - x).abs())))
}

/// Histogram local times on `n_bins` equal bins tiling `(a, b)`.
///
/// Bins are `[a + jΔx, a + (j+1)Δx)`, except that `a` itself belongs to no
/// bin, so the bins partition the open interval exactly. Returns the bin
/// centers and `L^{x_j}_{t_k} = (1/Δx) Σ_{i<k, B_i ∈ bin j} Δ⟨B⟩_i`.
pub fn binned_local_times(
    path: &SamplePath,
    a: f64,
    b: f64,
    n_bins: usize,
    k: usize,
) -> Result<(Vec<f64>, Vec<f64>)> {
    if !(a < b) {
        return Err(invalid("interval needs a < b"));
    }
    if n_bins == 0 {
        return Err(invalid("need at least one bin"));
    }
    if k > path.n_steps() {
        return Err(invalid("time index beyond the path"));
    }
    let dx = (b - a) / n_bins as f64;
    let mut occ = alloc::vec![0.0; n_bins];
    for (&x, &d) in path.values()[..k].iter().zip(path.qv_increments()) {
        if a < x && x < b {
            occ[bin_index(x, a, dx, n_bins)] += d;
        }
    }
    let centers = (0..n_bins).map(|j| a + (j as f64 + 0.5) * dx).collect();
    let lt = occ.iter().map(|o| o / dx).collect();
    Ok((centers, lt))
}

pub(crate) fn bin_index(x: f64, a: f64, dx: f64, n_bins: usize) -> usize {
    let j = floor((x - a) / dx);
    if j <= 0.0 {
        0
    } else {
        (j as usize).min(n_bins - 1)
    }
}
