//! Small order-fixed reductions shared by the estimators.

use crate::math::sqrt;

/// Sample mean and standard error of the mean, summed left to right.
pub fn mean_and_std_error<I>(values: I) -> (f64, f64)
where
    I: IntoIterator<Item = f64> + Clone,
{
    let mut n = 0usize;
    let mut sum = 0.0;
    for v in values.clone() {
        sum += v;
        n += 1;
    }
    if n == 0 {
        return (0.0, 0.0);
    }
    let mean = sum / n as f64;
    if n < 2 {
        return (mean, 0.0);
    }
    let mut ss = 0.0;
    for v in values {
        let d = v - mean;
        ss += d * d;
    }
    let var = ss / (n - 1) as f64;
    (mean, sqrt(var / n as f64))
}

/// Composite trapezoid rule on possibly non-uniform nodes.
pub fn trapezoid(xs: &[f64], ys: &[f64]) -> f64 {
    debug_assert_eq!(xs.len(), ys.len());
    let mut acc = 0.0;
    for i in 1..xs.len() {
        acc += 0.5 * (xs[i] - xs[i - 1]) * (ys[i] + ys[i - 1]);
    }
    acc
}

/// Least-squares slope of `ys` on `xs`.
pub fn ols_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    sxy / sxx
}
