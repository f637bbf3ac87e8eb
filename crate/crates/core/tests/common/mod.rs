//! Independent oracles for the numerical tests. Nothing here calls into the
//! estimators under test.

#![allow(dead_code)]

use gcalc_core::{make_grid, normal_stream, sample_path, ControlPath, GParams, SamplePath, SeedSpec};

pub const SQRT_2_OVER_PI: f64 = 0.797_884_560_802_865_4;

pub fn classical_path(n: usize, sigma: f64, seed: u64, stream: u64) -> SamplePath {
    let p = GParams::classical(sigma).unwrap();
    let c = ControlPath::constant(make_grid(1.0, n).unwrap(), sigma, &p).unwrap();
    sample_path(&c, &normal_stream(SeedSpec::new(seed, stream), n)).unwrap()
}

/// Gauss–Hermite nodes and weights for `∫ e^{-x²} f(x) dx` (Newton on the
/// three-term recurrence of the orthonormal Hermite polynomials).
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    let pim4 = std::f64::consts::PI.powf(-0.25);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    let mut z = 0.0f64;
    for i in 0..m {
        z = match i {
            0 => (2.0 * n as f64 + 1.0).sqrt() - 1.85575 * (2.0 * n as f64 + 1.0).powf(-1.0 / 6.0),
            1 => z - 1.14 * (n as f64).powf(0.426) / z,
            2 => 1.86 * z - 0.86 * x[0],
            3 => 1.91 * z - 0.91 * x[1],
            _ => 2.0 * z - x[i - 2],
        };
        let mut pp = 0.0;
        for _ in 0..100 {
            let mut p1 = pim4;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                p1 = z * (2.0 / (j as f64 + 1.0)).sqrt() * p2 - (j as f64 / (j as f64 + 1.0)).sqrt() * p3;
            }
            pp = (2.0 * n as f64).sqrt() * p2;
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() < 1e-14 {
                break;
            }
        }
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = 2.0 / (pp * pp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// `E[f(s Z)]`, `Z ~ N(0, 1)`, by Gauss–Hermite.
pub fn gaussian_mean<F: Fn(f64) -> f64>(f: F, s: f64, n: usize) -> f64 {
    let (x, w) = gauss_hermite(n);
    let norm = std::f64::consts::PI.sqrt();
    x.iter()
        .zip(&w)
        .map(|(xi, wi)| wi * f(s * std::f64::consts::SQRT_2 * xi))
        .sum::<f64>()
        / norm
}

/// Composite Simpson on `[a, b]` with `m` (even) intervals.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, m: usize) -> f64 {
    let h = (b - a) / m as f64;
    let mut acc = f(a) + f(b);
    for i in 1..m {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + i as f64 * h);
    }
    acc * h / 3.0
}

/// `E ∫₀ᵗ 1_(a,b)(σ B_s) σ² ds` for a standard Brownian motion.
pub fn expected_occupation(a: f64, b: f64, sigma: f64, t: f64) -> f64 {
    let phi = |x: f64| 0.5 * (1.0 + libm::erf(x / std::f64::consts::SQRT_2));
    let p = |s: f64| {
        if s == 0.0 {
            if a < 0.0 && 0.0 < b { 1.0 } else { 0.0 }
        } else {
            let sd = sigma * s.sqrt();
            phi(b / sd) - phi(a / sd)
        }
    };
    sigma * sigma * simpson(p, 0.0, t, 20_000)
}

pub fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let v = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0);
    (m, (v / n).sqrt())
}

#[test]
fn oracles_self_check() {
    assert!((gaussian_mean(|x| x * x, 1.0, 40) - 1.0).abs() < 1e-12);
    assert!((gaussian_mean(|x| x.powi(4), 2.0, 40) - 48.0).abs() < 1e-9);
    // The kink at 0 limits Gauss–Hermite to O(1/n) on |x|.
    assert!((gaussian_mean(f64::abs, 1.0, 100) - SQRT_2_OVER_PI).abs() < 4e-3);
    assert!((simpson(|x| x * x, 0.0, 3.0, 10) - 9.0).abs() < 1e-12);
    // Whole line: E ∫ σ² ds = σ² t.
    assert!((expected_occupation(-50.0, 50.0, 0.5, 2.0) - 0.5).abs() < 1e-9);
}
