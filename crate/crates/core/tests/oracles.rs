//! Operation examples checked against independent oracles.

mod common;

use common::*;
use gcalc_core::localtime::*;
use gcalc_core::*;

#[test]
fn normal_stream_moments() {
    let xs = normal_stream(SeedSpec::new(2024, 0), 1_000_000);
    let (m, _) = mean_se(&xs);
    let var = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64;
    // 4e-3 ≈ 4 standard errors of the mean at 10⁶ draws; var se ≈ √2/1000.
    assert!(m.abs() < 4e-3, "mean {m}");
    assert!((var - 1.0).abs() < 1e-2, "var {var}");
}

#[test]
fn terminal_variance_monte_carlo() {
    let b1: Vec<f64> = (0..10_000).map(|p| classical_path(64, 1.0, 1, p).terminal()).collect();
    let (m, _) = mean_se(&b1);
    let var = b1.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (b1.len() - 1) as f64;
    assert!((var - 1.0).abs() < 0.05, "{var}");
}

#[test]
fn realized_variance_law_of_large_numbers() {
    let path = classical_path(10_000, 1.0, 3, 0);
    let rv = qv_from_increments(&path);
    assert!((rv[10_000] - 1.0).abs() < 0.1, "{}", rv[10_000]);
}

#[test]
fn realized_and_analytic_qv_agree_in_mean() {
    let p = GParams::new(0.5, 1.0).unwrap();
    let g = make_grid(1.0, 256).unwrap();
    let sig: Vec<f64> = (0..256).map(|i| if i % 3 == 0 { 0.5 } else { 0.9 }).collect();
    let c = ControlPath::new(g, sig, &p).unwrap();
    let diffs: Vec<f64> = (0..2000)
        .map(|k| {
            let path = sample_path(&c, &normal_stream(SeedSpec::new(8, k), 256)).unwrap();
            qv_from_increments(&path)[256] - path.qv()[256]
        })
        .collect();
    let (m, se) = mean_se(&diffs);
    assert!(m.abs() < 3.0 * se, "{m} {se}");
}

#[test]
fn sup_expectation_of_squares_matches_pde() {
    let params = GParams::new(0.5, 1.0).unwrap();
    let g = make_grid(1.0, 64).unwrap();
    let fam = ControlFamily::exact(
        g,
        params,
        vec![
            ControlPath::constant(g, 0.5, &params).unwrap(),
            ControlPath::constant(g, 1.0, &params).unwrap(),
        ],
    )
    .unwrap();
    let grid = SpaceGrid::for_horizon(&params, 1.0, 0.05).unwrap();
    let seeds = SeedSpec::new(77, 0);

    let up = sublinear_expectation(|p| p.terminal().powi(2), &fam, 10_000, seeds, &Serial).unwrap();
    let pde_up = gnormal_expectation(|x| x * x, 1.0, &params, &grid).unwrap();
    assert!((up.value - pde_up).abs() < 3.0 * up.std_error, "{} vs {pde_up}", up.value);

    let dn = sublinear_expectation(|p| -p.terminal().powi(2), &fam, 10_000, seeds, &Serial).unwrap();
    let pde_dn = gnormal_expectation(|x| -x * x, 1.0, &params, &grid).unwrap();
    assert!((dn.value - pde_dn).abs() < 3.0 * dn.std_error, "{} vs {pde_dn}", dn.value);
    assert_eq!(dn.argmax_control.sigmas()[0], 0.5);
}

#[test]
fn gheat_absolute_value() {
    let params = GParams::new(0.5, 1.0).unwrap();
    let grid = SpaceGrid::for_horizon(&params, 1.0, 0.02).unwrap();
    let up = gnormal_expectation(f64::abs, 1.0, &params, &grid).unwrap();
    let dn = gnormal_expectation(|x: f64| -x.abs(), 1.0, &params, &grid).unwrap();
    assert!((up - SQRT_2_OVER_PI).abs() < 1e-3, "{up}");
    assert!((dn + 0.5 * SQRT_2_OVER_PI).abs() < 1e-3, "{dn}");
}

#[test]
fn gheat_classical_matches_gauss_hermite() {
    let params = GParams::classical(1.0).unwrap();
    let grid = SpaceGrid::for_horizon(&params, 1.0, 0.02).unwrap();
    let pde = gnormal_expectation(f64::abs, 1.0, &params, &grid).unwrap();
    let gh = gaussian_mean(f64::abs, 1.0, 100);
    assert!((pde - gh).abs() < 5e-3, "{pde} vs {gh}");
    // Smooth payoff: tighter.
    let f = |x: f64| (1.0 + x * x).sqrt();
    let pde = gnormal_expectation(f, 1.0, &params, &grid).unwrap();
    assert!((pde - gaussian_mean(f, 1.0, 80)).abs() < 1e-4);
}

#[test]
fn gheat_refinement_contracts() {
    let params = GParams::new(0.5, 1.0).unwrap();
    let f = |x: f64| (1.0 + x * x).sqrt();
    let u: Vec<f64> = [0.2, 0.1, 0.05, 0.025]
        .iter()
        .map(|&dx| {
            let g = SpaceGrid::for_horizon(&params, 1.0, dx).unwrap();
            gnormal_expectation(f, 1.0, &params, &g).unwrap()
        })
        .collect();
    for w in u.windows(3) {
        let (c1, c2) = ((w[1] - w[0]).abs(), (w[2] - w[1]).abs());
        assert!(c2 <= 0.5 * c1, "{u:?}");
    }
}

#[test]
fn bdg_classical() {
    let params = GParams::classical(1.0).unwrap();
    let g = make_grid(1.0, 256).unwrap();
    let fam = ControlFamily::new(g, params, 4, 3).unwrap();
    let r = bdg_check(|_| vec![1.0; 256], &fam, 1.0, 4.0, 4000, SeedSpec::new(5, 0), &Serial).unwrap();
    assert!((r.mid - 1.0).abs() < 1e-12);
    assert!(r.lhs >= r.mid && r.lhs <= 4.0 * r.mid, "{r:?}");
    assert!(r.pathwise_ordered);
    assert!(r.integral.value.abs() < 3.0 * r.integral.std_error);
}

#[test]
fn window_local_time_mean_matches_gaussian() {
    let n = 1 << 14;
    let eps = (1.0 / n as f64).sqrt();
    let l: Vec<f64> = (0..10_000)
        .map(|p| window_local_time(&classical_path(n, 1.0, 21, p), 0.0, eps).unwrap()[n])
        .collect();
    let (m, se) = mean_se(&l);
    assert!((m - SQRT_2_OVER_PI).abs() < 3.0 * se, "{m} ± {se}");
}

#[test]
fn tanaka_residual_shrinks_with_refinement() {
    let l2: Vec<f64> = [1usize << 10, 1 << 12, 1 << 14]
        .iter()
        .map(|&n| {
            let eps = (1.0 / n as f64).sqrt();
            let ss: f64 = (0..1000)
                .map(|p| tanaka_residual(&classical_path(n, 1.0, 31, p), 0.0, eps).unwrap().powi(2))
                .sum();
            (ss / 1000.0).sqrt()
        })
        .collect();
    assert!(l2[0] > l2[1] && l2[1] > l2[2], "{l2:?}");
}

#[test]
fn delta_bound_ratios_classical() {
    let params = GParams::classical(1.0).unwrap();
    let fam = ControlFamily::new(make_grid(1.0, 1024).unwrap(), params, 2, 2).unwrap();
    let r = delta_bound_check(&fam, 0.0, &[0.4, 0.2, 0.1], 1.0, 2000, SeedSpec::new(4, 0), &Serial)
        .unwrap();
    for q in &r.ratios {
        assert!((1.5..=2.5).contains(q), "{:?}", r.ratios);
    }
    // Oracle: E ∫ 1_[0,δ](B_s) ds.
    for (e, &d) in r.estimates.iter().zip(&r.deltas) {
        let o = expected_occupation(0.0, d, 1.0, 1.0);
        assert!((e.value - o).abs() < 3.0 * e.std_error + 2e-3, "{} vs {o}", e.value);
    }
    // Fitted constant of the linear bound is stable under halving.
    let s = r.slopes();
    assert!(s.windows(2).all(|w| (w[1] / w[0] - 1.0).abs() < 0.25), "{s:?}");
}

#[test]
fn delta_bound_degenerate_cases() {
    let params = GParams::new(0.0, 1.0).unwrap();
    let g = make_grid(1.0, 64).unwrap();
    let frozen = ControlFamily::exact(g, params, vec![ControlPath::constant(g, 0.0, &params).unwrap()]).unwrap();
    let r = delta_bound_check(&frozen, 0.0, &[0.4, 0.2], 1.0, 10, SeedSpec::new(1, 0), &Serial).unwrap();
    assert!(r.values().iter().all(|&v| v == 0.0));
    let fam = ControlFamily::new(g, params, 2, 2).unwrap();
    let r = delta_bound_check(&fam, 100.0, &[0.4, 0.2], 1.0, 10, SeedSpec::new(1, 0), &Serial).unwrap();
    assert!(r.values().iter().all(|&v| v == 0.0));
    assert!(delta_bound_check(&fam, 0.0, &[0.2, 0.4], 1.0, 10, SeedSpec::new(1, 0), &Serial).is_err());
}

#[test]
fn occupation_matches_gaussian_oracle() {
    let n = 4096;
    let lhs: Vec<f64> = (0..1000)
        .map(|p| {
            let r = occupation_check(&classical_path(n, 1.0, 13, p), -1.0, 1.0, 64).unwrap();
            assert!(r.diff.abs() < 1e-10 * (1.0 + r.lhs));
            r.lhs
        })
        .collect();
    let (m, se) = mean_se(&lhs);
    let o = expected_occupation(-1.0, 1.0, 1.0, 1.0);
    assert!((m - o).abs() < 3.0 * se, "{m} ± {se} vs {o}");
}

#[test]
fn fubini_hat_weight() {
    let hat = |a: f64| (1.0 - a.abs()).max(0.0);
    let levels: Vec<f64> = (0..=32).map(|j| -1.0 + j as f64 / 16.0).collect();
    for p in 0..100 {
        let r = stochastic_fubini_check(&classical_path(1024, 1.0, 17, p), hat, &levels).unwrap();
        assert!(r.lhs.is_finite());
        assert!(r.diff.abs() < 1e-10 * (1.0 + r.lhs.abs()), "{r:?}");
        // Direct double sum in the other nesting order.
        let path = classical_path(1024, 1.0, 17, p);
        let v = path.values();
        let mut direct = 0.0;
        for i in 0..1024 {
            let mut inner = 0.0;
            for j in 1..levels.len() {
                let s = |a: f64| hat(a) * (v[i] - a).signum() * if v[i] == a { 0.0 } else { 1.0 };
                inner += 0.5 * (levels[j] - levels[j - 1]) * (s(levels[j]) + s(levels[j - 1]));
            }
            direct += inner * (v[i + 1] - v[i]);
        }
        assert!((direct - r.rhs).abs() < 1e-10 * (1.0 + direct.abs()));
    }
    let r = stochastic_fubini_check(&classical_path(64, 1.0, 1, 0), |_| 0.0, &levels).unwrap();
    assert_eq!((r.lhs, r.rhs), (0.0, 0.0));
}

#[test]
fn holder_exponent_classical_field() {
    let n = 1 << 14;
    let levels: Vec<f64> = (0..64).map(|j| -2.0 + 4.0 * j as f64 / 63.0).collect();
    let eps = (1.0 / n as f64).sqrt();
    let fields: Vec<_> = (0..100)
        .map(|p| local_time_field_strided(&classical_path(n, 1.0, 41, p), &levels, eps, 64).unwrap())
        .collect();
    let h = holder_exponent(&fields, 8).unwrap();
    assert!(h.exponent >= 0.35, "{h:?}");
    assert!(h.exponent < 0.7, "{h:?}");
}

#[test]
fn qv_of_local_time_refinement() {
    let n = 1 << 16;
    let eps = (1.0 / n as f64).sqrt();
    let params = GParams::classical(1.0).unwrap();
    let paths: Vec<_> = (0..200).map(|p| classical_path(n, 1.0, 43, p)).collect();
    let mut gaps = vec![];
    let mut last_ratio = 0.0;
    for nd in [5u32, 6, 7] {
        let lv = dyadic_levels(-1.0, 1.0, nd);
        let (mut r, mut g) = (0.0, 0.0);
        for path in &paths {
            let f = local_time_field_strided(path, &lv, eps, 1024).unwrap();
            let q = qv_of_local_time(&f, -1.0, 1.0, nd, f.n_times() - 1, &params).unwrap();
            r += q.ratio;
            g += (q.sum_sq - q.target).abs();
        }
        gaps.push(g / 200.0);
        last_ratio = r / 200.0;
    }
    assert!(gaps[0] > gaps[1] && gaps[1] > gaps[2], "{gaps:?}");
    assert!((0.75..=1.25).contains(&last_ratio), "{last_ratio}");
}

#[test]
fn qv_of_local_time_tiled_windows_tend_to_two_thirds() {
    // With ε = h/2 the windows tile [a, b] and each level holds a bin average;
    // adjacent bin averages of a Brownian-like profile differ by 2/3 of the
    // point increments in mean square.
    let n = 1 << 16;
    let nd = 7;
    let eps = 2.0 / (1u64 << (nd + 1)) as f64;
    let params = GParams::classical(1.0).unwrap();
    let lv = dyadic_levels(-1.0, 1.0, nd);
    let (mut ss, mut tt) = (0.0, 0.0);
    for p in 0..100 {
        let f = local_time_field_strided(&classical_path(n, 1.0, 47, p), &lv, eps, 1024).unwrap();
        let q = qv_of_local_time(&f, -1.0, 1.0, nd, f.n_times() - 1, &params).unwrap();
        ss += q.sum_sq;
        tt += q.target;
    }
    let ratio = ss / tt;
    assert!((ratio - 2.0 / 3.0).abs() < 0.08, "{ratio}");
}

#[test]
fn qv_of_local_time_edge_cases() {
    let lv = dyadic_levels(-1.0, 1.0, 1);
    let frozen = {
        let p = GParams::new(0.0, 1.0).unwrap();
        let c = ControlPath::constant(make_grid(1.0, 8).unwrap(), 0.0, &p).unwrap();
        sample_path(&c, &[0.0; 8]).unwrap()
    };
    let pos = GParams::new(0.5, 1.0).unwrap();
    let f = local_time_field(&frozen, &lv, 0.5).unwrap();
    let q = qv_of_local_time(&f, -1.0, 1.0, 1, 8, &pos).unwrap();
    assert_eq!((q.sum_sq, q.target, q.ratio), (0.0, 0.0, 1.0));

    let path = classical_path(64, 1.0, 2, 0);
    let f = local_time_field(&path, &lv, 0.3).unwrap();
    let q = qv_of_local_time(&f, -1.0, 1.0, 1, 64, &pos).unwrap();
    let d1 = f.at(1, 64) - f.at(0, 64);
    let d2 = f.at(2, 64) - f.at(1, 64);
    assert_eq!(q.sum_sq, d1 * d1 + d2 * d2);

    let zero_lo = GParams::new(0.0, 1.0).unwrap();
    assert!(matches!(
        qv_of_local_time(&f, -1.0, 1.0, 1, 64, &zero_lo),
        Err(Error::Hypothesis(_))
    ));
    assert!(qv_of_local_time(&f, -1.0, 1.0, 2, 64, &pos).is_err());
}

#[test]
fn convex_ito_identities() {
    let n = 1 << 12;
    let eps = (1.0 / n as f64).sqrt();
    let affine = ConvexSpec::affine(3.0, 2.0).unwrap();
    let abs = ConvexSpec::abs_at(0.0).unwrap();
    let plus = ConvexSpec::positive_part(0.3).unwrap();
    for p in 0..50 {
        let path = classical_path(n, 1.0, 51, p);
        let r = convex_ito_check(&affine, &path, eps).unwrap();
        let scale = 1.0 + path.values().iter().fold(0.0f64, |m, v| m.max(3.0 * v.abs() + 2.0));
        assert!(r.sup_abs <= 1e-14 * scale, "{}", r.sup_abs);
        let r = convex_ito_check(&abs, &path, eps).unwrap();
        assert_eq!(r.sup_abs, tanaka_residual(&path, 0.0, eps).unwrap());
        let r = convex_ito_check(&plus, &path, eps).unwrap();
        let half = 0.5 * tanaka_residual(&path, 0.3, eps).unwrap();
        assert!((r.sup_abs - half).abs() < 1e-10, "{} vs {half}", r.sup_abs);
    }
}

#[test]
fn convex_ito_with_density() {
    // f = x²/2 on [-1, 1], affine outside; μ = Lebesgue on [-1, 1].
    let f = |x: f64| if x < -1.0 { -x - 0.5 } else if x > 1.0 { x - 0.5 } else { 0.5 * x * x };
    let rho = PiecewiseDensity::new(vec![-1.0, 0.0, 1.0], vec![1.0, 1.0]).unwrap();
    let spec = ConvexSpec::new(f, |x: f64| x.clamp(-1.0, 1.0), vec![], Some(rho)).unwrap();
    let n = 1 << 12;
    let eps = (1.0 / n as f64).sqrt();
    let mut acc = 0.0;
    for p in 0..200 {
        acc += convex_ito_check(&spec, &classical_path(n, 1.0, 53, p), eps).unwrap().terminal.abs();
    }
    assert!(acc / 200.0 < 0.02, "{}", acc / 200.0);
}

#[test]
fn convex_ito_piecewise_linear_three_kinks() {
    let n = 1 << 14;
    let eps = (1.0 / n as f64).sqrt();
    let spec = ConvexSpec::piecewise_linear(0.0, -1.0, vec![(-0.5, 1.0), (0.0, 0.5), (0.7, 1.5)]).unwrap();
    let mean = (0..1000)
        .map(|p| convex_ito_check(&spec, &classical_path(n, 1.0, 57, p), eps).unwrap().terminal.abs())
        .sum::<f64>()
        / 1000.0;
    assert!(mean < 0.1, "{mean}");
}
