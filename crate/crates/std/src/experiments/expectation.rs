use gcalc_core::localtime::delta_bound_check;
use gcalc_core::{bdg_check, gnormal_expectation, sublinear_expectation, Executor, Result, SpaceGrid};

use super::{Ctx, Outcome};
use crate::config::Integrand;
use crate::registry::Experiment;
use crate::report::{Assertion, Table};
use crate::svg::LinePlot;

pub(super) fn gheat_oracle<E: Executor + Sync>(ctx: &Ctx<E>) -> Result<Outcome> {
    let cfg = ctx.cfg;
    let (t, phi) = (cfg.t_end, cfg.payoff);
    let family = ctx.family(ctx.grid(cfg.n_steps)?)?;
    let mc = sublinear_expectation(|p| phi.eval(p.terminal()), &family, cfg.n_paths, ctx.seeds, ctx.exec)?;
    let exact = phi.exact(&ctx.params, t);

    let mut table = Table::new(Experiment::GheatOracle.manifest().columns);
    let mut points = Vec::new();
    let mut pde = f64::NAN;
    for dx in [4.0 * cfg.dx, 2.0 * cfg.dx, cfg.dx] {
        let grid = SpaceGrid::for_horizon(&ctx.params, t, dx)?;
        pde = gnormal_expectation(|x| phi.eval(x), t, &ctx.params, &grid)?;
        table.push(vec![
            dx.into(),
            pde.into(),
            exact.into(),
            (pde - exact).into(),
            mc.value.into(),
            mc.std_error.into(),
            mc.argmax_index.into(),
        ]);
        points.push((dx, pde));
    }

    let tol = phi.pde_tolerance();
    let gap = pde - mc.value;
    let assertions = vec![
        Assertion::check(
            "pde_matches_exact",
            (pde - exact).abs() <= tol,
            format!("|{pde} - {exact}| <= {tol}"),
        ),
        Assertion::check(
            "mc_within_3se",
            gap.abs() <= 3.0 * mc.std_error,
            format!("|{gap}| <= 3 * {}", mc.std_error),
        ),
    ];
    let plot = LinePlot::new("G-heat value at the origin", "dx", "value")
        .series("pde", points.clone())
        .series("exact", points.iter().map(|&(dx, _)| (dx, exact)).collect());
    Ok(Outcome {
        table,
        summary: vec![
            ("pde", pde),
            ("exact", exact),
            ("pde_error", pde - exact),
            ("mc", mc.value),
            ("mc_std_error", mc.std_error),
            ("gap", gap),
            ("family_size", family.len() as f64),
        ],
        assertions,
        plot: Some(plot),
    })
}

pub(super) fn bdg<E: Executor + Sync>(ctx: &Ctx<E>) -> Result<Outcome> {
    let cfg = ctx.cfg;
    let family = ctx.family(ctx.grid(cfg.n_steps)?)?;
    let n = cfg.n_steps;
    let integrand = cfg.integrand;
    let r = bdg_check(
        |path| match integrand {
            Integrand::One => vec![1.0; n],
            Integrand::Sign => path.values()[..n].iter().map(|&b| sgn(b)).collect(),
        },
        &family,
        cfg.p,
        cfg.c_p,
        cfg.n_paths,
        ctx.seeds,
        ctx.exec,
    )?;
    let ratio = r.ratio();
    let (i, ise) = (r.integral.value, r.integral.std_error);
    let mut table = Table::new(Experiment::Bdg.manifest().columns);
    table.push(vec![
        r.p.into(),
        r.lhs.into(),
        r.mid.into(),
        r.hi.into(),
        r.lo.into(),
        ratio.into(),
        r.c_p.into(),
        i.into(),
        ise.into(),
        r.pathwise_ordered.into(),
    ]);
    let assertions = vec![
        Assertion::check(
            "ratio_within_constant",
            r.within_constant(),
            format!("lhs/mid = {ratio} in [1/{c}, {c}]", c = r.c_p),
        ),
        Assertion::check(
            "pathwise_ordered",
            r.pathwise_ordered,
            "lo <= mid <= hi on every path and control".into(),
        ),
        Assertion::check(
            "estimates_ordered",
            r.lo <= r.mid && r.mid <= r.hi,
            format!("{} <= {} <= {}", r.lo, r.mid, r.hi),
        ),
        Assertion::check("integral_within_3se", i.abs() <= 3.0 * ise, format!("|{i}| <= 3 * {ise}")),
    ];
    Ok(Outcome {
        table,
        summary: vec![
            ("lhs", r.lhs),
            ("mid", r.mid),
            ("hi", r.hi),
            ("lo", r.lo),
            ("ratio", ratio),
            ("integral", i),
            ("integral_std_error", ise),
        ],
        assertions,
        plot: None,
    })
}

pub(super) fn delta_bound<E: Executor + Sync>(ctx: &Ctx<E>) -> Result<Outcome> {
    let cfg = ctx.cfg;
    let family = ctx.family(ctx.grid(cfg.n_steps)?)?;
    let r = delta_bound_check(&family, cfg.level, &cfg.deltas, cfg.t_end, cfg.n_paths, ctx.seeds, ctx.exec)?;
    let values = r.values();
    let slopes = r.slopes();
    let mut table = Table::new(Experiment::DeltaBound.manifest().columns);
    for (j, e) in r.estimates.iter().enumerate() {
        table.push(vec![
            r.deltas[j].into(),
            e.value.into(),
            e.std_error.into(),
            slopes[j].into(),
            r.ratios.get(j).copied().unwrap_or(f64::NAN).into(),
            e.argmax_index.into(),
        ]);
    }
    let in_range = r.ratios.iter().all(|q| (1.5..=2.5).contains(q));
    let monotone = values.windows(2).all(|w| w[0] >= w[1]);
    let assertions = vec![
        Assertion::check("ratios_in_range", in_range, format!("ratios {:?} in [1.5, 2.5]", r.ratios)),
        Assertion::check("estimates_monotone", monotone, format!("estimates {values:?} non-increasing")),
    ];
    let fold = |f: fn(f64, f64) -> f64, init| r.ratios.iter().copied().fold(init, f);
    let plot = LinePlot::new("Sup occupation of [a, a+delta]", "delta", "estimate")
        .log_log()
        .series("estimate", r.deltas.iter().copied().zip(values.iter().copied()).collect());
    Ok(Outcome {
        table,
        summary: vec![
            ("ratio_min", fold(f64::min, f64::INFINITY)),
            ("ratio_max", fold(f64::max, f64::NEG_INFINITY)),
            ("slope_first", slopes[0]),
            ("slope_last", slopes[slopes.len() - 1]),
        ],
        assertions,
        plot: Some(plot),
    })
}

fn sgn(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}
