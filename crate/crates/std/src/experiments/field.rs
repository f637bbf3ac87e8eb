//! Experiments on the local-time field `(a, t) ↦ L^a_t`.

use gcalc_core::localtime::{dyadic_levels, holder_exponent, local_time_field_strided, qv_of_local_time};
use gcalc_core::{Executor, Result};

use super::{mean_se, Ctx, Outcome};
use crate::registry::Experiment;
use crate::report::{Assertion, Table};
use crate::svg::LinePlot;

const QV_BAND: (f64, f64) = (0.75, 1.25);
const HOLDER_COLUMNS: usize = 256;

pub(super) fn qv_localtime<E: Executor + Sync>(ctx: &Ctx<E>) -> Result<Outcome> {
    let cfg = ctx.cfg;
    let (a, b) = (cfg.a, cfg.b);
    let n = cfg.n_steps;
    let family = ctx.family(ctx.grid(n)?)?;
    let eps = ctx.eps(family.grid());
    // Record only the midpoint and the terminal time when possible.
    let stride = if n.is_multiple_of(2) { n / 2 } else { n };
    let orders: Vec<u32> = (cfg.dyadic_min..=cfg.dyadic_max).collect();
    let finest = dyadic_levels(a, b, cfg.dyadic_max);

    let rows = ctx.per_path(|p| {
        let field = local_time_field_strided(&ctx.path(&family, p)?, &finest, eps, stride)?;
        let end = field.n_times() - 1;
        orders
            .iter()
            .map(|&nd| {
                let q = qv_of_local_time(&field, a, b, nd, end, &ctx.params)?;
                let mid = if end == 2 {
                    qv_of_local_time(&field, a, b, nd, 1, &ctx.params)?.ratio
                } else {
                    f64::NAN
                };
                Ok([q.ratio, (q.sum_sq - q.target).abs(), q.sum_sq, q.target, mid])
            })
            .collect::<Result<Vec<_>>>()
    })?;

    let k = rows.len() as f64;
    let mut table = Table::new(Experiment::QvLocaltime.manifest().columns);
    let (mut ratios, mut gaps) = (Vec::new(), Vec::new());
    for (i, &nd) in orders.iter().enumerate() {
        let col = |c: usize| rows.iter().map(|r| r[i][c]).collect::<Vec<f64>>();
        let (ratio, se) = mean_se(&col(0));
        let mean = |c: usize| col(c).iter().sum::<f64>() / k;
        let gap = mean(1);
        table.push(vec![
            (nd as usize).into(),
            (1usize << nd).into(),
            ratio.into(),
            se.into(),
            gap.into(),
            mean(2).into(),
            mean(3).into(),
            mean(4).into(),
        ]);
        ratios.push((nd as f64, ratio));
        gaps.push((nd as f64, gap));
    }

    let ratio = ratios[ratios.len() - 1].1;
    let gap_values: Vec<f64> = gaps.iter().map(|g| g.1).collect();
    let assertions = vec![
        Assertion::check(
            "ratio_in_band",
            (QV_BAND.0..=QV_BAND.1).contains(&ratio),
            format!("mean ratio {ratio} in [{}, {}]", QV_BAND.0, QV_BAND.1),
        ),
        Assertion::check(
            "gap_decreasing",
            gap_values.windows(2).all(|w| w[1] < w[0]),
            format!("{gap_values:?} strictly decreasing"),
        ),
    ];
    let plot = LinePlot::new("Quadratic variation of local time in the level", "dyadic order n", "mean")
        .series("sum_sq / target", ratios)
        .series("|sum_sq - target|", gaps);
    Ok(Outcome {
        table,
        summary: vec![("mean_ratio", ratio), ("mean_gap", gap_values[gap_values.len() - 1]), ("eps", eps)],
        assertions,
        plot: Some(plot),
    })
}

pub(super) fn holder_field<E: Executor + Sync>(ctx: &Ctx<E>) -> Result<Outcome> {
    let cfg = ctx.cfg;
    let (a, b, m) = (cfg.a, cfg.b, cfg.n_levels);
    let n = cfg.n_steps;
    let family = ctx.family(ctx.grid(n)?)?;
    let eps = ctx.eps(family.grid());
    let stride = if n.is_multiple_of(HOLDER_COLUMNS) { n / HOLDER_COLUMNS } else { 1 };
    let levels: Vec<f64> = (0..m)
        .map(|j| if j == m - 1 { b } else { a + (b - a) * j as f64 / (m - 1) as f64 })
        .collect();
    let fields = ctx.per_path(|p| local_time_field_strided(&ctx.path(&family, p)?, &levels, eps, stride))?;
    let h = holder_exponent(&fields, cfg.max_step)?;

    let mut table = Table::new(Experiment::HolderField.manifest().columns);
    for (s, d) in h.spacings.iter().zip(&h.increments) {
        table.push(vec![(*s).into(), (*d).into()]);
    }
    let assertions = vec![Assertion::check(
        "exponent_above_min",
        h.exponent >= cfg.holder_min,
        format!("{} >= {}", h.exponent, cfg.holder_min),
    )];
    let plot = LinePlot::new("Level increments of the local-time field", "level spacing", "mean sup increment")
        .log_log()
        .series("increment", h.spacings.iter().copied().zip(h.increments.iter().copied()).collect());
    Ok(Outcome {
        table,
        summary: vec![("exponent", h.exponent), ("eps", eps)],
        assertions,
        plot: Some(plot),
    })
}
