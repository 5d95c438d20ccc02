use qlabel::info_theory::AttackFamily;
use qlabel::learn::{default_eta_grid, sweep_eta, ExperimentSettings};
use serde::Serialize;

use crate::cli::SweepArgs;
use crate::commands::shared::*;
use crate::config::{family, resolve_experiment};
use crate::error::CliResult;
use crate::output::{num, Bundle, Summary};
use crate::svg::{step_plot, Series};
use crate::Context;

#[derive(Serialize)]
struct Echo<'a> {
    family: AttackFamily,
    eta_grid: &'a [f64],
    workers: usize,
    settings: &'a ExperimentSettings<f64>,
}

#[derive(Serialize)]
struct Crossing {
    eta_star: f64,
    /// Smallest swept authorized noise whose paired intervals overlap.
    first_overlap: Option<f64>,
    /// Largest swept noise at which the authorized learner is significantly ahead.
    last_separated: Option<f64>,
}

pub fn run(ctx: &Context, args: &SweepArgs) -> CliResult<Summary> {
    let settings = resolve_experiment(&args.experiment, &ctx.file.experiment)?;
    let fam = args
        .family
        .map(family)
        .or(ctx.file.sweep.family)
        .unwrap_or(AttackFamily::Collective);
    let grid = args
        .eta_grid
        .clone()
        .or_else(|| ctx.file.sweep.eta_grid.clone())
        .unwrap_or_else(|| default_eta_grid(fam));
    let (seed, workers) = (ctx.globals.seed, ctx.globals.workers);
    let task = settings.task()?;
    let sweep = sweep_eta(&task, &settings, fam, &grid, seed, workers)?;
    for (a, e) in sweep
        .authorized_curves
        .iter()
        .zip(&sweep.eavesdropper_curves)
    {
        assert_nondecreasing("authorized", a)?;
        assert_nondecreasing("eavesdropper", e)?;
    }

    println!(
        "family = {}  eta* = {:.7}  n = {}",
        fam.name(),
        sweep.eta_star,
        sweep.n
    );
    println!(
        "{:>9} {:>9} {:>8} {:>18} {:>8} {:>18}",
        "eta_A", "eta_E", "P_A", "interval A", "P_E", "interval E"
    );
    for p in &sweep.points {
        println!(
            "{:>9.5} {:>9.5} {:>8.4}   [{:.4}, {:.4}] {:>8.4}   [{:.4}, {:.4}]{}",
            p.eta_a,
            p.eta_e,
            p.authorized.p_hat,
            p.authorized.wilson_low,
            p.authorized.wilson_high,
            p.eavesdropper.p_hat,
            p.eavesdropper.wilson_low,
            p.eavesdropper.wilson_high,
            if p.separated {
                "  separated"
            } else if p.overlapping {
                "  overlap"
            } else {
                ""
            }
        );
    }
    let crossing = Crossing {
        eta_star: sweep.eta_star,
        first_overlap: sweep.first_overlap,
        last_separated: sweep
            .points
            .iter()
            .filter(|p| p.separated)
            .map(|p| p.eta_a)
            .next_back(),
    };
    match crossing.first_overlap {
        Some(e) => println!(
            "intervals first overlap at eta_A = {e} (eta* = {:.7})",
            sweep.eta_star
        ),
        None => println!("intervals never overlap on this grid"),
    }

    let mut bundle = Bundle::create(&ctx.globals.out_dir)?;
    bundle.csv(
        "sweep.csv",
        &[
            "eta_a",
            "eta_e",
            "n",
            "p_hat_a",
            "wilson_low_a",
            "wilson_high_a",
            "p_hat_e",
            "wilson_low_e",
            "wilson_high_e",
            "separated",
            "overlapping",
        ],
        sweep.points.iter().map(|p| {
            [
                num(p.eta_a),
                num(p.eta_e),
                sweep.n.to_string(),
                num(p.authorized.p_hat),
                num(p.authorized.wilson_low),
                num(p.authorized.wilson_high),
                num(p.eavesdropper.p_hat),
                num(p.eavesdropper.wilson_low),
                num(p.eavesdropper.wilson_high),
                p.separated.to_string(),
                p.overlapping.to_string(),
            ]
        }),
    )?;
    let mut rows = Vec::new();
    for (p, (a, e)) in sweep.points.iter().zip(
        sweep
            .authorized_curves
            .iter()
            .zip(&sweep.eavesdropper_curves),
    ) {
        for (learner, curve) in [("authorized", a), ("eavesdropper", e)] {
            for r in curve_rows(curve) {
                let mut row = vec![num(p.eta_a), learner.to_string()];
                row.extend(r);
                rows.push(row);
            }
        }
    }
    bundle.csv(
        "curves.csv",
        &[
            "eta_a",
            "learner",
            "n",
            "p_hat",
            "wilson_low",
            "wilson_high",
            "trials",
        ],
        rows,
    )?;
    if ctx.globals.svg {
        let series = [
            Series {
                name: "authorized",
                points: sweep
                    .points
                    .iter()
                    .map(|p| (p.eta_a, p.authorized.p_hat))
                    .collect(),
            },
            Series {
                name: "eavesdropper",
                points: sweep
                    .points
                    .iter()
                    .map(|p| (p.eta_a, p.eavesdropper.p_hat))
                    .collect(),
            },
        ];
        bundle.text(
            "sweep.svg",
            &step_plot(
                &format!("learning probability at n = {}", sweep.n),
                "authorized noise eta_A",
                "learning probability",
                &series,
            ),
        )?;
    }

    let echo = Echo {
        family: fam,
        eta_grid: &grid,
        workers,
        settings: &settings,
    };
    let results = serde_json::json!({
        "n": sweep.n,
        "points": sweep.points,
        "crossing": crossing,
    });
    bundle.finish("sweep-eta", seed, &echo, &results)
}
