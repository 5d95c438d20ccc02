use qlabel::info_theory::{eve_noise_from_disturbance, AttackFamily};
use qlabel::learn::{error_histogram, learning_curve, ExperimentSettings, HISTOGRAM_BINS};
use serde::Serialize;

use crate::cli::HistogramArgs;
use crate::config::{family, resolve_experiment};
use crate::error::CliResult;
use crate::output::{num, Bundle, Summary};
use crate::Context;

#[derive(Serialize)]
struct Echo<'a> {
    family: AttackFamily,
    eta_a: f64,
    workers: usize,
    settings: &'a ExperimentSettings<f64>,
}

#[derive(Serialize)]
struct Results {
    eta_a: f64,
    eta_e: f64,
    bin_width: f64,
    authorized_total: u64,
    eavesdropper_total: u64,
    /// Fraction of authorized trials with final error at most the target.
    authorized_within_target: f64,
    eavesdropper_within_target: f64,
}

pub fn run(ctx: &Context, args: &HistogramArgs) -> CliResult<Summary> {
    let settings = resolve_experiment(&args.experiment, &ctx.file.experiment)?;
    let fam = args
        .family
        .map(family)
        .or(ctx.file.histograms.family)
        .unwrap_or(AttackFamily::Collective);
    let eta_a = args.eta_a.or(ctx.file.histograms.eta_a).unwrap_or(0.01);
    let eta_e: f64 = eve_noise_from_disturbance(fam, eta_a)?;
    let (seed, workers) = (ctx.globals.seed, ctx.globals.workers);
    let task = settings.task()?;
    let a = learning_curve(&task, &settings, eta_a, seed, 0, workers)?;
    let e = learning_curve(&task, &settings, eta_e, seed, 1, workers)?;
    let (ha, he) = (error_histogram(&a.trials), error_histogram(&e.trials));

    let within = |trials: &[qlabel::learn::LearningTrial]| {
        trials
            .iter()
            .filter(|t| t.final_test_error <= settings.epsilon_target)
            .count() as f64
            / trials.len() as f64
    };
    let results = Results {
        eta_a,
        eta_e,
        bin_width: 1.0 / HISTOGRAM_BINS as f64,
        authorized_total: ha.iter().sum(),
        eavesdropper_total: he.iter().sum(),
        authorized_within_target: within(&a.trials),
        eavesdropper_within_target: within(&e.trials),
    };
    println!("eta_A = {eta_a}  eta_E = {eta_e:.6}");
    println!("{:>12} {:>6} {:>6}", "error bin", "A", "E");
    for i in (0..HISTOGRAM_BINS).filter(|&i| ha[i] + he[i] > 0) {
        println!(
            "[{:.2}, {:.2}) {:>6} {:>6}",
            i as f64 / 100.0,
            (i + 1) as f64 / 100.0,
            ha[i],
            he[i]
        );
    }

    let mut bundle = Bundle::create(&ctx.globals.out_dir)?;
    bundle.csv(
        "histograms.csv",
        &["bin_low", "bin_high", "count_a", "count_e"],
        (0..HISTOGRAM_BINS).map(|i| {
            [
                num(i as f64 / HISTOGRAM_BINS as f64),
                num((i + 1) as f64 / HISTOGRAM_BINS as f64),
                ha[i].to_string(),
                he[i].to_string(),
            ]
        }),
    )?;
    let echo = Echo {
        family: fam,
        eta_a,
        workers,
        settings: &settings,
    };
    bundle.finish("histograms", seed, &echo, &results)
}
