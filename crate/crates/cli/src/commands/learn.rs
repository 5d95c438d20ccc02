use qlabel::learn::{
    dominance_violations, learning_curve, random_search_baseline, ExperimentSettings,
};
use serde::Serialize;

use crate::cli::LearnArgs;
use crate::commands::shared::*;
use crate::config::resolve_experiment;
use crate::error::{CliError, CliResult};
use crate::output::{Bundle, Summary};
use crate::Context;

#[derive(Serialize)]
struct Echo<'a> {
    eta: f64,
    baseline: bool,
    workers: usize,
    settings: &'a ExperimentSettings<f64>,
}

#[derive(Serialize)]
struct Results {
    eta: f64,
    budget: u64,
    bayes_error: f64,
    log_hypothesis_count: f64,
    halted: usize,
    curve: qlabel::learn::LearningProbabilityCurve,
    baseline: Option<qlabel::learn::LearningProbabilityCurve>,
    /// Grid points where random search is significantly ahead.
    dominance_violations: Option<Vec<u64>>,
}

pub fn run(ctx: &Context, args: &LearnArgs) -> CliResult<Summary> {
    let settings = resolve_experiment(&args.experiment, &ctx.file.experiment)?;
    let eta = args.eta.or(ctx.file.learn.eta).unwrap_or(0.0);
    if !(0.0..=0.5).contains(&eta) {
        return Err(CliError::Config(format!(
            "eta must lie in [0, 1/2], got {eta}"
        )));
    }
    let with_baseline = args.baseline || ctx.file.learn.baseline.unwrap_or(false);
    let (seed, workers) = (ctx.globals.seed, ctx.globals.workers);
    let task = settings.task()?;

    let run = learning_curve(&task, &settings, eta, seed, 0, workers)?;
    assert_nondecreasing("trained", &run.curve)?;
    let baseline = if with_baseline {
        let b = random_search_baseline(&task, &settings, seed, 1, workers)?;
        assert_nondecreasing("random-search", &b.curve)?;
        Some(b)
    } else {
        None
    };

    println!(
        "eta = {eta}  budget = {}  bayes error = {:.4}",
        run.budget, task.bayes_error
    );
    println!("{:>8} {:>8} {:>18}", "n", "P_L", "95% interval");
    for r in &run.curve.rows {
        println!(
            "{:>8} {:>8.4}   [{:.4}, {:.4}]",
            r.n, r.p_hat, r.wilson_low, r.wilson_high
        );
    }

    let mut bundle = Bundle::create(&ctx.globals.out_dir)?;
    bundle.csv("curve.csv", &CURVE_HEADER, curve_rows(&run.curve))?;
    let mut lines: Vec<TrialLine> = trial_lines("trained", &run).collect();
    let violations = baseline
        .as_ref()
        .map(|b| dominance_violations(&run.curve, &b.curve));
    if let Some(b) = &baseline {
        bundle.csv("baseline_curve.csv", &CURVE_HEADER, curve_rows(&b.curve))?;
        lines.extend(trial_lines("random_search", b));
        println!(
            "random search at n = {}: {:.4}",
            settings.max_samples,
            b.curve.rows.last().map_or(0.0, |r| r.p_hat)
        );
    }
    bundle.jsonl("trials.jsonl", lines)?;
    if ctx.globals.svg {
        let mut curves = vec![("trained", &run.curve)];
        if let Some(b) = &baseline {
            curves.push(("random search", &b.curve));
        }
        curve_plot(
            &mut bundle,
            "curve.svg",
            &format!("learning probability, eta = {eta}"),
            &curves,
        )?;
    }

    let results = Results {
        eta,
        budget: run.budget,
        bayes_error: task.bayes_error,
        log_hypothesis_count: settings.learner.log_hypothesis_count(settings.dimension),
        halted: run.trials.iter().filter(|t| t.halted).count(),
        curve: run.curve.clone(),
        baseline: baseline.map(|b| b.curve),
        dominance_violations: violations,
    };
    let echo = Echo {
        eta,
        baseline: with_baseline,
        workers,
        settings: &settings,
    };
    bundle.finish("learn", seed, &echo, &results)
}
