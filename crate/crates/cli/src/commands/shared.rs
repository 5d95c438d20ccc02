use qlabel::learn::{CurveRun, LearningProbabilityCurve, LearningTrial};
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::output::{num, Bundle};
use crate::svg::{step_plot, Series};

pub const CURVE_HEADER: [&str; 5] = ["n", "p_hat", "wilson_low", "wilson_high", "trials"];

pub fn curve_rows(curve: &LearningProbabilityCurve) -> impl Iterator<Item = [String; 5]> + '_ {
    curve.rows.iter().map(|r| {
        [
            r.n.to_string(),
            num(r.p_hat),
            num(r.wilson_low),
            num(r.wilson_high),
            r.trials.to_string(),
        ]
    })
}

#[derive(Serialize)]
pub struct TrialLine<'a> {
    pub learner: &'a str,
    pub index: usize,
    #[serde(flatten)]
    pub trial: &'a LearningTrial,
}

pub fn trial_lines<'a>(
    learner: &'a str,
    run: &'a CurveRun,
) -> impl Iterator<Item = TrialLine<'a>> + 'a {
    run.trials
        .iter()
        .enumerate()
        .map(move |(index, trial)| TrialLine {
            learner,
            index,
            trial,
        })
}

/// Curves are cumulative; anything else is a bug worth stopping for.
pub fn assert_nondecreasing(name: &str, curve: &LearningProbabilityCurve) -> CliResult<()> {
    if curve.is_nondecreasing() {
        Ok(())
    } else {
        Err(CliError::Statistical(format!(
            "{name} learning-probability curve decreases"
        )))
    }
}

pub fn curve_plot(
    bundle: &mut Bundle,
    file: &str,
    title: &str,
    curves: &[(&str, &LearningProbabilityCurve)],
) -> CliResult<()> {
    let series: Vec<Series> = curves
        .iter()
        .map(|(name, c)| Series {
            name,
            points: c.rows.iter().map(|r| (r.n as f64, r.p_hat)).collect(),
        })
        .collect();
    bundle.text(
        file,
        &step_plot(title, "samples n", "learning probability", &series),
    )
}
