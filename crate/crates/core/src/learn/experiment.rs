//! Orchestrated learning-probability experiments on the default synthetic
//! task: single curves, the random-search baseline, paired sweeps over the
//! authorized noise level and final-error histograms.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::info_theory::{eta_star, eve_noise_from_disturbance, AttackFamily};
use crate::learn::curve::{estimate_learning_probability, CurveRow, LearningProbabilityCurve};
use crate::learn::model::LearnerConfig;
use crate::learn::task::{generate_task, NoisyStream, SyntheticTask, TaskConfig};
use crate::learn::trial::{
    default_budget, random_search_learner, run_trials, train_until, IsotropicLinearSampler,
    LearningTrial,
};
use crate::scalar::Scalar;
use crate::stats::derive_seed;

pub const DEFAULT_DIMENSION: usize = 20;
pub const DEFAULT_SEPARATION: f64 = 4.0;
pub const DEFAULT_EPSILON_TARGET: f64 = 0.05;
pub const DEFAULT_STEP_SIZE: f64 = 0.5;
pub const DEFAULT_BATCH_SIZE: usize = 5;
pub const DEFAULT_TRIALS: usize = 150;
/// Largest sample count on the default curve grid.
pub const DEFAULT_MAX_SAMPLES: u64 = 1000;
pub const DEFAULT_GRID_POINTS: usize = 8;
pub const HISTOGRAM_BINS: usize = 100;

/// Everything that determines a learning-probability experiment apart from
/// the noise level and the seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSettings<T> {
    pub dimension: usize,
    pub separation: T,
    pub task_seed: u64,
    pub epsilon_target: f64,
    pub learner: LearnerConfig<T>,
    pub trials: usize,
    /// Largest `n` on the curve grid.
    pub max_samples: u64,
    pub grid_points: usize,
}

impl<T: Scalar> Default for ExperimentSettings<T> {
    fn default() -> Self {
        Self {
            dimension: DEFAULT_DIMENSION,
            separation: T::lit(DEFAULT_SEPARATION),
            task_seed: 1,
            epsilon_target: DEFAULT_EPSILON_TARGET,
            learner: LearnerConfig::linear(T::lit(DEFAULT_STEP_SIZE), DEFAULT_BATCH_SIZE),
            trials: DEFAULT_TRIALS,
            max_samples: DEFAULT_MAX_SAMPLES,
            grid_points: DEFAULT_GRID_POINTS,
        }
    }
}

impl<T: Scalar> ExperimentSettings<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon_target > 0.0 && self.epsilon_target < 1.0) {
            return Err(domain(format!(
                "target inaccuracy must lie in (0, 1), got {}",
                self.epsilon_target
            )));
        }
        self.learner.validate()?;
        if self.max_samples == 0 || self.grid_points == 0 {
            return Err(domain(
                "the curve grid needs at least one positive sample count",
            ));
        }
        if self.trials < crate::learn::curve::MIN_TRIALS {
            return Err(crate::error::Error::InsufficientTrials {
                got: self.trials,
                required: crate::learn::curve::MIN_TRIALS,
            });
        }
        Ok(())
    }

    pub fn task_config(&self) -> TaskConfig<T> {
        TaskConfig::new(self.dimension, self.separation, self.epsilon_target / 2.0)
    }

    /// Generates the task; fails when its Bayes error is not below `ε_T/2`.
    pub fn task(&self) -> Result<SyntheticTask<T>> {
        self.validate()?;
        generate_task(&self.task_config(), self.task_seed)
    }

    /// `grid_points` sample counts evenly spaced up to `max_samples`.
    pub fn grid(&self) -> Vec<u64> {
        let k = self.grid_points as u64;
        let mut grid: Vec<u64> = (1..=k).map(|i| (i * self.max_samples / k).max(1)).collect();
        grid.dedup();
        grid
    }

    /// Default budget truncated to the grid: samples past the last grid
    /// point cannot change the curve.
    pub fn budget(&self, eta: f64) -> Result<u64> {
        let full = default_budget(
            self.epsilon_target,
            eta,
            self.learner.log_hypothesis_count(self.dimension),
        )?;
        Ok(full.min(self.max_samples))
    }
}

/// Trials and the curve they produce.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveRun {
    pub eta: f64,
    pub budget: u64,
    pub trials: Vec<LearningTrial>,
    pub curve: LearningProbabilityCurve,
}

/// Gradient-trained learner on a stream with label noise `eta`. Trial `i`
/// draws its stream and initialization from `derive_seed(seed, stream, i)`.
pub fn learning_curve<T: Scalar>(
    task: &SyntheticTask<T>,
    settings: &ExperimentSettings<T>,
    eta: f64,
    seed: u64,
    stream: u64,
    workers: usize,
) -> Result<CurveRun> {
    settings.validate()?;
    let budget = settings.budget(eta)?;
    let trials = run_trials(settings.trials, workers, |i| {
        let base = derive_seed(seed, stream, i as u64);
        let mut data = NoisyStream::new(task, eta, derive_seed(base, 0, 0))?;
        train_until(
            task,
            &mut data,
            settings.epsilon_target,
            &settings.learner,
            budget,
            derive_seed(base, 1, 0),
        )
    })?;
    let curve = estimate_learning_probability(&trials, &settings.grid())?;
    Ok(CurveRun {
        eta,
        budget,
        trials,
        curve,
    })
}

/// Random search over isotropic linear thresholds, one draw per sample.
pub fn random_search_baseline<T: Scalar>(
    task: &SyntheticTask<T>,
    settings: &ExperimentSettings<T>,
    seed: u64,
    stream: u64,
    workers: usize,
) -> Result<CurveRun> {
    settings.validate()?;
    let sampler = IsotropicLinearSampler {
        dimension: task.dimension,
    };
    let budget = settings.max_samples;
    let trials = run_trials(settings.trials, workers, |i| {
        random_search_learner(
            task,
            settings.epsilon_target,
            &sampler,
            budget,
            derive_seed(seed, stream, i as u64),
        )
    })?;
    let curve = estimate_learning_probability(&trials, &settings.grid())?;
    Ok(CurveRun {
        eta: 0.0,
        budget,
        trials,
        curve,
    })
}

/// Grid points where the trained curve falls significantly below the
/// baseline (its upper Wilson bound under the baseline's lower bound).
pub fn dominance_violations(
    trained: &LearningProbabilityCurve,
    baseline: &LearningProbabilityCurve,
) -> Vec<u64> {
    trained
        .rows
        .iter()
        .filter_map(|t| {
            let b = baseline.at(t.n)?;
            (t.wilson_high < b.wilson_low).then_some(t.n)
        })
        .collect()
}

/// Paired outcome at one authorized noise level, read off at the largest
/// grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub eta_a: f64,
    pub eta_e: f64,
    pub authorized: CurveRow,
    pub eavesdropper: CurveRow,
    /// `p̂_A > p̂_E` with disjoint Wilson intervals.
    pub separated: bool,
    pub overlapping: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub family: AttackFamily,
    pub eta_star: f64,
    pub n: u64,
    pub points: Vec<SweepPoint>,
    pub authorized_curves: Vec<LearningProbabilityCurve>,
    pub eavesdropper_curves: Vec<LearningProbabilityCurve>,
    /// Smallest swept `η_A` whose paired intervals overlap.
    pub first_overlap: Option<f64>,
}

/// `{0, 0.01, 0.03, 0.06, η*}` for the given family.
pub fn default_eta_grid(family: AttackFamily) -> Vec<f64> {
    let star: f64 = eta_star(family);
    let mut grid: Vec<f64> = [0.0, 0.01, 0.03, 0.06]
        .into_iter()
        .filter(|&e| e < star)
        .collect();
    grid.push(star);
    grid
}

/// For each `η_A` in the grid, maps it to `η_E` through the family's
/// analytic trade-off and runs both learners.
pub fn sweep_eta<T: Scalar>(
    task: &SyntheticTask<T>,
    settings: &ExperimentSettings<T>,
    family: AttackFamily,
    eta_grid: &[f64],
    seed: u64,
    workers: usize,
) -> Result<SweepResult> {
    if eta_grid.is_empty() {
        return Err(domain("the noise grid is empty"));
    }
    let star: f64 = eta_star(family);
    let n = *settings.grid().last().expect("validated grid");
    let mut points = Vec::with_capacity(eta_grid.len());
    let mut authorized_curves = Vec::new();
    let mut eavesdropper_curves = Vec::new();
    for (j, &eta_a) in eta_grid.iter().enumerate() {
        if !(0.0..=star + 1e-12).contains(&eta_a) {
            return Err(domain(format!(
                "swept noise {eta_a} lies outside [0, {star}]"
            )));
        }
        let eta_e: f64 = eve_noise_from_disturbance(family, eta_a)?;
        let a = learning_curve(task, settings, eta_a, seed, 2 * j as u64, workers)?;
        let e = learning_curve(task, settings, eta_e, seed, 2 * j as u64 + 1, workers)?;
        let ra = *a.curve.at(n).expect("grid point");
        let re = *e.curve.at(n).expect("grid point");
        let overlapping = ra.interval().overlaps(&re.interval());
        points.push(SweepPoint {
            eta_a,
            eta_e,
            authorized: ra,
            eavesdropper: re,
            separated: !overlapping && ra.p_hat > re.p_hat,
            overlapping,
        });
        authorized_curves.push(a.curve);
        eavesdropper_curves.push(e.curve);
    }
    let first_overlap = points.iter().find(|p| p.overlapping).map(|p| p.eta_a);
    Ok(SweepResult {
        family,
        eta_star: star,
        n,
        points,
        authorized_curves,
        eavesdropper_curves,
        first_overlap,
    })
}

/// Counts of final test errors in the bins `[i/100, (i+1)/100)`, the last
/// bin closed at 1.
pub fn error_histogram(trials: &[LearningTrial]) -> [u64; HISTOGRAM_BINS] {
    let mut bins = [0u64; HISTOGRAM_BINS];
    for t in trials {
        bins[histogram_bin(t.final_test_error)] += 1;
    }
    bins
}

pub fn histogram_bin(error: f64) -> usize {
    // guard against products such as 0.29 * 100 = 28.999999999999996
    let scaled = (error * HISTOGRAM_BINS as f64 + 1e-9).floor();
    (scaled.max(0.0) as usize).min(HISTOGRAM_BINS - 1)
}
