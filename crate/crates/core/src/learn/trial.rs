//! Single learning trials under the halting rule `R(h, c) ≤ ε_T`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::learn::model::{evaluate_error, Hypothesis, LearnerConfig, LinearModel, Model};
use crate::learn::task::SyntheticTask;
use crate::pac_bounds::sample_bound_noisy;
use crate::protocol::Example;
use crate::scalar::Scalar;

/// Outcome of one learning run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LearningTrial {
    pub seed: u64,
    pub samples_consumed: u64,
    pub halted: bool,
    /// Test error at the last evaluation (the halting one when `halted`).
    pub final_test_error: f64,
}

/// Hard ceiling on any default sample budget.
pub const BUDGET_CAP: u64 = 1_000_000;
/// Multiple of the noisy sample-complexity bound used as default budget.
pub const BUDGET_FACTOR: u64 = 50;

/// `50 × M_{b,η}(ε_T, δ = 1/2, ln|H|)`, capped at 10⁶. Noise at or above
/// one-half has no finite bound and gets the cap.
pub fn default_budget(epsilon_target: f64, eta: f64, log_hypothesis_count: f64) -> Result<u64> {
    if eta >= 0.5 {
        return Ok(BUDGET_CAP);
    }
    let bound = sample_bound_noisy(epsilon_target, 0.5, log_hypothesis_count, eta)?;
    Ok(bound.saturating_mul(BUDGET_FACTOR).min(BUDGET_CAP))
}

fn check_target(epsilon_target: f64) -> Result<()> {
    if epsilon_target > 0.0 && epsilon_target < 1.0 {
        Ok(())
    } else {
        Err(domain(format!(
            "target inaccuracy must lie in (0, 1), got {epsilon_target}"
        )))
    }
}

/// Trains a fresh model on `stream` with mini-batch gradient steps,
/// evaluating on the clean test set every `evaluation_cadence` samples and at
/// budget exhaustion. Halts at the first evaluation with error `≤ ε_T`.
///
/// `seed` drives model initialization only; the stream carries its own.
pub fn train_until<T: Scalar, I: Iterator<Item = Example<T>>>(
    task: &SyntheticTask<T>,
    stream: &mut I,
    epsilon_target: f64,
    config: &LearnerConfig<T>,
    budget: u64,
    seed: u64,
) -> Result<LearningTrial> {
    check_target(epsilon_target)?;
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut model = Model::new(config.model, task.dimension, &mut rng);
    let cadence = config.evaluation_cadence as u64;

    let mut batch = Vec::with_capacity(config.batch_size);
    let mut consumed = 0u64;
    let mut last_error = None;
    while consumed < budget {
        let Some(example) = stream.next() else { break };
        batch.push(example);
        consumed += 1;
        if batch.len() == config.batch_size {
            model.step(&batch, config.step_size);
            batch.clear();
        }
        if consumed.is_multiple_of(cadence) || consumed == budget {
            model.step(&batch, config.step_size);
            batch.clear();
            let err = evaluate_error(&model, &task.test_set)?;
            last_error = Some(err);
            if err <= epsilon_target {
                return Ok(LearningTrial {
                    seed,
                    samples_consumed: consumed,
                    halted: true,
                    final_test_error: err,
                });
            }
        }
    }
    let final_test_error = match last_error {
        Some(e) => e,
        None => evaluate_error(&model, &task.test_set)?,
    };
    Ok(LearningTrial {
        seed,
        samples_consumed: consumed,
        halted: false,
        final_test_error,
    })
}

/// Draws hypotheses independently of any data.
pub trait HypothesisSampler<T> {
    type Output: Hypothesis<T>;

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Output;
}

/// Linear threshold through the origin with an isotropic Gaussian normal.
#[derive(Debug, Clone, Copy)]
pub struct IsotropicLinearSampler {
    pub dimension: usize,
}

impl<T: Scalar> HypothesisSampler<T> for IsotropicLinearSampler {
    type Output = LinearModel<T>;

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> LinearModel<T> {
        let w = (0..self.dimension)
            .map(|_| T::lit(rng.sample::<f64, _>(StandardNormal)))
            .collect();
        LinearModel::from_parts(w, T::zero())
    }
}

/// Returns the Bayes rule with probability `p` and its negation otherwise,
/// so that every draw succeeds with probability exactly `p` for any target
/// between the two test errors.
#[derive(Debug, Clone)]
pub struct BernoulliOracleSampler<T> {
    pub p: f64,
    rule: LinearModel<T>,
}

impl<T: Scalar> BernoulliOracleSampler<T> {
    pub fn new(task: &SyntheticTask<T>, p: f64) -> Result<Self> {
        if !(p > 0.0 && p <= 1.0) {
            return Err(domain(format!(
                "per-draw success probability must lie in (0, 1], got {p}"
            )));
        }
        Ok(Self {
            p,
            rule: task.bayes_rule(),
        })
    }
}

impl<T: Scalar> HypothesisSampler<T> for BernoulliOracleSampler<T> {
    type Output = LinearModel<T>;

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> LinearModel<T> {
        if rng.random::<f64>() < self.p {
            self.rule.clone()
        } else {
            let w = self.rule.weights.iter().map(|&v| -v).collect();
            LinearModel::from_parts(w, -self.rule.bias)
        }
    }
}

/// Random-search learner: each draw consumes one sample and is accepted when
/// its test error is at most `ε_T`.
pub fn random_search_learner<T: Scalar, S: HypothesisSampler<T>>(
    task: &SyntheticTask<T>,
    epsilon_target: f64,
    sampler: &S,
    budget: u64,
    seed: u64,
) -> Result<LearningTrial> {
    check_target(epsilon_target)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last_error = f64::NAN;
    for draw in 1..=budget {
        let h = sampler.sample(&mut rng);
        let err = evaluate_error(&h, &task.test_set)?;
        last_error = err;
        if err <= epsilon_target {
            return Ok(LearningTrial {
                seed,
                samples_consumed: draw,
                halted: true,
                final_test_error: err,
            });
        }
    }
    if budget == 0 {
        last_error = evaluate_error(&sampler.sample(&mut rng), &task.test_set)?;
    }
    Ok(LearningTrial {
        seed,
        samples_consumed: budget,
        halted: false,
        final_test_error: last_error,
    })
}

/// Runs `count` independent trials on a pool of `workers` threads and
/// returns them ordered by trial index.
pub fn run_trials<F>(count: usize, workers: usize, trial: F) -> Result<Vec<LearningTrial>>
where
    F: Fn(usize) -> Result<LearningTrial> + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| domain(format!("cannot build worker pool: {e}")))?;
    pool.install(|| (0..count).into_par_iter().map(&trial).collect())
}
