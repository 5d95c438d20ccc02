//! Synthetic binary classification task: two symmetric Gaussian clusters.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use crate::error::{domain, Error, Result};
use crate::learn::model::{Hypothesis, LinearModel};
use crate::protocol::{ConceptSource, Example};
use crate::scalar::Scalar;
use crate::stats::derive_seed;

/// Samples used for the Monte-Carlo Bayes-error check.
pub const BAYES_CHECK_SAMPLES: usize = 100_000;
pub const MIN_TEST_SIZE: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TaskConfig<T> {
    pub dimension: usize,
    /// Distance between the two cluster means, in units of the per-axis
    /// standard deviation.
    pub separation: T,
    pub test_size: usize,
    /// Largest tolerated Bayes error, normally half the smallest target
    /// inaccuracy the task will be used with.
    pub max_bayes_error: f64,
}

impl<T: Scalar> TaskConfig<T> {
    pub fn new(dimension: usize, separation: T, max_bayes_error: f64) -> Self {
        Self {
            dimension,
            separation,
            test_size: MIN_TEST_SIZE,
            max_bayes_error,
        }
    }
}

/// Class-conditional clusters `N(±(s/2)·u, I)` with balanced labels, plus a
/// clean test set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticTask<T> {
    pub dimension: usize,
    pub separation: T,
    /// Unit vector joining the cluster means.
    pub direction: Vec<T>,
    pub test_set: Vec<Example<T>>,
    /// `Φ(−s/2)`.
    pub bayes_error: f64,
    /// Monte-Carlo estimate of the Bayes error.
    pub bayes_error_estimate: f64,
}

/// `Φ(−s/2)` for cluster separation `s`.
pub fn analytic_bayes_error(separation: f64) -> f64 {
    0.5 * erfc(separation / (2.0 * std::f64::consts::SQRT_2))
}

fn gaussian<T: Scalar, R: Rng + ?Sized>(rng: &mut R) -> T {
    T::lit(rng.sample::<f64, _>(StandardNormal))
}

pub fn generate_task<T: Scalar>(config: &TaskConfig<T>, seed: u64) -> Result<SyntheticTask<T>> {
    if config.dimension < 2 {
        return Err(domain(format!(
            "dimension must be at least 2, got {}",
            config.dimension
        )));
    }
    if !(config.separation > T::zero()) || !config.separation.is_finite() {
        return Err(domain(format!(
            "separation must be positive, got {}",
            config.separation
        )));
    }
    if config.test_size < MIN_TEST_SIZE {
        return Err(domain(format!(
            "test set must hold at least {MIN_TEST_SIZE} examples, got {}",
            config.test_size
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw: Vec<T> = (0..config.dimension).map(|_| gaussian(&mut rng)).collect();
    let norm = raw.iter().map(|&v| v * v).sum::<T>().sqrt();
    let direction: Vec<T> = raw.into_iter().map(|v| v / norm).collect();

    let mut task = SyntheticTask {
        dimension: config.dimension,
        separation: config.separation,
        direction,
        test_set: Vec::new(),
        bayes_error: analytic_bayes_error(config.separation.to_f64_lossy()),
        bayes_error_estimate: 0.0,
    };

    let mut check_rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, 1, 0));
    let rule = task.bayes_rule();
    let wrong = (0..BAYES_CHECK_SAMPLES)
        .filter(|_| {
            let e = task.draw(&mut check_rng);
            rule.classify(&e.x) != e.label
        })
        .count();
    task.bayes_error_estimate = wrong as f64 / BAYES_CHECK_SAMPLES as f64;
    let worst = task.bayes_error.max(task.bayes_error_estimate);
    if worst >= config.max_bayes_error {
        return Err(Error::TaskTooHard {
            bayes_error: worst,
            allowed: config.max_bayes_error,
        });
    }

    task.test_set = (0..config.test_size).map(|_| task.draw(&mut rng)).collect();
    Ok(task)
}

impl<T: Scalar> SyntheticTask<T> {
    /// The Bayes-optimal classifier `1[u·x > 0]`.
    pub fn bayes_rule(&self) -> LinearModel<T> {
        LinearModel::from_parts(self.direction.clone(), T::zero())
    }

    pub fn test_balance(&self) -> f64 {
        let ones = self.test_set.iter().filter(|e| e.label == 1).count();
        ones as f64 / self.test_set.len() as f64
    }
}

impl<T: Scalar> ConceptSource<T> for SyntheticTask<T> {
    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Example<T> {
        let label = u8::from(rng.random::<bool>());
        let sign = if label == 1 { T::one() } else { -T::one() };
        let offset = sign * self.separation / T::lit(2.0);
        let x = self
            .direction
            .iter()
            .map(|&u| offset * u + gaussian(rng))
            .collect();
        Example { x, label }
    }
}

/// Endless stream of training examples whose labels are flipped
/// independently with probability `eta`.
pub struct NoisyStream<'a, T> {
    task: &'a SyntheticTask<T>,
    eta: f64,
    rng: ChaCha8Rng,
}

impl<'a, T: Scalar> NoisyStream<'a, T> {
    pub fn new(task: &'a SyntheticTask<T>, eta: f64, seed: u64) -> Result<Self> {
        if !(0.0..=0.5).contains(&eta) {
            return Err(domain(format!(
                "stream label noise must lie in [0, 1/2], got {eta}"
            )));
        }
        Ok(Self {
            task,
            eta,
            rng: ChaCha8Rng::seed_from_u64(seed),
        })
    }
}

impl<T: Scalar> Iterator for NoisyStream<'_, T> {
    type Item = Example<T>;

    fn next(&mut self) -> Option<Example<T>> {
        let mut e = self.task.draw(&mut self.rng);
        if self.rng.random::<f64>() < self.eta {
            e.label ^= 1;
        }
        Some(e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::learn::model::evaluate_error;
    use crate::stats::within_binomial_sigma;

    #[test]
    fn far_clusters_are_separable() {
        let task = generate_task(&TaskConfig::new(2, 12.0f64, 0.05), 1).unwrap();
        assert!(task.bayes_error < 1e-8);
        assert_eq!(
            evaluate_error(&task.bayes_rule(), &task.test_set).unwrap(),
            0.0
        );
    }

    #[test]
    fn deterministic_for_seed() {
        let cfg = TaskConfig::new(5, 3.0f64, 0.1);
        assert_eq!(
            generate_task(&cfg, 9).unwrap(),
            generate_task(&cfg, 9).unwrap()
        );
        assert_ne!(
            generate_task(&cfg, 9).unwrap().test_set,
            generate_task(&cfg, 10).unwrap().test_set
        );
    }

    #[test]
    fn labels_are_balanced() {
        let task = generate_task(&TaskConfig::new(3, 3.0f64, 0.1), 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let ones = (0..10_000)
            .filter(|_| task.draw(&mut rng).label == 1)
            .count();
        assert!(within_binomial_sigma(ones as u64, 10_000, 0.5, 4.0));
    }

    #[test]
    fn rejects_hard_tasks() {
        let err = generate_task(&TaskConfig::new(4, 1.0f64, 0.05), 1).unwrap_err();
        assert!(matches!(err, Error::TaskTooHard { .. }));
        assert!(generate_task(&TaskConfig::new(1, 3.0f64, 0.1), 1).is_err());
        assert!(generate_task(&TaskConfig::new(3, 0.0f64, 0.1), 1).is_err());
        let mut small = TaskConfig::new(3, 3.0f64, 0.1);
        small.test_size = 10;
        assert!(generate_task(&small, 1).is_err());
    }

    #[test]
    fn monte_carlo_matches_analytic_error() {
        let task = generate_task(&TaskConfig::new(4, 3.0f64, 0.2), 5).unwrap();
        let p = task.bayes_error;
        assert!((p - 0.066_807_2).abs() < 1e-6);
        assert!(within_binomial_sigma(
            (task.bayes_error_estimate * BAYES_CHECK_SAMPLES as f64).round() as u64,
            BAYES_CHECK_SAMPLES as u64,
            p,
            4.0
        ));
    }

    #[test]
    fn stream_flip_rate() {
        let task = generate_task(&TaskConfig::new(2, 12.0f64, 0.05), 3).unwrap();
        let rule = task.bayes_rule();
        let stream = NoisyStream::new(&task, 0.2, 8).unwrap();
        let flipped = stream
            .take(20_000)
            .filter(|e| rule.classify(&e.x) != e.label)
            .count();
        assert!(within_binomial_sigma(flipped as u64, 20_000, 0.2, 4.0));
        assert!(NoisyStream::new(&task, 0.6, 1).is_err());
    }
}
