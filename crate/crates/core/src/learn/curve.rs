//! Empirical learning probability `P_L(n, ε_T)` with Wilson intervals.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::learn::trial::LearningTrial;
use crate::stats::WilsonInterval;

/// Fewest trials accepted for an interval estimate.
pub const MIN_TRIALS: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    pub n: u64,
    pub p_hat: f64,
    pub wilson_low: f64,
    pub wilson_high: f64,
    pub trials: u64,
}

impl CurveRow {
    pub fn interval(&self) -> WilsonInterval {
        WilsonInterval {
            p_hat: self.p_hat,
            low: self.wilson_low,
            high: self.wilson_high,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct LearningProbabilityCurve {
    pub rows: Vec<CurveRow>,
}

impl LearningProbabilityCurve {
    pub fn is_nondecreasing(&self) -> bool {
        let mut sorted: Vec<&CurveRow> = self.rows.iter().collect();
        sorted.sort_by_key(|r| r.n);
        sorted.windows(2).all(|w| w[0].p_hat <= w[1].p_hat)
    }

    pub fn at(&self, n: u64) -> Option<&CurveRow> {
        self.rows.iter().find(|r| r.n == n)
    }
}

/// For each `n` in the grid, the fraction of trials that halted having
/// consumed at most `n` samples.
pub fn estimate_learning_probability(
    trials: &[LearningTrial],
    n_grid: &[u64],
) -> Result<LearningProbabilityCurve> {
    if trials.len() < MIN_TRIALS {
        return Err(Error::InsufficientTrials {
            got: trials.len(),
            required: MIN_TRIALS,
        });
    }
    let total = trials.len() as u64;
    let rows = n_grid
        .iter()
        .map(|&n| {
            let hits = trials
                .iter()
                .filter(|t| t.halted && t.samples_consumed <= n)
                .count() as u64;
            let w = WilsonInterval::wilson95(hits, total);
            CurveRow {
                n,
                p_hat: w.p_hat,
                wilson_low: w.low,
                wilson_high: w.high,
                trials: total,
            }
        })
        .collect();
    Ok(LearningProbabilityCurve { rows })
}
