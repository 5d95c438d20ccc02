//! Interval estimates and seed bookkeeping for Monte-Carlo experiments.

use serde::{Deserialize, Serialize};

/// Two-sided 95% standard-normal quantile.
pub const Z_95: f64 = 1.959_963_984_540_054;

/// Wilson score interval for `successes` out of `trials`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WilsonInterval {
    pub p_hat: f64,
    pub low: f64,
    pub high: f64,
}

impl WilsonInterval {
    pub fn new(successes: u64, trials: u64, z: f64) -> Self {
        assert!(successes <= trials, "successes exceed trials");
        if trials == 0 {
            return Self {
                p_hat: 0.0,
                low: 0.0,
                high: 1.0,
            };
        }
        let n = trials as f64;
        let p = successes as f64 / n;
        let z2 = z * z;
        let denom = 1.0 + z2 / n;
        let center = p + z2 / (2.0 * n);
        let rad = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
        Self {
            p_hat: p,
            low: ((center - rad) / denom).max(0.0),
            high: ((center + rad) / denom).min(1.0),
        }
    }

    pub fn wilson95(successes: u64, trials: u64) -> Self {
        Self::new(successes, trials, Z_95)
    }

    pub fn contains(&self, p: f64) -> bool {
        self.low <= p && p <= self.high
    }

    pub fn overlaps(&self, other: &Self) -> bool {
        self.low <= other.high && other.low <= self.high
    }
}

/// Whether `count` successes out of `n` lie within `k` binomial standard
/// deviations of the expectation under `p`.
///
/// A degenerate `p` (0 or 1) requires an exact match.
pub fn within_binomial_sigma(count: u64, n: u64, p: f64, k: f64) -> bool {
    let n_f = n as f64;
    let mean = n_f * p;
    let sd = (n_f * p * (1.0 - p)).sqrt();
    (count as f64 - mean).abs() <= k * sd
}

/// SplitMix64 finalizer.
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives an independent child seed from `(base, stream, index)`.
pub fn derive_seed(base: u64, stream: u64, index: u64) -> u64 {
    let a = mix64(base.wrapping_add(0x9e37_79b9_7f4a_7c15));
    let b = mix64(a ^ stream.wrapping_mul(0xd1b5_4a32_d192_ed03));
    mix64(b ^ index.wrapping_mul(0x8cb9_2ba7_2f3d_8dd7))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_reference_values() {
        // 50/100 at z = 1.96: center 0.5, half-width 0.0962...
        let w = WilsonInterval::wilson95(50, 100);
        assert!((w.low - 0.403_831_9).abs() < 1e-6, "{w:?}");
        assert!((w.high - 0.596_168_1).abs() < 1e-6);
        let zero = WilsonInterval::wilson95(0, 30);
        assert_eq!(zero.low, 0.0);
        assert!(zero.high > 0.1 && zero.high < 0.12);
        let all = WilsonInterval::wilson95(30, 30);
        assert_eq!(all.high, 1.0);
    }

    #[test]
    fn overlap_logic() {
        let a = WilsonInterval {
            p_hat: 0.5,
            low: 0.4,
            high: 0.6,
        };
        let b = WilsonInterval {
            p_hat: 0.7,
            low: 0.6,
            high: 0.8,
        };
        let c = WilsonInterval {
            p_hat: 0.9,
            low: 0.85,
            high: 0.95,
        };
        assert!(a.overlaps(&b) && b.overlaps(&a));
        assert!(!a.overlaps(&c));
    }

    #[test]
    fn binomial_band() {
        assert!(within_binomial_sigma(0, 1000, 0.0, 4.0));
        assert!(!within_binomial_sigma(1, 1000, 0.0, 4.0));
        assert!(within_binomial_sigma(520, 1000, 0.5, 4.0));
        assert!(!within_binomial_sigma(600, 1000, 0.5, 4.0));
    }

    #[test]
    fn seeds_are_distinct() {
        let mut seen = std::collections::HashSet::new();
        for s in 0..4 {
            for i in 0..1000 {
                assert!(seen.insert(derive_seed(42, s, i)));
            }
        }
        assert_eq!(derive_seed(1, 2, 3), derive_seed(1, 2, 3));
    }
}
