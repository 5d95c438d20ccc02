//! Closed-form PAC-learning algebra under symmetric label noise.
//!
//! Sample-complexity bounds for finite hypothesis spaces, the confidence
//! floor `δ* = exp(-γ n)` with `γ = ε²(1-2η)²/2`, the random-search
//! learning-probability model and the authorized-versus-eavesdropper
//! exclusivity verdict.
//!
//! The bounds under noise are sufficient, not tight, so every verdict here is
//! a guarantee in one direction only.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::scalar::Scalar;

/// The tuple `(ε, δ, ln|H|, η)` feeding every bound formula.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PacParams<T> {
    pub epsilon: T,
    pub delta: T,
    /// Natural logarithm of the hypothesis count, `ln|H|`.
    pub log_hypothesis_count: T,
    pub eta: T,
}

impl<T: Scalar> PacParams<T> {
    pub fn new(epsilon: T, delta: T, log_hypothesis_count: T, eta: T) -> Result<Self> {
        let params = Self {
            epsilon,
            delta,
            log_hypothesis_count,
            eta,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        check_epsilon(self.epsilon)?;
        check_delta(self.delta)?;
        if !(self.log_hypothesis_count >= T::zero()) || !self.log_hypothesis_count.is_finite() {
            return Err(domain(format!(
                "ln|H| must be finite and non-negative, got {}",
                self.log_hypothesis_count
            )));
        }
        check_eta(self.eta)
    }

    pub fn noiseless_bound(&self) -> Result<u64> {
        sample_bound_noiseless(self.epsilon, self.delta, self.log_hypothesis_count)
    }

    pub fn noisy_bound(&self) -> Result<u64> {
        sample_bound_noisy(
            self.epsilon,
            self.delta,
            self.log_hypothesis_count,
            self.eta,
        )
    }

    pub fn gamma(&self) -> Result<T> {
        gamma(self.epsilon, self.eta)
    }
}

fn check_epsilon<T: Scalar>(epsilon: T) -> Result<()> {
    if epsilon > T::zero() && epsilon < T::one() {
        Ok(())
    } else {
        Err(domain(format!("epsilon must lie in (0, 1), got {epsilon}")))
    }
}

fn check_delta<T: Scalar>(delta: T) -> Result<()> {
    if delta > T::zero() && delta < T::one() {
        Ok(())
    } else {
        Err(domain(format!("delta must lie in (0, 1), got {delta}")))
    }
}

fn check_eta<T: Scalar>(eta: T) -> Result<()> {
    if eta.is_nan() || eta < T::zero() {
        return Err(domain(format!("eta must lie in [0, 1/2), got {eta}")));
    }
    if eta >= T::lit(0.5) {
        return Err(Error::NoiseAtOneHalf(eta.to_f64_lossy()));
    }
    Ok(())
}

fn ceil_count<T: Scalar>(raw: T) -> u64 {
    let c = raw.ceil();
    if c <= T::zero() {
        0
    } else {
        c.to_u64().unwrap_or(u64::MAX)
    }
}

/// Real-valued noiseless bound `(1/ε)·(ln|H| − ln δ)`.
pub fn sample_bound_noiseless_raw<T: Scalar>(
    epsilon: T,
    delta: T,
    log_hypothesis_count: T,
) -> Result<T> {
    PacParams::new(epsilon, delta, log_hypothesis_count, T::zero())?;
    Ok((log_hypothesis_count - delta.ln()) / epsilon)
}

/// Minimum training-set size for an `(ε, δ)`-PAC learner on noiseless data.
pub fn sample_bound_noiseless<T: Scalar>(
    epsilon: T,
    delta: T,
    log_hypothesis_count: T,
) -> Result<u64> {
    sample_bound_noiseless_raw(epsilon, delta, log_hypothesis_count).map(ceil_count)
}

/// Real-valued noisy bound `2/(ε²(1−2η)²)·(ln 2 + ln|H| − ln δ)`.
pub fn sample_bound_noisy_raw<T: Scalar>(
    epsilon: T,
    delta: T,
    log_hypothesis_count: T,
    eta: T,
) -> Result<T> {
    PacParams::new(epsilon, delta, log_hypothesis_count, eta)?;
    let two = T::lit(2.0);
    let margin = T::one() - two * eta;
    let scale = two / (epsilon * epsilon * margin * margin);
    Ok(scale * (T::LN_2() + log_hypothesis_count - delta.ln()))
}

/// Sample-complexity bound when a fraction `eta` of labels is flipped.
pub fn sample_bound_noisy<T: Scalar>(
    epsilon: T,
    delta: T,
    log_hypothesis_count: T,
    eta: T,
) -> Result<u64> {
    sample_bound_noisy_raw(epsilon, delta, log_hypothesis_count, eta).map(ceil_count)
}

/// `γ = ε²(1−2η)²/2`.
pub fn gamma<T: Scalar>(epsilon: T, eta: T) -> Result<T> {
    check_epsilon(epsilon)?;
    check_eta(eta)?;
    let margin = T::one() - T::lit(2.0) * eta;
    Ok(epsilon * epsilon * margin * margin / T::lit(2.0))
}

/// Confidence floor `δ* = exp(−γ n)` for a dataset of `n` examples.
///
/// Stored as `ln δ*` so that large `n` does not underflow.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaFloor<T> {
    pub gamma: T,
    pub n: u64,
    pub log_delta_star: T,
}

impl<T: Scalar> DeltaFloor<T> {
    pub fn delta_star(&self) -> T {
        self.log_delta_star.exp()
    }
}

pub fn delta_floor<T: Scalar>(epsilon: T, eta: T, n: u64) -> Result<DeltaFloor<T>> {
    let gamma = gamma(epsilon, eta)?;
    Ok(DeltaFloor {
        gamma,
        n,
        log_delta_star: -gamma * T::count(n),
    })
}

/// Random-search learning model: each draw independently hits the target
/// with probability `p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RandomSearchModel<T> {
    pub p: T,
}

impl<T: Scalar> RandomSearchModel<T> {
    pub fn new(p: T) -> Result<Self> {
        if p > T::zero() && p <= T::one() {
            Ok(Self { p })
        } else {
            Err(domain(format!(
                "per-trial success probability must lie in (0, 1], got {p}"
            )))
        }
    }

    /// Rate `ξ = −ln(1−p)`; infinite when `p = 1`.
    pub fn xi(&self) -> T {
        -(-self.p).ln_1p()
    }

    /// Exact `1 − (1−p)^n`.
    pub fn probability(&self, n: u64) -> T {
        if n == 0 {
            return T::zero();
        }
        if self.p == T::one() {
            return T::one();
        }
        -(T::count(n) * (-self.p).ln_1p()).exp_m1()
    }

    /// Exponential form `1 − e^{−ξ n}`.
    pub fn exponential_approximation(&self, n: u64) -> T {
        if n == 0 {
            return T::zero();
        }
        -(-self.xi() * T::count(n)).exp_m1()
    }
}

pub fn random_search_curve<T: Scalar>(p: T, n: u64) -> Result<T> {
    Ok(RandomSearchModel::new(p)?.probability(n))
}

/// PAC condition phrased through the learning probability: `P_L ≥ 1 − δ`.
pub fn pac_condition_met<T: Scalar>(learning_probability: T, delta: T) -> bool {
    learning_probability >= T::one() - delta
}

/// Outcome of comparing the authorized and eavesdropper confidence floors
/// at a shared inaccuracy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExclusivityVerdict<T> {
    pub authorized_floor: DeltaFloor<T>,
    pub eavesdropper_floor: DeltaFloor<T>,
    pub eta_star: T,
    pub superiority_ensured: bool,
    pub explanation: String,
}

/// Inputs of [`exclusivity_verdict`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExclusivityQuery<T> {
    pub epsilon_a: T,
    pub eta_a: T,
    pub n_a: u64,
    pub eta_e: T,
    pub n_e: u64,
    pub eta_star: T,
}

/// Decides whether the authorized learner's guarantee strictly beats any
/// guarantee available to the eavesdropper at the same inaccuracy.
///
/// Superiority is ensured iff `η_A < η*` and `δ*_A < δ*_E` with `ε_E = ε_A`.
pub fn exclusivity_verdict<T: Scalar>(
    query: &ExclusivityQuery<T>,
) -> Result<ExclusivityVerdict<T>> {
    let q = query;
    if q.n_e > q.n_a {
        return Err(Error::SizeOrdering {
            authorized: q.n_a,
            eavesdropper: q.n_e,
        });
    }
    if !(q.eta_star > T::zero() && q.eta_star < T::lit(0.5)) {
        return Err(domain(format!(
            "eta_star must lie in (0, 1/2), got {}",
            q.eta_star
        )));
    }
    let authorized_floor = delta_floor(q.epsilon_a, q.eta_a, q.n_a)?;
    let eavesdropper_floor = delta_floor(q.epsilon_a, q.eta_e, q.n_e)?;

    let below_threshold = q.eta_a < q.eta_star;
    let floors_ordered = authorized_floor.log_delta_star < eavesdropper_floor.log_delta_star;
    let superiority_ensured = below_threshold && floors_ordered;

    let explanation = if superiority_ensured {
        format!(
            "eta_A = {} < eta* = {} and delta*_A = {:.6e} < delta*_E = {:.6e} at epsilon_E = epsilon_A: \
             no guarantee places the eavesdropper at or above the authorized learner \
             (one-directional: the noisy bound is not tight)",
            q.eta_a,
            q.eta_star,
            authorized_floor.delta_star(),
            eavesdropper_floor.delta_star()
        )
    } else {
        let mut reasons = Vec::new();
        if !below_threshold {
            reasons.push(format!("eta_A = {} >= eta* = {}", q.eta_a, q.eta_star));
        }
        if !floors_ordered {
            reasons.push(format!(
                "delta*_A = {:.6e} is not below delta*_E = {:.6e}",
                authorized_floor.delta_star(),
                eavesdropper_floor.delta_star()
            ));
        }
        format!("superiority not ensured: {}", reasons.join("; "))
    };

    Ok(ExclusivityVerdict {
        authorized_floor,
        eavesdropper_floor,
        eta_star: q.eta_star,
        superiority_ensured,
        explanation,
    })
}

/// The eavesdropper inaccuracy at which both floors coincide:
/// `ε_E = ε_A·(1−2η_A)/(1−2η_E)·√(n_A/n_E)`.
///
/// Whenever the authorized floor is the lower one this exceeds `ε_A`, i.e.
/// matching confidence costs the eavesdropper accuracy. `None` if `n_E = 0`.
pub fn equalizing_epsilon_e<T: Scalar>(query: &ExclusivityQuery<T>) -> Result<Option<T>> {
    check_epsilon(query.epsilon_a)?;
    check_eta(query.eta_a)?;
    check_eta(query.eta_e)?;
    if query.n_e == 0 {
        return Ok(None);
    }
    let two = T::lit(2.0);
    let ratio = (T::one() - two * query.eta_a) / (T::one() - two * query.eta_e);
    let sizes = (T::count(query.n_a) / T::count(query.n_e)).sqrt();
    Ok(Some(query.epsilon_a * ratio * sizes))
}
