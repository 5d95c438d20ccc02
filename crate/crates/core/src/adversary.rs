//! Eavesdropper strategies: simulated intercept-resend on the two channel
//! legs, analytic collective/individual attack models, and the rule by
//! which the eavesdropper turns what she observed into a label.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::info_theory::{eve_noise_from_disturbance, AttackFamily};
use crate::qubit::{Basis, QubitState};
use crate::scalar::{uniform, Scalar};

/// Which basis an intercept-resend attacker measures in on each leg.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisPolicy {
    AlwaysZ,
    RandomPerLeg,
}

/// Channel legs an intercept-resend attacker taps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LegSelection {
    #[default]
    Both,
    OutboundOnly,
    ReturnOnly,
}

/// A channel leg of one protocol round.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Leg {
    /// Authorized learner to data center, carrying `|k⟩`.
    Outbound,
    /// Data center back to the authorized learner, carrying the oracle output.
    Return,
}

impl Leg {
    pub fn index(self) -> usize {
        match self {
            Leg::Outbound => 0,
            Leg::Return => 1,
        }
    }
}

impl LegSelection {
    pub fn covers(self, leg: Leg) -> bool {
        match self {
            LegSelection::Both => true,
            LegSelection::OutboundOnly => leg == Leg::Outbound,
            LegSelection::ReturnOnly => leg == Leg::Return,
        }
    }

    fn leg_count(self) -> i32 {
        match self {
            LegSelection::Both => 2,
            _ => 1,
        }
    }
}

/// Eavesdropping strategy applied to a protocol session.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AttackStrategy<T> {
    None,
    /// Measure-and-resend on a fraction `attack_probability` of rounds.
    InterceptResend {
        attack_probability: T,
        basis_policy: BasisPolicy,
        #[serde(default)]
        legs: LegSelection,
    },
    /// Analytic individual attack at disturbance `disturbance`.
    AnalyticIndividual {
        disturbance: T,
    },
    /// Analytic collective attack at disturbance `disturbance`.
    AnalyticCollective {
        disturbance: T,
    },
}

impl<T: Scalar> AttackStrategy<T> {
    pub fn intercept_resend(attack_probability: T, basis_policy: BasisPolicy) -> Self {
        Self::InterceptResend {
            attack_probability,
            basis_policy,
            legs: LegSelection::Both,
        }
    }

    /// Analytic strategy of the given family; the memoryless family has no
    /// information curve and is rejected.
    pub fn analytic(family: AttackFamily, disturbance: T) -> Result<Self> {
        let s = match family {
            AttackFamily::Collective => Self::AnalyticCollective { disturbance },
            AttackFamily::Individual => Self::AnalyticIndividual { disturbance },
            AttackFamily::Memoryless => {
                return Err(Error::NoClosedForm(
                    "memoryless attacks have no trade-off curve".into(),
                ))
            }
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::None => Ok(()),
            Self::InterceptResend {
                attack_probability: f,
                ..
            } => {
                if f >= T::zero() && f <= T::one() {
                    Ok(())
                } else {
                    Err(domain(format!(
                        "attack probability must lie in [0, 1], got {f}"
                    )))
                }
            }
            Self::AnalyticIndividual { disturbance: d }
            | Self::AnalyticCollective { disturbance: d } => {
                if d >= T::zero() && d <= T::lit(0.5) {
                    Ok(())
                } else {
                    Err(domain(format!("disturbance must lie in [0, 1/2], got {d}")))
                }
            }
        }
    }

    pub fn family(&self) -> Option<AttackFamily> {
        match self {
            Self::AnalyticCollective { .. } => Some(AttackFamily::Collective),
            Self::AnalyticIndividual { .. } => Some(AttackFamily::Individual),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::None => "none",
            Self::InterceptResend { .. } => "intercept_resend",
            Self::AnalyticIndividual { .. } => "analytic_individual",
            Self::AnalyticCollective { .. } => "analytic_collective",
        }
    }

    /// Exact `(η_A, η_E)` this configuration induces.
    ///
    /// For intercept-resend a check qubit is disturbed only when some tapped
    /// leg measures it in Z, after which the final X measurement errs with
    /// probability 1/2; the eavesdropper knows the label only when both legs
    /// were measured in Z and guesses otherwise.
    pub fn expected_noise(&self) -> Result<(T, T)> {
        self.validate()?;
        let half = T::lit(0.5);
        match *self {
            Self::None => Ok((T::zero(), half)),
            Self::InterceptResend {
                attack_probability: f,
                basis_policy,
                legs,
            } => {
                let p_z = match basis_policy {
                    BasisPolicy::AlwaysZ => T::one(),
                    BasisPolicy::RandomPerLeg => half,
                };
                let p_x = T::one() - p_z;
                let untouched = p_x.powi(legs.leg_count());
                let eta_a = f * half * (T::one() - untouched);
                let both_z = if legs == LegSelection::Both {
                    p_z * p_z
                } else {
                    T::zero()
                };
                let eta_e = half * (T::one() - f * both_z);
                Ok((eta_a, eta_e))
            }
            Self::AnalyticIndividual { disturbance } => Ok((
                disturbance,
                eve_noise_from_disturbance(AttackFamily::Individual, disturbance)?,
            )),
            Self::AnalyticCollective { disturbance } => Ok((
                disturbance,
                eve_noise_from_disturbance(AttackFamily::Collective, disturbance)?,
            )),
        }
    }

    /// Draws the per-round attack decision. Intercept-resend always consumes
    /// exactly one draw so that sessions stay aligned across `f`.
    pub fn plan_round<R: Rng + ?Sized>(&self, rng: &mut R) -> RoundPlan<T> {
        let attacked = match *self {
            Self::None => false,
            Self::InterceptResend {
                attack_probability, ..
            } => uniform::<T, R>(rng) < attack_probability,
            Self::AnalyticIndividual { .. } | Self::AnalyticCollective { .. } => true,
        };
        RoundPlan {
            strategy: *self,
            attacked,
        }
    }
}

/// One leg's measurement by the eavesdropper.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LegRecord {
    pub basis: Basis,
    pub outcome: u8,
}

/// What the eavesdropper holds about one round.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct EveRecord {
    pub legs: [Option<LegRecord>; 2],
    /// Label obtained through an analytic attack model.
    pub analytic_label: Option<u8>,
}

impl EveRecord {
    pub fn is_empty(&self) -> bool {
        self.legs.iter().all(Option::is_none) && self.analytic_label.is_none()
    }

    /// XOR of both legs' outcomes when both were measured in Z.
    pub fn decoded_label(&self) -> Option<u8> {
        match self.legs {
            [Some(a), Some(b)] if a.basis == Basis::Z && b.basis == Basis::Z => {
                Some(a.outcome ^ b.outcome)
            }
            _ => self.analytic_label,
        }
    }
}

/// The eavesdropper's label for a round: the decoded label when available,
/// otherwise a uniform guess.
pub fn infer_label<R: Rng + ?Sized>(record: &EveRecord, rng: &mut R) -> u8 {
    match record.decoded_label() {
        Some(bit) => bit,
        None => u8::from(rng.random::<bool>()),
    }
}

/// Attack decision for one round, applied leg by leg.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoundPlan<T> {
    strategy: AttackStrategy<T>,
    pub attacked: bool,
}

impl<T: Scalar> RoundPlan<T> {
    /// Acts on the qubit travelling on `leg`.
    ///
    /// Intercept-resend measures in the policy's basis and forwards the
    /// post-measurement state. Analytic strategies act on the return leg as
    /// the Pauli channel `ρ → (1−D)ρ + D·YρY`, which flips Z and X outcomes
    /// alike with probability `D`.
    pub fn intercept<R: Rng + ?Sized>(
        &self,
        state: &QubitState<T>,
        leg: Leg,
        rng: &mut R,
    ) -> (QubitState<T>, Option<LegRecord>) {
        if !self.attacked {
            return (*state, None);
        }
        match self.strategy {
            AttackStrategy::None => (*state, None),
            AttackStrategy::InterceptResend {
                basis_policy, legs, ..
            } => {
                if !legs.covers(leg) {
                    return (*state, None);
                }
                let basis = match basis_policy {
                    BasisPolicy::AlwaysZ => Basis::Z,
                    BasisPolicy::RandomPerLeg => {
                        if rng.random::<bool>() {
                            Basis::X
                        } else {
                            Basis::Z
                        }
                    }
                };
                let (outcome, post) = state.measure(basis, uniform(rng));
                (post, Some(LegRecord { basis, outcome }))
            }
            AttackStrategy::AnalyticIndividual { disturbance }
            | AttackStrategy::AnalyticCollective { disturbance } => {
                if leg == Leg::Return {
                    (state.mix(&state.pauli_y(), disturbance), None)
                } else {
                    (*state, None)
                }
            }
        }
    }
}

/// Single-leg interception: draws the attack decision and acts on `leg`.
pub fn intercept<T: Scalar, R: Rng + ?Sized>(
    state: &QubitState<T>,
    leg: Leg,
    strategy: &AttackStrategy<T>,
    rng: &mut R,
) -> (QubitState<T>, Option<LegRecord>) {
    strategy.plan_round(rng).intercept(state, leg, rng)
}

/// `(η_A, η_E)` trade-off curve of a strategy family.
///
/// Intercept-resend sweeps the attack probability over `[0, 1]` in steps of
/// 1/20 keeping the configured basis policy and legs; analytic kinds sweep the
/// disturbance over `[0, 1/2]` in steps of 1/100.
pub fn theoretical_tradeoff<T: Scalar>(strategy: &AttackStrategy<T>) -> Result<Vec<(T, T)>> {
    strategy.validate()?;
    match *strategy {
        AttackStrategy::None => Err(domain("no trade-off without an attack")),
        AttackStrategy::InterceptResend {
            basis_policy, legs, ..
        } => (0..=20)
            .map(|i| {
                AttackStrategy::InterceptResend {
                    attack_probability: T::count(i) / T::lit(20.0),
                    basis_policy,
                    legs,
                }
                .expected_noise()
            })
            .collect(),
        AttackStrategy::AnalyticIndividual { .. } | AttackStrategy::AnalyticCollective { .. } => {
            let family = strategy.family().expect("analytic");
            (0..=50)
                .map(|i| {
                    let d = T::count(i) / T::lit(100.0);
                    AttackStrategy::analytic(family, d)?.expected_noise()
                })
                .collect()
        }
    }
}
