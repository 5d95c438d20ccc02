//! The label-transmission protocol.
//!
//! Each round the authorized learner prepares one of `|0⟩, |1⟩, |+⟩, |−⟩`
//! uniformly at random and sends it to the data center, which draws an input
//! `x` and applies the oracle `F` (a Pauli-X conditioned on `c(x)`). The qubit
//! returns and the learner measures Z on data rounds, decoding
//! `c = outcome ⊕ k`, and X on check rounds, counting an error whenever the
//! outcome differs from the prepared sign. An eavesdropper may act on either
//! leg. The session stops once the requested number of data rounds is in.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::adversary::{infer_label, AttackStrategy, EveRecord, Leg};
use crate::error::{domain, Error, Result};
use crate::qubit::{Basis, PreparationLabel, QubitState};
use crate::scalar::{uniform, Scalar};

/// One labelled training example `(x, c(x))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Example<T> {
    pub x: Vec<T>,
    pub label: u8,
}

/// Source of the data center's training pairs: draws `x ~ D` together with
/// its label `c(x)`.
pub trait ConceptSource<T> {
    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Example<T>;
}

/// What the authorized learner does when the estimated disturbance exceeds
/// its threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AbortMode {
    /// Flag the session as aborted but keep the harvested datasets.
    #[default]
    Flag,
    /// Flag the session and discard both datasets.
    Truncate,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct AbortPolicy<T> {
    /// Abort when `η_A` exceeds this value; `None` disables the check.
    pub threshold: Option<T>,
    #[serde(default)]
    pub mode: AbortMode,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionConfig<T> {
    pub target_data_count: usize,
    pub strategy: AttackStrategy<T>,
    #[serde(default)]
    pub abort: AbortPolicy<T>,
    pub seed: u64,
    /// Keep a per-round transcript in the result.
    #[serde(default)]
    pub record_transcript: bool,
}

/// Rounds allowed per requested data example before the session gives up.
pub const ROUND_CAP_FACTOR: u64 = 20;

/// A check-round observation: prepared sign and measured sign (`0` is `+`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub prepared: u8,
    pub measured: u8,
}

impl CheckOutcome {
    pub fn is_error(&self) -> bool {
        self.prepared != self.measured
    }
}

/// Transcript entry of one round.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtocolRound<T> {
    pub round_id: u64,
    pub preparation: PreparationLabel,
    pub is_check: bool,
    /// Input of a data round; check-round inputs are discarded.
    pub input_x: Option<Vec<T>>,
    pub final_outcome: u8,
    pub eve_record: Option<EveRecord>,
    /// Check round whose X outcome differed from the prepared sign.
    pub check_error: bool,
    /// Data round whose decoded label differs from `c(x)`.
    pub label_flipped: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionResult<T> {
    pub authorized_dataset: Vec<Example<T>>,
    pub eavesdropper_dataset: Vec<Example<T>>,
    pub eta_a_estimate: T,
    pub check_count: u64,
    pub error_count: u64,
    pub aborted: bool,
    pub rounds: u64,
    /// Authorized labels that differ from the data center's `c(x)`.
    pub authorized_label_errors: u64,
    /// Eavesdropper labels that differ from the data center's `c(x)`.
    pub eve_label_errors: u64,
    pub transcript: Vec<ProtocolRound<T>>,
}

impl<T: Scalar> SessionResult<T> {
    /// Fraction of eavesdropper labels that are wrong.
    pub fn eve_error_rate(&self) -> f64 {
        let n = self.data_rounds();
        if n == 0 {
            0.0
        } else {
            self.eve_label_errors as f64 / n as f64
        }
    }

    pub fn authorized_error_rate(&self) -> f64 {
        let n = self.data_rounds();
        if n == 0 {
            0.0
        } else {
            self.authorized_label_errors as f64 / n as f64
        }
    }

    fn data_rounds(&self) -> u64 {
        self.rounds - self.check_count
    }
}

/// `η_A = N_err± / |check rounds|`.
pub fn estimate_eta_a<T: Scalar>(check_outcomes: &[CheckOutcome]) -> Result<T> {
    if check_outcomes.is_empty() {
        return Err(Error::EmptyInput(
            "no check outcomes to estimate eta_A".into(),
        ));
    }
    let errors = check_outcomes.iter().filter(|c| c.is_error()).count();
    Ok(T::count(errors as u64) / T::count(check_outcomes.len() as u64))
}

/// Runs one protocol session.
pub fn run_session<T: Scalar, S: ConceptSource<T>>(
    source: &S,
    config: &SessionConfig<T>,
) -> Result<SessionResult<T>> {
    if config.target_data_count == 0 {
        return Err(domain("target data count must be at least 1"));
    }
    config.strategy.validate()?;
    if let Some(t) = config.abort.threshold {
        if !(t > T::zero() && t <= T::lit(0.5)) {
            return Err(domain(format!(
                "abort threshold must lie in (0, 1/2], got {t}"
            )));
        }
    }
    // analytic attacks hand the eavesdropper labels at her mapped noise rate
    let analytic_eve_noise = match config.strategy.family() {
        Some(_) => Some(config.strategy.expected_noise()?.1),
        None => None,
    };

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let target = config.target_data_count as u64;
    let cap = ROUND_CAP_FACTOR * target;

    let mut authorized = Vec::with_capacity(config.target_data_count);
    let mut eavesdropper = Vec::with_capacity(config.target_data_count);
    let mut checks = Vec::new();
    let mut transcript = Vec::new();
    let mut authorized_label_errors = 0;
    let mut eve_label_errors = 0;
    let mut rounds = 0u64;

    while (authorized.len() as u64) < target {
        if rounds >= cap {
            return Err(Error::RoundCapExceeded { cap, target });
        }
        let round_id = rounds;
        rounds += 1;

        let k = PreparationLabel::from_index(rng.random_range(0..4));
        let example = source.draw(&mut rng);
        let plan = config.strategy.plan_round(&mut rng);

        let mut record = EveRecord::default();
        let state = QubitState::<T>::prepare(k);
        let (state, leg0) = plan.intercept(&state, Leg::Outbound, &mut rng);
        let state = state.apply_oracle(example.label);
        let (state, leg1) = plan.intercept(&state, Leg::Return, &mut rng);
        record.legs = [leg0, leg1];

        let basis = k.basis();
        let (outcome, _) = state.measure(basis, uniform(&mut rng));

        let mut check_error = false;
        let mut label_flipped = false;
        let is_check = k.is_check();
        if is_check {
            let c = CheckOutcome {
                prepared: k.bit(),
                measured: outcome,
            };
            check_error = c.is_error();
            checks.push(c);
        } else {
            debug_assert_eq!(basis, Basis::Z);
            let observed = outcome ^ k.bit();
            label_flipped = observed != example.label;
            authorized_label_errors += u64::from(label_flipped);

            if let Some(eta_e) = analytic_eve_noise {
                let flip = uniform::<T, _>(&mut rng) < eta_e;
                record.analytic_label = Some(example.label ^ u8::from(flip));
            }
            let guess = infer_label(&record, &mut rng);
            eve_label_errors += u64::from(guess != example.label);

            eavesdropper.push(Example {
                x: example.x.clone(),
                label: guess,
            });
            authorized.push(Example {
                x: example.x.clone(),
                label: observed,
            });
        }

        if config.record_transcript {
            transcript.push(ProtocolRound {
                round_id,
                preparation: k,
                is_check,
                input_x: (!is_check).then_some(example.x),
                final_outcome: outcome,
                eve_record: (!record.is_empty()).then_some(record),
                check_error,
                label_flipped,
            });
        }
    }

    if checks.is_empty() {
        return Err(Error::InsufficientCheckRounds { rounds });
    }
    let eta_a_estimate: T = estimate_eta_a(&checks)?;
    let error_count = checks.iter().filter(|c| c.is_error()).count() as u64;
    let aborted = config.abort.threshold.is_some_and(|t| eta_a_estimate > t);
    if aborted && config.abort.mode == AbortMode::Truncate {
        authorized.clear();
        eavesdropper.clear();
    }

    Ok(SessionResult {
        authorized_dataset: authorized,
        eavesdropper_dataset: eavesdropper,
        eta_a_estimate,
        check_count: checks.len() as u64,
        error_count,
        aborted,
        rounds,
        authorized_label_errors,
        eve_label_errors,
        transcript,
    })
}

/// Labels after independent flips, with the number actually flipped.
#[derive(Debug, Clone, PartialEq)]
pub struct NoisyExamples<T> {
    pub examples: Vec<Example<T>>,
    pub flipped: usize,
}

/// Flips each label independently with probability `eta`.
///
/// The flip pattern depends only on `(seed, position)`, so applying it twice
/// with the same seed restores the input.
pub fn inject_label_noise<T: Scalar>(
    clean: &[Example<T>],
    eta: T,
    seed: u64,
) -> Result<NoisyExamples<T>> {
    if !(eta >= T::zero() && eta < T::lit(0.5)) {
        return Err(domain(format!(
            "label noise must lie in [0, 1/2), got {eta}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut flipped = 0;
    let examples = clean
        .iter()
        .map(|e| {
            let flip = uniform::<T, _>(&mut rng) < eta;
            flipped += usize::from(flip);
            Example {
                x: e.x.clone(),
                label: e.label ^ u8::from(flip),
            }
        })
        .collect();
    Ok(NoisyExamples { examples, flipped })
}
