//! Simulation and analysis toolkit for training data whose labels travel as
//! qubits.
//!
//! The numeric core is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix it to `f64`, which is what the command-line tools use.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod adversary;
pub mod error;
pub mod info_theory;
pub mod learn;
pub mod pac_bounds;
pub mod protocol;
pub mod qubit;
pub mod scalar;
pub mod stats;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type PacParams = pac_bounds::PacParams<f64>;
pub type DeltaFloor = pac_bounds::DeltaFloor<f64>;
pub type RandomSearchModel = pac_bounds::RandomSearchModel<f64>;
pub type ExclusivityVerdict = pac_bounds::ExclusivityVerdict<f64>;
pub type ExclusivityQuery = pac_bounds::ExclusivityQuery<f64>;
pub type InfoCurve = info_theory::InfoCurve<f64>;
pub type HolevoGap = info_theory::HolevoGap<f64>;
pub type QubitState = qubit::QubitState<f64>;
pub type AttackStrategy = adversary::AttackStrategy<f64>;
pub type SessionConfig = protocol::SessionConfig<f64>;
pub type SessionResult = protocol::SessionResult<f64>;
pub type Example = protocol::Example<f64>;
pub type SyntheticTask = learn::SyntheticTask<f64>;
pub type TaskConfig = learn::TaskConfig<f64>;
pub type LearnerConfig = learn::LearnerConfig<f64>;

pub type QubitStateF32 = qubit::QubitState<f32>;
pub type PacParamsF32 = pac_bounds::PacParams<f32>;
