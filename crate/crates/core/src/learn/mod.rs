//! Desk-scale learning-probability experiments: a synthetic classification
//! task, small gradient-trained learners, a random-search baseline and
//! empirical `P_L(n, ε_T)` curves.

pub mod curve;
pub mod experiment;
pub mod model;
pub mod task;
pub mod trial;

pub use curve::{estimate_learning_probability, CurveRow, LearningProbabilityCurve, MIN_TRIALS};
pub use experiment::{
    default_eta_grid, dominance_violations, error_histogram, histogram_bin, learning_curve,
    random_search_baseline, sweep_eta, CurveRun, ExperimentSettings, SweepPoint, SweepResult,
    HISTOGRAM_BINS,
};
pub use model::{
    evaluate_error, ConstantHypothesis, HiddenLayerNet, Hypothesis, LearnerConfig, LinearModel,
    Model, ModelKind, Negated,
};
pub use task::{analytic_bayes_error, generate_task, NoisyStream, SyntheticTask, TaskConfig};
pub use trial::{
    default_budget, random_search_learner, run_trials, train_until, BernoulliOracleSampler,
    HypothesisSampler, IsotropicLinearSampler, LearningTrial,
};
