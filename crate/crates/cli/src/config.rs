//! Configuration file and its merge with command-line flags.

use std::path::{Path, PathBuf};

use qlabel::adversary::{AttackStrategy, BasisPolicy, LegSelection};
use qlabel::info_theory::AttackFamily;
use qlabel::learn::{ExperimentSettings, LearnerConfig, ModelKind};
use qlabel::protocol::{AbortMode, AbortPolicy};
use serde::{Deserialize, Serialize};

use crate::cli::*;
use crate::error::{CliError, CliResult};

pub const OUT_DIR_ENV: &str = "QLABEL_OUT_DIR";
pub const WORKERS_ENV: &str = "QLABEL_WORKERS";
pub const DEFAULT_OUT_DIR: &str = "qlabel-out";
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConfigFile {
    pub seed: Option<u64>,
    pub out_dir: Option<PathBuf>,
    pub workers: Option<usize>,
    pub bounds: BoundsFile,
    pub protocol: ProtocolFile,
    /// Task and learner settings shared by learn, sweep-eta and histograms.
    pub experiment: ExperimentFile,
    pub learn: LearnFile,
    pub sweep: SweepFile,
    pub histograms: HistogramFile,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BoundsFile {
    pub epsilon: Option<f64>,
    pub delta: Option<f64>,
    pub log_h: Option<f64>,
    pub eta: Option<f64>,
    pub n: Option<Vec<u64>>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProtocolFile {
    pub data: Option<usize>,
    pub strategy: Option<AttackStrategy<f64>>,
    pub abort: Option<AbortPolicy<f64>>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentFile {
    pub dimension: Option<usize>,
    pub separation: Option<f64>,
    pub task_seed: Option<u64>,
    pub epsilon_target: Option<f64>,
    pub step_size: Option<f64>,
    pub batch_size: Option<usize>,
    pub evaluation_cadence: Option<usize>,
    pub hidden_width: Option<usize>,
    pub trials: Option<usize>,
    pub max_samples: Option<u64>,
    pub grid_points: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LearnFile {
    pub eta: Option<f64>,
    pub baseline: Option<bool>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepFile {
    pub family: Option<AttackFamily>,
    pub eta_grid: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HistogramFile {
    pub family: Option<AttackFamily>,
    pub eta_a: Option<f64>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }
}

/// Seed, output directory and worker count after merging.
#[derive(Debug, Clone, Serialize)]
pub struct Globals {
    pub seed: u64,
    pub out_dir: PathBuf,
    pub workers: usize,
    pub svg: bool,
}

fn env_workers() -> CliResult<Option<usize>> {
    match std::env::var(WORKERS_ENV) {
        Ok(v) => v.trim().parse().map(Some).map_err(|_| {
            CliError::Config(format!(
                "{WORKERS_ENV} must be a positive integer, got {v:?}"
            ))
        }),
        Err(_) => Ok(None),
    }
}

pub fn resolve_globals(args: &GlobalArgs, file: &ConfigFile) -> CliResult<Globals> {
    let out_dir = args
        .out_dir
        .clone()
        .or_else(|| file.out_dir.clone())
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR));
    let workers = match args.workers.or(file.workers) {
        Some(w) => w,
        None => env_workers()?.unwrap_or_else(rayon::current_num_threads),
    };
    if workers == 0 {
        return Err(CliError::Config("worker count must be at least 1".into()));
    }
    Ok(Globals {
        seed: args.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
        out_dir,
        workers,
        svg: !args.no_svg,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundsConfig {
    pub epsilon: f64,
    pub delta: f64,
    pub log_h: f64,
    pub eta: f64,
    pub n: Vec<u64>,
}

pub fn resolve_bounds(args: &BoundsArgs, file: &BoundsFile) -> BoundsConfig {
    BoundsConfig {
        epsilon: args.epsilon.or(file.epsilon).unwrap_or(0.1),
        delta: args.delta.or(file.delta).unwrap_or(0.05),
        log_h: args
            .log_h
            .or(file.log_h)
            .unwrap_or(20.0 * std::f64::consts::LN_2),
        eta: args.eta.or(file.eta).unwrap_or(0.0),
        n: args
            .n
            .clone()
            .or_else(|| file.n.clone())
            .unwrap_or_default(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ProtocolConfig {
    pub data: usize,
    pub strategy: AttackStrategy<f64>,
    pub abort: AbortPolicy<f64>,
    pub transcript: bool,
}

pub fn resolve_protocol(args: &ProtocolArgs, file: &ProtocolFile) -> CliResult<ProtocolConfig> {
    let base = file.strategy.unwrap_or(AttackStrategy::None);
    let strategy = match args.attack {
        None => override_strategy(base, args)?,
        Some(kind) => {
            let f = args.attack_probability.unwrap_or(1.0);
            let d = args.disturbance;
            match kind {
                AttackKind::None => AttackStrategy::None,
                AttackKind::InterceptResend => AttackStrategy::InterceptResend {
                    attack_probability: f,
                    basis_policy: args
                        .basis_policy
                        .map(policy)
                        .unwrap_or(BasisPolicy::AlwaysZ),
                    legs: args.legs.map(legs).unwrap_or_default(),
                },
                AttackKind::AnalyticIndividual => AttackStrategy::AnalyticIndividual {
                    disturbance: d.ok_or_else(|| missing("--disturbance"))?,
                },
                AttackKind::AnalyticCollective => AttackStrategy::AnalyticCollective {
                    disturbance: d.ok_or_else(|| missing("--disturbance"))?,
                },
            }
        }
    };
    strategy.validate()?;
    let mut abort = file.abort.unwrap_or_default();
    if let Some(t) = args.abort_threshold {
        abort.threshold = Some(t);
    }
    if let Some(m) = args.abort_mode {
        abort.mode = match m {
            AbortModeArg::Flag => AbortMode::Flag,
            AbortModeArg::Truncate => AbortMode::Truncate,
        };
    }
    Ok(ProtocolConfig {
        data: args.data.or(file.data).unwrap_or(1000),
        strategy,
        abort,
        transcript: !args.no_transcript,
    })
}

/// Applies individual parameter flags to a strategy taken from the file.
fn override_strategy(
    base: AttackStrategy<f64>,
    args: &ProtocolArgs,
) -> CliResult<AttackStrategy<f64>> {
    Ok(match base {
        AttackStrategy::InterceptResend {
            attack_probability,
            basis_policy,
            legs: l,
        } => AttackStrategy::InterceptResend {
            attack_probability: args.attack_probability.unwrap_or(attack_probability),
            basis_policy: args.basis_policy.map(policy).unwrap_or(basis_policy),
            legs: args.legs.map(legs).unwrap_or(l),
        },
        AttackStrategy::AnalyticIndividual { disturbance } => AttackStrategy::AnalyticIndividual {
            disturbance: args.disturbance.unwrap_or(disturbance),
        },
        AttackStrategy::AnalyticCollective { disturbance } => AttackStrategy::AnalyticCollective {
            disturbance: args.disturbance.unwrap_or(disturbance),
        },
        AttackStrategy::None => {
            if args.attack_probability.is_some() || args.disturbance.is_some() {
                return Err(CliError::Config(
                    "attack parameters given without --attack".into(),
                ));
            }
            AttackStrategy::None
        }
    })
}

fn missing(flag: &str) -> CliError {
    CliError::Config(format!("{flag} is required for this attack"))
}

fn policy(p: PolicyArg) -> BasisPolicy {
    match p {
        PolicyArg::AlwaysZ => BasisPolicy::AlwaysZ,
        PolicyArg::RandomPerLeg => BasisPolicy::RandomPerLeg,
    }
}

fn legs(l: LegsArg) -> LegSelection {
    match l {
        LegsArg::Both => LegSelection::Both,
        LegsArg::Outbound => LegSelection::OutboundOnly,
        LegsArg::Return => LegSelection::ReturnOnly,
    }
}

pub fn family(f: FamilyArg) -> AttackFamily {
    match f {
        FamilyArg::Collective => AttackFamily::Collective,
        FamilyArg::Individual => AttackFamily::Individual,
    }
}

/// Experiment settings: flags, then the file, then library defaults.
/// Validated before returning.
pub fn resolve_experiment(
    args: &ExperimentArgs,
    file: &ExperimentFile,
) -> CliResult<ExperimentSettings<f64>> {
    let d = ExperimentSettings::<f64>::default();
    let mut learner = LearnerConfig::linear(
        args.step_size
            .or(file.step_size)
            .unwrap_or(d.learner.step_size),
        args.batch_size
            .or(file.batch_size)
            .unwrap_or(d.learner.batch_size),
    );
    learner.evaluation_cadence = args
        .evaluation_cadence
        .or(file.evaluation_cadence)
        .unwrap_or(d.learner.evaluation_cadence);
    if let Some(width) = args.hidden_width.or(file.hidden_width) {
        learner.model = ModelKind::HiddenLayer { width };
    }
    let settings = ExperimentSettings {
        dimension: args.dimension.or(file.dimension).unwrap_or(d.dimension),
        separation: args.separation.or(file.separation).unwrap_or(d.separation),
        task_seed: args.task_seed.or(file.task_seed).unwrap_or(d.task_seed),
        epsilon_target: args
            .epsilon_target
            .or(file.epsilon_target)
            .unwrap_or(d.epsilon_target),
        learner,
        trials: args.trials.or(file.trials).unwrap_or(d.trials),
        max_samples: args
            .max_samples
            .or(file.max_samples)
            .unwrap_or(d.max_samples),
        grid_points: args
            .grid_points
            .or(file.grid_points)
            .unwrap_or(d.grid_points),
    };
    settings.validate()?;
    Ok(settings)
}
