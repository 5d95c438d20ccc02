use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "qlabel", version, about = "Quantum-label learning experiments")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Default, Args)]
pub struct GlobalArgs {
    /// JSON configuration file; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output directory (default: $QLABEL_OUT_DIR or ./qlabel-out).
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,
    /// Worker threads (default: $QLABEL_WORKERS or all cores).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Skip SVG plots.
    #[arg(long, global = true)]
    pub no_svg: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample-complexity bounds and confidence floors.
    Bounds(BoundsArgs),
    /// Critical disturbance for each attack family.
    Thresholds,
    /// One protocol session with an optional eavesdropper.
    ProtocolRun(ProtocolArgs),
    /// Learning-probability curve at one noise level.
    Learn(LearnArgs),
    /// Paired authorized/eavesdropper curves over a noise grid.
    SweepEta(SweepArgs),
    /// Final test-error histograms for both learners.
    Histograms(HistogramArgs),
    /// Quick statistical self-test.
    Selfcheck(SelfcheckArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct BoundsArgs {
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    /// Natural log of the hypothesis-space size.
    #[arg(long)]
    pub log_h: Option<f64>,
    #[arg(long)]
    pub eta: Option<f64>,
    /// Sample sizes for the confidence floor, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub n: Option<Vec<u64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AttackKind {
    None,
    InterceptResend,
    AnalyticIndividual,
    AnalyticCollective,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    AlwaysZ,
    RandomPerLeg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LegsArg {
    Both,
    Outbound,
    Return,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AbortModeArg {
    Flag,
    Truncate,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ProtocolArgs {
    /// Data rounds to collect.
    #[arg(long)]
    pub data: Option<usize>,
    #[arg(long, value_enum)]
    pub attack: Option<AttackKind>,
    #[arg(long)]
    pub attack_probability: Option<f64>,
    #[arg(long, value_enum)]
    pub basis_policy: Option<PolicyArg>,
    #[arg(long, value_enum)]
    pub legs: Option<LegsArg>,
    #[arg(long)]
    pub disturbance: Option<f64>,
    #[arg(long)]
    pub abort_threshold: Option<f64>,
    #[arg(long, value_enum)]
    pub abort_mode: Option<AbortModeArg>,
    /// Do not write transcript.jsonl.
    #[arg(long)]
    pub no_transcript: bool,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ExperimentArgs {
    #[arg(long)]
    pub dimension: Option<usize>,
    #[arg(long)]
    pub separation: Option<f64>,
    #[arg(long)]
    pub task_seed: Option<u64>,
    /// Halting threshold on the clean test error.
    #[arg(long)]
    pub epsilon_target: Option<f64>,
    #[arg(long)]
    pub step_size: Option<f64>,
    #[arg(long)]
    pub batch_size: Option<usize>,
    #[arg(long)]
    pub evaluation_cadence: Option<usize>,
    /// Use a one-hidden-layer network of this width instead of a linear model.
    #[arg(long)]
    pub hidden_width: Option<usize>,
    #[arg(long)]
    pub trials: Option<usize>,
    /// Largest sample count on the curve grid.
    #[arg(long)]
    pub max_samples: Option<u64>,
    #[arg(long)]
    pub grid_points: Option<usize>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct LearnArgs {
    #[command(flatten)]
    pub experiment: ExperimentArgs,
    /// Label noise of the training stream.
    #[arg(long)]
    pub eta: Option<f64>,
    /// Also run the random-search baseline.
    #[arg(long)]
    pub baseline: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Collective,
    Individual,
}

#[derive(Debug, Clone, Default, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub experiment: ExperimentArgs,
    #[arg(long, value_enum)]
    pub family: Option<FamilyArg>,
    /// Authorized noise levels, comma separated, within [0, eta*].
    #[arg(long, value_delimiter = ',')]
    pub eta_grid: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct HistogramArgs {
    #[command(flatten)]
    pub experiment: ExperimentArgs,
    #[arg(long, value_enum)]
    pub family: Option<FamilyArg>,
    #[arg(long)]
    pub eta_a: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct SelfcheckArgs {
    /// Tolerance of the Monte-Carlo checks in standard deviations.
    #[arg(long, default_value_t = 4.0)]
    pub sigma: f64,
}
