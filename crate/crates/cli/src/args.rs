use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "qmc",
    version,
    about = "Streaming Quantum Max-Cut estimation and exact oracles"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// One-pass QMC estimate of an edge-list stream.
    Estimate(EstimateArgs),
    /// Max-Cut, exact QMC, closed-form bounds and constructive energies.
    Exact(ExactArgs),
    /// Rank-r vector relaxation of Max-Cut.
    Relax(RelaxArgs),
    /// Sample a hidden-partition instance.
    DihpGen(DihpGenArgs),
    /// YES/NO separation experiment on reduced instances.
    DihpExp(DihpExpArgs),
    /// Randomized verification of the Fourier identities and inequalities.
    FourierVerify(FourierArgs),
    /// Exact `m` and `W` of an edge list.
    Wexact(InputArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Edge-list file, or `-` for standard input.
    #[arg(long, default_value = "-")]
    pub input: PathBuf,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
    #[arg(long, default_value_t = 0.1)]
    pub delta: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct ExactArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Subset of `maxcut,qmc` to compute (bounds are always reported).
    #[arg(long, value_delimiter = ',', default_value = "maxcut,qmc")]
    pub compute: Vec<Quantity>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct RelaxArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Vector dimension; defaults to the vertex count (at least 2).
    #[arg(long)]
    pub rank: Option<usize>,
    #[arg(long, default_value_t = 8)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Quantity {
    Maxcut,
    Sdp,
    Qmc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TruthArg {
    Yes,
    No,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Maxcut,
    Qmc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    /// Instance text format.
    Instance,
    /// Reduced edge list.
    Edges,
}

#[derive(Debug, Args)]
pub struct DihpShape {
    /// Vertex count
    #[arg(long)]
    pub n: usize,
    /// Edges per player matching
    #[arg(long = "alpha-n")]
    pub alpha_n: usize,
    /// Number of players
    #[arg(long = "t-players")]
    pub t_players: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct DihpGenArgs {
    #[command(flatten)]
    pub shape: DihpShape,
    #[arg(long, value_enum, default_value = "yes")]
    pub truth: TruthArg,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct DihpExpArgs {
    #[command(flatten)]
    pub shape: DihpShape,
    /// Trials per truth value.
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, value_delimiter = ',', default_value = "maxcut")]
    pub compute: Vec<Quantity>,
    /// Also run each instance as a protocol: `maxcut` with the exact
    /// Max-Cut oracle, `qmc` with the streaming estimator.
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    #[arg(long, default_value_t = 0.5)]
    pub eps: f64,
    #[arg(long, default_value_t = 0.1)]
    pub delta: f64,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct FourierArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Multiplier on every randomized trial count.
    #[arg(long, default_value_t = 1.0)]
    pub scale: f64,
}
