use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

/// Correlation functions of network trajectories.
#[derive(Debug, Parser, Serialize)]
#[command(name = "netcorr", version, about, propagate_version = true)]
pub struct Cli {
    /// Master seed; every random stream is derived from it.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub threads: Option<usize>,

    /// Flag file (JSON object, `key = value` lines, or a run manifest).
    /// Flags given on the command line win.
    #[arg(long, global = true, value_name = "FILE")]
    #[serde(skip)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Synthesize a benchmark trajectory.
    #[command(subcommand)]
    Generate(Model),
    /// Correlation curve, plus full matrices at selected lags.
    Correlate(CorrelateArgs),
    /// Statistics on curves, matrices and trajectories.
    #[command(subcommand)]
    Analyze(Analysis),
    /// Bin a timestamped contact list into a trajectory.
    Ingest(IngestArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct Output {
    /// Output file (default: stdout, no manifest).
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    /// i.i.d. Erdos-Renyi snapshots.
    White(WhiteArgs),
    /// Tiled random block with per-pair noise.
    Periodic(PeriodicArgs),
    /// Discrete autoregressive edges of order p.
    Darn(DarnArgs),
    /// Order-1 DARN with copy events from a shifted donor pair.
    DarnCross(DarnCrossArgs),
    /// Logistic map walking a graph dictionary.
    Logistic(LogisticArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct WhiteArgs {
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub p: f64,
    /// Ordered pairs instead of undirected edges.
    #[arg(long)]
    pub directed: bool,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: Output,
}

#[derive(Debug, Args, Serialize)]
pub struct PeriodicArgs {
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub n: usize,
    /// Period T.
    #[arg(long = "t")]
    #[serde(rename = "t")]
    pub period: usize,
    #[arg(long)]
    pub p: f64,
    /// Probability that a pair is redrawn in a given snapshot.
    #[arg(long)]
    pub q: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: Output,
}

#[derive(Debug, Args, Serialize)]
pub struct DarnCommon {
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub n: usize,
    /// Copy probability.
    #[arg(long)]
    pub q: f64,
    /// Innovation density.
    #[arg(long)]
    pub y: f64,
    /// Discarded warm-up steps (default: 10 x order).
    #[arg(long)]
    pub burn_in: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct DarnArgs {
    /// Memory order p.
    #[arg(long, visible_alias = "memory")]
    pub order: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: DarnCommon,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: Output,
}

#[derive(Debug, Args, Serialize)]
pub struct DarnCrossArgs {
    /// Probability that a copy reads the donor pair.
    #[arg(long)]
    pub w: f64,
    /// Donor offset on the second endpoint.
    #[arg(long, default_value_t = 2)]
    pub shift: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: DarnCommon,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: Output,
}

#[derive(Debug, Args, Serialize)]
pub struct LogisticArgs {
    #[arg(long)]
    pub r: f64,
    /// Dictionary length L.
    #[arg(long)]
    pub l: usize,
    #[arg(long)]
    pub m: usize,
    /// Edge density of the first dictionary graph.
    #[arg(long)]
    pub p: f64,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0.3)]
    pub x0: f64,
    #[arg(long, default_value_t = 1000)]
    pub transient: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelArg {
    Auto,
    Sparse,
    Dense,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MatrixFormatArg {
    Dense,
    Sparse,
}

#[derive(Debug, Args, Serialize)]
pub struct CorrelateArgs {
    /// Trajectory file (default: stdin).
    #[arg(long, short)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub tau_max: usize,
    #[arg(long, default_value_t = 0)]
    pub tau_min: usize,
    #[arg(long, default_value_t = 1)]
    pub step: usize,
    /// Lags at which to export full matrices, e.g. `10,30`.
    #[arg(long, value_delimiter = ',')]
    pub matrices: Vec<usize>,
    #[arg(long, value_enum, default_value_t = MatrixFormatArg::Dense)]
    pub matrix_format: MatrixFormatArg,
    /// Export C(tau) instead of the centered matrix.
    #[arg(long)]
    pub raw: bool,
    #[arg(long, value_enum, default_value_t = KernelArg::Auto)]
    pub kernel: KernelArg,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: Output,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Analysis {
    /// Detectability of a period T in one or more curves.
    Zscore(ZscoreArgs),
    /// Plateau length and exponential decay rate.
    Decay(DecayArgs),
    /// Correlation lifetimes against a shuffled null.
    Lifetimes(LifetimesArgs),
    /// Peak growth at lags 2^k.
    Scaling(ScalingArgs),
    /// Cross- versus auto-correlation mass of C~(tau).
    Offdiag(OffdiagArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct CurveInputs {
    /// Curve files (default: one curve on stdin).
    #[arg(long = "input", short)]
    #[serde(rename = "input")]
    pub inputs: Vec<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct ZscoreArgs {
    #[arg(long = "t")]
    #[serde(rename = "t")]
    pub period: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub curves: CurveInputs,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: Output,
}

#[derive(Debug, Args, Serialize)]
pub struct DecayArgs {
    /// Memory order per input (comma list); detected when omitted.
    #[arg(long, value_delimiter = ',')]
    pub order: Vec<usize>,
    /// Fit window `a,b` (inclusive lags).
    #[arg(long, value_delimiter = ',', num_args = 1)]
    pub window: Option<Vec<usize>>,
    /// Relative plateau tolerance.
    #[arg(long, default_value_t = 0.1)]
    pub tolerance: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub curves: CurveInputs,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NullArg {
    SnapshotOrder,
    EdgeTime,
}

#[derive(Debug, Args, Serialize)]
pub struct LifetimesArgs {
    /// Trajectory file (default: stdin).
    #[arg(long, short)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub tau_max: usize,
    #[arg(long, default_value_t = 50)]
    pub shuffles: usize,
    #[arg(long, value_enum, default_value_t = NullArg::SnapshotOrder)]
    pub null: NullArg,
    /// Later rise above this fraction of c~(0) voids a crossing.
    #[arg(long, default_value_t = 0.25)]
    pub revival: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: Output,
}

#[derive(Debug, Args, Serialize)]
pub struct ScalingArgs {
    #[arg(long, default_value_t = 1)]
    pub k_min: u32,
    #[arg(long, default_value_t = 5)]
    pub k_max: u32,
    #[command(flatten)]
    #[serde(flatten)]
    pub curves: CurveInputs,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: Output,
}

#[derive(Debug, Args, Serialize)]
pub struct OffdiagArgs {
    /// Trajectory files (default: one on stdin).
    #[arg(long = "input", short)]
    #[serde(rename = "input")]
    pub inputs: Vec<PathBuf>,
    #[arg(long, default_value_t = 1)]
    pub tau: usize,
    /// Use C(tau) instead of the centered matrix.
    #[arg(long)]
    pub raw: bool,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ContactFormatArg {
    Tij,
    Csv,
}

#[derive(Debug, Args, Serialize)]
pub struct IngestArgs {
    /// Contact list, optionally gzipped (default: stdin).
    #[arg(long, short)]
    pub input: Option<PathBuf>,
    /// Snapshot width in the file's time unit.
    #[arg(long)]
    pub resolution: f64,
    /// Restrict to `start,end` (end exclusive).
    #[arg(long, value_delimiter = ',', num_args = 1)]
    pub window: Option<Vec<f64>>,
    /// Column roles, e.g. `t,i,j` or `i,j,_,t`.
    #[arg(long)]
    pub cols: Option<String>,
    #[arg(long, value_enum, default_value_t = ContactFormatArg::Tij)]
    pub format: ContactFormatArg,
    /// Single-character field delimiter.
    #[arg(long)]
    pub delimiter: Option<char>,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: Output,
}
