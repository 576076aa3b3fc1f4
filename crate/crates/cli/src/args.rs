use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cpns_core::metrics::Pairing;
use cpns_core::sparsify::Strategy;

use crate::manifest::Mode;

#[derive(Debug, Parser)]
#[command(
    name = "cpns",
    version,
    about = "Contagion-preserving network sparsifier experiments"
)]
pub struct Cli {
    /// Master seed for every random choice in the command.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Worker threads; 1 runs everything sequentially.
    #[arg(long, global = true)]
    pub workers: Option<usize>,

    /// Directory receiving outputs and the run manifest.
    #[arg(long, global = true, default_value = ".")]
    pub out_dir: PathBuf,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a random network as an edge list.
    Generate(GenerateArgs),
    /// Per-edge effective resistances and leverage scores.
    Resist(ResistArgs),
    /// Draw sparsifiers at target edge fractions.
    Sparsify(SparsifyArgs),
    /// SI fidelity of sparsifiers against the original network.
    Compare(CompareArgs),
    /// Epidemic edge importance against leverage.
    Importance(ImportanceArgs),
    /// Re-run a command from its manifest.
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    ConfigurationExplog,
    Sbm4,
    CompleteNormal,
    CompletePowerlaw,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    /// Vertex count [default: 500, or 100 for complete families].
    #[arg(long)]
    pub n: Option<usize>,
    /// Explog shape.
    #[arg(long)]
    pub p: Option<f64>,
    /// Explog rate.
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub blocks: Option<usize>,
    #[arg(long)]
    pub p_in: Option<f64>,
    #[arg(long)]
    pub p_out: Option<f64>,
    /// Normal weight mean.
    #[arg(long)]
    pub mean: Option<f64>,
    /// Normal weight standard deviation.
    #[arg(long)]
    pub sd: Option<f64>,
    /// Power-law density exponent.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Power-law minimum weight.
    #[arg(long)]
    pub w_min: Option<f64>,
    /// Output file name [default: <family>-n<n>-s<seed>.tsv].
    #[arg(long)]
    pub output: Option<String>,
}

#[derive(Debug, Args)]
pub struct SketchArgs {
    #[arg(long, value_enum, default_value_t = Mode::Exact)]
    pub mode: Mode,
    /// Relative error of the approximate resistances.
    #[arg(long, default_value_t = 0.1)]
    pub epsilon: f64,
}

#[derive(Debug, Args)]
pub struct ResistArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[command(flatten)]
    pub sketch: SketchArgs,
    #[arg(long, default_value = "resistances.tsv")]
    pub output: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Ss,
    Uniform,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Ss => Strategy::Ss,
            StrategyArg::Uniform => Strategy::Uniform,
        }
    }
}

#[derive(Debug, Args)]
pub struct SparsifyArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = StrategyArg::Ss)]
    pub strategy: StrategyArg,
    /// Target fractions of distinct edges.
    #[arg(long, value_delimiter = ',', default_values_t = [0.25, 0.5, 0.75])]
    pub fraction: Vec<f64>,
    /// Independent sparsifiers per fraction.
    #[arg(long, default_value_t = 1)]
    pub draws: usize,
    #[command(flatten)]
    pub sketch: SketchArgs,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(long)]
    pub original: PathBuf,
    /// LABEL=PATH; repeat a label to pool several draws.
    #[arg(long = "sparsifier", value_parser = parse_labeled)]
    pub sparsifiers: Vec<(String, PathBuf)>,
    #[arg(long, default_value_t = 0.05)]
    pub gamma: f64,
    #[arg(long, default_value_t = 60)]
    pub timesteps: usize,
    /// SI runs on the original network.
    #[arg(long, default_value_t = 100)]
    pub runs: usize,
    /// SI runs on each sparsifier file.
    #[arg(long, default_value_t = 10)]
    pub cpns_runs: usize,
    /// Shared patient zero [default: drawn uniformly from the seed].
    #[arg(long)]
    pub patient_zero: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PairingArg {
    Paired,
    Quantile,
}

impl From<PairingArg> for Pairing {
    fn from(p: PairingArg) -> Self {
        match p {
            PairingArg::Paired => Pairing::Paired,
            PairingArg::Quantile => Pairing::Quantile,
        }
    }
}

#[derive(Debug, Args)]
pub struct ImportanceArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = 3e-3)]
    pub gamma: f64,
    #[arg(long, default_value_t = 100)]
    pub runs_per_source: usize,
    #[arg(long, value_enum, default_value_t = PairingArg::Paired)]
    pub pairing: PairingArg,
    #[command(flatten)]
    pub sketch: SketchArgs,
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    pub manifest: PathBuf,
}

fn parse_labeled(s: &str) -> Result<(String, PathBuf), String> {
    let (label, path) = s
        .split_once('=')
        .ok_or_else(|| format!("expected LABEL=PATH, got {s:?}"))?;
    let ok = !label.is_empty()
        && label
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.'));
    if !ok || label == "baseline" {
        return Err(format!(
            "label {label:?} must be a non-empty [A-Za-z0-9._-] name other than \"baseline\""
        ));
    }
    if path.is_empty() {
        return Err("empty sparsifier path".into());
    }
    Ok((label.to_string(), PathBuf::from(path)))
}
