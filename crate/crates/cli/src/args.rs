use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use c960_core::dataset::DatasetKind;
use c960_core::learn::ModelKind;
use c960_core::synth::LabelRule;

/// Chess960 corpus analysis: region features, outcome models, opening themes.
#[derive(Parser, Debug)]
#[command(name = "c960", version)]
pub struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, env = "C960_SEED", default_value_t = 0)]
    pub seed: u64,

    /// Output directory.
    #[arg(long, global = true, env = "C960_OUT")]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List the 960 start positions: index, back rank, start FEN.
    Positions,
    /// Parse PGN files and write a corpus manifest.
    Ingest(InputArgs),
    /// Build feature tables as CSV.
    Dataset(DatasetArgs),
    /// Cross-validate models on feature tables.
    Eval(EvalArgs),
    /// Assign opening themes per start position.
    Themes(ThemesArgs),
    /// Generate a synthetic PGN corpus.
    Synth(SynthArgs),
}

#[derive(Args, Debug)]
pub struct InputArgs {
    /// PGN files or directories searched for `*.pgn`.
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
}

#[derive(Args, Debug)]
pub struct DatasetArgs {
    #[command(flatten)]
    pub input: InputArgs,

    #[arg(long, env = "C960_DATASET", default_value = "ds2")]
    pub dataset: DatasetKind,

    /// Snapshot move for ds1 and ds2.
    #[arg(long = "move", env = "C960_MOVE", default_value_t = 20)]
    pub move_number: u32,

    /// Snapshot moves for ds3, e.g. `10-15` or `10,12,14`.
    #[arg(long, env = "C960_SNAPSHOT_MOVES", default_value = "10-15")]
    pub snapshot_moves: String,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    /// Table CSV files or directories searched for `*.csv`.
    #[arg(required = true)]
    pub tables: Vec<PathBuf>,

    /// Model to evaluate; all three when omitted.
    #[arg(long, env = "C960_MODEL")]
    pub model: Option<ModelKind>,

    /// KNN neighbour count; 31 for ds1 and 23 otherwise when unset.
    #[arg(long, env = "C960_K")]
    pub k: Option<usize>,

    #[arg(long, env = "C960_FOLDS", default_value_t = 5)]
    pub folds: usize,

    /// TOML file with model hyperparameters.
    #[arg(long, env = "C960_CONFIG")]
    pub config: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ThemesArgs {
    #[command(flatten)]
    pub input: InputArgs,

    /// Four snapshot moves bounding the three phases.
    #[arg(long, env = "C960_SNAPSHOT_MOVES", default_value = "1,6,11,16")]
    pub snapshot_moves: String,
}

#[derive(Args, Debug)]
pub struct SynthArgs {
    /// Start positions, e.g. `0-959` or `0,518,959`.
    #[arg(long, env = "C960_SPS", default_value = "0-959")]
    pub sps: String,

    #[arg(long, env = "C960_GAMES_PER_SP", default_value_t = 10)]
    pub games_per_sp: usize,

    #[arg(long, env = "C960_LABEL_RULE", default_value = "from-play")]
    pub label_rule: LabelRule,

    #[arg(long, env = "C960_MIN_MOVES", default_value_t = 20)]
    pub min_moves: u32,

    #[arg(long, env = "C960_MAX_MOVES", default_value_t = 60)]
    pub max_moves: u32,
}

/// Parses `a-b` ranges and comma-separated values, keeping order.
pub fn parse_number_list(s: &str) -> Result<Vec<u32>, String> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let num = |t: &str| t.trim().parse::<u32>().map_err(|_| format!("bad number {t:?} in {s:?}"));
        match part.split_once('-') {
            Some((a, b)) => {
                let (a, b) = (num(a)?, num(b)?);
                if a > b {
                    return Err(format!("empty range {part:?}"));
                }
                out.extend(a..=b);
            }
            None => out.push(num(part)?),
        }
    }
    if out.is_empty() {
        return Err(format!("no numbers in {s:?}"));
    }
    Ok(out)
}
