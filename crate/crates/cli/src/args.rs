use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rotassign_core::{RatioMode, Strategy, StrategyConfig, TileSpec};

use crate::error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(
    name = "rotassign",
    version,
    about = "Label assignment for oriented object detection"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Assign positives per scene and write one record file per scene.
    Assign(AssignArgs),
    /// Per-category histogram of positives over pyramid levels.
    Stats(StatsArgs),
    /// Side-by-side summary of several strategies on one corpus.
    Compare(CompareArgs),
    /// Grayscale rasters of the positives of one scene.
    Render(RenderArgs),
    /// Time assignment per scene.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Toggle {
    On,
    Off,
}

impl Toggle {
    pub fn is_on(self) -> bool {
        self == Toggle::On
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SyntheticKind {
    /// Scenes of random boxes.
    Random,
    /// Single-target scenes over log-spaced scale buckets.
    Sweep,
}

/// Where scenes come from and how they are prepared.
#[derive(Debug, Clone, Args)]
pub struct CorpusArgs {
    /// Directory of DOTA label files (`<scene-id>.txt`). Synthetic scenes
    /// are generated when absent.
    #[arg(long, value_name = "DIR")]
    pub annotations: Option<PathBuf>,

    /// CSV of `scene-id,width,height` rows.
    #[arg(long, value_name = "FILE")]
    pub dims: Option<PathBuf>,

    /// Cut scenes into windows. Defaults to on for annotation corpora and
    /// off for synthetic scenes.
    #[arg(long, value_enum)]
    pub tile: Option<Toggle>,

    #[arg(long, default_value_t = 600)]
    pub window: u32,

    #[arg(long = "tile-stride", default_value_t = 450)]
    pub tile_stride: u32,

    #[arg(long, default_value_t = 800)]
    pub resize: u32,

    /// Drop objects flagged difficult.
    #[arg(long = "filter-difficult", value_enum, default_value_t = Toggle::Off)]
    pub filter_difficult: Toggle,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    #[arg(long, value_enum, default_value_t = SyntheticKind::Random)]
    pub synthetic: SyntheticKind,

    /// Number of random synthetic scenes.
    #[arg(long, default_value_t = 16)]
    pub scenes: usize,

    /// Boxes per random synthetic scene.
    #[arg(long, default_value_t = 50)]
    pub boxes: usize,

    /// Side of square synthetic images.
    #[arg(long = "image-size", default_value_t = 800)]
    pub image_size: u32,

    /// Scale buckets of the sweep corpus.
    #[arg(long, default_value_t = 9)]
    pub buckets: usize,

    /// Scenes per scale bucket of the sweep corpus.
    #[arg(long = "per-bucket", default_value_t = 200)]
    pub per_bucket: usize,

    /// Worker threads for per-scene work.
    #[arg(long, env = "ROTASSIGN_THREADS")]
    pub threads: Option<usize>,
}

impl CorpusArgs {
    pub fn tile_spec(&self) -> CliResult<Option<TileSpec>> {
        let on = self.tile.map_or(self.annotations.is_some(), Toggle::is_on);
        if !on {
            return Ok(None);
        }
        let spec = TileSpec {
            window: self.window,
            stride: self.tile_stride,
            resize_to: self.resize,
        };
        spec.validate()
            .map_err(|e| CliError::Config(e.to_string()))?;
        Ok(Some(spec))
    }
}

#[derive(Debug, Clone, Args)]
pub struct StrategyArgs {
    /// earl, fixed-scale, bounding-box, central-area or topk.
    #[arg(long, default_value = "earl")]
    pub strategy: Strategy,

    #[arg(long, default_value_t = 15)]
    pub k: usize,

    /// `adaptive` or a fixed threshold in (0, 1].
    #[arg(long, default_value = "adaptive")]
    pub xi: RatioMode,
}

impl StrategyArgs {
    pub fn config(&self) -> CliResult<StrategyConfig> {
        config_for(self.strategy, self.k, self.xi)
    }
}

pub fn config_for(strategy: Strategy, k: usize, xi: RatioMode) -> CliResult<StrategyConfig> {
    let cfg = StrategyConfig::new(strategy).with_k(k).with_ratio_mode(xi);
    cfg.validate()
        .map_err(|e| CliError::Config(e.to_string()))?;
    Ok(cfg)
}

#[derive(Debug, Clone, Args)]
pub struct AssignArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,
    #[command(flatten)]
    pub strategy: StrategyArgs,
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct StatsArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,
    #[command(flatten)]
    pub strategy: StrategyArgs,
    /// Write `stats.csv` here instead of printing it.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,
    /// Comma-separated strategy names, at least two.
    #[arg(long, value_delimiter = ',', required = true)]
    pub strategies: Vec<Strategy>,
    #[arg(long, default_value_t = 15)]
    pub k: usize,
    #[arg(long, default_value = "adaptive")]
    pub xi: RatioMode,
    /// Write `compare.csv` here instead of printing it.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct RenderArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,
    #[command(flatten)]
    pub strategy: StrategyArgs,
    /// Scene (or tile) id to draw.
    #[arg(long)]
    pub scene: String,
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,
    /// Strategy names to time; `oracle` times the brute-force reference.
    /// Defaults to `earl`.
    #[arg(long, value_delimiter = ',')]
    pub strategies: Vec<String>,
    #[arg(long, default_value_t = 15)]
    pub k: usize,
    #[arg(long, default_value = "adaptive")]
    pub xi: RatioMode,
    #[arg(long, default_value_t = 20)]
    pub repetitions: usize,
    /// Write `bench.csv` here as well as printing it.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}
