//! Command-line front end for `rotassign-core`.

pub mod args;
pub mod commands;
pub mod corpus;
pub mod error;
pub mod report;

use std::fs;
use std::path::Path;

use rayon::prelude::*;
use rotassign_core::{
    apply_sdw, assign, default_pyramid, Scene, StrategyConfig, WeightedAssignment,
};

pub use args::{Cli, Command};
pub use corpus::{load_corpus, Corpus};
pub use error::{CliError, CliResult};

pub fn run(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Assign(a) => commands::assign::run(a),
        Command::Stats(a) => commands::stats::run(a),
        Command::Compare(a) => commands::compare::run(a),
        Command::Render(a) => commands::render::run(a),
        Command::Bench(a) => commands::bench::run(a),
    }
}

pub fn worker_pool(threads: Option<usize>) -> CliResult<rayon::ThreadPool> {
    if threads == Some(0) {
        return Err(CliError::Config("worker count must be at least 1".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Config(format!("cannot start worker pool: {e}")))
}

/// Assigns and weights one scene on the default pyramid for its size.
pub fn assign_scene(scene: &Scene, cfg: &StrategyConfig) -> CliResult<WeightedAssignment> {
    let spec = default_pyramid(scene.width, scene.height)?;
    Ok(apply_sdw(assign(&scene.boxes, &spec, cfg)?)?)
}

/// Results come back in scene order whatever the worker count.
pub fn assign_corpus(
    pool: &rayon::ThreadPool,
    scenes: &[Scene],
    cfg: &StrategyConfig,
) -> CliResult<Vec<WeightedAssignment>> {
    pool.install(|| scenes.par_iter().map(|s| assign_scene(s, cfg)).collect())
}

pub fn create_dir(dir: &Path) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

pub fn write_file(path: &Path, bytes: &[u8]) -> CliResult<()> {
    fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

/// Writes `text` to `dir/name` when a directory is given, else to stdout.
pub fn emit_table(dir: Option<&Path>, name: &str, text: &str) -> CliResult<()> {
    match dir {
        Some(dir) => {
            create_dir(dir)?;
            write_file(&dir.join(name), text.as_bytes())
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
