use std::hint::black_box;
use std::time::Instant;

use rotassign_core::{
    assign, assign_oracle, default_pyramid, PyramidSpec, Scene, Strategy, StrategyConfig,
};

use crate::args::{config_for, BenchArgs};
use crate::error::{CliError, CliResult};
use crate::report::{bench_table, BenchRow};
use crate::{emit_table, load_corpus, Corpus};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Runner {
    Optimized(Strategy),
    Oracle,
}

pub fn parse_runner(name: &str) -> CliResult<Runner> {
    if name.eq_ignore_ascii_case("oracle") {
        return Ok(Runner::Oracle);
    }
    name.parse()
        .map(Runner::Optimized)
        .map_err(|e: rotassign_core::Error| CliError::Config(e.to_string()))
}

/// Nearest-rank percentile of sorted samples.
pub fn percentile(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let rank = (q * sorted.len() as f64).ceil() as usize;
    sorted[rank.clamp(1, sorted.len()) - 1]
}

pub fn median(sorted: &[f64]) -> f64 {
    match sorted.len() {
        0 => f64::NAN,
        n if n % 2 == 1 => sorted[n / 2],
        n => 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]),
    }
}

/// Milliseconds per scene for each of `passes` sweeps over `scenes`, i.e. the
/// wall time of one sweep divided by the number of scenes.
pub fn pass_times(
    scenes: &[(&Scene, PyramidSpec)],
    runner: Runner,
    cfg: &StrategyConfig,
    passes: usize,
) -> CliResult<Vec<f64>> {
    let n = scenes.len().max(1) as f64;
    let mut samples = Vec::with_capacity(passes);
    for _ in 0..passes {
        let start = Instant::now();
        for (scene, spec) in scenes {
            let result = match runner {
                Runner::Optimized(_) => assign(&scene.boxes, spec, cfg)?,
                Runner::Oracle => assign_oracle(&scene.boxes, spec, cfg)?,
            };
            black_box(result);
        }
        samples.push(start.elapsed().as_secs_f64() * 1e3 / n);
    }
    Ok(samples)
}

fn time_runner(
    name: &str,
    runner: Runner,
    cfg: &StrategyConfig,
    corpus: &Corpus,
    repetitions: usize,
) -> CliResult<BenchRow> {
    let scenes = corpus
        .scenes
        .iter()
        .map(|s| Ok((s, default_pyramid(s.width, s.height)?)))
        .collect::<CliResult<Vec<_>>>()?;
    let n = scenes.len().max(1) as f64;
    let anchors: usize = scenes.iter().map(|(_, p)| p.total_anchors()).sum();
    let targets: usize = scenes.iter().map(|(s, _)| s.boxes.len()).sum();
    let mut samples = pass_times(&scenes, runner, cfg, repetitions)?;
    samples.sort_by(f64::total_cmp);
    Ok(BenchRow {
        name: name.to_string(),
        scenes: scenes.len(),
        repetitions,
        mean_targets: targets as f64 / n,
        anchors_per_scene: anchors as f64 / n,
        median_ms: median(&samples),
        p95_ms: percentile(&samples, 0.95),
    })
}

/// Times assignment only; scene loading, pyramid construction and weighting
/// are excluded.
pub fn run(args: &BenchArgs) -> CliResult<()> {
    if args.repetitions == 0 {
        return Err(CliError::Config("--repetitions must be at least 1".into()));
    }
    let names: Vec<String> = if args.strategies.is_empty() {
        vec!["earl".into()]
    } else {
        args.strategies.clone()
    };
    let runners = names
        .iter()
        .map(|n| parse_runner(n))
        .collect::<CliResult<Vec<_>>>()?;
    let corpus = load_corpus(&args.corpus)?;
    let mut rows = Vec::with_capacity(runners.len());
    for (name, runner) in names.iter().zip(runners) {
        let strategy = match runner {
            Runner::Optimized(s) => s,
            Runner::Oracle => Strategy::Earl,
        };
        let cfg = config_for(strategy, args.k, args.xi)?;
        rows.push(time_runner(name, runner, &cfg, &corpus, args.repetitions)?);
    }
    let table = bench_table(&rows);
    if args.out.is_some() {
        emit_table(args.out.as_deref(), "bench.csv", &table)?;
    }
    print!("{table}");
    Ok(())
}
