use rotassign_core::pyramid::DEFAULT_STRIDES;
use rotassign_core::LevelHistogram;

use crate::args::StatsArgs;
use crate::error::CliResult;
use crate::report::stats_table;
use crate::{assign_corpus, emit_table, load_corpus, worker_pool};

pub fn run(args: &StatsArgs) -> CliResult<()> {
    let cfg = args.strategy.config()?;
    let corpus = load_corpus(&args.corpus)?;
    let pool = worker_pool(args.corpus.threads)?;
    let results = assign_corpus(&pool, &corpus.scenes, &cfg)?;

    let levels = (0..DEFAULT_STRIDES.len() as u8)
        .map(|i| rotassign_core::pyramid::FIRST_LEVEL + i)
        .collect();
    let mut hist = LevelHistogram::empty(levels);
    for w in &results {
        hist.accumulate(w);
    }
    emit_table(
        args.out.as_deref(),
        "stats.csv",
        &stats_table(&hist, &corpus.categories),
    )
}
