use crate::args::{config_for, CompareArgs};
use crate::error::{CliError, CliResult};
use crate::report::{compare_table, StrategySummary};
use crate::{assign_corpus, emit_table, load_corpus, worker_pool};

pub fn run(args: &CompareArgs) -> CliResult<()> {
    if args.strategies.len() < 2 {
        return Err(CliError::Config(
            "compare needs at least two strategies".into(),
        ));
    }
    let configs = args
        .strategies
        .iter()
        .map(|&s| config_for(s, args.k, args.xi))
        .collect::<CliResult<Vec<_>>>()?;
    let corpus = load_corpus(&args.corpus)?;
    let pool = worker_pool(args.corpus.threads)?;
    let mut summaries = Vec::with_capacity(configs.len());
    for cfg in &configs {
        let results = assign_corpus(&pool, &corpus.scenes, cfg)?;
        summaries.push(StrategySummary::from_results(
            &cfg.strategy.to_string(),
            &results,
        ));
    }
    emit_table(
        args.out.as_deref(),
        "compare.csv",
        &compare_table(&summaries),
    )
}
