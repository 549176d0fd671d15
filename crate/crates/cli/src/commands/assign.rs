use std::fmt::Write as _;

use crate::args::AssignArgs;
use crate::error::CliResult;
use crate::report::assignment_record;
use crate::{assign_corpus, create_dir, load_corpus, worker_pool, write_file};

/// Writes `<scene>.txt` per scene, `categories.txt` and `summary.csv`.
pub fn run(args: &AssignArgs) -> CliResult<()> {
    let cfg = args.strategy.config()?;
    let corpus = load_corpus(&args.corpus)?;
    let pool = worker_pool(args.corpus.threads)?;
    let results = assign_corpus(&pool, &corpus.scenes, &cfg)?;

    create_dir(&args.out)?;
    let mut summary = String::from("scene,targets,positives,escapes,conflicts\n");
    for (scene, w) in corpus.scenes.iter().zip(&results) {
        let record = assignment_record(scene, w, &corpus.categories, &cfg);
        write_file(
            &args.out.join(format!("{}.txt", scene.id)),
            record.as_bytes(),
        )?;
        let _ = writeln!(
            summary,
            "{},{},{},{},{}",
            scene.id,
            scene.boxes.len(),
            w.num_positives(),
            w.escapes,
            w.conflicts_resolved
        );
    }
    let mut names = String::new();
    for (id, name) in corpus.categories.names().iter().enumerate() {
        let _ = writeln!(names, "{id} {name}");
    }
    write_file(&args.out.join("categories.txt"), names.as_bytes())?;
    write_file(&args.out.join("summary.csv"), summary.as_bytes())
}
