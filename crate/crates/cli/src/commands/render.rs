use crate::args::RenderArgs;
use crate::error::{CliError, CliResult};
use crate::report::{level_masks, pgm, weight_overlay};
use crate::{assign_scene, create_dir, load_corpus, write_file};

/// Writes `<scene>_P<l>.pgm` per level and `<scene>_weights.pgm`.
pub fn run(args: &RenderArgs) -> CliResult<()> {
    let cfg = args.strategy.config()?;
    let corpus = load_corpus(&args.corpus)?;
    let scene = corpus
        .scene(&args.scene)
        .ok_or_else(|| CliError::Config(format!("unknown scene `{}`", args.scene)))?;
    let w = assign_scene(scene, &cfg)?;

    create_dir(&args.out)?;
    for (level, width, height, px) in level_masks(&w) {
        let path = args.out.join(format!("{}_P{level}.pgm", scene.id));
        write_file(&path, &pgm(width, height, &px))?;
    }
    let overlay = weight_overlay(&w);
    write_file(
        &args.out.join(format!("{}_weights.pgm", scene.id)),
        &pgm(scene.width, scene.height, &overlay),
    )
}
