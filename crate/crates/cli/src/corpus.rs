//! Loading scenes from DOTA label directories or the synthetic generators.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};

use rotassign_core::synthetic::scale_buckets;
use rotassign_core::{
    parse_dota, quad_to_obb, scale_sweep, synthetic_corpus, tile_scene, CategoryMap, Error, Scene,
    SyntheticConfig,
};

use crate::args::{CorpusArgs, SyntheticKind};
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone)]
pub struct Corpus {
    /// Ordered by source file name, tiles row-major within a file.
    pub scenes: Vec<Scene>,
    pub categories: CategoryMap,
}

impl Corpus {
    pub fn scene(&self, id: &str) -> Option<&Scene> {
        self.scenes.iter().find(|s| s.id == id)
    }
}

/// Reads `id,width,height` rows. A header row and `#` comments are allowed.
pub fn read_dims(path: &Path) -> CliResult<HashMap<String, (u32, u32)>> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut dims = HashMap::new();
    for (i, row) in reader.records().enumerate() {
        let parse_err = |line: Option<usize>, message: String| CliError::Parse {
            path: path.to_path_buf(),
            line,
            message,
        };
        let row =
            row.map_err(|e| parse_err(e.position().map(|p| p.line() as usize), e.to_string()))?;
        let line = row.position().map(|p| p.line() as usize);
        if row.len() != 3 {
            return Err(parse_err(
                line,
                format!("expected 3 fields, found {}", row.len()),
            ));
        }
        if i == 0 && row[1].eq_ignore_ascii_case("width") {
            continue;
        }
        let num = |s: &str| {
            s.parse::<u32>()
                .ok()
                .filter(|&v| v > 0)
                .ok_or_else(|| parse_err(line, format!("`{s}` is not a positive integer")))
        };
        dims.insert(row[0].to_string(), (num(&row[1])?, num(&row[2])?));
    }
    Ok(dims)
}

fn label_files(dir: &Path) -> CliResult<Vec<PathBuf>> {
    let entries = fs::read_dir(dir).map_err(|e| CliError::io(dir, e))?;
    let mut files = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| CliError::io(dir, e))?.path();
        if path.is_file() && path.extension().is_some_and(|e| e == "txt") {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

fn load_dota(args: &CorpusArgs, dir: &Path) -> CliResult<Corpus> {
    let dims_path = args
        .dims
        .as_deref()
        .ok_or_else(|| CliError::Config("--dims is required with --annotations".to_string()))?;
    let dims = read_dims(dims_path)?;
    let drop_difficult = args.filter_difficult.is_on();
    let mut categories = CategoryMap::new();
    let mut scenes = Vec::new();
    for path in label_files(dir)? {
        let id = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        let text = fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
        let records = parse_dota(&text).map_err(|e| match e {
            Error::Parse { line, message } => CliError::Parse {
                path: path.clone(),
                line: Some(line),
                message,
            },
            other => other.into(),
        })?;
        let &(width, height) = dims.get(&id).ok_or_else(|| {
            CliError::Config(format!(
                "no image dimensions for scene `{id}` in {}",
                dims_path.display()
            ))
        })?;
        let mut boxes = Vec::with_capacity(records.len());
        let mut difficult = Vec::with_capacity(records.len());
        for (n, r) in records.iter().enumerate() {
            if drop_difficult && r.difficult {
                continue;
            }
            let cat = categories.id_or_insert(&r.category);
            let bx = quad_to_obb(&r.quad, cat).map_err(|e| CliError::Parse {
                path: path.clone(),
                line: None,
                message: format!("object {}: {e}", n + 1),
            })?;
            boxes.push(bx);
            difficult.push(r.difficult);
        }
        let mut scene = Scene::new(id, width, height, boxes);
        scene.difficult = difficult;
        scenes.push(scene);
    }
    Ok(Corpus { scenes, categories })
}

fn load_synthetic(args: &CorpusArgs) -> CliResult<Corpus> {
    let cfg = SyntheticConfig {
        width: args.image_size,
        height: args.image_size,
        min_boxes: args.boxes,
        max_boxes: args.boxes,
        ..SyntheticConfig::default()
    };
    let config_err = |e: Error| CliError::Config(e.to_string());
    match args.synthetic {
        SyntheticKind::Random => Ok(Corpus {
            scenes: synthetic_corpus(&cfg, args.scenes, args.seed, "syn").map_err(config_err)?,
            categories: CategoryMap::from_names(
                (0..cfg.num_categories).map(|i| format!("class{i:02}")),
            ),
        }),
        SyntheticKind::Sweep => {
            let names = scale_buckets(args.buckets, cfg.long_side.0, cfg.long_side.1)
                .into_iter()
                .map(|l| format!("long{l:.0}"));
            Ok(Corpus {
                scenes: scale_sweep(&cfg, args.buckets, args.per_bucket, args.seed)
                    .map_err(config_err)?,
                categories: CategoryMap::from_names(names),
            })
        }
    }
}

pub fn load_corpus(args: &CorpusArgs) -> CliResult<Corpus> {
    let mut corpus = match &args.annotations {
        Some(dir) => load_dota(args, dir)?,
        None => load_synthetic(args)?,
    };
    if let Some(tiles) = args.tile_spec()? {
        let mut tiled = Vec::new();
        for scene in &corpus.scenes {
            tiled.extend(tile_scene(scene, &tiles)?);
        }
        corpus.scenes = tiled;
    }
    Ok(corpus)
}
