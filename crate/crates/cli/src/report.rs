//! Text, CSV and raster serialization of results.

use std::fmt::Write as _;

use rotassign_core::{CategoryMap, LevelHistogram, Scene, StrategyConfig, WeightedAssignment};

fn category_name(categories: &CategoryMap, id: u32) -> String {
    categories
        .name(id)
        .map_or_else(|| id.to_string(), str::to_string)
}

/// Line-oriented `key: value` record of one scene's assignment: a summary
/// block, one `target:` line per ground truth, one `positive:` line per
/// positive in anchor-id order.
pub fn assignment_record(
    scene: &Scene,
    w: &WeightedAssignment,
    categories: &CategoryMap,
    cfg: &StrategyConfig,
) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "scene: {}", scene.id);
    let _ = writeln!(s, "image: {} {}", scene.width, scene.height);
    let _ = writeln!(s, "strategy: {}", cfg.strategy);
    let _ = writeln!(s, "k: {}", cfg.k);
    let _ = writeln!(s, "xi: {}", cfg.ratio_mode);
    let _ = writeln!(s, "anchors: {}", w.spec.total_anchors());
    let _ = writeln!(s, "targets: {}", scene.boxes.len());
    let _ = writeln!(s, "positives: {}", w.num_positives());
    let _ = writeln!(s, "escapes: {}", w.escapes);
    let _ = writeln!(s, "conflicts: {}", w.conflicts_resolved);
    for (i, (b, count)) in scene.boxes.iter().zip(&w.target_counts).enumerate() {
        let _ = writeln!(
            s,
            "target: index={i} category={} difficult={} count={count} cx={} cy={} w={} h={} theta={}",
            category_name(categories, b.category()),
            u8::from(scene.difficult.get(i).copied().unwrap_or(false)),
            b.cx(),
            b.cy(),
            b.w(),
            b.h(),
            b.theta()
        );
    }
    for p in &w.positives {
        let r = &p.regression;
        let _ = writeln!(
            s,
            "positive: anchor={} level=P{} grid={},{} x={} y={} target={} distance={} dx={} dy={} w={} h={} theta={} weight={}",
            p.anchor_id,
            p.anchor.level,
            p.anchor.grid_x,
            p.anchor.grid_y,
            p.anchor.img.x,
            p.anchor.img.y,
            p.target_index,
            p.distance,
            r.dx,
            r.dy,
            r.w,
            r.h,
            r.theta,
            p.weight
        );
    }
    s
}

/// One row per category with positives: level percentages, level counts,
/// total and count-weighted mean level.
pub fn stats_table(hist: &LevelHistogram, categories: &CategoryMap) -> String {
    let mut s = String::from("category");
    for l in &hist.levels {
        let _ = write!(s, ",P{l}");
    }
    for l in &hist.levels {
        let _ = write!(s, ",n_P{l}");
    }
    s.push_str(",total,mean_level\n");
    for (&cat, counts) in &hist.rows {
        s.push_str(&category_name(categories, cat));
        for pct in hist.percentages(cat) {
            let _ = write!(s, ",{pct:.6}");
        }
        for c in counts {
            let _ = write!(s, ",{c}");
        }
        let mean = hist.mean_level(cat).unwrap_or(f64::NAN);
        let _ = writeln!(s, ",{},{mean:.6}", hist.total(cat));
    }
    s
}

/// Aggregate figures for one strategy over a corpus.
#[derive(Debug, Clone, PartialEq)]
pub struct StrategySummary {
    pub name: String,
    pub scenes: usize,
    pub targets: usize,
    pub positives: usize,
    pub min_per_target: usize,
    pub max_per_target: usize,
    pub escapes: usize,
    pub conflicts: usize,
    /// Positives per level, ascending level.
    pub level_counts: Vec<(u8, usize)>,
}

impl StrategySummary {
    pub fn from_results(name: &str, results: &[WeightedAssignment]) -> Self {
        let mut level_counts: Vec<(u8, usize)> = results
            .first()
            .map(|r| r.spec.levels().iter().map(|l| (l.level, 0)).collect())
            .unwrap_or_default();
        let mut out = Self {
            name: name.to_string(),
            scenes: results.len(),
            targets: 0,
            positives: 0,
            min_per_target: usize::MAX,
            max_per_target: 0,
            escapes: 0,
            conflicts: 0,
            level_counts: Vec::new(),
        };
        for r in results {
            out.targets += r.target_counts.len();
            out.positives += r.num_positives();
            out.escapes += r.escapes;
            out.conflicts += r.conflicts_resolved;
            for &c in &r.target_counts {
                out.min_per_target = out.min_per_target.min(c);
                out.max_per_target = out.max_per_target.max(c);
            }
            for p in &r.positives {
                match level_counts.iter_mut().find(|(l, _)| *l == p.anchor.level) {
                    Some(slot) => slot.1 += 1,
                    None => level_counts.push((p.anchor.level, 1)),
                }
            }
        }
        if out.targets == 0 {
            out.min_per_target = 0;
        }
        level_counts.sort_unstable();
        out.level_counts = level_counts;
        out
    }

    pub fn mean_per_target(&self) -> f64 {
        if self.targets == 0 {
            0.0
        } else {
            self.positives as f64 / self.targets as f64
        }
    }

    /// Shannon entropy in bits of the positives' level distribution.
    pub fn level_entropy(&self) -> f64 {
        let total: usize = self.level_counts.iter().map(|(_, c)| c).sum();
        if total == 0 {
            return 0.0;
        }
        self.level_counts
            .iter()
            .filter(|(_, c)| *c > 0)
            .map(|&(_, c)| {
                let p = c as f64 / total as f64;
                -p * p.log2()
            })
            .sum()
    }
}

/// Metrics as rows, strategies as columns.
pub fn compare_table(summaries: &[StrategySummary]) -> String {
    let mut s = String::from("metric");
    for sm in summaries {
        let _ = write!(s, ",{}", sm.name);
    }
    s.push('\n');
    let mut row = |label: &str, f: &dyn Fn(&StrategySummary) -> String| {
        s.push_str(label);
        for sm in summaries {
            let _ = write!(s, ",{}", f(sm));
        }
        s.push('\n');
    };
    row("scenes", &|m| m.scenes.to_string());
    row("targets", &|m| m.targets.to_string());
    row("total_positives", &|m| m.positives.to_string());
    row("mean_per_target", &|m| {
        format!("{:.6}", m.mean_per_target())
    });
    row("min_per_target", &|m| m.min_per_target.to_string());
    row("max_per_target", &|m| m.max_per_target.to_string());
    row("escapes", &|m| m.escapes.to_string());
    row("conflicts", &|m| m.conflicts.to_string());
    row("level_entropy_bits", &|m| {
        format!("{:.6}", m.level_entropy())
    });
    let levels: Vec<u8> = summaries
        .first()
        .map(|m| m.level_counts.iter().map(|(l, _)| *l).collect())
        .unwrap_or_default();
    for l in levels {
        row(&format!("positives_P{l}"), &|m| {
            m.level_counts
                .iter()
                .find(|(x, _)| *x == l)
                .map_or(0, |(_, c)| *c)
                .to_string()
        });
    }
    s
}

/// Binary portable graymap.
pub fn pgm(width: u32, height: u32, pixels: &[u8]) -> Vec<u8> {
    debug_assert_eq!(pixels.len(), width as usize * height as usize);
    let mut out = format!("P5\n{width} {height}\n255\n").into_bytes();
    out.extend_from_slice(pixels);
    out
}

/// One grid-resolution mask per level, positives 255 and negatives 0.
pub fn level_masks(w: &WeightedAssignment) -> Vec<(u8, u32, u32, Vec<u8>)> {
    w.spec
        .levels()
        .iter()
        .map(|l| {
            let mut px = vec![0u8; l.cells()];
            for p in w.positives.iter().filter(|p| p.anchor.level == l.level) {
                px[p.anchor.grid_y as usize * l.width as usize + p.anchor.grid_x as usize] = 255;
            }
            (l.level, l.width, l.height, px)
        })
        .collect()
}

/// Image-resolution raster: each positive paints its stride-sized cell with
/// `round(255 * weight)`, keeping the maximum where cells overlap.
pub fn weight_overlay(w: &WeightedAssignment) -> Vec<u8> {
    let (iw, ih) = (w.spec.image_width(), w.spec.image_height());
    let mut px = vec![0u8; iw as usize * ih as usize];
    for p in &w.positives {
        let Some(level) = w.spec.level(p.anchor.level) else {
            continue;
        };
        let value = (255.0 * p.weight).round().clamp(1.0, 255.0) as u8;
        let x0 = p.anchor.grid_x * level.stride;
        let y0 = p.anchor.grid_y * level.stride;
        for y in y0..(y0 + level.stride).min(ih) {
            let row = y as usize * iw as usize;
            for x in x0..(x0 + level.stride).min(iw) {
                let cell = &mut px[row + x as usize];
                *cell = (*cell).max(value);
            }
        }
    }
    px
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub name: String,
    pub scenes: usize,
    pub repetitions: usize,
    pub mean_targets: f64,
    pub anchors_per_scene: f64,
    pub median_ms: f64,
    pub p95_ms: f64,
}

impl BenchRow {
    pub fn anchors_per_second(&self) -> f64 {
        if self.median_ms > 0.0 {
            self.anchors_per_scene / (self.median_ms * 1e-3)
        } else {
            f64::INFINITY
        }
    }
}

pub fn bench_table(rows: &[BenchRow]) -> String {
    let mut s = String::from(
        "strategy,scenes,repetitions,mean_targets,anchors_per_scene,median_ms,p95_ms,anchors_per_sec\n",
    );
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{:.2},{:.1},{:.4},{:.4},{:.0}",
            r.name,
            r.scenes,
            r.repetitions,
            r.mean_targets,
            r.anchors_per_scene,
            r.median_ms,
            r.p95_ms,
            r.anchors_per_second()
        );
    }
    s
}
