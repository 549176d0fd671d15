//! Seeded synthetic scenes.
//!
//! Centers are uniform over the image, the long side is log-uniform in
//! `[16, 512]`, the aspect ratio log-uniform in `[1, 8]` and the angle
//! uniform in `[0, 180)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::OrientedBox;
use crate::ingest::Scene;

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticConfig {
    pub width: u32,
    pub height: u32,
    pub min_boxes: usize,
    pub max_boxes: usize,
    pub long_side: (f64, f64),
    pub aspect: (f64, f64),
    pub num_categories: u32,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        Self {
            width: 800,
            height: 800,
            min_boxes: 1,
            max_boxes: 50,
            long_side: (16.0, 512.0),
            aspect: (1.0, 8.0),
            num_categories: 15,
        }
    }
}

impl SyntheticConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = self.width > 0
            && self.height > 0
            && self.min_boxes <= self.max_boxes
            && self.long_side.0 > 0.0
            && self.long_side.0 <= self.long_side.1
            && self.aspect.0 >= 1.0
            && self.aspect.0 <= self.aspect.1
            && self.num_categories > 0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidConfig(format!(
                "bad synthetic config {self:?}"
            )))
        }
    }
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn log_uniform<R: Rng + ?Sized>(rng: &mut R, (lo, hi): (f64, f64)) -> f64 {
    if lo == hi {
        return lo;
    }
    (rng.random_range(lo.ln()..hi.ln())).exp()
}

/// A box with the given long side, random aspect, angle and center.
pub fn random_box_with_long_side<R: Rng + ?Sized>(
    rng: &mut R,
    cfg: &SyntheticConfig,
    long_side: f64,
) -> OrientedBox {
    let aspect = log_uniform(rng, cfg.aspect);
    let cx = rng.random_range(0.0..f64::from(cfg.width));
    let cy = rng.random_range(0.0..f64::from(cfg.height));
    let theta = rng.random_range(0.0..180.0);
    let category = rng.random_range(0..cfg.num_categories);
    OrientedBox::new(cx, cy, long_side / aspect, long_side, theta, category)
        .expect("synthetic boxes have positive sides")
}

pub fn random_box<R: Rng + ?Sized>(rng: &mut R, cfg: &SyntheticConfig) -> OrientedBox {
    let long = log_uniform(rng, cfg.long_side);
    random_box_with_long_side(rng, cfg, long)
}

/// Scene reproducible from `seed` alone.
pub fn synthetic_scene(cfg: &SyntheticConfig, seed: u64, id: impl Into<String>) -> Result<Scene> {
    cfg.validate()?;
    let mut rng = rng_from_seed(seed);
    let n = rng.random_range(cfg.min_boxes..=cfg.max_boxes);
    let boxes = (0..n).map(|_| random_box(&mut rng, cfg)).collect();
    Ok(Scene::new(id, cfg.width, cfg.height, boxes))
}

/// `count` scenes with ids `{prefix}{index:05}`. Per-scene seeds are drawn
/// from one generator seeded with `seed`.
pub fn synthetic_corpus(
    cfg: &SyntheticConfig,
    count: usize,
    seed: u64,
    prefix: &str,
) -> Result<Vec<Scene>> {
    cfg.validate()?;
    let mut master = rng_from_seed(seed);
    (0..count)
        .map(|i| synthetic_scene(cfg, master.random(), format!("{prefix}{i:05}")))
        .collect()
}

/// Single-target scenes over `buckets` log-spaced long sides spanning
/// `cfg.long_side`, `per_bucket` scenes each. A target's category is its
/// bucket index.
pub fn scale_sweep(
    cfg: &SyntheticConfig,
    buckets: usize,
    per_bucket: usize,
    seed: u64,
) -> Result<Vec<Scene>> {
    cfg.validate()?;
    let mut rng = rng_from_seed(seed);
    let mut scenes = Vec::with_capacity(buckets * per_bucket);
    for (b, long) in scale_buckets(buckets, cfg.long_side.0, cfg.long_side.1)
        .into_iter()
        .enumerate()
    {
        for i in 0..per_bucket {
            let bx = random_box_with_long_side(&mut rng, cfg, long).with_category(b as u32);
            scenes.push(Scene::new(
                format!("sweep{b:02}_{i:05}"),
                cfg.width,
                cfg.height,
                vec![bx],
            ));
        }
    }
    Ok(scenes)
}

/// `n` log-spaced long sides from `min` to `max` inclusive.
pub fn scale_buckets(n: usize, min: f64, max: f64) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![min],
        _ => {
            let step = (max / min).ln() / (n - 1) as f64;
            (0..n).map(|i| min * (step * i as f64).exp()).collect()
        }
    }
}
