//! Positive-sample selection over the anchor pyramid.
//!
//! The adaptive strategy walks the pyramid from the coarsest level down,
//! taking the candidates closest to each target's center until `k` samples
//! are collected. Anchors claimed by several targets go to the target with
//! the longest side; a target left with nothing receives its closest
//! unassigned anchor.

mod histogram;
mod oracle;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::geometry::{obb_contains, to_box_frame, ImagePoint, OrientedBox, RatioMode, Region};
use crate::pyramid::{AnchorPoint, LevelSpec, PyramidSpec};

pub use histogram::{level_histogram, LevelHistogram};
pub use oracle::assign_oracle;

/// Default number of positives per target.
pub const DEFAULT_K: usize = 15;

/// Default central-area half-size, in strides.
pub const DEFAULT_RADIUS_FACTOR: f64 = 1.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Strategy {
    /// Sequential coarse-to-fine top-k inside the adaptive ellipse.
    Earl,
    /// Every anchor inside the box whose regression range matches its level.
    FixedScale,
    /// Sequential top-k inside the whole oriented box.
    BoundingBox,
    /// Sequential top-k inside a stride-scaled central window.
    CentralArea,
    /// Top-k inside the ellipse pooled over all levels at once.
    TopKOnly,
}

impl Strategy {
    pub const ALL: [Strategy; 5] = [
        Strategy::Earl,
        Strategy::FixedScale,
        Strategy::BoundingBox,
        Strategy::CentralArea,
        Strategy::TopKOnly,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Strategy::Earl => "earl",
            Strategy::FixedScale => "fixed-scale",
            Strategy::BoundingBox => "bounding-box",
            Strategy::CentralArea => "central-area",
            Strategy::TopKOnly => "topk",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "earl" => Ok(Strategy::Earl),
            "fixed-scale" | "fixed" | "fs" => Ok(Strategy::FixedScale),
            "bounding-box" | "bb" | "box" => Ok(Strategy::BoundingBox),
            "central-area" | "ca" | "central" => Ok(Strategy::CentralArea),
            "topk" | "top-k" | "topk-only" => Ok(Strategy::TopKOnly),
            other => Err(Error::InvalidConfig(format!("unknown strategy `{other}`"))),
        }
    }
}

/// Regression range `(min, max]` on the largest box-frame offset for one level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaleRange {
    pub level: u8,
    pub min: f64,
    pub max: f64,
}

impl ScaleRange {
    #[inline]
    pub fn contains(&self, offset: f64) -> bool {
        offset > self.min && offset <= self.max
    }
}

/// (0,64], (64,128], (128,256], (256,512], (512,inf) for P3..P7.
pub fn default_scale_ranges() -> Vec<ScaleRange> {
    let bounds = [0.0, 64.0, 128.0, 256.0, 512.0, f64::INFINITY];
    bounds
        .windows(2)
        .enumerate()
        .map(|(i, w)| ScaleRange {
            level: 3 + i as u8,
            min: w[0],
            max: w[1],
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct StrategyConfig {
    pub strategy: Strategy,
    pub k: usize,
    pub ratio_mode: RatioMode,
    pub scale_ranges: Vec<ScaleRange>,
    pub radius_factor: f64,
}

impl Default for StrategyConfig {
    fn default() -> Self {
        Self::new(Strategy::Earl)
    }
}

impl StrategyConfig {
    pub fn new(strategy: Strategy) -> Self {
        Self {
            strategy,
            k: DEFAULT_K,
            ratio_mode: RatioMode::Adaptive,
            scale_ranges: default_scale_ranges(),
            radius_factor: DEFAULT_RADIUS_FACTOR,
        }
    }

    pub fn with_k(mut self, k: usize) -> Self {
        self.k = k;
        self
    }

    pub fn with_ratio_mode(mut self, mode: RatioMode) -> Self {
        self.ratio_mode = mode;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::InvalidConfig("k must be at least 1".into()));
        }
        if let RatioMode::Fixed(v) = self.ratio_mode {
            RatioMode::fixed(v)?;
        }
        if !(self.radius_factor > 0.0 && self.radius_factor.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "radius factor must be positive, got {}",
                self.radius_factor
            )));
        }
        Ok(())
    }

    /// Sampling region used by the sequential and pooled top-k strategies.
    pub fn region(&self) -> Region {
        match self.strategy {
            Strategy::Earl | Strategy::TopKOnly => Region::Ellipse(self.ratio_mode),
            Strategy::BoundingBox | Strategy::FixedScale => Region::Box,
            Strategy::CentralArea => Region::Central {
                radius_factor: self.radius_factor,
            },
        }
    }

    pub(crate) fn scale_range(&self, level: u8) -> Option<&ScaleRange> {
        self.scale_ranges.iter().find(|r| r.level == level)
    }
}

/// Largest distance from a point inside the box to one of its four sides.
#[inline]
pub fn max_side_offset(bx: &OrientedBox, p: &ImagePoint) -> f64 {
    let f = to_box_frame(bx, p);
    (0.5 * bx.w() + f.a.abs()).max(0.5 * bx.h() + f.b.abs())
}

/// Fixed-scale membership: inside the box, with the largest side offset in
/// the level's regression range.
#[inline]
pub fn fixed_scale_contains(bx: &OrientedBox, p: &ImagePoint, range: &ScaleRange) -> bool {
    obb_contains(bx, p) && range.contains(max_side_offset(bx, p))
}

/// Regression target of a positive: center offsets, then the target's sides
/// and angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegressionTarget {
    pub dx: f64,
    pub dy: f64,
    pub w: f64,
    pub h: f64,
    pub theta: f64,
}

impl RegressionTarget {
    pub fn new(bx: &OrientedBox, anchor: &ImagePoint) -> Self {
        Self {
            dx: bx.cx() - anchor.x,
            dy: bx.cy() - anchor.y,
            w: bx.w(),
            h: bx.h(),
            theta: bx.theta(),
        }
    }

    pub fn to_array(&self) -> [f64; 5] {
        [self.dx, self.dy, self.w, self.h, self.theta]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PositiveSample {
    pub anchor: AnchorPoint,
    /// Enumeration index of the anchor in its pyramid.
    pub anchor_id: usize,
    pub target_index: usize,
    /// L2 distance from the anchor to the target center.
    pub distance: f64,
    pub regression: RegressionTarget,
    /// Spatial distance weight; zero until weighting runs.
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AssignmentResult {
    /// Sorted by anchor id; each anchor appears at most once.
    pub positives: Vec<PositiveSample>,
    pub scene: Vec<OrientedBox>,
    pub spec: PyramidSpec,
    pub strategy: Strategy,
    /// Positives per target, indexed like `scene`.
    pub target_counts: Vec<usize>,
    /// Claims dropped by the longest-side rule.
    pub conflicts_resolved: usize,
    /// Targets that received their positive through the escape rule.
    pub escapes: usize,
}

impl AssignmentResult {
    pub fn num_positives(&self) -> usize {
        self.positives.len()
    }

    /// Anchor ids that are not positives, ascending.
    pub fn negative_ids(&self) -> Vec<usize> {
        let mut pos = vec![false; self.spec.total_anchors()];
        for p in &self.positives {
            pos[p.anchor_id] = true;
        }
        pos.iter()
            .enumerate()
            .filter_map(|(id, &p)| (!p).then_some(id))
            .collect()
    }

    /// Positive sample at an anchor, if any.
    pub fn positive_at(&self, anchor_id: usize) -> Option<&PositiveSample> {
        self.positives
            .binary_search_by_key(&anchor_id, |p| p.anchor_id)
            .ok()
            .map(|i| &self.positives[i])
    }

    pub fn positives_of(&self, target: usize) -> impl Iterator<Item = &PositiveSample> {
        self.positives
            .iter()
            .filter(move |p| p.target_index == target)
    }
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    id: usize,
    dist_sq: f64,
    anchor: AnchorPoint,
}

#[inline]
fn by_distance(a: &Candidate, b: &Candidate) -> std::cmp::Ordering {
    a.dist_sq.total_cmp(&b.dist_sq).then(a.id.cmp(&b.id))
}

/// Inclusive grid-index range whose anchors can fall within `extent` of
/// `center` along one axis, padded by one cell.
fn grid_span(level: &LevelSpec, center: f64, extent: f64, cells: u32) -> Option<(u32, u32)> {
    let s = f64::from(level.stride);
    let half = f64::from(level.half_stride());
    let lo = ((center - extent - half) / s).floor() - 1.0;
    let hi = ((center + extent - half) / s).ceil() + 1.0;
    let max = f64::from(cells - 1);
    if hi < 0.0 || lo > max || lo.is_nan() || hi.is_nan() {
        return None;
    }
    Some((lo.max(0.0) as u32, hi.min(max) as u32))
}

/// Appends every anchor of level `pos` that passes `test`, in enumeration order.
fn scan_level(
    bx: &OrientedBox,
    spec: &PyramidSpec,
    pos: usize,
    half_sizes: (f64, f64),
    test: impl Fn(&ImagePoint) -> bool,
    out: &mut Vec<Candidate>,
) {
    let level = &spec.levels()[pos];
    let (ex, ey) = bx.aabb_half_extents(half_sizes.0, half_sizes.1);
    let Some((x0, x1)) = grid_span(level, bx.cx(), ex, level.width) else {
        return;
    };
    let Some((y0, y1)) = grid_span(level, bx.cy(), ey, level.height) else {
        return;
    };
    let center = bx.center();
    for grid_y in y0..=y1 {
        let y = level.coord(grid_y);
        for grid_x in x0..=x1 {
            let img = ImagePoint::new(level.coord(grid_x), y);
            if test(&img) {
                out.push(Candidate {
                    id: spec.anchor_id(pos, grid_x, grid_y),
                    dist_sq: img.distance_sq(&center),
                    anchor: AnchorPoint {
                        level: level.level,
                        grid_x,
                        grid_y,
                        img,
                    },
                });
            }
        }
    }
}

/// All anchors of one level inside `region`, in row-major order.
pub fn candidates_on_level(
    bx: &OrientedBox,
    level: &LevelSpec,
    region: Region,
) -> Vec<AnchorPoint> {
    let stride = f64::from(level.stride);
    let (ha, hb) = region.half_sizes(bx, stride);
    let (ex, ey) = bx.aabb_half_extents(ha, hb);
    let mut out = Vec::new();
    let (Some((x0, x1)), Some((y0, y1))) = (
        grid_span(level, bx.cx(), ex, level.width),
        grid_span(level, bx.cy(), ey, level.height),
    ) else {
        return out;
    };
    for grid_y in y0..=y1 {
        for grid_x in x0..=x1 {
            let img = ImagePoint::new(level.coord(grid_x), level.coord(grid_y));
            if region.contains(bx, &img, stride) {
                out.push(AnchorPoint {
                    level: level.level,
                    grid_x,
                    grid_y,
                    img,
                });
            }
        }
    }
    out
}

/// Keeps the `n` closest candidates, ordered by (distance, id).
fn keep_closest(cands: &mut Vec<Candidate>, n: usize) {
    if cands.len() > n {
        if n > 0 {
            cands.select_nth_unstable_by(n - 1, by_distance);
        }
        cands.truncate(n);
    }
}

fn select_sequential(
    bx: &OrientedBox,
    spec: &PyramidSpec,
    region: Region,
    k: usize,
    scratch: &mut Vec<Candidate>,
    claims: &mut Vec<Candidate>,
) {
    let mut remaining = k;
    for pos in (0..spec.levels().len()).rev() {
        if remaining == 0 {
            break;
        }
        let stride = f64::from(spec.levels()[pos].stride);
        scratch.clear();
        scan_level(
            bx,
            spec,
            pos,
            region.half_sizes(bx, stride),
            |p| region.contains(bx, p, stride),
            scratch,
        );
        let take = remaining.min(scratch.len());
        keep_closest(scratch, take);
        claims.extend_from_slice(scratch);
        remaining -= take;
    }
}

fn select_pooled(
    bx: &OrientedBox,
    spec: &PyramidSpec,
    region: Region,
    k: usize,
    claims: &mut Vec<Candidate>,
) {
    let start = claims.len();
    for pos in (0..spec.levels().len()).rev() {
        let stride = f64::from(spec.levels()[pos].stride);
        scan_level(
            bx,
            spec,
            pos,
            region.half_sizes(bx, stride),
            |p| region.contains(bx, p, stride),
            claims,
        );
    }
    let mut pooled = claims.split_off(start);
    keep_closest(&mut pooled, k);
    claims.extend(pooled);
}

fn select_fixed_scale(
    bx: &OrientedBox,
    spec: &PyramidSpec,
    cfg: &StrategyConfig,
    claims: &mut Vec<Candidate>,
) {
    for pos in (0..spec.levels().len()).rev() {
        let Some(range) = cfg.scale_range(spec.levels()[pos].level) else {
            continue;
        };
        scan_level(
            bx,
            spec,
            pos,
            (0.5 * bx.w(), 0.5 * bx.h()),
            |p| fixed_scale_contains(bx, p, range),
            claims,
        );
    }
}

const UNOWNED: usize = usize::MAX;

/// Runs the selection stage for every target, then the conflict and escape
/// rules.
fn assign_impl(
    scene: &[OrientedBox],
    spec: &PyramidSpec,
    cfg: &StrategyConfig,
) -> Result<AssignmentResult> {
    cfg.validate()?;

    let region = cfg.region();
    let mut scratch = Vec::new();
    let mut claims: Vec<Vec<Candidate>> = Vec::with_capacity(scene.len());
    for bx in scene {
        let mut mine = Vec::new();
        match cfg.strategy {
            Strategy::Earl | Strategy::BoundingBox | Strategy::CentralArea => {
                select_sequential(bx, spec, region, cfg.k, &mut scratch, &mut mine)
            }
            Strategy::TopKOnly => select_pooled(bx, spec, region, cfg.k, &mut mine),
            Strategy::FixedScale => select_fixed_scale(bx, spec, cfg, &mut mine),
        }
        claims.push(mine);
    }

    // Longest side wins; earlier targets keep ties.
    let mut owner = vec![UNOWNED; spec.total_anchors()];
    let mut conflicts_resolved = 0;
    for (target, mine) in claims.iter().enumerate() {
        for c in mine {
            let current = owner[c.id];
            if current == UNOWNED {
                owner[c.id] = target;
            } else {
                conflicts_resolved += 1;
                if scene[target].long_side() > scene[current].long_side() {
                    owner[c.id] = target;
                }
            }
        }
    }

    let mut positives: Vec<(usize, Candidate)> = Vec::new();
    let mut target_counts = vec![0usize; scene.len()];
    for (target, mine) in claims.iter().enumerate() {
        for c in mine {
            if owner[c.id] == target {
                positives.push((target, *c));
                target_counts[target] += 1;
            }
        }
    }

    let mut escapes = 0;
    for (target, bx) in scene.iter().enumerate() {
        if target_counts[target] > 0 {
            continue;
        }
        if let Some(c) = closest_unowned(bx, spec, &owner) {
            owner[c.id] = target;
            positives.push((target, c));
            target_counts[target] = 1;
            escapes += 1;
        }
    }

    positives.sort_unstable_by_key(|(_, c)| c.id);
    let positives = positives
        .into_iter()
        .map(|(target, c)| PositiveSample {
            anchor: c.anchor,
            anchor_id: c.id,
            target_index: target,
            distance: c.dist_sq.sqrt(),
            regression: RegressionTarget::new(&scene[target], &c.anchor.img),
            weight: 0.0,
        })
        .collect();

    Ok(AssignmentResult {
        positives,
        scene: scene.to_vec(),
        spec: spec.clone(),
        strategy: cfg.strategy,
        target_counts,
        conflicts_resolved,
        escapes,
    })
}

/// Closest anchor without an owner, over every level.
fn closest_unowned(bx: &OrientedBox, spec: &PyramidSpec, owner: &[usize]) -> Option<Candidate> {
    let center = bx.center();
    let mut best: Option<Candidate> = None;
    for (pos, level) in spec.levels().iter().enumerate() {
        for grid_y in 0..level.height {
            let y = level.coord(grid_y);
            let dy = y - center.y;
            let dy_sq = dy * dy;
            if let Some(b) = &best {
                if dy_sq > b.dist_sq {
                    continue;
                }
            }
            for grid_x in 0..level.width {
                let id = spec.anchor_id(pos, grid_x, grid_y);
                if owner[id] != UNOWNED {
                    continue;
                }
                let img = ImagePoint::new(level.coord(grid_x), y);
                let cand = Candidate {
                    id,
                    dist_sq: img.distance_sq(&center),
                    anchor: AnchorPoint {
                        level: level.level,
                        grid_x,
                        grid_y,
                        img,
                    },
                };
                if best.as_ref().is_none_or(|b| by_distance(&cand, b).is_lt()) {
                    best = Some(cand);
                }
            }
        }
    }
    best
}

/// Adaptive sequential sampling inside the dynamic ellipse.
pub fn assign_earl(
    scene: &[OrientedBox],
    spec: &PyramidSpec,
    cfg: &StrategyConfig,
) -> Result<AssignmentResult> {
    if cfg.strategy != Strategy::Earl {
        return Err(Error::InvalidConfig(format!(
            "assign_earl called with strategy {}",
            cfg.strategy
        )));
    }
    assign_impl(scene, spec, cfg)
}

/// Any of the comparison strategies.
pub fn assign_baseline(
    scene: &[OrientedBox],
    spec: &PyramidSpec,
    cfg: &StrategyConfig,
) -> Result<AssignmentResult> {
    if cfg.strategy == Strategy::Earl {
        return Err(Error::InvalidConfig(
            "assign_baseline called with the earl strategy".into(),
        ));
    }
    assign_impl(scene, spec, cfg)
}

/// Dispatches on `cfg.strategy`.
pub fn assign(
    scene: &[OrientedBox],
    spec: &PyramidSpec,
    cfg: &StrategyConfig,
) -> Result<AssignmentResult> {
    assign_impl(scene, spec, cfg)
}
