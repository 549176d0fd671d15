//! DOTA annotation parsing, quadrilateral to oriented-box conversion and
//! window tiling.
//!
//! A DOTA v1.0 label file holds optional `imagesource:` / `gsd:` header lines
//! followed by one object per line:
//!
//! ```text
//! x1 y1 x2 y2 x3 y3 x4 y4 category difficult
//! ```

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::geometry::{normalize_angle, ImagePoint, OrientedBox};

#[derive(Debug, Clone, PartialEq)]
pub struct DotaRecord {
    pub quad: [ImagePoint; 4],
    pub category: String,
    pub difficult: bool,
}

fn is_header(line: &str) -> bool {
    line.starts_with("imagesource:") || line.starts_with("gsd:")
}

pub fn parse_dota(text: &str) -> Result<Vec<DotaRecord>> {
    let mut records = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || is_header(line) {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != 10 {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected 10 fields, found {}", tokens.len()),
            });
        }
        let mut coords = [0.0f64; 8];
        for (slot, tok) in coords.iter_mut().zip(&tokens[..8]) {
            *slot = tok
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::Parse {
                    line: line_no,
                    message: format!("coordinate `{tok}` is not a finite number"),
                })?;
        }
        let difficult = match tokens[9] {
            "0" => false,
            "1" => true,
            other => {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("difficult flag must be 0 or 1, found `{other}`"),
                })
            }
        };
        records.push(DotaRecord {
            quad: [
                ImagePoint::new(coords[0], coords[1]),
                ImagePoint::new(coords[2], coords[3]),
                ImagePoint::new(coords[4], coords[5]),
                ImagePoint::new(coords[6], coords[7]),
            ],
            category: tokens[8].to_string(),
            difficult,
        });
    }
    Ok(records)
}

/// Serializes records back to DOTA text, one line per record.
pub fn write_dota(records: &[DotaRecord]) -> String {
    let mut out = String::new();
    for r in records {
        for p in &r.quad {
            out.push_str(&format!("{} {} ", p.x, p.y));
        }
        out.push_str(&format!("{} {}\n", r.category, u8::from(r.difficult)));
    }
    out
}

fn cross(o: &ImagePoint, a: &ImagePoint, b: &ImagePoint) -> f64 {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

/// Convex hull (Andrew's monotone chain), counterclockwise in a y-up frame.
fn convex_hull(points: &[ImagePoint]) -> Vec<ImagePoint> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<ImagePoint> = Vec::with_capacity(pts.len() + 1);
    for p in &pts {
        while hull.len() >= 2 && cross(&hull[hull.len() - 2], &hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(*p);
    }
    let lower_len = hull.len() + 1;
    for p in pts.iter().rev().skip(1) {
        while hull.len() >= lower_len
            && cross(&hull[hull.len() - 2], &hull[hull.len() - 1], p) <= 0.0
        {
            hull.pop();
        }
        hull.push(*p);
    }
    hull.pop();
    hull
}

fn polygon_area(pts: &[ImagePoint]) -> f64 {
    let n = pts.len();
    let twice: f64 = (0..n)
        .map(|i| {
            let (p, q) = (&pts[i], &pts[(i + 1) % n]);
            p.x * q.y - q.x * p.y
        })
        .sum();
    0.5 * twice.abs()
}

/// Minimum-area enclosing rectangle of the quad, as a canonical box.
pub fn quad_to_obb(quad: &[ImagePoint; 4], category: u32) -> Result<OrientedBox> {
    if quad.iter().any(|p| !(p.x.is_finite() && p.y.is_finite())) {
        return Err(Error::DegenerateQuad("non-finite vertex".into()));
    }
    let hull = convex_hull(quad);
    let scale = quad
        .iter()
        .flat_map(|p| [p.x.abs(), p.y.abs()])
        .fold(1.0f64, f64::max);
    if hull.len() < 3 || polygon_area(&hull) <= 1e-12 * scale * scale {
        return Err(Error::DegenerateQuad(format!("zero area: {quad:?}")));
    }

    // (area, u, v, u range, v range) of the best edge-aligned rectangle
    type Pair = (f64, f64);
    let mut best: Option<(f64, Pair, Pair, Pair, Pair)> = None;
    for i in 0..hull.len() {
        let (p, q) = (hull[i], hull[(i + 1) % hull.len()]);
        let (ex, ey) = (q.x - p.x, q.y - p.y);
        let len = ex.hypot(ey);
        if len == 0.0 {
            continue;
        }
        let u = (ex / len, ey / len);
        let v = (-u.1, u.0);
        let (mut umin, mut umax, mut vmin, mut vmax) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
        for h in &hull {
            let pu = h.x * u.0 + h.y * u.1;
            let pv = h.x * v.0 + h.y * v.1;
            umin = umin.min(pu);
            umax = umax.max(pu);
            vmin = vmin.min(pv);
            vmax = vmax.max(pv);
        }
        let area = (umax - umin) * (vmax - vmin);
        if best.as_ref().is_none_or(|b| area < b.0) {
            best = Some((area, u, v, (umin, umax), (vmin, vmax)));
        }
    }
    let (_, u, v, (umin, umax), (vmin, vmax)) =
        best.ok_or_else(|| Error::DegenerateQuad("no hull edges".into()))?;

    let mu = 0.5 * (umin + umax);
    let mv = 0.5 * (vmin + vmax);
    let cx = u.0 * mu + v.0 * mv;
    let cy = u.1 * mu + v.1 * mv;
    let (len_u, len_v) = (umax - umin, vmax - vmin);
    let (long_dir, long, short) = if len_u >= len_v {
        (u, len_u, len_v)
    } else {
        (v, len_v, len_u)
    };
    // The long-side axis of a box at angle theta is (sin theta, -cos theta).
    let theta = normalize_angle(long_dir.0.atan2(-long_dir.1).to_degrees());
    OrientedBox::new_uncanonical(cx, cy, short, long, theta, category)
}

/// Category names to ids, in first-appearance order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CategoryMap {
    names: Vec<String>,
    index: HashMap<String, u32>,
}

impl CategoryMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_names<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut map = Self::new();
        for n in names {
            map.id_or_insert(&n.into());
        }
        map
    }

    pub fn id_or_insert(&mut self, name: &str) -> u32 {
        if let Some(&id) = self.index.get(name) {
            return id;
        }
        let id = self.names.len() as u32;
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), id);
        id
    }

    pub fn id(&self, name: &str) -> Option<u32> {
        self.index.get(name).copied()
    }

    pub fn name(&self, id: u32) -> Option<&str> {
        self.names.get(id as usize).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }
}

/// Ground truths of one image (or one tile).
#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    pub id: String,
    pub width: u32,
    pub height: u32,
    pub boxes: Vec<OrientedBox>,
    /// Parallel to `boxes`.
    pub difficult: Vec<bool>,
}

impl Scene {
    pub fn new(id: impl Into<String>, width: u32, height: u32, boxes: Vec<OrientedBox>) -> Self {
        let difficult = vec![false; boxes.len()];
        Self {
            id: id.into(),
            width,
            height,
            boxes,
            difficult,
        }
    }

    /// Converts parsed records, registering categories as they appear.
    pub fn from_records(
        id: impl Into<String>,
        width: u32,
        height: u32,
        records: &[DotaRecord],
        categories: &mut CategoryMap,
        drop_difficult: bool,
    ) -> Result<Self> {
        let mut boxes = Vec::with_capacity(records.len());
        let mut difficult = Vec::with_capacity(records.len());
        for r in records {
            if drop_difficult && r.difficult {
                continue;
            }
            let cat = categories.id_or_insert(&r.category);
            boxes.push(quad_to_obb(&r.quad, cat)?);
            difficult.push(r.difficult);
        }
        Ok(Self {
            id: id.into(),
            width,
            height,
            boxes,
            difficult,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TileSpec {
    pub window: u32,
    pub stride: u32,
    pub resize_to: u32,
}

impl Default for TileSpec {
    fn default() -> Self {
        Self {
            window: 600,
            stride: 450,
            resize_to: 800,
        }
    }
}

impl TileSpec {
    pub fn validate(&self) -> Result<()> {
        if self.window == 0 || self.stride == 0 || self.stride > self.window || self.resize_to == 0
        {
            return Err(Error::InvalidConfig(format!(
                "tiling needs 0 < stride <= window and resize > 0, got {self:?}"
            )));
        }
        Ok(())
    }
}

/// Window offsets along one axis. The last window is shifted back so it ends
/// at the image border.
pub fn window_starts(dim: u32, window: u32, stride: u32) -> Vec<u32> {
    let mut starts = vec![0];
    if dim <= window {
        return starts;
    }
    let mut start = 0;
    while start + window < dim {
        start += stride;
        if start + window > dim {
            start = dim - window;
        }
        if starts.last() != Some(&start) {
            starts.push(start);
        }
    }
    starts
}

/// Lowest-offset window whose half-open span holds `c`; a center on the far
/// image border belongs to the last window.
fn owning_window(c: f64, dim: u32, window: u32, starts: &[u32]) -> Option<usize> {
    if !(c >= 0.0 && c <= f64::from(dim)) {
        return None;
    }
    starts
        .iter()
        .position(|&s| c >= f64::from(s) && c < f64::from(s + window))
        .or(Some(starts.len() - 1))
}

/// Cuts a scene into windows. Each box goes to exactly one window, chosen by
/// its center; coordinates are shifted into the window and scaled by
/// `resize_to / window`.
pub fn tile_scene(scene: &Scene, tiles: &TileSpec) -> Result<Vec<Scene>> {
    tiles.validate()?;
    let xs = window_starts(scene.width, tiles.window, tiles.stride);
    let ys = window_starts(scene.height, tiles.window, tiles.stride);
    let factor = f64::from(tiles.resize_to) / f64::from(tiles.window);

    let mut out: Vec<Scene> = Vec::with_capacity(xs.len() * ys.len());
    for &y0 in &ys {
        for &x0 in &xs {
            out.push(Scene {
                id: format!("{}_{}_{}", scene.id, x0, y0),
                width: tiles.resize_to,
                height: tiles.resize_to,
                boxes: Vec::new(),
                difficult: Vec::new(),
            });
        }
    }
    for (bx, &difficult) in scene.boxes.iter().zip(&scene.difficult) {
        let col = owning_window(bx.cx(), scene.width, tiles.window, &xs);
        let row = owning_window(bx.cy(), scene.height, tiles.window, &ys);
        let (Some(col), Some(row)) = (col, row) else {
            continue;
        };
        let tile = &mut out[row * xs.len() + col];
        let moved = bx
            .translated(-f64::from(xs[col]), -f64::from(ys[row]))
            .scaled(factor)?;
        tile.boxes.push(moved);
        tile.difficult.push(difficult);
    }
    Ok(out)
}
