//! Brute-force reference computations for the rotassign test suites.
//!
//! Nothing here depends on `rotassign-core`: inputs and outputs are plain
//! numbers, and every formula is written out independently (quadratic forms
//! instead of frame rotations, all-pairs rectangle search instead of hull
//! calipers, compensated summation instead of a straight fold).

/// A box as plain numbers: center, sides, angle in degrees from the image
/// y-axis to the `h` side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlainBox {
    pub cx: f64,
    pub cy: f64,
    pub w: f64,
    pub h: f64,
    pub theta_deg: f64,
}

/// Unit vectors of the `w` and `h` axes.
fn axes(b: &PlainBox) -> ((f64, f64), (f64, f64)) {
    let t = b.theta_deg * std::f64::consts::PI / 180.0;
    // h axis makes angle theta with the y-axis: (sin t, -cos t) up to sign.
    let h_axis = (t.sin(), -t.cos());
    let w_axis = (-h_axis.1, h_axis.0);
    (w_axis, h_axis)
}

/// `d^T Q d` for the ellipse quadratic form `Q = sum_i u_i u_i^T / r_i^2`.
pub fn ellipse_form(b: &PlainBox, x: f64, y: f64) -> f64 {
    let (u, v) = axes(b);
    let rw = 0.5 * b.w;
    let rh = 0.5 * b.h;
    let q11 = u.0 * u.0 / (rw * rw) + v.0 * v.0 / (rh * rh);
    let q22 = u.1 * u.1 / (rw * rw) + v.1 * v.1 / (rh * rh);
    let q12 = u.0 * u.1 / (rw * rw) + v.0 * v.1 / (rh * rh);
    let dx = x - b.cx;
    let dy = y - b.cy;
    q11 * dx * dx + 2.0 * q12 * dx * dy + q22 * dy * dy
}

/// Adaptive threshold written as `(2 max - min) / (2 max)`.
pub fn adaptive_threshold(w: f64, h: f64) -> f64 {
    let (lo, hi) = if w < h { (w, h) } else { (h, w) };
    (2.0 * hi - lo) / (2.0 * hi)
}

/// Box-frame half-offsets via projection onto the box axes.
pub fn box_projections(b: &PlainBox, x: f64, y: f64) -> (f64, f64) {
    let (u, v) = axes(b);
    let dx = x - b.cx;
    let dy = y - b.cy;
    ((dx * u.0 + dy * u.1).abs(), (dx * v.0 + dy * v.1).abs())
}

/// Outcome of an exhaustive membership scan.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScanResult {
    /// Cells clearly inside, row-major.
    pub inside: Vec<(u32, u32)>,
    /// Cells within `band` of the boundary, where rounding may go either way.
    pub ambiguous: Vec<(u32, u32)>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PlainRegion {
    /// Strict ellipse with the given threshold.
    Ellipse { threshold: f64 },
    /// Closed box.
    Box,
    /// Closed central window of half-size `radius`.
    Central { radius: f64 },
}

/// Scans every cell of a `width x height` grid with anchors at
/// `floor(stride/2) + i * stride`.
pub fn scan_grid(
    b: &PlainBox,
    region: PlainRegion,
    stride: u32,
    width: u32,
    height: u32,
    band: f64,
) -> ScanResult {
    let mut out = ScanResult::default();
    let half = f64::from(stride / 2);
    for gy in 0..height {
        for gx in 0..width {
            let x = half + f64::from(gx) * f64::from(stride);
            let y = half + f64::from(gy) * f64::from(stride);
            // signed margin: positive inside
            let margin = match region {
                PlainRegion::Ellipse { threshold } => threshold - ellipse_form(b, x, y),
                PlainRegion::Box => {
                    let (pa, pb) = box_projections(b, x, y);
                    (0.5 * b.w - pa).min(0.5 * b.h - pb)
                }
                PlainRegion::Central { radius } => {
                    let (pa, pb) = box_projections(b, x, y);
                    (radius - pa).min(radius - pb)
                }
            };
            if margin.abs() <= band {
                out.ambiguous.push((gx, gy));
            } else if margin > 0.0 {
                out.inside.push((gx, gy));
            }
        }
    }
    out
}

/// Minimum-area enclosing rectangle found by trying every vertex pair as a
/// side direction. Returns `(area, center, long side, short side, long-side
/// direction)`.
pub fn min_area_rect(points: &[(f64, f64)]) -> Option<MinRect> {
    let mut best: Option<MinRect> = None;
    for i in 0..points.len() {
        for j in 0..points.len() {
            if i == j {
                continue;
            }
            let (ex, ey) = (points[j].0 - points[i].0, points[j].1 - points[i].1);
            let len = (ex * ex + ey * ey).sqrt();
            if len < 1e-12 {
                continue;
            }
            let u = (ex / len, ey / len);
            let v = (-u.1, u.0);
            let pu: Vec<f64> = points.iter().map(|p| p.0 * u.0 + p.1 * u.1).collect();
            let pv: Vec<f64> = points.iter().map(|p| p.0 * v.0 + p.1 * v.1).collect();
            let (u0, u1) = min_max(&pu);
            let (v0, v1) = min_max(&pv);
            let (su, sv) = (u1 - u0, v1 - v0);
            let area = su * sv;
            if best.as_ref().is_none_or(|b| area < b.area) {
                let (mu, mv) = (0.5 * (u0 + u1), 0.5 * (v0 + v1));
                let center = (u.0 * mu + v.0 * mv, u.1 * mu + v.1 * mv);
                let (long, short, dir) = if su >= sv { (su, sv, u) } else { (sv, su, v) };
                best = Some(MinRect {
                    area,
                    center,
                    long,
                    short,
                    long_dir: dir,
                });
            }
        }
    }
    best.filter(|b| b.area > 0.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinRect {
    pub area: f64,
    pub center: (f64, f64),
    pub long: f64,
    pub short: f64,
    pub long_dir: (f64, f64),
}

impl MinRect {
    /// Corners in order around the rectangle.
    pub fn corners(&self) -> [(f64, f64); 4] {
        let (u, hl) = (self.long_dir, 0.5 * self.long);
        let (v, hs) = ((-u.1, u.0), 0.5 * self.short);
        let c = self.center;
        let at = |a: f64, b: f64| (c.0 + a * u.0 + b * v.0, c.1 + a * u.1 + b * v.1);
        [at(-hl, -hs), at(hl, -hs), at(hl, hs), at(-hl, hs)]
    }
}

fn min_max(xs: &[f64]) -> (f64, f64) {
    xs.iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
            (lo.min(x), hi.max(x))
        })
}

/// Neumaier compensated sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Loss hyperparameters as plain numbers.
#[derive(Debug, Clone, Copy)]
pub struct PlainLossParams {
    pub delta: f64,
    pub gamma: f64,
    pub beta: f64,
    pub lambda: f64,
    pub eps: f64,
}

/// One anchor's ground truth for the loss oracle.
#[derive(Debug, Clone)]
pub struct PlainAnchor {
    /// `(category, weight, regression target)` when positive.
    pub positive: Option<(usize, f64, [f64; 5])>,
    pub scores: Vec<f64>,
    pub regression: [f64; 5],
}

/// `(cls, reg, total)` by straight sequential compensated summation.
pub fn loss_sum(anchors: &[PlainAnchor], p: &PlainLossParams) -> (f64, f64, f64) {
    let mut cls = CompensatedSum::default();
    let mut reg = CompensatedSum::default();
    let mut n_pos = 0usize;
    for a in anchors {
        for (cat, &s) in a.scores.iter().enumerate() {
            let c = if s < p.eps {
                p.eps
            } else if s > 1.0 - p.eps {
                1.0 - p.eps
            } else {
                s
            };
            let term = match a.positive {
                Some((pc, w, _)) if pc == cat => {
                    p.delta * (w - c).abs().powf(p.gamma) * (-(c.ln()))
                }
                _ => p.delta * c.powf(p.gamma) * (-((1.0 - c).ln())),
            };
            cls.add(term);
        }
        if let Some((_, w, target)) = a.positive {
            n_pos += 1;
            for (pred, truth) in a.regression.iter().zip(&target) {
                let x = pred - truth;
                let l = if x.abs() < p.beta {
                    x * x / (2.0 * p.beta)
                } else {
                    x.abs() - p.beta / 2.0
                };
                reg.add(w * l);
            }
        }
    }
    let norm = n_pos.max(1) as f64;
    let c = cls.value() / norm;
    let r = reg.value() / norm;
    (c, r, c + p.lambda * r)
}

/// Deterministic 64-bit generator (SplitMix64) so scenarios are reproducible
/// from a seed without any external crate.
#[derive(Debug, Clone)]
pub struct SplitMix64(u64);

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)`.
    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }

    pub fn log_range(&mut self, lo: f64, hi: f64) -> f64 {
        self.range(lo.ln(), hi.ln()).exp()
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }
}

/// A seeded scene description: image size and plain boxes with categories.
#[derive(Debug, Clone, PartialEq)]
pub struct SeededScenario {
    pub seed: u64,
    pub width: u32,
    pub height: u32,
    pub boxes: Vec<(PlainBox, u32)>,
    pub k: usize,
}

impl SeededScenario {
    /// Up to `max_boxes` boxes with log-uniform long side in `[4, 600]`,
    /// aspect in `[1, 10]`, centers allowed slightly outside the image.
    pub fn generate(seed: u64, max_boxes: usize) -> Self {
        let mut rng = SplitMix64::new(seed);
        let width = 200 + 50 * rng.below(13) as u32;
        let height = 200 + 50 * rng.below(13) as u32;
        let n = rng.below(max_boxes as u64 + 1) as usize;
        let k = 1 + rng.below(20) as usize;
        let boxes = (0..n)
            .map(|_| {
                let long = rng.log_range(4.0, 600.0);
                let aspect = rng.log_range(1.0, 10.0);
                let b = PlainBox {
                    cx: rng.range(-20.0, f64::from(width) + 20.0),
                    cy: rng.range(-20.0, f64::from(height) + 20.0),
                    w: long / aspect,
                    h: long,
                    theta_deg: rng.range(0.0, 180.0),
                };
                (b, rng.below(5) as u32)
            })
            .collect();
        Self {
            seed,
            width,
            height,
            boxes,
            k,
        }
    }
}

/// Random convex quadrilateral: four sorted angles on a jittered ellipse.
pub fn random_convex_quad(rng: &mut SplitMix64) -> [(f64, f64); 4] {
    let cx = rng.range(0.0, 1000.0);
    let cy = rng.range(0.0, 1000.0);
    let rx = rng.range(2.0, 200.0);
    let ry = rng.range(2.0, 200.0);
    let rot = rng.range(0.0, std::f64::consts::TAU);
    let mut angles = [0.0; 4];
    for (i, a) in angles.iter_mut().enumerate() {
        *a = (i as f64 + rng.range(0.1, 0.9)) * std::f64::consts::FRAC_PI_2;
    }
    let mut out = [(0.0, 0.0); 4];
    for (o, a) in out.iter_mut().zip(angles) {
        let (x, y) = (rx * a.cos(), ry * a.sin());
        *o = (
            cx + x * rot.cos() - y * rot.sin(),
            cy + x * rot.sin() + y * rot.cos(),
        );
    }
    out
}
