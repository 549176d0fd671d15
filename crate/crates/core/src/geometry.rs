//! Oriented boxes, box-frame transforms and the sampling-region tests.
//!
//! Angles are degrees at every public boundary and radians only inside the
//! trig evaluation. A box's `theta` is the counterclockwise angle between the
//! image y-axis and its long side, so a canonical box always has `h >= w`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A location in image space, in pixels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImagePoint {
    pub x: f64,
    pub y: f64,
}

impl ImagePoint {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    /// Squared Euclidean distance to `other`.
    #[inline]
    pub fn distance_sq(&self, other: &ImagePoint) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }
}

/// Offsets of a point expressed along the two axes of a box.
///
/// `a` pairs with the box width and `b` with the box height in the
/// elliptical membership test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxFrameOffset {
    pub a: f64,
    pub b: f64,
}

/// A ground-truth oriented box `(cx, cy, w, h, theta, category)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrientedBox {
    cx: f64,
    cy: f64,
    w: f64,
    h: f64,
    theta: f64,
    category: u32,
}

/// Reduces an angle in degrees to `[0, 180)`.
pub fn normalize_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(180.0);
    // rem_euclid of a tiny negative value rounds up to exactly 180.
    if t >= 180.0 {
        0.0
    } else {
        t
    }
}

impl OrientedBox {
    /// Builds a canonical box: sides are swapped (and the angle rotated by
    /// 90 degrees) when `w > h`, and the angle is reduced to `[0, 180)`.
    /// Squares keep their input orientation.
    pub fn new(cx: f64, cy: f64, w: f64, h: f64, theta: f64, category: u32) -> Result<Self> {
        let raw = Self::new_uncanonical(cx, cy, w, h, theta, category)?;
        Ok(raw.canonical())
    }

    /// Builds a validated box without enforcing `h >= w`. The angle is still
    /// reduced to `[0, 180)`.
    pub fn new_uncanonical(
        cx: f64,
        cy: f64,
        w: f64,
        h: f64,
        theta: f64,
        category: u32,
    ) -> Result<Self> {
        if !(cx.is_finite() && cy.is_finite() && theta.is_finite()) {
            return Err(Error::InvalidBox(format!(
                "non-finite center or angle ({cx}, {cy}, {theta})"
            )));
        }
        if !(w.is_finite() && h.is_finite() && w > 0.0 && h > 0.0) {
            return Err(Error::InvalidBox(format!(
                "sides must be positive and finite, got w={w} h={h}"
            )));
        }
        Ok(Self {
            cx,
            cy,
            w,
            h,
            theta: normalize_angle(theta),
            category,
        })
    }

    /// Returns the canonical form of this box (`h >= w`).
    pub fn canonical(self) -> Self {
        if self.w > self.h {
            Self {
                w: self.h,
                h: self.w,
                theta: normalize_angle(self.theta + 90.0),
                ..self
            }
        } else {
            self
        }
    }

    pub fn is_canonical(&self) -> bool {
        self.h >= self.w
    }

    pub fn cx(&self) -> f64 {
        self.cx
    }

    pub fn cy(&self) -> f64 {
        self.cy
    }

    pub fn w(&self) -> f64 {
        self.w
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    /// Angle in degrees, in `[0, 180)`.
    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn category(&self) -> u32 {
        self.category
    }

    pub fn center(&self) -> ImagePoint {
        ImagePoint::new(self.cx, self.cy)
    }

    pub fn long_side(&self) -> f64 {
        self.w.max(self.h)
    }

    pub fn short_side(&self) -> f64 {
        self.w.min(self.h)
    }

    pub fn area(&self) -> f64 {
        self.w * self.h
    }

    pub fn with_category(self, category: u32) -> Self {
        Self { category, ..self }
    }

    /// Translates the center by `(dx, dy)`.
    pub fn translated(self, dx: f64, dy: f64) -> Self {
        Self {
            cx: self.cx + dx,
            cy: self.cy + dy,
            ..self
        }
    }

    /// Uniformly scales center and sides by `factor` about the image origin.
    /// The angle is unchanged.
    pub fn scaled(self, factor: f64) -> Result<Self> {
        Self::new_uncanonical(
            self.cx * factor,
            self.cy * factor,
            self.w * factor,
            self.h * factor,
            self.theta,
            self.category,
        )
    }

    /// Corner points in box-frame order `(-w/2,-h/2), (w/2,-h/2), (w/2,h/2), (-w/2,h/2)`.
    pub fn corners(&self) -> [ImagePoint; 4] {
        let (sin, cos) = self.theta.to_radians().sin_cos();
        let hw = self.w / 2.0;
        let hh = self.h / 2.0;
        // A point with box-frame offsets (a, b) sits at center - (a*ua + b*ub),
        // with ua = (cos, sin) and ub = (sin, -cos).
        let at = |a: f64, b: f64| {
            ImagePoint::new(self.cx - (a * cos + b * sin), self.cy - (a * sin - b * cos))
        };
        [at(-hw, -hh), at(hw, -hh), at(hw, hh), at(-hw, hh)]
    }

    /// Half-extents of the axis-aligned box enclosing a box-frame window of
    /// half-sizes `(half_a, half_b)`.
    pub(crate) fn aabb_half_extents(&self, half_a: f64, half_b: f64) -> (f64, f64) {
        let (sin, cos) = self.theta.to_radians().sin_cos();
        let (sin, cos) = (sin.abs(), cos.abs());
        (half_a * cos + half_b * sin, half_a * sin + half_b * cos)
    }
}

/// Offsets from the point to the box center: `(cx - p.x, cy - p.y)`.
#[inline]
pub fn center_offset(bx: &OrientedBox, p: &ImagePoint) -> (f64, f64) {
    (bx.cx - p.x, bx.cy - p.y)
}

/// Rotates the center offset into the box frame.
#[inline]
pub fn to_box_frame(bx: &OrientedBox, p: &ImagePoint) -> BoxFrameOffset {
    let (dx, dy) = center_offset(bx, p);
    let (sin, cos) = bx.theta.to_radians().sin_cos();
    BoxFrameOffset {
        a: dx * cos + dy * sin,
        b: dx * sin - dy * cos,
    }
}

/// Shape-adaptive threshold `1 - min(h, w) / (2 max(h, w))`, in `[0.5, 1)`.
#[inline]
pub fn ratio_factor(bx: &OrientedBox) -> f64 {
    1.0 - bx.w.min(bx.h) / (2.0 * bx.w.max(bx.h))
}

/// How the elliptical threshold is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum RatioMode {
    /// Per-box threshold from the box aspect ratio.
    #[default]
    Adaptive,
    /// The same threshold for every box, in `(0, 1]`.
    Fixed(f64),
}

impl RatioMode {
    pub fn fixed(value: f64) -> Result<Self> {
        if value > 0.0 && value <= 1.0 {
            Ok(Self::Fixed(value))
        } else {
            Err(Error::InvalidConfig(format!(
                "fixed ratio factor must lie in (0, 1], got {value}"
            )))
        }
    }

    #[inline]
    pub fn threshold(&self, bx: &OrientedBox) -> f64 {
        match *self {
            Self::Adaptive => ratio_factor(bx),
            Self::Fixed(v) => v,
        }
    }
}

impl fmt::Display for RatioMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Adaptive => f.write_str("adaptive"),
            Self::Fixed(v) => write!(f, "{v}"),
        }
    }
}

impl FromStr for RatioMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("adaptive") {
            return Ok(Self::Adaptive);
        }
        let value: f64 = s
            .parse()
            .map_err(|_| Error::InvalidConfig(format!("ratio factor `{s}` is not a number")))?;
        Self::fixed(value)
    }
}

/// Left-hand side of the elliptical test, `a^2/(w/2)^2 + b^2/(h/2)^2`.
#[inline]
pub fn ellipse_lhs(bx: &OrientedBox, p: &ImagePoint) -> f64 {
    let BoxFrameOffset { a, b } = to_box_frame(bx, p);
    let hw = 0.5 * bx.w;
    let hh = 0.5 * bx.h;
    a * a / (hw * hw) + b * b / (hh * hh)
}

/// Dynamic elliptical membership. Points on the boundary are outside.
#[inline]
pub fn ded_contains(bx: &OrientedBox, p: &ImagePoint, mode: RatioMode) -> bool {
    ellipse_lhs(bx, p) < mode.threshold(bx)
}

/// Point-in-oriented-box test, boundary inclusive.
#[inline]
pub fn obb_contains(bx: &OrientedBox, p: &ImagePoint) -> bool {
    let BoxFrameOffset { a, b } = to_box_frame(bx, p);
    a.abs() <= 0.5 * bx.w && b.abs() <= 0.5 * bx.h
}

/// Central window of half-size `radius_factor * stride` in the box frame.
#[inline]
pub fn central_area_contains(
    bx: &OrientedBox,
    p: &ImagePoint,
    radius_factor: f64,
    stride: f64,
) -> bool {
    let BoxFrameOffset { a, b } = to_box_frame(bx, p);
    let r = radius_factor * stride;
    a.abs() <= r && b.abs() <= r
}

/// A sampling region around a ground truth, evaluated per pyramid level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Region {
    Ellipse(RatioMode),
    Box,
    Central { radius_factor: f64 },
}

impl Region {
    #[inline]
    pub fn contains(&self, bx: &OrientedBox, p: &ImagePoint, stride: f64) -> bool {
        match *self {
            Region::Ellipse(mode) => ded_contains(bx, p, mode),
            Region::Box => obb_contains(bx, p),
            Region::Central { radius_factor } => {
                central_area_contains(bx, p, radius_factor, stride)
            }
        }
    }

    /// Box-frame half-sizes `(along a, along b)` that bound the region.
    pub(crate) fn half_sizes(&self, bx: &OrientedBox, stride: f64) -> (f64, f64) {
        match *self {
            Region::Ellipse(_) | Region::Box => (0.5 * bx.w, 0.5 * bx.h),
            Region::Central { radius_factor } => {
                let r = radius_factor * stride;
                (r, r)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn bx(cx: f64, cy: f64, w: f64, h: f64, theta: f64) -> OrientedBox {
        OrientedBox::new(cx, cy, w, h, theta, 0).unwrap()
    }

    #[test]
    fn center_offset_examples() {
        let b = bx(10.0, 10.0, 4.0, 8.0, 0.0);
        assert_eq!(center_offset(&b, &ImagePoint::new(10.0, 10.0)), (0.0, 0.0));
        assert_eq!(center_offset(&b, &ImagePoint::new(4.0, 4.0)), (6.0, 6.0));
        let b = bx(100.0, 50.0, 4.0, 8.0, 0.0);
        assert_eq!(center_offset(&b, &ImagePoint::new(96.0, 58.0)), (4.0, -8.0));
    }

    #[test]
    fn box_frame_examples() {
        // offset (0, -9) at theta 0
        let b = bx(0.0, 0.0, 10.0, 20.0, 0.0);
        let f = to_box_frame(&b, &ImagePoint::new(0.0, 9.0));
        assert_abs_diff_eq!(f.a, 0.0);
        assert_abs_diff_eq!(f.b, 9.0);

        let f = to_box_frame(&b, &b.center());
        assert_eq!((f.a, f.b), (0.0, 0.0));

        // offset (5, 0) at theta 90
        let b = OrientedBox::new_uncanonical(5.0, 0.0, 10.0, 20.0, 90.0, 0).unwrap();
        let f = to_box_frame(&b, &ImagePoint::new(0.0, 0.0));
        assert_abs_diff_eq!(f.a, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(f.b, 5.0, epsilon = 1e-12);
    }

    #[test]
    fn ratio_factor_examples() {
        assert_eq!(ratio_factor(&bx(0.0, 0.0, 7.0, 7.0, 0.0)), 0.5);
        assert_abs_diff_eq!(ratio_factor(&bx(0.0, 0.0, 10.0, 20.0, 0.0)), 0.75);
        assert_abs_diff_eq!(
            ratio_factor(&bx(0.0, 0.0, 1.0, 100.0, 0.0)),
            0.995,
            epsilon = 1e-15
        );
    }

    #[test]
    fn ded_examples() {
        let b = bx(0.0, 0.0, 10.0, 20.0, 0.0);
        assert!(ded_contains(&b, &b.center(), RatioMode::Adaptive));
        assert_abs_diff_eq!(ellipse_lhs(&b, &ImagePoint::new(0.0, -9.0)), 0.81);
        assert!(!ded_contains(
            &b,
            &ImagePoint::new(0.0, -9.0),
            RatioMode::Adaptive
        ));
        assert_abs_diff_eq!(ellipse_lhs(&b, &ImagePoint::new(0.0, -6.0)), 0.36);
        assert!(ded_contains(
            &b,
            &ImagePoint::new(0.0, -6.0),
            RatioMode::Adaptive
        ));
    }

    #[test]
    fn ded_boundary_is_outside() {
        // LHS = 0.25 exactly on the a-axis for a fixed threshold of 0.25
        let b = bx(0.0, 0.0, 10.0, 20.0, 0.0);
        let p = ImagePoint::new(2.5, 0.0);
        assert_eq!(ellipse_lhs(&b, &p), 0.25);
        assert!(!ded_contains(&b, &p, RatioMode::Fixed(0.25)));
    }

    #[test]
    fn obb_examples() {
        let b = bx(0.0, 0.0, 10.0, 20.0, 0.0);
        assert!(obb_contains(&b, &b.center()));
        assert!(obb_contains(&b, &ImagePoint::new(0.0, -10.0)));
        assert!(!obb_contains(&b, &ImagePoint::new(6.0, 0.0)));
    }

    #[test]
    fn central_area_examples() {
        let b = bx(0.0, 0.0, 100.0, 200.0, 0.0);
        assert!(central_area_contains(&b, &b.center(), 1.5, 8.0));
        assert!(!central_area_contains(
            &b,
            &ImagePoint::new(13.0, 0.0),
            1.5,
            8.0
        ));
        assert!(central_area_contains(
            &b,
            &ImagePoint::new(10.0, 10.0),
            1.5,
            8.0
        ));
    }

    #[test]
    fn canonicalization_swaps_long_side() {
        let b = OrientedBox::new(0.0, 0.0, 20.0, 10.0, 30.0, 1).unwrap();
        assert_eq!((b.w(), b.h(), b.theta()), (10.0, 20.0, 120.0));
        let b = OrientedBox::new(0.0, 0.0, 20.0, 10.0, 100.0, 1).unwrap();
        assert_eq!(b.theta(), 10.0);
        let sq = OrientedBox::new(0.0, 0.0, 5.0, 5.0, 33.0, 1).unwrap();
        assert_eq!(sq.theta(), 33.0);
    }

    #[test]
    fn angle_normalization() {
        assert_eq!(normalize_angle(180.0), 0.0);
        assert_eq!(normalize_angle(-90.0), 90.0);
        assert_eq!(normalize_angle(-1e-18), 0.0);
        assert_eq!(normalize_angle(370.0), 10.0);
    }

    #[test]
    fn rejects_invalid_boxes() {
        assert!(OrientedBox::new(0.0, 0.0, 0.0, 1.0, 0.0, 0).is_err());
        assert!(OrientedBox::new(0.0, 0.0, 1.0, -1.0, 0.0, 0).is_err());
        assert!(OrientedBox::new(f64::NAN, 0.0, 1.0, 1.0, 0.0, 0).is_err());
    }

    #[test]
    fn ratio_mode_parsing() {
        assert_eq!(
            "adaptive".parse::<RatioMode>().unwrap(),
            RatioMode::Adaptive
        );
        assert_eq!("0.6".parse::<RatioMode>().unwrap(), RatioMode::Fixed(0.6));
        assert!("0".parse::<RatioMode>().is_err());
        assert!("1.5".parse::<RatioMode>().is_err());
        assert!("wide".parse::<RatioMode>().is_err());
    }

    #[test]
    fn corners_lie_on_box_boundary() {
        let b = bx(40.0, -3.0, 12.0, 30.0, 37.0);
        for c in b.corners() {
            let f = to_box_frame(&b, &c);
            assert_abs_diff_eq!(f.a.abs(), 6.0, epsilon = 1e-9);
            assert_abs_diff_eq!(f.b.abs(), 15.0, epsilon = 1e-9);
        }
    }
}
