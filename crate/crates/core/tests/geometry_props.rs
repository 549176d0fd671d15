mod common;

use proptest::prelude::*;
use rotassign_core::geometry::{normalize_angle, ratio_factor};
use rotassign_core::{ded_contains, ellipse_lhs, obb_contains, ImagePoint, OrientedBox, RatioMode};
use rotassign_oracles::{adaptive_threshold, ellipse_form};

fn arb_box() -> impl Strategy<Value = OrientedBox> {
    (
        -500.0..500.0f64,
        -500.0..500.0f64,
        0.5..300.0f64,
        0.5..300.0f64,
        0.0..180.0f64,
    )
        .prop_map(|(cx, cy, w, h, t)| OrientedBox::new(cx, cy, w, h, t, 0).unwrap())
}

fn arb_mode() -> impl Strategy<Value = RatioMode> {
    prop_oneof![
        Just(RatioMode::Adaptive),
        (0.01..=1.0f64).prop_map(RatioMode::Fixed),
    ]
}

/// Rotates `p` about `c` by `deg` degrees in the sense that increases theta.
fn rotate_about(p: ImagePoint, c: ImagePoint, deg: f64) -> ImagePoint {
    // theta rotates the box axes u_a = (cos, sin) and u_b = (sin, -cos)
    // toward +y for u_a, i.e. a standard rotation in (x, y).
    let (s, co) = deg.to_radians().sin_cos();
    let (dx, dy) = (p.x - c.x, p.y - c.y);
    ImagePoint::new(c.x + dx * co - dy * s, c.y + dx * s + dy * co)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4000))]

    #[test]
    fn ellipse_inside_box(b in arb_box(), mode in arb_mode(), u in -1.2..1.2f64, v in -1.2..1.2f64) {
        let corners = b.corners();
        // sample around the box via its corner frame
        let p = ImagePoint::new(
            b.cx() + u * (corners[1].x - corners[0].x) + v * (corners[3].x - corners[0].x),
            b.cy() + u * (corners[1].y - corners[0].y) + v * (corners[3].y - corners[0].y),
        );
        if ded_contains(&b, &p, mode) {
            prop_assert!(obb_contains(&b, &p));
        }
    }

    #[test]
    fn ratio_factor_range(w in 1e-3..1e4f64, h in 1e-3..1e4f64) {
        let b = OrientedBox::new(0.0, 0.0, w, h, 0.0, 0).unwrap();
        let xi = ratio_factor(&b);
        prop_assert!((0.5..1.0).contains(&xi));
        prop_assert!((xi - adaptive_threshold(w, h)).abs() <= 1e-12);
        prop_assert_eq!(xi == 0.5, b.w() == b.h());
    }

    #[test]
    fn lhs_matches_quadratic_form(b in arb_box(), x in -600.0..600.0f64, y in -600.0..600.0f64) {
        let lhs = ellipse_lhs(&b, &ImagePoint::new(x, y));
        let form = ellipse_form(&common::to_plain(&b), x, y);
        prop_assert!((lhs - form).abs() <= 1e-9 * (1.0 + form.abs()));
    }

    #[test]
    fn rotation_equivariance(b in arb_box(), x in -600.0..600.0f64, y in -600.0..600.0f64, rot in -360.0..360.0f64, mode in arb_mode()) {
        let p = ImagePoint::new(x, y);
        let rb = OrientedBox::new(b.cx(), b.cy(), b.w(), b.h(), b.theta() + rot, 0).unwrap();
        let rp = rotate_about(p, b.center(), rot);
        let lhs = ellipse_lhs(&b, &p);
        let rlhs = ellipse_lhs(&rb, &rp);
        prop_assert!((lhs - rlhs).abs() <= 1e-9 * (1.0 + lhs.abs()));
        let xi = mode.threshold(&b);
        if (lhs - xi).abs() > 1e-9 {
            prop_assert_eq!(ded_contains(&b, &p, mode), ded_contains(&rb, &rp, mode));
        }
    }

    #[test]
    fn half_turn_periodicity(b in arb_box(), x in -600.0..600.0f64, y in -600.0..600.0f64) {
        let p = ImagePoint::new(x, y);
        let flipped = OrientedBox::new(b.cx(), b.cy(), b.w(), b.h(), normalize_angle(b.theta() + 180.0), 0).unwrap();
        let d = (flipped.theta() - b.theta()).abs();
        prop_assert!(d < 1e-9 || (180.0 - d) < 1e-9);
        let turned = OrientedBox::new_uncanonical(b.cx(), b.cy(), b.w(), b.h(), b.theta() + 180.0, 0).unwrap();
        let l1 = ellipse_lhs(&b, &p);
        prop_assert!((l1 - ellipse_lhs(&turned, &p)).abs() <= 1e-9 * (1.0 + l1));
        if (l1 - ratio_factor(&b)).abs() > 1e-9 {
            prop_assert_eq!(ded_contains(&b, &p, RatioMode::Adaptive), ded_contains(&turned, &p, RatioMode::Adaptive));
            prop_assert_eq!(ded_contains(&b, &p, RatioMode::Adaptive), ded_contains(&flipped, &p, RatioMode::Adaptive));
        }
    }

    #[test]
    fn swap_symmetry(b in arb_box(), x in -600.0..600.0f64, y in -600.0..600.0f64, mode in arb_mode()) {
        let p = ImagePoint::new(x, y);
        let swapped = OrientedBox::new_uncanonical(b.cx(), b.cy(), b.h(), b.w(), b.theta() + 90.0, 0).unwrap();
        let l1 = ellipse_lhs(&b, &p);
        let l2 = ellipse_lhs(&swapped, &p);
        prop_assert!((l1 - l2).abs() <= 1e-9 * (1.0 + l1.abs()));
        if (l1 - mode.threshold(&b)).abs() > 1e-9 {
            prop_assert_eq!(ded_contains(&b, &p, mode), ded_contains(&swapped, &p, mode));
        }
    }

    #[test]
    fn canonical_boxes_have_long_h(cx in -10.0..10.0f64, w in 0.1..100.0f64, h in 0.1..100.0f64, t in -720.0..720.0f64) {
        let b = OrientedBox::new(cx, 0.0, w, h, t, 0).unwrap();
        prop_assert!(b.is_canonical());
        prop_assert!((0.0..180.0).contains(&b.theta()));
    }
}
