use proptest::prelude::*;
use rotassign_core::ingest::window_starts;
use rotassign_core::{
    ded_contains, obb_contains, parse_dota, quad_to_obb, tile_scene, write_dota, DotaRecord,
    ImagePoint, OrientedBox, RatioMode, Scene, TileSpec,
};
use rotassign_oracles::{min_area_rect, random_convex_quad, SplitMix64};

fn to_points(q: [(f64, f64); 4]) -> [ImagePoint; 4] {
    q.map(|(x, y)| ImagePoint::new(x, y))
}

fn record_strategy() -> impl Strategy<Value = DotaRecord> {
    (
        prop::array::uniform8(-1e4f64..1e4),
        "[a-z][a-z-]{0,12}",
        any::<bool>(),
    )
        .prop_map(|(c, category, difficult)| DotaRecord {
            quad: [
                ImagePoint::new(c[0], c[1]),
                ImagePoint::new(c[2], c[3]),
                ImagePoint::new(c[4], c[5]),
                ImagePoint::new(c[6], c[7]),
            ],
            category,
            difficult,
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn parse_write_round_trip(records in prop::collection::vec(record_strategy(), 0..20)) {
        let text = write_dota(&records);
        let back = parse_dota(&text).unwrap();
        prop_assert_eq!(back, records);
    }
}

#[test]
fn min_area_matches_exhaustive_search() {
    let mut rng = SplitMix64::new(2024);
    for i in 0..1000 {
        let q = random_convex_quad(&mut rng);
        let b = quad_to_obb(&to_points(q), 0).unwrap();
        let oracle = min_area_rect(&q).unwrap();
        let rel = (b.area() - oracle.area).abs() / oracle.area;
        assert!(rel <= 1e-6, "quad {i}: {} vs {}", b.area(), oracle.area);
        assert!(b.h() >= b.w());
    }
}

#[test]
fn obb_encloses_every_vertex() {
    let mut rng = SplitMix64::new(77);
    for _ in 0..1000 {
        let q = random_convex_quad(&mut rng);
        let b = quad_to_obb(&to_points(q), 0).unwrap();
        let grown =
            OrientedBox::new_uncanonical(b.cx(), b.cy(), b.w() + 1e-6, b.h() + 1e-6, b.theta(), 0)
                .unwrap();
        for (x, y) in q {
            assert!(
                obb_contains(&grown, &ImagePoint::new(x, y)),
                "{q:?} -> {b:?}"
            );
        }
    }
}

#[test]
fn rotated_rectangle_is_recovered() {
    // 40 x 10 rectangle rotated by 45 degrees about (100, 100)
    let c = std::f64::consts::FRAC_1_SQRT_2;
    let (u, v) = ((c, c), (-c, c));
    let corner =
        |a: f64, b: f64| ImagePoint::new(100.0 + a * u.0 + b * v.0, 100.0 + a * u.1 + b * v.1);
    let quad = [
        corner(-20.0, -5.0),
        corner(20.0, -5.0),
        corner(20.0, 5.0),
        corner(-20.0, 5.0),
    ];
    let b = quad_to_obb(&quad, 3).unwrap();
    assert!((b.cx() - 100.0).abs() < 1e-9 && (b.cy() - 100.0).abs() < 1e-9);
    assert!((b.w() - 10.0).abs() < 1e-9 && (b.h() - 40.0).abs() < 1e-9);
    assert!((b.theta() - 135.0).abs() < 1e-9, "{}", b.theta());
    assert_eq!(b.category(), 3);
    assert!(ded_contains(
        &b,
        &ImagePoint::new(110.0, 110.0),
        RatioMode::Adaptive
    ));
    assert!(!ded_contains(
        &b,
        &ImagePoint::new(110.0, 90.0),
        RatioMode::Adaptive
    ));
}

#[test]
fn degenerate_quads_are_rejected() {
    let p = ImagePoint::new(5.0, 5.0);
    assert!(quad_to_obb(&[p; 4], 0).is_err());
    let line = [
        ImagePoint::new(0.0, 0.0),
        ImagePoint::new(1.0, 1.0),
        ImagePoint::new(2.0, 2.0),
        ImagePoint::new(3.0, 3.0),
    ];
    assert!(quad_to_obb(&line, 0).is_err());
}

fn random_scene(rng: &mut SplitMix64, id: &str) -> Scene {
    let width = 300 + rng.below(3000) as u32;
    let height = 300 + rng.below(3000) as u32;
    let n = rng.below(60) as usize;
    let boxes = (0..n)
        .map(|_| {
            OrientedBox::new(
                rng.range(0.0, f64::from(width)),
                rng.range(0.0, f64::from(height)),
                rng.range(2.0, 100.0),
                rng.range(2.0, 300.0),
                rng.range(0.0, 180.0),
                rng.below(15) as u32,
            )
            .unwrap()
        })
        .collect();
    Scene::new(id, width, height, boxes)
}

#[test]
fn tiling_conserves_boxes() {
    let mut rng = SplitMix64::new(8);
    for i in 0..300 {
        let scene = random_scene(&mut rng, "img");
        let tiles = tile_scene(&scene, &TileSpec::default()).unwrap();
        let total: usize = tiles.iter().map(|t| t.boxes.len()).sum();
        assert_eq!(total, scene.boxes.len(), "scene {i}");
        for t in &tiles {
            assert_eq!((t.width, t.height), (800, 800));
            for b in &t.boxes {
                assert!(b.cx() >= 0.0 && b.cx() <= 800.0 + 1e-9);
                assert!(b.cy() >= 0.0 && b.cy() <= 800.0 + 1e-9);
            }
        }
    }
}

#[test]
fn tiling_scales_boxes_and_keeps_angles() {
    let scene = Scene::new(
        "p",
        1000,
        700,
        vec![OrientedBox::new(700.0, 500.0, 30.0, 90.0, 33.0, 2).unwrap()],
    );
    let tiles = tile_scene(&scene, &TileSpec::default()).unwrap();
    assert_eq!(window_starts(1000, 600, 450), vec![0, 400]);
    assert_eq!(window_starts(700, 600, 450), vec![0, 100]);
    let owner: Vec<_> = tiles.iter().filter(|t| !t.boxes.is_empty()).collect();
    assert_eq!(owner.len(), 1);
    assert_eq!(owner[0].id, "p_400_0");
    let b = owner[0].boxes[0];
    let f = 800.0 / 600.0;
    assert!((b.cx() - 300.0 * f).abs() < 1e-9);
    assert!((b.cy() - 500.0 * f).abs() < 1e-9);
    assert!((b.w() - 30.0 * f).abs() < 1e-9 && (b.h() - 90.0 * f).abs() < 1e-9);
    assert_eq!(b.theta(), 33.0);
    assert_eq!(b.category(), 2);
}

#[test]
fn window_starts_cover_the_image() {
    for dim in 1..3000u32 {
        let starts = window_starts(dim, 600, 450);
        assert_eq!(starts[0], 0);
        let last = *starts.last().unwrap();
        assert!(last + 600 >= dim);
        if dim > 600 {
            assert_eq!(last + 600, dim);
        }
        for w in starts.windows(2) {
            assert!(w[1] > w[0] && w[1] - w[0] <= 450);
        }
    }
}
