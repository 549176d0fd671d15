use proptest::prelude::*;
use rotassign_core::{default_pyramid, PyramidSpec};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn ids_round_trip_and_count(w in 1u32..1500, h in 1u32..1500) {
        let spec = default_pyramid(w, h).unwrap();
        let expected: usize = [8u32, 16, 32, 64, 128]
            .iter()
            .map(|s| (w.div_ceil(*s) * h.div_ceil(*s)) as usize)
            .sum();
        prop_assert_eq!(spec.total_anchors(), expected);
        let anchors = spec.enumerate_anchors();
        prop_assert_eq!(anchors.len(), expected);
        for (id, a) in anchors.iter().enumerate().step_by(7) {
            prop_assert_eq!(spec.id_of(a), Some(id));
            prop_assert_eq!(spec.anchor_at(id), Some(*a));
        }
    }

    #[test]
    fn coords_follow_grid_formula(w in 1u32..900, h in 1u32..900, s in 1u32..70) {
        let spec = PyramidSpec::new(w, h, &[s]).unwrap();
        let l = spec.levels()[0];
        for gy in 0..l.height {
            for gx in [0, l.width - 1] {
                let p = l.anchor_image_coords(gx, gy).unwrap();
                prop_assert_eq!(p.x, f64::from(s / 2 + gx * s));
                prop_assert_eq!(p.y, f64::from(s / 2 + gy * s));
            }
        }
        prop_assert!(l.anchor_image_coords(l.width, 0).is_err());
        prop_assert!(l.anchor_image_coords(0, l.height).is_err());
    }
}

#[test]
fn enumeration_is_coarse_to_fine() {
    let spec = default_pyramid(513, 257).unwrap();
    let levels: Vec<u8> = spec.enumerate_anchors().iter().map(|a| a.level).collect();
    assert!(levels.windows(2).all(|w| w[0] >= w[1]));
    assert_eq!(levels[0], 7);
}
