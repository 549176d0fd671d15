mod common;

use std::collections::BTreeSet;

use rotassign_core::pyramid::DEFAULT_STRIDES;
use rotassign_core::{
    assign, assign_oracle, candidates_on_level, default_pyramid, ratio_factor, AssignmentResult,
    OrientedBox, PyramidSpec, RatioMode, Region, Strategy, StrategyConfig,
};
use rotassign_oracles::{scan_grid, PlainRegion, SeededScenario, SplitMix64};

fn positive_set(r: &AssignmentResult) -> BTreeSet<(usize, usize)> {
    r.positives
        .iter()
        .map(|p| (p.anchor_id, p.target_index))
        .collect()
}

#[test]
fn level_candidates_match_exhaustive_scan() {
    let mut rng = SplitMix64::new(0xC0FFEE);
    let spec = default_pyramid(640, 480).unwrap();
    for i in 0..1000 {
        let b = OrientedBox::new(
            rng.range(-50.0, 690.0),
            rng.range(-50.0, 530.0),
            rng.log_range(2.0, 500.0),
            rng.log_range(2.0, 500.0),
            rng.range(0.0, 180.0),
            0,
        )
        .unwrap();
        let level = spec.levels()[i % spec.levels().len()];
        let (region, plain) = match i % 3 {
            0 => (
                Region::Ellipse(RatioMode::Adaptive),
                PlainRegion::Ellipse {
                    threshold: ratio_factor(&b),
                },
            ),
            1 => (Region::Box, PlainRegion::Box),
            _ => (
                Region::Central { radius_factor: 1.5 },
                PlainRegion::Central {
                    radius: 1.5 * f64::from(level.stride),
                },
            ),
        };
        let fast: BTreeSet<(u32, u32)> = candidates_on_level(&b, &level, region)
            .iter()
            .map(|a| (a.grid_x, a.grid_y))
            .collect();
        let scan = scan_grid(
            &common::to_plain(&b),
            plain,
            level.stride,
            level.width,
            level.height,
            1e-9,
        );
        let inside: BTreeSet<(u32, u32)> = scan.inside.iter().copied().collect();
        let ambiguous: BTreeSet<(u32, u32)> = scan.ambiguous.iter().copied().collect();
        assert!(inside.is_subset(&fast), "case {i}: missed candidates");
        assert!(
            fast.difference(&inside).all(|c| ambiguous.contains(c)),
            "case {i}: extra candidates"
        );
    }
}

#[test]
fn zero_and_full_cover_counts() {
    let spec = default_pyramid(256, 256).unwrap();
    let far = OrientedBox::new(5000.0, 5000.0, 10.0, 10.0, 0.0, 0).unwrap();
    let huge = OrientedBox::new(128.0, 128.0, 2000.0, 2000.0, 17.0, 0).unwrap();
    for level in spec.levels() {
        assert!(candidates_on_level(&far, level, Region::Ellipse(RatioMode::Adaptive)).is_empty());
        let n = candidates_on_level(&huge, level, Region::Ellipse(RatioMode::Adaptive)).len();
        assert_eq!(n, level.cells());
    }
}

#[test]
fn optimized_matches_oracle_for_every_strategy() {
    for seed in 0..250u64 {
        let s = SeededScenario::generate(seed, 12);
        let boxes = common::scenario_boxes(&s);
        let spec = common::scenario_pyramid(&s);
        for strategy in Strategy::ALL {
            let mut cfg = StrategyConfig::new(strategy).with_k(s.k);
            if seed % 4 == 1 {
                cfg.ratio_mode = RatioMode::Fixed(0.4 + 0.15 * (seed % 5) as f64);
            }
            let fast = assign(&boxes, &spec, &cfg).unwrap();
            let slow = assign_oracle(&boxes, &spec, &cfg).unwrap();
            assert_eq!(
                positive_set(&fast),
                positive_set(&slow),
                "seed {seed} strategy {strategy}"
            );
            assert_eq!(fast, slow, "seed {seed} strategy {strategy}");
        }
    }
}

/// Candidate count over all levels for one box alone.
fn ded_candidates(b: &OrientedBox, spec: &PyramidSpec) -> Vec<Vec<usize>> {
    spec.levels()
        .iter()
        .map(|l| {
            candidates_on_level(b, l, Region::Ellipse(RatioMode::Adaptive))
                .iter()
                .map(|a| spec.id_of(a).unwrap())
                .collect()
        })
        .collect()
}

#[test]
fn ads_invariants_on_isolated_targets() {
    let spec = default_pyramid(800, 800).unwrap();
    let mut rng = SplitMix64::new(99);
    for _ in 0..500 {
        let b = OrientedBox::new(
            rng.range(0.0, 800.0),
            rng.range(0.0, 800.0),
            rng.log_range(2.0, 400.0),
            rng.log_range(2.0, 600.0),
            rng.range(0.0, 180.0),
            0,
        )
        .unwrap();
        let k = 1 + rng.below(25) as usize;
        let res = assign(&[b], &spec, &StrategyConfig::default().with_k(k)).unwrap();
        let cands = ded_candidates(&b, &spec);
        let total: usize = cands.iter().map(Vec::len).sum();

        // count law
        assert_eq!(res.num_positives(), k.min(total).max(1));

        // level monotonicity: any positive below level l means level l was exhausted
        let chosen: BTreeSet<usize> = res.positives.iter().map(|p| p.anchor_id).collect();
        let lowest = res.positives.iter().map(|p| p.anchor.level).min().unwrap();
        for (pos, level) in spec.levels().iter().enumerate() {
            if level.level > lowest {
                assert!(cands[pos].iter().all(|id| chosen.contains(id)));
            }
        }

        // within-level optimality on the lowest level drawn from
        if total > 0 {
            let pos = spec
                .levels()
                .iter()
                .position(|l| l.level == lowest)
                .unwrap();
            let d2 = |id: usize| spec.anchor_at(id).unwrap().img.distance_sq(&b.center());
            let worst_chosen = cands[pos]
                .iter()
                .filter(|id| chosen.contains(id))
                .map(|&id| d2(id))
                .fold(f64::NEG_INFINITY, f64::max);
            for &id in cands[pos].iter().filter(|id| !chosen.contains(id)) {
                assert!(d2(id) >= worst_chosen);
            }
        }

        // regression consistency
        for p in &res.positives {
            assert_eq!(p.regression.dx, b.cx() - p.anchor.img.x);
            assert_eq!(p.regression.dy, b.cy() - p.anchor.img.y);
            assert_eq!(p.regression.w, b.w());
            assert_eq!(p.regression.h, b.h());
            assert_eq!(p.regression.theta, b.theta());
        }
    }
}

#[test]
fn conflicts_go_to_longest_side_and_sets_partition() {
    for seed in 0..300u64 {
        let s = SeededScenario::generate(seed + 10_000, 25);
        let boxes = common::scenario_boxes(&s);
        let spec = common::scenario_pyramid(&s);
        let cfg = StrategyConfig::default().with_k(s.k);
        let res = assign(&boxes, &spec, &cfg).unwrap();

        // each claimant computed alone
        let alone: Vec<BTreeSet<usize>> = boxes
            .iter()
            .map(|b| {
                assign(std::slice::from_ref(b), &spec, &cfg)
                    .unwrap()
                    .positives
                    .iter()
                    .map(|p| p.anchor_id)
                    .collect()
            })
            .collect();
        for p in &res.positives {
            let claimants: Vec<usize> = (0..boxes.len())
                .filter(|&t| alone[t].contains(&p.anchor_id))
                .collect();
            if claimants.len() > 1 && res.escapes == 0 {
                let best = claimants.iter().copied().fold(claimants[0], |acc, t| {
                    if boxes[t].long_side() > boxes[acc].long_side() {
                        t
                    } else {
                        acc
                    }
                });
                assert_eq!(p.target_index, best, "seed {seed}");
            }
        }

        // disjoint partition of the anchors
        let pos: BTreeSet<usize> = res.positives.iter().map(|p| p.anchor_id).collect();
        assert_eq!(pos.len(), res.positives.len());
        let neg = res.negative_ids();
        assert_eq!(pos.len() + neg.len(), spec.total_anchors());
        assert!(neg.iter().all(|id| !pos.contains(id)));

        // coverage
        assert!(res.target_counts.iter().all(|&c| c >= 1), "seed {seed}");
        let sum: usize = res.target_counts.iter().sum();
        assert_eq!(sum, res.num_positives());
    }
}

#[test]
fn escape_only_picks_unassigned_anchors() {
    // Many tiny targets squeezed together: escapes must not steal anchors.
    let spec = PyramidSpec::new(64, 64, &DEFAULT_STRIDES[..2]).unwrap();
    let boxes: Vec<OrientedBox> = (0..6)
        .map(|i| OrientedBox::new(30.0 + 0.3 * f64::from(i), 30.0, 0.5, 1.0, 0.0, 0).unwrap())
        .collect();
    let res = assign(&boxes, &spec, &StrategyConfig::default()).unwrap();
    assert_eq!(res.escapes, 6);
    assert_eq!(res.num_positives(), 6);
    let slow = assign_oracle(&boxes, &spec, &StrategyConfig::default()).unwrap();
    assert_eq!(res, slow);
}

#[test]
fn bounding_box_candidates_superset_of_ellipse() {
    let spec = default_pyramid(800, 800).unwrap();
    let mut rng = SplitMix64::new(3);
    for _ in 0..200 {
        let b = OrientedBox::new(
            rng.range(100.0, 700.0),
            rng.range(100.0, 700.0),
            rng.log_range(4.0, 40.0),
            rng.log_range(40.0, 400.0),
            rng.range(0.0, 180.0),
            0,
        )
        .unwrap();
        for level in spec.levels() {
            let ded = candidates_on_level(&b, level, Region::Ellipse(RatioMode::Adaptive));
            let bb = candidates_on_level(&b, level, Region::Box);
            assert!(ded.len() <= bb.len());
            assert!(ded.iter().all(|a| bb.contains(a)));
        }
    }
}
