//! Naive reference assignment: full anchor enumeration, stable sorts, no
//! spatial pruning. Slow on purpose; used to cross-check the optimized path
//! and as the baseline in throughput comparisons.

use std::collections::{BTreeMap, BTreeSet};

use super::{
    fixed_scale_contains, AssignmentResult, PositiveSample, RegressionTarget, Strategy,
    StrategyConfig,
};
use crate::error::Result;
use crate::geometry::OrientedBox;
use crate::pyramid::{AnchorPoint, PyramidSpec};

fn dist_sq(bx: &OrientedBox, a: &AnchorPoint) -> f64 {
    let dx = a.img.x - bx.cx();
    let dy = a.img.y - bx.cy();
    dx * dx + dy * dy
}

fn sort_by_distance(ids: &mut [(usize, f64)]) {
    ids.sort_by(|a, b| a.1.total_cmp(&b.1));
}

pub fn assign_oracle(
    scene: &[OrientedBox],
    spec: &PyramidSpec,
    cfg: &StrategyConfig,
) -> Result<AssignmentResult> {
    cfg.validate()?;
    let anchors = spec.enumerate_anchors();
    let stride_of = |level: u8| f64::from(spec.level(level).map_or(1, |l| l.stride));
    let region = cfg.region();

    let mut claims: Vec<Vec<usize>> = Vec::with_capacity(scene.len());
    for bx in scene {
        let member = |a: &AnchorPoint| -> bool {
            match cfg.strategy {
                Strategy::FixedScale => cfg
                    .scale_range(a.level)
                    .is_some_and(|r| fixed_scale_contains(bx, &a.img, r)),
                _ => region.contains(bx, &a.img, stride_of(a.level)),
            }
        };
        let mut mine = Vec::new();
        match cfg.strategy {
            Strategy::Earl | Strategy::BoundingBox | Strategy::CentralArea => {
                let mut remaining = cfg.k;
                let mut levels: Vec<u8> = spec.levels().iter().map(|l| l.level).collect();
                levels.sort_unstable_by(|a, b| b.cmp(a));
                for level in levels {
                    if remaining == 0 {
                        break;
                    }
                    let mut cands: Vec<(usize, f64)> = anchors
                        .iter()
                        .enumerate()
                        .filter(|(_, a)| a.level == level && member(a))
                        .map(|(id, a)| (id, dist_sq(bx, a)))
                        .collect();
                    sort_by_distance(&mut cands);
                    let take = remaining.min(cands.len());
                    mine.extend(cands[..take].iter().map(|c| c.0));
                    remaining -= take;
                }
            }
            Strategy::TopKOnly => {
                let mut cands: Vec<(usize, f64)> = anchors
                    .iter()
                    .enumerate()
                    .filter(|(_, a)| member(a))
                    .map(|(id, a)| (id, dist_sq(bx, a)))
                    .collect();
                sort_by_distance(&mut cands);
                mine.extend(cands.iter().take(cfg.k).map(|c| c.0));
            }
            Strategy::FixedScale => {
                mine.extend(
                    anchors
                        .iter()
                        .enumerate()
                        .filter(|(_, a)| member(a))
                        .map(|(id, _)| id),
                );
            }
        }
        claims.push(mine);
    }

    let mut claimants: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (target, mine) in claims.iter().enumerate() {
        for &id in mine {
            claimants.entry(id).or_default().push(target);
        }
    }
    let mut conflicts_resolved = 0;
    let mut owner: BTreeMap<usize, usize> = BTreeMap::new();
    for (&id, targets) in &claimants {
        conflicts_resolved += targets.len() - 1;
        let mut winner = targets[0];
        for &t in &targets[1..] {
            if scene[t].long_side() > scene[winner].long_side()
                || (scene[t].long_side() == scene[winner].long_side() && t < winner)
            {
                winner = t;
            }
        }
        owner.insert(id, winner);
    }

    let mut target_counts = vec![0usize; scene.len()];
    for &t in owner.values() {
        target_counts[t] += 1;
    }

    let mut escapes = 0;
    for (target, bx) in scene.iter().enumerate() {
        if target_counts[target] > 0 {
            continue;
        }
        let taken: BTreeSet<usize> = owner.keys().copied().collect();
        let mut free: Vec<(usize, f64)> = anchors
            .iter()
            .enumerate()
            .filter(|(id, _)| !taken.contains(id))
            .map(|(id, a)| (id, dist_sq(bx, a)))
            .collect();
        sort_by_distance(&mut free);
        if let Some(&(id, _)) = free.first() {
            owner.insert(id, target);
            target_counts[target] = 1;
            escapes += 1;
        }
    }

    let positives = owner
        .iter()
        .map(|(&id, &target)| {
            let anchor = anchors[id];
            PositiveSample {
                anchor,
                anchor_id: id,
                target_index: target,
                distance: dist_sq(&scene[target], &anchor).sqrt(),
                regression: RegressionTarget::new(&scene[target], &anchor.img),
                weight: 0.0,
            }
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
