//! Spatial distance weighting of positive samples.
//!
//! Each positive gets `1 - d/m` with `m = max(w, h) / 2`, normalized by the
//! largest such value among the positives of the same target. Raw terms are
//! floored at [`RAW_WEIGHT_FLOOR`] so anchors outside the box (escape-rule
//! picks) keep a small positive weight.

use std::ops::Deref;

use crate::assignment::AssignmentResult;
use crate::error::{Error, Result};

pub const RAW_WEIGHT_FLOOR: f64 = 1e-3;

/// An assignment whose positives all carry a weight in `(0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedAssignment(AssignmentResult);

impl WeightedAssignment {
    pub fn into_inner(self) -> AssignmentResult {
        self.0
    }
}

impl Deref for WeightedAssignment {
    type Target = AssignmentResult;

    fn deref(&self) -> &AssignmentResult {
        &self.0
    }
}

/// Unnormalized weight of a positive at distance `d` from a target with
/// half long side `m`.
#[inline]
pub fn raw_weight(distance: f64, m: f64) -> f64 {
    (1.0 - distance / m).max(RAW_WEIGHT_FLOOR)
}

pub fn apply_sdw(result: AssignmentResult) -> Result<WeightedAssignment> {
    let mut result = result;
    let n = result.scene.len();
    let half_long: Vec<f64> = result.scene.iter().map(|b| 0.5 * b.long_side()).collect();

    let mut best = vec![0.0f64; n];
    for p in &result.positives {
        if !p.distance.is_finite() || p.distance < 0.0 {
            return Err(Error::DegenerateWeights {
                target: p.target_index,
                reason: format!("distance {} at anchor {}", p.distance, p.anchor_id),
            });
        }
        let raw = raw_weight(p.distance, half_long[p.target_index]);
        best[p.target_index] = best[p.target_index].max(raw);
    }

    for p in &mut result.positives {
        let denom = best[p.target_index];
        if !(denom > 0.0 && denom.is_finite()) {
            return Err(Error::DegenerateWeights {
                target: p.target_index,
                reason: format!("normalizer {denom}"),
            });
        }
        p.weight = raw_weight(p.distance, half_long[p.target_index]) / denom;
    }
    Ok(WeightedAssignment(result))
}
