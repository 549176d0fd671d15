//! Weighted focal classification loss, weighted smooth-L1 regression loss,
//! and their `N_pos`-normalized combination.

use crate::error::{Error, Result};
use crate::weighting::WeightedAssignment;

/// Scores are clamped to `[SCORE_EPS, 1 - SCORE_EPS]` before any logarithm.
pub const SCORE_EPS: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossConfig {
    /// Focal balance factor.
    pub delta: f64,
    /// Focal focusing exponent.
    pub gamma: f64,
    /// Smooth-L1 transition point.
    pub beta: f64,
    /// Regression weight in the total.
    pub lambda: f64,
    /// Divide `(dx, dy)` by the anchor's stride before comparing.
    pub normalize_offsets: bool,
}

impl Default for LossConfig {
    fn default() -> Self {
        Self {
            delta: 0.25,
            gamma: 2.0,
            beta: 0.01,
            lambda: 1.0,
            normalize_offsets: false,
        }
    }
}

impl LossConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "delta {} not in (0, 1)",
                self.delta
            )));
        }
        if !(self.gamma >= 0.0 && self.gamma.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "gamma {} must be >= 0",
                self.gamma
            )));
        }
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "beta {} must be > 0",
                self.beta
            )));
        }
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "lambda {} must be > 0",
                self.lambda
            )));
        }
        Ok(())
    }
}

/// Network outputs at one anchor.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictionRecord {
    /// One score in `[0, 1]` per category.
    pub scores: Vec<f64>,
    /// `(dx, dy, w, h, theta)`, laid out like the regression target.
    pub regression: [f64; 5],
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossReport {
    /// Normalized classification loss.
    pub cls: f64,
    /// Normalized regression loss, before `lambda`.
    pub reg: f64,
    pub total: f64,
    pub num_pos: usize,
}

#[inline]
fn clamp_score(score: f64) -> f64 {
    score.clamp(SCORE_EPS, 1.0 - SCORE_EPS)
}

/// Focal term for one (anchor, category) pair. `weight` is the positive's
/// soft target and is ignored for negatives.
#[inline]
pub fn focal_term(score: f64, positive: bool, weight: f64, cfg: &LossConfig) -> f64 {
    let c = clamp_score(score);
    if positive {
        -cfg.delta * (weight - c).abs().powf(cfg.gamma) * c.ln()
    } else {
        -cfg.delta * c.powf(cfg.gamma) * (1.0 - c).ln()
    }
}

/// Derivative of [`focal_term`] with respect to the score, inside the clamp range.
pub fn focal_term_grad_score(score: f64, positive: bool, weight: f64, cfg: &LossConfig) -> f64 {
    let c = score;
    let (d, g) = (cfg.delta, cfg.gamma);
    if positive {
        let diff = weight - c;
        let mag = diff.abs();
        // d|W-c|^g/dc = -g |W-c|^(g-1) sign(W-c)
        let dmod = if mag == 0.0 {
            0.0
        } else {
            -g * mag.powf(g - 1.0) * diff.signum()
        };
        -d * (dmod * c.ln() + mag.powf(g) / c)
    } else {
        let dmod = if c == 0.0 { 0.0 } else { g * c.powf(g - 1.0) };
        -d * (dmod * (1.0 - c).ln() - c.powf(g) / (1.0 - c))
    }
}

/// Derivative of the positive branch of [`focal_term`] with respect to the weight.
pub fn focal_term_grad_weight(score: f64, weight: f64, cfg: &LossConfig) -> f64 {
    let diff = weight - score;
    let mag = diff.abs();
    if mag == 0.0 {
        return 0.0;
    }
    -cfg.delta * cfg.gamma * mag.powf(cfg.gamma - 1.0) * diff.signum() * score.ln()
}

/// Quadratic below `beta`, linear above.
#[inline]
pub fn smooth_l1(x: f64, beta: f64) -> f64 {
    let ax = x.abs();
    if ax < beta {
        0.5 * x * x / beta
    } else {
        ax - 0.5 * beta
    }
}

pub fn smooth_l1_grad(x: f64, beta: f64) -> f64 {
    if x.abs() < beta {
        x / beta
    } else {
        x.signum()
    }
}

/// Dense classification loss over every anchor and category plus the
/// weighted regression loss over positives, both divided by `N_pos`
/// (clamped to 1).
pub fn total_loss(
    weighted: &WeightedAssignment,
    preds: &[PredictionRecord],
    cfg: &LossConfig,
) -> Result<LossReport> {
    cfg.validate()?;
    let total = weighted.spec.total_anchors();
    if preds.len() != total {
        return Err(Error::Predictions(format!(
            "expected {total} prediction records, got {}",
            preds.len()
        )));
    }
    let num_classes = preds.first().map_or(0, |p| p.scores.len());
    if let Some((id, _)) = preds
        .iter()
        .enumerate()
        .find(|(_, p)| p.scores.len() != num_classes)
    {
        return Err(Error::Predictions(format!(
            "record {id} has a different number of class scores"
        )));
    }
    for p in weighted.positives.iter() {
        let cat = weighted.scene[p.target_index].category() as usize;
        if cat >= num_classes {
            return Err(Error::Predictions(format!(
                "category {cat} of target {} has no score column",
                p.target_index
            )));
        }
    }

    let mut cls_sum = 0.0;
    let mut reg_sum = 0.0;
    let mut positives = weighted.positives.iter().peekable();
    for (id, pred) in preds.iter().enumerate() {
        let pos = positives.next_if(|p| p.anchor_id == id);
        let assigned = pos.map(|p| weighted.scene[p.target_index].category() as usize);
        let mut anchor_cls = 0.0;
        for (cat, &score) in pred.scores.iter().enumerate() {
            anchor_cls += match (assigned, pos) {
                (Some(c), Some(p)) if c == cat => focal_term(score, true, p.weight, cfg),
                _ => focal_term(score, false, 0.0, cfg),
            };
        }
        cls_sum += anchor_cls;

        if let Some(p) = pos {
            let mut target = p.regression.to_array();
            let mut predicted = pred.regression;
            if cfg.normalize_offsets {
                let stride = weighted
                    .spec
                    .level(p.anchor.level)
                    .map_or(1.0, |l| f64::from(l.stride));
                for v in target[..2].iter_mut().chain(predicted[..2].iter_mut()) {
                    *v /= stride;
                }
            }
            let residual: f64 = predicted
                .iter()
                .zip(&target)
                .map(|(t_hat, t)| smooth_l1(t_hat - t, cfg.beta))
                .sum();
            reg_sum += p.weight * residual;
        }
    }

    let num_pos = weighted.positives.len();
    let norm = num_pos.max(1) as f64;
    let cls = cls_sum / norm;
    let reg = reg_sum / norm;
    Ok(LossReport {
        cls,
        reg,
        total: cls + cfg.lambda * reg,
        num_pos,
    })
}
