use std::collections::BTreeMap;

use super::AssignmentResult;

/// Positive counts by (category, pyramid level).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LevelHistogram {
    /// Level numbers, ascending.
    pub levels: Vec<u8>,
    /// Per category, counts aligned with `levels`.
    pub rows: BTreeMap<u32, Vec<usize>>,
}

impl LevelHistogram {
    pub fn empty(levels: Vec<u8>) -> Self {
        Self {
            levels,
            rows: BTreeMap::new(),
        }
    }

    /// Adds every positive of `result`.
    pub fn accumulate(&mut self, result: &AssignmentResult) {
        for p in &result.positives {
            let category = result.scene[p.target_index].category();
            let Some(col) = self.levels.iter().position(|&l| l == p.anchor.level) else {
                continue;
            };
            let row = self
                .rows
                .entry(category)
                .or_insert_with(|| vec![0; self.levels.len()]);
            row[col] += 1;
        }
    }

    pub fn merge(&mut self, other: &LevelHistogram) {
        for (cat, counts) in &other.rows {
            let row = self
                .rows
                .entry(*cat)
                .or_insert_with(|| vec![0; self.levels.len()]);
            for (dst, src) in row.iter_mut().zip(counts) {
                *dst += src;
            }
        }
    }

    pub fn total(&self, category: u32) -> usize {
        self.rows.get(&category).map_or(0, |r| r.iter().sum())
    }

    /// Percentages per level for one category; all zeros when it has no positives.
    pub fn percentages(&self, category: u32) -> Vec<f64> {
        let Some(row) = self.rows.get(&category) else {
            return vec![0.0; self.levels.len()];
        };
        let total: usize = row.iter().sum();
        if total == 0 {
            return vec![0.0; self.levels.len()];
        }
        row.iter()
            .map(|&c| 100.0 * c as f64 / total as f64)
            .collect()
    }

    /// Count-weighted mean level number for one category.
    pub fn mean_level(&self, category: u32) -> Option<f64> {
        let row = self.rows.get(&category)?;
        let total: usize = row.iter().sum();
        (total > 0).then(|| {
            row.iter()
                .zip(&self.levels)
                .map(|(&c, &l)| c as f64 * f64::from(l))
                .sum::<f64>()
                / total as f64
        })
    }
}

pub fn level_histogram(result: &AssignmentResult) -> LevelHistogram {
    let mut hist = LevelHistogram::empty(result.spec.levels().iter().map(|l| l.level).collect());
    hist.accumulate(result);
    hist
}
