//! Per-subject classifier outputs, the input to every metric.

use super::StatsError;

/// One subject's truth, continuous score, and thresholded prediction.
#[derive(Debug, Clone, PartialEq)]
pub struct Scored {
    pub subject_id: String,
    /// True class: `true` = positive.
    pub label: bool,
    /// Continuous decision score; higher means more positive.
    pub score: f64,
    /// Thresholded prediction.
    pub predicted: bool,
}

/// A collection of scored subjects with unique ids.
#[derive(Debug, Clone, Default)]
pub struct ScoredSet {
    entries: Vec<Scored>,
}

impl ScoredSet {
    pub fn new(entries: Vec<Scored>) -> Result<Self, StatsError> {
        let mut ids: Vec<&str> = entries.iter().map(|e| e.subject_id.as_str()).collect();
        ids.sort_unstable();
        for w in ids.windows(2) {
            if w[0] == w[1] {
                return Err(StatsError::DuplicateId(w[0].to_string()));
            }
        }
        Ok(ScoredSet { entries })
    }

    pub fn entries(&self) -> &[Scored] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn positives(&self) -> usize {
        self.entries.iter().filter(|e| e.label).count()
    }

    pub fn negatives(&self) -> usize {
        self.entries.len() - self.positives()
    }

    /// Subset by entry indices (used by bootstrap resampling; duplicate
    /// indices are intentional there, so id uniqueness is not re-checked).
    pub(crate) fn resample(&self, indices: &[usize]) -> ScoredSet {
        ScoredSet {
            entries: indices.iter().map(|&i| self.entries[i].clone()).collect(),
        }
    }
}
