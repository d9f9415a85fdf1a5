//! McNemar's test on paired classifier predictions.

use super::{ScoredSet, StatsError};

/// Counts of (classifier A correct?, classifier B correct?) pairs over one
/// test set. `n01` = A wrong, B correct; `n10` = A correct, B wrong.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct ContingencyTable {
    pub n00: usize,
    pub n01: usize,
    pub n10: usize,
    pub n11: usize,
}

impl ContingencyTable {
    pub fn total(&self) -> usize {
        self.n00 + self.n01 + self.n10 + self.n11
    }

    /// Pair two prediction sets by subject id. Both sets must cover exactly
    /// the same subjects.
    pub fn from_predictions(a: &ScoredSet, b: &ScoredSet) -> Result<Self, StatsError> {
        if a.len() != b.len() {
            return Err(StatsError::SubjectMismatch(format!(
                "{} vs {} subjects",
                a.len(),
                b.len()
            )));
        }
        let mut by_id: std::collections::BTreeMap<&str, &super::Scored> =
            std::collections::BTreeMap::new();
        for e in b.entries() {
            by_id.insert(e.subject_id.as_str(), e);
        }
        let mut t = ContingencyTable {
            n00: 0,
            n01: 0,
            n10: 0,
            n11: 0,
        };
        for ea in a.entries() {
            let eb = by_id.get(ea.subject_id.as_str()).ok_or_else(|| {
                StatsError::SubjectMismatch(format!("{} missing from second set", ea.subject_id))
            })?;
            let a_ok = ea.predicted == ea.label;
            let b_ok = eb.predicted == eb.label;
            match (a_ok, b_ok) {
                (false, false) => t.n00 += 1,
                (false, true) => t.n01 += 1,
                (true, false) => t.n10 += 1,
                (true, true) => t.n11 += 1,
            }
        }
        Ok(t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct McNemarResult {
    pub statistic: f64,
    pub p_value: f64,
}

/// Continuity-corrected McNemar chi-square test on the discordant counts.
pub fn mcnemar(table: &ContingencyTable) -> Result<McNemarResult, StatsError> {
    let disagree = table.n01 + table.n10;
    if disagree == 0 {
        return Err(StatsError::NoDisagreement);
    }
    let diff = (table.n01 as f64 - table.n10 as f64).abs();
    let statistic = (diff - 1.0).powi(2) / disagree as f64;
    Ok(McNemarResult {
        statistic,
        p_value: chi2_1df_sf(statistic),
    })
}

/// Upper tail of the chi-square distribution with 1 degree of freedom.
fn chi2_1df_sf(x: f64) -> f64 {
    statrs::function::erf::erfc((x / 2.0).sqrt())
}

/// Bonferroni-adjusted significance threshold for `comparisons` tests.
pub fn bonferroni_threshold(alpha: f64, comparisons: usize) -> f64 {
    assert!(comparisons >= 1);
    alpha / comparisons as f64
}
