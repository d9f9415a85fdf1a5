//! Evaluation metrics and the statistical machinery of the protocol:
//! Mann-Whitney AUC, accuracy, corrected resampled t-test confidence
//! intervals for repeated cross-validation, bootstrap percentile intervals,
//! and McNemar's test with a Bonferroni threshold helper.

mod ci;
mod mcnemar;
mod metrics;
mod scored;

pub use ci::{bootstrap_ci, corrected_resampled_ci, CiMethod, ConfidenceInterval, Metric};
pub use mcnemar::{bonferroni_threshold, mcnemar, ContingencyTable, McNemarResult};
pub use metrics::{accuracy, auc};
pub use scored::{Scored, ScoredSet};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum StatsError {
    #[error("scored set is empty")]
    Empty,
    #[error("metric needs both classes present")]
    SingleClass,
    #[error("duplicate subject id {0}")]
    DuplicateId(String),
    #[error("need at least 2 cross-validation values, got {0}")]
    TooFewIterations(usize),
    #[error("invalid confidence level {0}")]
    BadLevel(f64),
    #[error("bootstrap metric undefined: single-class redraw cap exhausted")]
    MetricUndefined,
    #[error("no disagreement between classifiers (n01 + n10 = 0)")]
    NoDisagreement,
    #[error("prediction sets do not cover the same subjects: {0}")]
    SubjectMismatch(String),
}
