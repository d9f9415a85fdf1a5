//! Cohort manifests, deterministic stratified splitting, mixup augmentation,
//! and a synthetic-cohort generator for end-to-end desk-scale runs.

mod manifest;
mod mixup;
mod split;
mod synth;

pub use manifest::{load_manifest, write_manifest, Diagnosis, SubjectRecord};
pub use mixup::{mixup_augment, AugmentedSample, AugmentedSet, LabeledVolume};
pub use split::{stratified_splits, validation_split, SplitIteration, SplitPlan};
pub use synth::{synth_cohort, SynthCohort, SynthParams};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error(transparent)]
    Volume(#[from] crate::volume::VolumeError),
    #[error("io error on {path}: {source}")]
    Io {
        path: std::path::PathBuf,
        source: std::io::Error,
    },
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("manifest header mismatch: expected {expected:?}, found {found:?}")]
    HeaderMismatch { expected: String, found: String },
    #[error("duplicate subject id {0}")]
    DuplicateSubjectId(String),
    #[error("unknown diagnosis {0:?} (expected AD, CN, SCD, MCIc or MCInc)")]
    UnknownDiagnosis(String),
    #[error("malformed manifest row {line}: {reason}")]
    MalformedRow { line: u64, reason: String },
    #[error("class {class} has too few subjects ({size}) for the requested split")]
    ClassTooSmall { class: String, size: usize },
    #[error("no samples available for class {0}")]
    EmptyClass(String),
    #[error("mixup weight must lie in (0.5, 1], got {0}")]
    InvalidLambda(f64),
    #[error("invalid parameter: {0}")]
    BadParams(String),
}
