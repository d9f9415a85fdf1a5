//! Linear support vector machine on masked voxel features.
//!
//! The solver is dual coordinate descent on the box-constrained dual with the
//! bias folded in as a constant-1 feature. Feature standardization is part of
//! the model, C is chosen by stratified 5-fold cross-validation, and analytic
//! significance maps approximate label-permutation testing of the minimum-norm
//! weight estimate.

mod model;
mod pmap;
mod select;
mod solver;
mod standardize;

pub use model::{load_svm_model, save_svm_model, LinearSvmModel};
pub use pmap::{analytic_pmap, PMap};
pub use select::select_c;
pub use solver::train_linear_svm;
pub use standardize::{fit_standardizer, Standardizer};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SvmError {
    #[error("training labels contain a single class")]
    SingleClass,
    #[error("regularization constant must be positive, got {0}")]
    NonPositiveC(f64),
    #[error("need at least {need} rows, got {got}")]
    TooFewRows { need: usize, got: usize },
    #[error("class {class} has too few subjects ({size}) for {folds}-fold selection")]
    ClassTooSmall {
        class: String,
        size: usize,
        folds: usize,
    },
    #[error("C grid is empty")]
    EmptyGrid,
    #[error("feature count mismatch: model has {model}, input has {input}")]
    DimensionMismatch { model: usize, input: usize },
    #[error("gram matrix is numerically singular")]
    DegenerateGram,
    #[error("labels and rows disagree: {rows} rows vs {labels} labels")]
    LabelCountMismatch { rows: usize, labels: usize },
    #[error("io error on {path}: {source}")]
    Io {
        path: std::path::PathBuf,
        source: std::io::Error,
    },
    #[error("malformed model file {path}: {reason}")]
    BadModel {
        path: std::path::PathBuf,
        reason: String,
    },
}

/// Dense row-major feature matrix (subjects x voxels).
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl FeatureMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        FeatureMatrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Self {
        let n = rows.len();
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged feature rows");
            data.extend_from_slice(&r);
        }
        FeatureMatrix {
            rows: n,
            cols,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Copy of the selected rows, in the given order.
    pub fn select_rows(&self, indices: &[usize]) -> FeatureMatrix {
        let mut out = FeatureMatrix::zeros(indices.len(), self.cols);
        for (k, &i) in indices.iter().enumerate() {
            out.row_mut(k).copy_from_slice(self.row(i));
        }
        out
    }
}

fn to_signed(labels: &[bool]) -> Vec<f64> {
    labels.iter().map(|&l| if l { 1.0 } else { -1.0 }).collect()
}

fn check_labels(rows: usize, labels: &[bool]) -> Result<(), SvmError> {
    if rows != labels.len() {
        return Err(SvmError::LabelCountMismatch {
            rows,
            labels: labels.len(),
        });
    }
    let pos = labels.iter().filter(|&&l| l).count();
    if pos == 0 || pos == labels.len() {
        return Err(SvmError::SingleClass);
    }
    Ok(())
}
