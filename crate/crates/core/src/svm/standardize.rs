//! Per-feature standardization fitted on training data.

use super::{FeatureMatrix, SvmError};

/// Training-set column means and standard deviations (population convention).
/// Constant columns keep their mean and get a standard deviation of 1, so
/// they standardize to exactly zero instead of dividing by zero.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Standardizer {
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
}

/// Fit column statistics on `x` (at least 2 rows).
pub fn fit_standardizer(x: &FeatureMatrix) -> Result<Standardizer, SvmError> {
    if x.rows() < 2 {
        return Err(SvmError::TooFewRows {
            need: 2,
            got: x.rows(),
        });
    }
    let n = x.rows() as f64;
    let d = x.cols();
    let mut mean = vec![0.0f64; d];
    let mut sumsq = vec![0.0f64; d];
    for i in 0..x.rows() {
        for (j, &v) in x.row(i).iter().enumerate() {
            mean[j] += v;
            sumsq[j] += v * v;
        }
    }
    let mut std = vec![0.0f64; d];
    for j in 0..d {
        mean[j] /= n;
        let var = (sumsq[j] / n - mean[j] * mean[j]).max(0.0);
        let s = var.sqrt();
        std[j] = if s > 0.0 { s } else { 1.0 };
    }
    Ok(Standardizer { mean, std })
}

impl Standardizer {
    pub fn len(&self) -> usize {
        self.mean.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mean.is_empty()
    }

    pub fn apply_row(&self, row: &[f64], out: &mut [f64]) {
        for j in 0..row.len() {
            out[j] = (row[j] - self.mean[j]) / self.std[j];
        }
    }

    pub fn apply(&self, x: &FeatureMatrix) -> FeatureMatrix {
        assert_eq!(x.cols(), self.len(), "standardizer dimension mismatch");
        let mut out = FeatureMatrix::zeros(x.rows(), x.cols());
        for i in 0..x.rows() {
            let row: Vec<f64> = x.row(i).to_vec();
            self.apply_row(&row, out.row_mut(i));
        }
        out
    }
}
