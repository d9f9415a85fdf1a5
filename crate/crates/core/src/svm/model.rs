//! Trained model, scoring, and on-disk serialization.

use std::io::Write as _;
use std::path::{Path, PathBuf};

use super::{FeatureMatrix, Standardizer, SvmError};

/// A trained linear SVM: feature weights, bias, regularization constant, and
/// the training-set standardizer applied to every input before scoring.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSvmModel {
    pub w: Vec<f64>,
    pub b: f64,
    pub c: f64,
    pub standardizer: Standardizer,
    /// Best-so-far primal objective per solver sweep (training diagnostics;
    /// not serialized).
    pub primal_trace: Vec<f64>,
}

impl LinearSvmModel {
    pub fn feature_count(&self) -> usize {
        self.w.len()
    }

    /// Decision scores `w . standardize(x) + b`, one per row.
    pub fn decision_scores(&self, x: &FeatureMatrix) -> Result<Vec<f64>, SvmError> {
        if x.cols() != self.feature_count() {
            return Err(SvmError::DimensionMismatch {
                model: self.feature_count(),
                input: x.cols(),
            });
        }
        let mut scores = Vec::with_capacity(x.rows());
        let mut z = vec![0.0f64; x.cols()];
        for i in 0..x.rows() {
            self.standardizer.apply_row(x.row(i), &mut z);
            let s: f64 = z.iter().zip(&self.w).map(|(a, b)| a * b).sum();
            scores.push(s + self.b);
        }
        Ok(scores)
    }

    /// Thresholded class per row; a score of exactly 0 maps to the positive
    /// class.
    pub fn predict(&self, x: &FeatureMatrix) -> Result<Vec<bool>, SvmError> {
        Ok(self
            .decision_scores(x)?
            .into_iter()
            .map(|s| s >= 0.0)
            .collect())
    }
}

#[derive(serde::Serialize, serde::Deserialize)]
struct SvmHeader {
    kind: String,
    c: f64,
    b: f64,
    feature_count: usize,
    standardizer: Standardizer,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> SvmError + '_ {
    move |source| SvmError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Write `<path>.json` (header) plus `<path>.raw` (little-endian f32 weights).
pub fn save_svm_model(model: &LinearSvmModel, path: &Path) -> Result<(), SvmError> {
    let header = SvmHeader {
        kind: "svm".to_string(),
        c: model.c,
        b: model.b,
        feature_count: model.feature_count(),
        standardizer: model.standardizer.clone(),
    };
    let text = serde_json::to_string(&header).expect("svm header serializes");
    let mut f = std::fs::File::create(path).map_err(io_err(path))?;
    f.write_all(text.as_bytes()).map_err(io_err(path))?;
    f.write_all(b"\n").map_err(io_err(path))?;
    let raw_path = path.with_extension("raw");
    let mut payload = Vec::with_capacity(model.w.len() * 4);
    for &w in &model.w {
        payload.extend_from_slice(&(w as f32).to_le_bytes());
    }
    std::fs::write(&raw_path, payload).map_err(io_err(&raw_path))?;
    Ok(())
}

/// Inverse of [`save_svm_model`]. Weights come back as f32-rounded values.
pub fn load_svm_model(path: &Path) -> Result<LinearSvmModel, SvmError> {
    let bad = |path: &Path, reason: String| SvmError::BadModel {
        path: path.to_path_buf(),
        reason,
    };
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    let header: SvmHeader =
        serde_json::from_str(&text).map_err(|e| bad(path, e.to_string()))?;
    if header.kind != "svm" {
        return Err(bad(path, format!("model kind is {:?}, not svm", header.kind)));
    }
    if header.standardizer.mean.len() != header.feature_count
        || header.standardizer.std.len() != header.feature_count
    {
        return Err(bad(path, "standardizer length mismatch".into()));
    }
    let raw_path: PathBuf = path.with_extension("raw");
    let payload = std::fs::read(&raw_path).map_err(io_err(&raw_path))?;
    if payload.len() != header.feature_count * 4 {
        return Err(bad(
            &raw_path,
            format!(
                "weight payload has {} bytes, expected {}",
                payload.len(),
                header.feature_count * 4
            ),
        ));
    }
    let w: Vec<f64> = payload
        .chunks_exact(4)
        .map(|b| f64::from(f32::from_le_bytes([b[0], b[1], b[2], b[3]])))
        .collect();
    Ok(LinearSvmModel {
        w,
        b: header.b,
        c: header.c,
        standardizer: header.standardizer,
        primal_trace: Vec::new(),
    })
}
