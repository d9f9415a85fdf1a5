//! Regularization-constant selection by stratified 5-fold cross-validation.

use rand::seq::SliceRandom;

use super::{check_labels, train_linear_svm, FeatureMatrix, SvmError};
use crate::rng::StreamKey;

const FOLDS: usize = 5;

/// Mean validation accuracy over stratified 5-fold splits for every grid
/// value; returns the maximizer, ties broken toward the smallest C.
pub fn select_c(
    x: &FeatureMatrix,
    labels: &[bool],
    grid: &[f64],
    seed: u64,
) -> Result<f64, SvmError> {
    if grid.is_empty() {
        return Err(SvmError::EmptyGrid);
    }
    check_labels(x.rows(), labels)?;
    if grid.len() == 1 {
        return Ok(grid[0]);
    }
    for (name, class_label) in [("negative", false), ("positive", true)] {
        let size = labels.iter().filter(|&&l| l == class_label).count();
        if size < FOLDS {
            return Err(SvmError::ClassTooSmall {
                class: name.into(),
                size,
                folds: FOLDS,
            });
        }
    }

    // stratified fold assignment: shuffle each class, deal round-robin
    let mut rng = StreamKey::new(seed, "folds").rng();
    let mut fold_of = vec![0usize; labels.len()];
    for class_label in [false, true] {
        let mut members: Vec<usize> = (0..labels.len())
            .filter(|&i| labels[i] == class_label)
            .collect();
        members.shuffle(&mut rng);
        for (k, &i) in members.iter().enumerate() {
            fold_of[i] = k % FOLDS;
        }
    }

    let mut sorted_grid: Vec<f64> = grid.to_vec();
    sorted_grid.sort_by(f64::total_cmp);
    let mut best_c = sorted_grid[0];
    let mut best_acc = f64::NEG_INFINITY;
    for &c in &sorted_grid {
        if !(c > 0.0) {
            return Err(SvmError::NonPositiveC(c));
        }
        let mut correct = 0usize;
        let mut total = 0usize;
        for fold in 0..FOLDS {
            let train_idx: Vec<usize> =
                (0..labels.len()).filter(|&i| fold_of[i] != fold).collect();
            let val_idx: Vec<usize> =
                (0..labels.len()).filter(|&i| fold_of[i] == fold).collect();
            let train_x = x.select_rows(&train_idx);
            let train_y: Vec<bool> = train_idx.iter().map(|&i| labels[i]).collect();
            let model = train_linear_svm(&train_x, &train_y, c)?;
            let val_x = x.select_rows(&val_idx);
            let preds = model.predict(&val_x)?;
            for (p, &i) in preds.iter().zip(&val_idx) {
                if *p == labels[i] {
                    correct += 1;
                }
            }
            total += val_idx.len();
        }
        let acc = correct as f64 / total as f64;
        if acc > best_acc {
            best_acc = acc;
            best_c = c;
        }
    }
    Ok(best_c)
}
