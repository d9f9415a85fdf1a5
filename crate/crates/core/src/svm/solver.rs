//! Dual coordinate descent for the L1-loss linear SVM.
//!
//! The bias is handled by augmenting every sample with a constant feature of
//! 1, so the primal objective is
//!
//! ```text
//! P(w, b) = 1/2 (||w||^2 + b^2) + C * sum_i max(0, 1 - y_i (w . x_i + b))
//! ```
//!
//! and the dual is the box-constrained quadratic maximized one coordinate at
//! a time. Coordinate order is a seeded permutation per sweep (fixed internal
//! seed), so training is fully deterministic. The returned model is the
//! best-primal iterate seen across sweeps, which also makes the recorded
//! primal trace non-increasing.

use rand::seq::SliceRandom;

use super::model::LinearSvmModel;
use super::standardize::fit_standardizer;
use super::{check_labels, to_signed, FeatureMatrix, SvmError};
use crate::rng::StreamKey;

const MAX_SWEEPS: usize = 2000;
const GRADIENT_TOL: f64 = 1e-10;
// coordinate order stream; a constant so `train_linear_svm(X, y, C)` is a
// pure function of its arguments
const COORD_SEED: u64 = 0x5751_c0de;

pub(crate) struct SolveResult {
    /// Augmented weights: `d` feature weights followed by the bias.
    pub w_aug: Vec<f64>,
    /// Best-so-far primal objective after each sweep.
    pub primal_trace: Vec<f64>,
}

pub(crate) fn primal_objective(w_aug: &[f64], x: &FeatureMatrix, y: &[f64], c: f64) -> f64 {
    let d = x.cols();
    let mut obj = 0.5 * w_aug.iter().map(|v| v * v).sum::<f64>();
    for i in 0..x.rows() {
        let margin = y[i] * (dot(x.row(i), &w_aug[..d]) + w_aug[d]);
        obj += c * (1.0 - margin).max(0.0);
    }
    obj
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Solve the dual on an already-standardized matrix.
pub(crate) fn solve_dual(x: &FeatureMatrix, y: &[f64], c: f64) -> SolveResult {
    let n = x.rows();
    let d = x.cols();
    let mut alpha = vec![0.0f64; n];
    let mut w_aug = vec![0.0f64; d + 1];
    // Q_ii = ||x_i||^2 + 1 (the +1 is the bias feature)
    let q_diag: Vec<f64> = (0..n).map(|i| dot(x.row(i), x.row(i)) + 1.0).collect();

    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = StreamKey::new(COORD_SEED, "svm-coordinates").rng();
    let mut best_w = w_aug.clone();
    let mut best_primal = primal_objective(&w_aug, x, y, c);
    let mut trace = Vec::new();

    for _sweep in 0..MAX_SWEEPS {
        order.shuffle(&mut rng);
        let mut max_violation = 0.0f64;
        for &i in &order {
            let xi = x.row(i);
            let score = dot(xi, &w_aug[..d]) + w_aug[d];
            let g = y[i] * score - 1.0;
            let pg = if alpha[i] <= 0.0 {
                g.min(0.0)
            } else if alpha[i] >= c {
                g.max(0.0)
            } else {
                g
            };
            max_violation = max_violation.max(pg.abs());
            if pg.abs() > 0.0 {
                let new_alpha = (alpha[i] - g / q_diag[i]).clamp(0.0, c);
                let delta = new_alpha - alpha[i];
                if delta != 0.0 {
                    let step = delta * y[i];
                    for (wj, &xj) in w_aug[..d].iter_mut().zip(xi) {
                        *wj += step * xj;
                    }
                    w_aug[d] += step;
                    alpha[i] = new_alpha;
                }
            }
        }
        let p = primal_objective(&w_aug, x, y, c);
        if p < best_primal {
            best_primal = p;
            best_w.copy_from_slice(&w_aug);
        }
        trace.push(best_primal);
        if max_violation < GRADIENT_TOL {
            break;
        }
    }
    SolveResult {
        w_aug: best_w,
        primal_trace: trace,
    }
}

/// Fit a standardizer on `x` and train the SVM on the standardized features.
pub fn train_linear_svm(
    x: &FeatureMatrix,
    labels: &[bool],
    c: f64,
) -> Result<LinearSvmModel, SvmError> {
    if !(c > 0.0) {
        return Err(SvmError::NonPositiveC(c));
    }
    check_labels(x.rows(), labels)?;
    let standardizer = fit_standardizer(x)?;
    let z = standardizer.apply(x);
    let y = to_signed(labels);
    let result = solve_dual(&z, &y, c);
    let d = x.cols();
    Ok(LinearSvmModel {
        w: result.w_aug[..d].to_vec(),
        b: result.w_aug[d],
        c,
        standardizer,
        primal_trace: result.primal_trace,
    })
}
