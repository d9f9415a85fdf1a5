//! Analytic significance maps (p-maps) for linear SVM weights.
//!
//! The SVM weight is approximated by the minimum-norm interpolator
//! `w_hat = K y` with `K = X^T (X X^T + eps I)^-1` (all training points
//! treated as active). For feature j with coefficient row `c = K_j`, the
//! label-permutation null of `c . y_pi` is modeled as a Gaussian with the
//! exact permutation mean and variance:
//!
//! ```text
//! mean = (sum c)(sum y) / n
//! var  = [n sum c^2 - (sum c)^2][n sum y^2 - (sum y)^2] / (n^2 (n-1))
//! ```
//!
//! Two-sided p-values come from the standard normal; no multiple-comparison
//! correction is applied.

use statrs::function::erf::erfc;

use super::{check_labels, to_signed, FeatureMatrix, SvmError};

/// Per-feature two-sided p-values with the significance threshold applied.
#[derive(Debug, Clone, PartialEq)]
pub struct PMap {
    pub p: Vec<f64>,
    pub alpha: f64,
    pub significant: Vec<bool>,
}

/// Lower-triangular Cholesky factor of a symmetric positive definite matrix,
/// in place. Errors when a pivot is not strictly positive.
fn cholesky(g: &mut [f64], n: usize) -> Result<(), SvmError> {
    for i in 0..n {
        for j in 0..=i {
            let mut s = g[i * n + j];
            for k in 0..j {
                s -= g[i * n + k] * g[j * n + k];
            }
            if i == j {
                if !(s > 0.0) || !s.is_finite() {
                    return Err(SvmError::DegenerateGram);
                }
                g[i * n + i] = s.sqrt();
            } else {
                g[i * n + j] = s / g[j * n + j];
            }
        }
    }
    Ok(())
}

/// Solve `L L^T v = rhs` in place.
fn cholesky_solve(l: &[f64], n: usize, rhs: &mut [f64]) {
    for i in 0..n {
        let mut s = rhs[i];
        for k in 0..i {
            s -= l[i * n + k] * rhs[k];
        }
        rhs[i] = s / l[i * n + i];
    }
    for i in (0..n).rev() {
        let mut s = rhs[i];
        for k in i + 1..n {
            s -= l[k * n + i] * rhs[k];
        }
        rhs[i] = s / l[i * n + i];
    }
}

/// Analytic p-map on (standardized) features.
pub fn analytic_pmap(x: &FeatureMatrix, labels: &[bool], alpha: f64) -> Result<PMap, SvmError> {
    let n = x.rows();
    if n < 4 {
        return Err(SvmError::TooFewRows { need: 4, got: n });
    }
    check_labels(n, labels)?;
    assert!((0.0..=1.0).contains(&alpha), "alpha must be in [0,1]");
    let y = to_signed(labels);
    let d = x.cols();

    // gram matrix with a trace-scaled ridge for invertibility
    let mut trace = 0.0f64;
    let mut g = vec![0.0f64; n * n];
    for i in 0..n {
        for k in 0..=i {
            let dot: f64 = x.row(i).iter().zip(x.row(k)).map(|(a, b)| a * b).sum();
            g[i * n + k] = dot;
            g[k * n + i] = dot;
        }
        trace += g[i * n + i];
    }
    let eps = 1e-8 * trace / n as f64;
    for i in 0..n {
        g[i * n + i] += eps;
    }
    cholesky(&mut g, n)?;

    let sum_y: f64 = y.iter().sum();
    let sumsq_y: f64 = y.iter().map(|v| v * v).sum();
    let y_factor = n as f64 * sumsq_y - sum_y * sum_y;
    let nf = n as f64;

    let mut p = Vec::with_capacity(d);
    let mut col = vec![0.0f64; n];
    for j in 0..d {
        for i in 0..n {
            col[i] = x.row(i)[j];
        }
        cholesky_solve(&g, n, &mut col); // col = G^-1 x_col_j = K_j
        let sum_c: f64 = col.iter().sum();
        let sumsq_c: f64 = col.iter().map(|v| v * v).sum();
        let w_hat: f64 = col.iter().zip(&y).map(|(c, yv)| c * yv).sum();
        let mean = sum_c * sum_y / nf;
        let var = (nf * sumsq_c - sum_c * sum_c) * y_factor / (nf * nf * (nf - 1.0));
        let p_j = if var > 0.0 {
            let z = (w_hat - mean) / var.sqrt();
            if z.is_finite() {
                erfc(z.abs() / std::f64::consts::SQRT_2)
            } else {
                1.0
            }
        } else {
            1.0
        };
        p.push(p_j.clamp(0.0, 1.0));
    }
    let significant = p.iter().map(|&v| v <= alpha).collect();
    Ok(PMap {
        p,
        alpha,
        significant,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn random_problem(n: usize, d: usize, seed: u64) -> (FeatureMatrix, Vec<bool>) {
        let mut rng = crate::rng::substream(seed, "test-pmap");
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect();
        let labels: Vec<bool> = (0..n).map(|i| i % 2 == 0).collect();
        (FeatureMatrix::from_rows(rows), labels)
    }

    #[test]
    fn zero_column_gets_p_one() {
        let (x, y) = random_problem(10, 4, 1);
        let mut rows: Vec<Vec<f64>> = (0..10).map(|i| x.row(i).to_vec()).collect();
        for r in &mut rows {
            r.push(0.0); // identically-zero feature
        }
        let x2 = FeatureMatrix::from_rows(rows);
        let pm = analytic_pmap(&x2, &y, 0.05).unwrap();
        assert_eq!(pm.p[4], 1.0);
        assert!(!pm.significant[4]);
    }

    #[test]
    fn balanced_labels_give_sign_symmetric_p() {
        // with sum(y) = 0 the null mean vanishes, so flipping every label
        // negates w_hat and leaves |z| and the p-values unchanged
        let (x, y) = random_problem(12, 6, 2);
        let flipped: Vec<bool> = y.iter().map(|&l| !l).collect();
        let a = analytic_pmap(&x, &y, 0.05).unwrap();
        let b = analytic_pmap(&x, &flipped, 0.05).unwrap();
        for (pa, pb) in a.p.iter().zip(&b.p) {
            assert!((pa - pb).abs() < 1e-12);
        }
    }

    #[test]
    fn permutation_variance_formula_exact_under_enumeration() {
        // at n = 6, compare the closed-form null variance of c . y_pi against
        // exhaustive enumeration of all 720 permutations
        let mut rng = crate::rng::substream(3, "test-pmap-enum");
        let n = 6;
        let c: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let y = [1.0, 1.0, 1.0, -1.0, -1.0, -1.0];

        let mut perm: Vec<usize> = (0..n).collect();
        let mut stats = Vec::new();
        // Heap's algorithm
        fn heaps(k: usize, perm: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if k == 1 {
                out.push(perm.clone());
                return;
            }
            for i in 0..k {
                heaps(k - 1, perm, out);
                if k % 2 == 0 {
                    perm.swap(i, k - 1);
                } else {
                    perm.swap(0, k - 1);
                }
            }
        }
        let mut perms = Vec::new();
        heaps(n, &mut perm, &mut perms);
        assert_eq!(perms.len(), 720);
        for p in &perms {
            let t: f64 = (0..n).map(|i| c[i] * y[p[i]]).sum();
            stats.push(t);
        }
        let mean_e = stats.iter().sum::<f64>() / 720.0;
        let var_e = stats.iter().map(|t| (t - mean_e) * (t - mean_e)).sum::<f64>() / 720.0;

        let nf = n as f64;
        let sum_c: f64 = c.iter().sum();
        let sumsq_c: f64 = c.iter().map(|v| v * v).sum();
        let sum_y: f64 = y.iter().sum();
        let sumsq_y: f64 = y.iter().map(|v| v * v).sum();
        let mean_f = sum_c * sum_y / nf;
        let var_f = (nf * sumsq_c - sum_c * sum_c) * (nf * sumsq_y - sum_y * sum_y)
            / (nf * nf * (nf - 1.0));
        assert!((mean_e - mean_f).abs() < 1e-10);
        assert!(
            (var_e - var_f).abs() <= 1e-10 * var_f.abs().max(1.0),
            "enumeration {var_e} vs formula {var_f}"
        );
    }

    #[test]
    fn subject_order_invariance() {
        // voxel count larger than subject count, the regime the method is
        // used in (the Gram matrix is then well conditioned)
        let (x, y) = random_problem(14, 40, 4);
        let a = analytic_pmap(&x, &y, 0.05).unwrap();
        // rotate subjects by 5
        let idx: Vec<usize> = (0..14).map(|i| (i + 5) % 14).collect();
        let xp = x.select_rows(&idx);
        let yp: Vec<bool> = idx.iter().map(|&i| y[i]).collect();
        let b = analytic_pmap(&xp, &yp, 0.05).unwrap();
        for (pa, pb) in a.p.iter().zip(&b.p) {
            assert!((pa - pb).abs() < 1e-9, "{pa} vs {pb}");
        }
    }

    /// Independent linear solver for the oracle: Gauss-Jordan with partial
    /// pivoting, no shared code with the Cholesky path.
    fn solve_gauss(a: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
        let n = b.len();
        let mut m: Vec<Vec<f64>> = a.iter().cloned().collect();
        let mut rhs = b.to_vec();
        for col in 0..n {
            let piv = (col..n)
                .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
                .unwrap();
            m.swap(col, piv);
            rhs.swap(col, piv);
            let diag = m[col][col];
            for i in 0..n {
                if i != col {
                    let f = m[i][col] / diag;
                    for k in col..n {
                        m[i][k] -= f * m[col][k];
                    }
                    rhs[i] -= f * rhs[col];
                }
            }
        }
        (0..n).map(|i| rhs[i] / m[i][i]).collect()
    }

    #[test]
    fn close_to_monte_carlo_permutation_oracle() {
        let n = 16;
        let d = 10;
        let (x, labels) = random_problem(n, d, 5);
        let pm = analytic_pmap(&x, &labels, 0.05).unwrap();
        let y = super::to_signed(&labels);

        // oracle coefficient rows via Gauss-Jordan on the same ridge Gram
        let mut trace = 0.0;
        let mut g = vec![vec![0.0f64; n]; n];
        for i in 0..n {
            for k in 0..n {
                g[i][k] = x.row(i).iter().zip(x.row(k)).map(|(a, b)| a * b).sum();
            }
            trace += g[i][i];
        }
        let eps = 1e-8 * trace / n as f64;
        for (i, row) in g.iter_mut().enumerate() {
            row[i] += eps;
        }
        let mut coeff = Vec::with_capacity(d);
        for j in 0..d {
            let col: Vec<f64> = (0..n).map(|i| x.row(i)[j]).collect();
            coeff.push(solve_gauss(&g, &col));
        }

        // Monte-Carlo permutations of y
        use rand::seq::SliceRandom;
        let mut rng = crate::rng::substream(6, "test-pmap-mc");
        let perms = 20_000;
        let mut exceed = vec![0usize; d];
        let obs: Vec<f64> = (0..d)
            .map(|j| coeff[j].iter().zip(&y).map(|(c, yv)| c * yv).sum())
            .collect();
        let sum_y: f64 = y.iter().sum();
        let means: Vec<f64> = (0..d)
            .map(|j| coeff[j].iter().sum::<f64>() * sum_y / n as f64)
            .collect();
        let mut yp = y.clone();
        for _ in 0..perms {
            yp.shuffle(&mut rng);
            for j in 0..d {
                let t: f64 = coeff[j].iter().zip(&yp).map(|(c, yv)| c * yv).sum();
                if (t - means[j]).abs() >= (obs[j] - means[j]).abs() - 1e-12 {
                    exceed[j] += 1;
                }
            }
        }
        let mut total_err = 0.0;
        for j in 0..d {
            let p_mc = exceed[j] as f64 / perms as f64;
            total_err += (p_mc - pm.p[j]).abs();
        }
        let mean_err = total_err / d as f64;
        assert!(mean_err < 0.05, "mean |delta p| {mean_err}");
    }

    #[test]
    fn too_few_rows_rejected() {
        let (x, y) = random_problem(3, 2, 7);
        assert!(matches!(
            analytic_pmap(&x, &y, 0.05),
            Err(SvmError::TooFewRows { need: 4, got: 3 })
        ));
    }
}
