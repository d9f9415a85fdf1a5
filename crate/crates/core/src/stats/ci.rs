//! Confidence intervals: corrected resampled t-test for repeated
//! cross-validation, and bootstrap percentile intervals for a fixed test set.

use rand::Rng;

use super::{accuracy, auc, ScoredSet, StatsError};
use crate::rng::StreamKey;

/// How an interval was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CiMethod {
    CorrectedResampledT,
    BootstrapPercentile,
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ConfidenceInterval {
    pub point: f64,
    pub lower: f64,
    pub upper: f64,
    pub level: f64,
    pub method: CiMethod,
}

/// Metric selector for bootstrap resampling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Auc,
    Accuracy,
}

impl Metric {
    pub fn evaluate(self, set: &ScoredSet) -> Result<f64, StatsError> {
        match self {
            Metric::Auc => auc(set),
            Metric::Accuracy => accuracy(set),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Metric::Auc => "auc",
            Metric::Accuracy => "accuracy",
        }
    }
}

fn t_quantile(df: f64, p: f64) -> f64 {
    use statrs::distribution::{ContinuousCDF, StudentsT};
    StudentsT::new(0.0, 1.0, df)
        .expect("valid t distribution")
        .inverse_cdf(p)
}

/// Confidence interval for the mean of `values` from J overlapping
/// cross-validation resamples.
///
/// Half-width is `t_{J-1,(1+level)/2} * sqrt((1/J + n_test/n_train) * s^2)`
/// with `s^2` the sample variance; the `n_test/n_train` term widens the naive
/// interval to account for the dependence between resamples.
pub fn corrected_resampled_ci(
    values: &[f64],
    n_train: usize,
    n_test: usize,
    level: f64,
) -> Result<ConfidenceInterval, StatsError> {
    let j = values.len();
    if j < 2 {
        return Err(StatsError::TooFewIterations(j));
    }
    if !(0.0 < level && level < 1.0) {
        return Err(StatsError::BadLevel(level));
    }
    assert!(n_train > 0 && n_test > 0, "split sizes must be positive");
    let jf = j as f64;
    // centered on the first value so a constant vector yields exactly s2 = 0
    let base = values[0];
    let shift = values.iter().map(|v| v - base).sum::<f64>() / jf;
    let mean = base + shift;
    let s2 = values
        .iter()
        .map(|v| ((v - base) - shift) * ((v - base) - shift))
        .sum::<f64>()
        / (jf - 1.0);
    let correction = 1.0 / jf + n_test as f64 / n_train as f64;
    let half = t_quantile(jf - 1.0, (1.0 + level) / 2.0) * (correction * s2).sqrt();
    Ok(ConfidenceInterval {
        point: mean,
        lower: mean - half,
        upper: mean + half,
        level,
        method: CiMethod::CorrectedResampledT,
    })
}

/// Percentile bounds of `values` at the tail probabilities implied by `level`,
/// with linear interpolation between order statistics.
pub(crate) fn percentile_interval(values: &mut [f64], level: f64) -> (f64, f64) {
    values.sort_by(f64::total_cmp);
    let q = |p: f64| -> f64 {
        let h = p * (values.len() - 1) as f64;
        let lo = h.floor() as usize;
        let hi = h.ceil() as usize;
        let frac = h - lo as f64;
        values[lo] + frac * (values[hi] - values[lo])
    };
    (q((1.0 - level) / 2.0), q((1.0 + level) / 2.0))
}

/// Bootstrap percentile interval over `b` with-replacement resamples of the
/// test set. AUC resamples that lose one class are redrawn, capped at `100*b`
/// total draws; the point estimate is the metric on the original set.
pub fn bootstrap_ci(
    set: &ScoredSet,
    metric: Metric,
    b: usize,
    level: f64,
    seed: u64,
) -> Result<ConfidenceInterval, StatsError> {
    bootstrap_ci_with_cap(set, metric, b, level, seed, 100usize.saturating_mul(b))
}

fn bootstrap_ci_with_cap(
    set: &ScoredSet,
    metric: Metric,
    b: usize,
    level: f64,
    seed: u64,
    cap: usize,
) -> Result<ConfidenceInterval, StatsError> {
    if set.is_empty() {
        return Err(StatsError::Empty);
    }
    if !(0.0 < level && level < 1.0) {
        return Err(StatsError::BadLevel(level));
    }
    assert!(b >= 1, "need at least one bootstrap sample");
    let point = metric.evaluate(set)?;
    let key = StreamKey::new(seed, "bootstrap");
    let n = set.len();
    let mut draws_left = cap;
    let mut stats = Vec::with_capacity(b);
    let mut indices = vec![0usize; n];
    for rep in 0..b {
        let mut rng = key.child(rep as u64).rng();
        loop {
            if draws_left == 0 {
                return Err(StatsError::MetricUndefined);
            }
            draws_left -= 1;
            for slot in indices.iter_mut() {
                *slot = rng.gen_range(0..n);
            }
            let resample = set.resample(&indices);
            match metric.evaluate(&resample) {
                Ok(v) => {
                    stats.push(v);
                    break;
                }
                // single-class resample: redraw (AUC only can hit this)
                Err(StatsError::SingleClass) => continue,
                Err(e) => return Err(e),
            }
        }
    }
    let (lo, hi) = percentile_interval(&mut stats, level);
    Ok(ConfidenceInterval {
        point,
        lower: lo.min(point),
        upper: hi.max(point),
        level,
        method: CiMethod::BootstrapPercentile,
    })
}
