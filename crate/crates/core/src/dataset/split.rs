//! Stratified repeated train/test splitting and the train/validation split.
//!
//! All splits are deterministic functions of (labels, parameters, seed); each
//! repetition draws from its own substream so iterations can be recomputed
//! independently.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::DatasetError;
use crate::rng::StreamKey;

/// One train/test repetition over subject indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitIteration {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

/// A full repeated-split plan. The same plan is reused for every classifier
/// and pipeline evaluated in one experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitPlan {
    pub seed: u64,
    pub train_fraction: f64,
    pub iterations: Vec<SplitIteration>,
}

fn class_partition(labels: &[bool]) -> (Vec<usize>, Vec<usize>) {
    let mut neg = Vec::new();
    let mut pos = Vec::new();
    for (i, &l) in labels.iter().enumerate() {
        if l {
            pos.push(i);
        } else {
            neg.push(i);
        }
    }
    (neg, pos)
}

/// Test-set size for one class: floor + Bernoulli on the fractional part, so
/// expected counts are exactly proportional and any draw is within one
/// subject of proportionality. Clamped so neither side is ever empty.
fn test_count(class_size: usize, test_fraction: f64, rng: &mut ChaCha8Rng) -> usize {
    let exact = class_size as f64 * test_fraction;
    let mut n = exact.floor() as usize;
    if rng.gen::<f64>() < exact - exact.floor() {
        n += 1;
    }
    n.clamp(1, class_size - 1)
}

/// `j` independent stratified splits holding out `1 - train_fraction` of each
/// class for testing.
pub fn stratified_splits(
    labels: &[bool],
    j: usize,
    train_fraction: f64,
    seed: u64,
) -> Result<SplitPlan, DatasetError> {
    assert!(j >= 1, "need at least one iteration");
    assert!(
        0.0 < train_fraction && train_fraction < 1.0,
        "train_fraction must be in (0,1)"
    );
    let (neg, pos) = class_partition(labels);
    for (name, class) in [("negative", &neg), ("positive", &pos)] {
        if class.len() < 2 {
            return Err(DatasetError::ClassTooSmall {
                class: name.into(),
                size: class.len(),
            });
        }
    }
    let key = StreamKey::new(seed, "splits");
    let test_fraction = 1.0 - train_fraction;
    let mut iterations = Vec::with_capacity(j);
    for iter in 0..j {
        let mut rng = key.child(iter as u64).rng();
        let mut train = Vec::new();
        let mut test = Vec::new();
        for class in [&neg, &pos] {
            let mut order = class.clone();
            order.shuffle(&mut rng);
            let n_test = test_count(class.len(), test_fraction, &mut rng);
            test.extend_from_slice(&order[..n_test]);
            train.extend_from_slice(&order[n_test..]);
        }
        train.sort_unstable();
        test.sort_unstable();
        iterations.push(SplitIteration { train, test });
    }
    Ok(SplitPlan {
        seed,
        train_fraction,
        iterations,
    })
}

/// Stratified split of a training set into a core set and a validation set of
/// roughly `fraction` of each class. Validation subjects are original (never
/// augmented) subjects; augmentation happens afterwards on the core set only.
pub fn validation_split(
    labels: &[bool],
    fraction: f64,
    seed: u64,
) -> Result<(Vec<usize>, Vec<usize>), DatasetError> {
    assert!(0.0 < fraction && fraction < 1.0, "fraction must be in (0,1)");
    let (neg, pos) = class_partition(labels);
    for (name, class) in [("negative", &neg), ("positive", &pos)] {
        if class.len() < 2 {
            return Err(DatasetError::ClassTooSmall {
                class: name.into(),
                size: class.len(),
            });
        }
    }
    let mut rng = StreamKey::new(seed, "valsplit").rng();
    let mut core = Vec::new();
    let mut validation = Vec::new();
    for class in [&neg, &pos] {
        let mut order = class.clone();
        order.shuffle(&mut rng);
        let n_val = test_count(class.len(), fraction, &mut rng);
        validation.extend_from_slice(&order[..n_val]);
        core.extend_from_slice(&order[n_val..]);
    }
    core.sort_unstable();
    validation.sort_unstable();
    Ok((core, validation))
}
