//! AUC (Mann-Whitney form) and accuracy.

use super::{ScoredSet, StatsError};

/// Area under the ROC curve, computed as the Mann-Whitney probability that a
/// random positive outscores a random negative, ties counting one half.
///
/// Uses the midrank identity; the numerator is assembled in integer
/// arithmetic (doubled midranks) so the result equals brute-force pair
/// enumeration bit for bit.
pub fn auc(set: &ScoredSet) -> Result<f64, StatsError> {
    let n_pos = set.positives() as u64;
    let n_neg = set.negatives() as u64;
    if n_pos == 0 || n_neg == 0 {
        return Err(StatsError::SingleClass);
    }
    let mut order: Vec<usize> = (0..set.len()).collect();
    order.sort_by(|&a, &b| {
        set.entries()[a]
            .score
            .total_cmp(&set.entries()[b].score)
    });

    // doubled midrank over each tie group: 2 * (first + last) / 2 = first + last,
    // with 1-based positions
    let mut rank2_pos_sum: u64 = 0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len()
            && set.entries()[order[j + 1]].score == set.entries()[order[i]].score
        {
            j += 1;
        }
        let rank2 = (i as u64 + 1) + (j as u64 + 1);
        for &k in &order[i..=j] {
            if set.entries()[k].label {
                rank2_pos_sum += rank2;
            }
        }
        i = j + 1;
    }

    let numerator2 = rank2_pos_sum - n_pos * (n_pos + 1);
    Ok(numerator2 as f64 / (2 * n_pos * n_neg) as f64)
}

/// Fraction of subjects whose predicted label matches the truth.
pub fn accuracy(set: &ScoredSet) -> Result<f64, StatsError> {
    if set.is_empty() {
        return Err(StatsError::Empty);
    }
    let correct = set
        .entries()
        .iter()
        .filter(|e| e.label == e.predicted)
        .count();
    Ok(correct as f64 / set.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::Scored;
    use rand::Rng;

    fn set_from(scores: &[(bool, f64)]) -> ScoredSet {
        ScoredSet::new(
            scores
                .iter()
                .enumerate()
                .map(|(i, &(label, score))| Scored {
                    subject_id: format!("s{i}"),
                    label,
                    score,
                    predicted: score > 0.5,
                })
                .collect(),
        )
        .unwrap()
    }

    /// O(n^2) pair-enumeration oracle.
    fn auc_oracle(set: &ScoredSet) -> f64 {
        let mut num2: u64 = 0;
        let mut pairs: u64 = 0;
        for p in set.entries().iter().filter(|e| e.label) {
            for n in set.entries().iter().filter(|e| !e.label) {
                pairs += 1;
                if p.score > n.score {
                    num2 += 2;
                } else if p.score == n.score {
                    num2 += 1;
                }
            }
        }
        num2 as f64 / (2 * pairs) as f64
    }

    #[test]
    fn perfect_separation() {
        let s = set_from(&[(true, 0.9), (true, 0.8), (false, 0.1), (false, 0.2)]);
        assert_eq!(auc(&s).unwrap(), 1.0);
    }

    #[test]
    fn all_ties_is_half() {
        let s = set_from(&[(true, 0.3), (true, 0.3), (false, 0.3), (false, 0.3)]);
        assert_eq!(auc(&s).unwrap(), 0.5);
    }

    #[test]
    fn single_class_is_error() {
        let s = set_from(&[(true, 0.3), (true, 0.4)]);
        assert!(matches!(auc(&s), Err(StatsError::SingleClass)));
    }

    #[test]
    fn matches_pair_enumeration_oracle() {
        let mut rng = crate::rng::substream(11, "test-auc");
        for case in 0..200 {
            let n = rng.gen_range(2..60);
            let mut scores = Vec::new();
            let mut has = [false, false];
            for i in 0..n {
                // quantized scores force ties
                let label = if i < 2 { i == 0 } else { rng.gen::<bool>() };
                has[usize::from(label)] = true;
                let s = f64::from(rng.gen_range(-8i32..8)) / 4.0;
                scores.push((label, s));
            }
            assert!(has[0] && has[1]);
            let set = set_from(&scores);
            assert_eq!(auc(&set).unwrap(), auc_oracle(&set), "case {case}");
        }
    }

    #[test]
    fn label_flip_complements() {
        let mut rng = crate::rng::substream(12, "test-auc-flip");
        for _ in 0..100 {
            let n = rng.gen_range(3..40);
            let scores: Vec<(bool, f64)> = (0..n)
                .map(|i| {
                    let label = i % 2 == 0;
                    (label, f64::from(rng.gen_range(-16i32..16)) / 8.0)
                })
                .collect();
            let set = set_from(&scores);
            let flipped: Vec<(bool, f64)> =
                scores.iter().map(|&(l, s)| (!l, s)).collect();
            let fset = set_from(&flipped);
            let total = auc(&set).unwrap() + auc(&fset).unwrap();
            assert_eq!(total, 1.0);
        }
    }

    #[test]
    fn monotone_transform_invariance() {
        let mut rng = crate::rng::substream(13, "test-auc-mono");
        for _ in 0..50 {
            let n = rng.gen_range(4..40);
            let scores: Vec<(bool, f64)> = (0..n)
                .map(|i| (i % 3 == 0, f64::from(rng.gen_range(-64i32..64)) / 16.0))
                .collect();
            let set = set_from(&scores);
            // exact strictly-increasing transform: scale by 2^k, shift by int
            let t: Vec<(bool, f64)> = scores.iter().map(|&(l, s)| (l, s * 8.0 + 3.0)).collect();
            let tset = set_from(&t);
            assert_eq!(auc(&set).unwrap(), auc(&tset).unwrap());
        }
    }

    #[test]
    fn accuracy_basics() {
        let all_right = ScoredSet::new(vec![
            Scored { subject_id: "a".into(), label: true, score: 1.0, predicted: true },
            Scored { subject_id: "b".into(), label: false, score: -1.0, predicted: false },
        ])
        .unwrap();
        assert_eq!(accuracy(&all_right).unwrap(), 1.0);
        let all_wrong = ScoredSet::new(vec![
            Scored { subject_id: "a".into(), label: true, score: 1.0, predicted: false },
            Scored { subject_id: "b".into(), label: false, score: -1.0, predicted: true },
        ])
        .unwrap();
        assert_eq!(accuracy(&all_wrong).unwrap(), 0.0);
        assert!(matches!(
            accuracy(&ScoredSet::default()),
            Err(StatsError::Empty)
        ));
    }

    #[test]
    fn accuracy_matches_count_oracle() {
        let mut rng = crate::rng::substream(14, "test-acc");
        for _ in 0..50 {
            let n = rng.gen_range(1..50);
            let entries: Vec<Scored> = (0..n)
                .map(|i| Scored {
                    subject_id: format!("s{i}"),
                    label: rng.gen(),
                    score: 0.0,
                    predicted: rng.gen(),
                })
                .collect();
            let mut correct = 0usize;
            for e in &entries {
                if e.label == e.predicted {
                    correct += 1;
                }
            }
            let set = ScoredSet::new(entries).unwrap();
            assert_eq!(accuracy(&set).unwrap(), correct as f64 / n as f64);
        }
    }
}
