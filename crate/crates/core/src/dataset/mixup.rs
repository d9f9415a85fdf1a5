//! Mixup augmentation: convex combinations of same-class volume pairs.

use rand::Rng;

use super::DatasetError;
use crate::rng::StreamKey;
use crate::volume::Volume;

/// An original subject volume with its binary class label.
#[derive(Debug, Clone)]
pub struct LabeledVolume {
    pub subject_id: String,
    pub volume: Volume,
    pub label: bool,
}

/// One augmented sample with the ids of its two sources.
#[derive(Debug, Clone)]
pub struct AugmentedSample {
    pub volume: Volume,
    pub label: bool,
    pub sources: (String, String),
}

#[derive(Debug, Clone)]
pub struct AugmentedSet {
    pub samples: Vec<AugmentedSample>,
    pub target_per_class: usize,
}

/// Augment to exactly `target_per_class` samples per class. Each sample is
/// `lambda * v1 + (1 - lambda) * v2` with both sources drawn uniformly (with
/// replacement across samples) from the same class; `v1 != v2` unless the
/// class has a single member. Deterministic per seed.
pub fn mixup_augment(
    samples: &[LabeledVolume],
    target_per_class: usize,
    lambda: f64,
    seed: u64,
) -> Result<AugmentedSet, DatasetError> {
    if !(lambda > 0.5 && lambda <= 1.0) {
        return Err(DatasetError::InvalidLambda(lambda));
    }
    assert!(target_per_class >= 1, "target_per_class must be positive");
    let key = StreamKey::new(seed, "mixup");
    let mut out = Vec::with_capacity(2 * target_per_class);
    for (class_idx, class_label) in [false, true].into_iter().enumerate() {
        let members: Vec<&LabeledVolume> =
            samples.iter().filter(|s| s.label == class_label).collect();
        if members.is_empty() {
            return Err(DatasetError::EmptyClass(
                if class_label { "positive" } else { "negative" }.into(),
            ));
        }
        for m in &members[1..] {
            members[0].volume.same_geometry(&m.volume).then_some(()).ok_or(
                DatasetError::BadParams("mixup inputs must share geometry".into()),
            )?;
        }
        let mut rng = key.child(class_idx as u64).rng();
        for _ in 0..target_per_class {
            let i = rng.gen_range(0..members.len());
            let j = if members.len() == 1 {
                i
            } else {
                loop {
                    let j = rng.gen_range(0..members.len());
                    if j != i {
                        break j;
                    }
                }
            };
            let (a, b) = (members[i], members[j]);
            let data: Vec<f32> = a
                .volume
                .data()
                .iter()
                .zip(b.volume.data())
                .map(|(&x, &y)| (lambda * f64::from(x) + (1.0 - lambda) * f64::from(y)) as f32)
                .collect();
            out.push(AugmentedSample {
                volume: Volume::new(a.volume.dims(), a.volume.spacing_mm(), data)?,
                label: class_label,
                sources: (a.subject_id.clone(), b.subject_id.clone()),
            });
        }
    }
    Ok(AugmentedSet {
        samples: out,
        target_per_class,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn constant_volume(value: f32) -> Volume {
        Volume::new([3, 3, 3], [1.0; 3], vec![value; 27]).unwrap()
    }

    fn labeled(id: &str, value: f32, label: bool) -> LabeledVolume {
        LabeledVolume {
            subject_id: id.into(),
            volume: constant_volume(value),
            label,
        }
    }

    #[test]
    fn paper_fractions() {
        // lambda 0.8 over v1 = 1, v2 = 0 gives 0.8 everywhere
        let samples = vec![
            labeled("one", 1.0, true),
            labeled("zero", 0.0, true),
            labeled("n1", 0.5, false),
            labeled("n2", 0.25, false),
        ];
        let set = mixup_augment(&samples, 50, 0.8, 3).unwrap();
        let mixed = set
            .samples
            .iter()
            .find(|s| s.sources == ("one".to_string(), "zero".to_string()))
            .expect("pair (one, zero) should appear among 50 draws");
        assert!(mixed.volume.data().iter().all(|&v| v == 0.8));
    }

    #[test]
    fn singleton_class_self_mix_is_identity() {
        let samples = vec![labeled("solo", 0.7, true), labeled("n", 0.1, false), labeled("m", 0.2, false)];
        let set = mixup_augment(&samples, 10, 0.8, 1).unwrap();
        for s in set.samples.iter().filter(|s| s.label) {
            assert_eq!(s.sources, ("solo".to_string(), "solo".to_string()));
            assert!(s.volume.data().iter().all(|&v| (v - 0.7).abs() < 1e-7));
        }
    }

    #[test]
    fn exact_counts_and_same_class_provenance() {
        let samples = vec![
            labeled("a", 0.1, true),
            labeled("b", 0.2, true),
            labeled("c", 0.3, true),
            labeled("x", 0.4, false),
            labeled("y", 0.5, false),
            labeled("z", 0.6, false),
        ];
        let set = mixup_augment(&samples, 1000, 0.8, 5).unwrap();
        let pos: Vec<_> = set.samples.iter().filter(|s| s.label).collect();
        let neg: Vec<_> = set.samples.iter().filter(|s| !s.label).collect();
        assert_eq!(pos.len(), 1000);
        assert_eq!(neg.len(), 1000);
        let pos_ids = ["a", "b", "c"];
        let neg_ids = ["x", "y", "z"];
        for s in &pos {
            assert!(pos_ids.contains(&s.sources.0.as_str()));
            assert!(pos_ids.contains(&s.sources.1.as_str()));
            assert_ne!(s.sources.0, s.sources.1);
        }
        for s in &neg {
            assert!(neg_ids.contains(&s.sources.0.as_str()));
            assert!(neg_ids.contains(&s.sources.1.as_str()));
        }
    }

    #[test]
    fn outputs_are_convex_combinations() {
        let mut rng = crate::rng::substream(8, "test-mixup");
        use rand::Rng;
        let mk = |id: &str, label: bool, rng: &mut rand_chacha::ChaCha8Rng| LabeledVolume {
            subject_id: id.into(),
            volume: Volume::new(
                [4, 4, 4],
                [1.0; 3],
                (0..64).map(|_| rng.gen_range(-1.0..1.0)).collect(),
            )
            .unwrap(),
            label,
        };
        let samples = vec![
            mk("a", true, &mut rng),
            mk("b", true, &mut rng),
            mk("x", false, &mut rng),
            mk("y", false, &mut rng),
        ];
        let set = mixup_augment(&samples, 40, 0.8, 9).unwrap();
        let by_id = |id: &str| samples.iter().find(|s| s.subject_id == id).unwrap();
        for s in &set.samples {
            let v1 = by_id(&s.sources.0);
            let v2 = by_id(&s.sources.1);
            for k in 0..64 {
                let lo = v1.volume.data()[k].min(v2.volume.data()[k]);
                let hi = v1.volume.data()[k].max(v2.volume.data()[k]);
                let v = s.volume.data()[k];
                assert!(v >= lo - 1e-6 && v <= hi + 1e-6);
            }
        }
    }

    #[test]
    fn determinism_and_lambda_validation() {
        let samples = vec![
            labeled("a", 0.1, true),
            labeled("b", 0.9, true),
            labeled("x", 0.3, false),
            labeled("y", 0.4, false),
        ];
        let s1 = mixup_augment(&samples, 20, 0.8, 77).unwrap();
        let s2 = mixup_augment(&samples, 20, 0.8, 77).unwrap();
        for (a, b) in s1.samples.iter().zip(&s2.samples) {
            assert_eq!(a.volume, b.volume);
            assert_eq!(a.sources, b.sources);
        }
        assert!(matches!(
            mixup_augment(&samples, 5, 0.5, 0),
            Err(DatasetError::InvalidLambda(_))
        ));
        assert!(matches!(
            mixup_augment(&samples, 5, 1.2, 0),
            Err(DatasetError::InvalidLambda(_))
        ));
    }

    #[test]
    fn missing_class_is_error() {
        let samples = vec![labeled("a", 0.1, true), labeled("b", 0.2, true)];
        assert!(matches!(
            mixup_augment(&samples, 5, 0.8, 0),
            Err(DatasetError::EmptyClass(_))
        ));
    }
}
