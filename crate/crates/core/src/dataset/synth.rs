//! Synthetic two-class cohort generator.
//!
//! Each subject gets two volumes sharing the same underlying anatomy:
//!
//! * a "modulated-map" volume (`*_mod`): smooth blob plus voxel noise, with
//!   class-1 subjects attenuated by `effect_size` inside a fixed ellipsoidal
//!   atrophy region;
//! * a "raw" volume (`*_raw`): the same signal at scanner-like intensity
//!   scale, plus a per-subject global intensity shift and a random linear
//!   intensity gradient. The nuisance terms survive in-mask normalization,
//!   so the modulated pipeline is strictly more informative.
//!
//! The generator also writes the brain mask, the ground-truth atrophy region
//! indicator, and one manifest per pipeline (`manifest_minimal.csv`,
//! `manifest_modulated.csv`) with relative volume paths. Everything is a
//! deterministic function of the seed.

use std::path::{Path, PathBuf};

use rand::Rng;
use rand_distr::StandardNormal;

use super::manifest::{write_manifest, Diagnosis};
use super::DatasetError;
use crate::rng::StreamKey;
use crate::volume::{write_volume, Volume};

#[derive(Debug, Clone)]
pub struct SynthParams {
    pub n_per_class: usize,
    pub dims: [usize; 3],
    pub spacing_mm: [f64; 3],
    /// In-region intensity reduction for class-1 subjects, in modulated-map
    /// units.
    pub effect_size: f64,
    /// Voxelwise Gaussian noise, in modulated-map units.
    pub noise_sigma: f64,
    pub seed: u64,
}

impl Default for SynthParams {
    fn default() -> Self {
        SynthParams {
            n_per_class: 30,
            dims: [24, 24, 24],
            spacing_mm: [4.0, 4.0, 4.0],
            effect_size: 0.5,
            noise_sigma: 0.1,
            seed: 0,
        }
    }
}

/// Paths of everything the generator wrote.
#[derive(Debug, Clone)]
pub struct SynthCohort {
    pub minimal_manifest: PathBuf,
    pub modulated_manifest: PathBuf,
    pub mask: PathBuf,
    pub region: PathBuf,
}

/// Raw-volume intensity scale (arbitrary scanner units).
const RAW_SCALE: f64 = 600.0;

struct Geometry {
    dims: [usize; 3],
    spacing: [f64; 3],
    mask: Vec<bool>,
    region: Vec<bool>,
    base: Vec<f64>,
}

fn build_geometry(dims: [usize; 3], spacing: [f64; 3]) -> Geometry {
    let center = [
        (dims[0] as f64 - 1.0) / 2.0,
        (dims[1] as f64 - 1.0) / 2.0,
        (dims[2] as f64 - 1.0) / 2.0,
    ];
    let brain_semi = [
        0.42 * dims[0] as f64,
        0.42 * dims[1] as f64,
        0.42 * dims[2] as f64,
    ];
    let region_center = [
        center[0] + 0.12 * dims[0] as f64,
        center[1] + 0.08 * dims[1] as f64,
        center[2],
    ];
    let region_semi = [
        0.16 * dims[0] as f64,
        0.16 * dims[1] as f64,
        0.16 * dims[2] as f64,
    ];
    let n = dims[0] * dims[1] * dims[2];
    let mut mask = vec![false; n];
    let mut region = vec![false; n];
    let mut base = vec![0.0; n];
    let mut i = 0;
    for z in 0..dims[2] {
        for y in 0..dims[1] {
            for x in 0..dims[0] {
                let p = [x as f64, y as f64, z as f64];
                let e = |c: &[f64; 3], s: &[f64; 3]| -> f64 {
                    (0..3).map(|a| ((p[a] - c[a]) / s[a]).powi(2)).sum()
                };
                mask[i] = e(&center, &brain_semi) <= 1.0;
                region[i] = e(&region_center, &region_semi) <= 1.0;
                let r2: f64 = (0..3)
                    .map(|a| ((p[a] - center[a]) / (0.30 * dims[a] as f64)).powi(2))
                    .sum();
                base[i] = 0.6 + 0.35 * (-r2).exp();
                i += 1;
            }
        }
    }
    Geometry {
        dims,
        spacing,
        mask,
        region,
        base,
    }
}

fn bool_volume(geom: &Geometry, flags: &[bool]) -> Volume {
    Volume::new(
        geom.dims,
        geom.spacing,
        flags.iter().map(|&b| f32::from(b)).collect(),
    )
    .expect("indicator volume is valid")
}

/// Generate the cohort under `out_dir`.
pub fn synth_cohort(params: &SynthParams, out_dir: &Path) -> Result<SynthCohort, DatasetError> {
    if params.dims.iter().any(|&d| d < 16) {
        return Err(DatasetError::BadParams(format!(
            "dims must be at least 16 per axis, got {:?}",
            params.dims
        )));
    }
    if params.n_per_class < 1 {
        return Err(DatasetError::BadParams("n_per_class must be positive".into()));
    }
    if !(params.effect_size >= 0.0) || !(params.noise_sigma >= 0.0) {
        return Err(DatasetError::BadParams(
            "effect_size and noise_sigma must be nonnegative".into(),
        ));
    }
    std::fs::create_dir_all(out_dir).map_err(|source| DatasetError::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;

    let geom = build_geometry(params.dims, params.spacing_mm);
    let mask_path = out_dir.join("mask.json");
    write_volume(&bool_volume(&geom, &geom.mask), &mask_path)?;
    let region_path = out_dir.join("region.json");
    write_volume(&bool_volume(&geom, &geom.region), &region_path)?;

    let key = StreamKey::new(params.seed, "synth");
    let n_vox = geom.base.len();
    let grad_sigma = RAW_SCALE * (0.5 * params.effect_size).max(0.1);
    let mut minimal_rows = Vec::new();
    let mut modulated_rows = Vec::new();

    for (class, diagnosis) in [(0u64, Diagnosis::Cn), (1u64, Diagnosis::Ad)] {
        for i in 0..params.n_per_class {
            let id = format!("{}{:03}", if class == 0 { "cn" } else { "ad" }, i);
            let subject_key = key.child(class * params.n_per_class as u64 + i as u64);
            let mut mod_rng = subject_key.child(0).rng();
            let mut raw_rng = subject_key.child(1).rng();
            let mut nuisance_rng = subject_key.child(2).rng();

            let shift: f64 = {
                let z: f64 = nuisance_rng.sample(StandardNormal);
                0.25 * RAW_SCALE * z
            };
            let grad_w: [f64; 3] = {
                let mut w = [0.0; 3];
                for slot in &mut w {
                    let z: f64 = nuisance_rng.sample(StandardNormal);
                    *slot = grad_sigma * z;
                }
                w
            };
            let icv = {
                let z: f64 = nuisance_rng.sample(StandardNormal);
                (1.45e6 + 5.0e4 * z).max(1.0e6)
            };

            let mut mod_data = vec![0.0f32; n_vox];
            let mut raw_data = vec![0.0f32; n_vox];
            let mut idx = 0;
            for z in 0..geom.dims[2] {
                for y in 0..geom.dims[1] {
                    for x in 0..geom.dims[0] {
                        if geom.mask[idx] {
                            let signal = geom.base[idx]
                                - if class == 1 && geom.region[idx] {
                                    params.effect_size
                                } else {
                                    0.0
                                };
                            let nm: f64 = mod_rng.sample(StandardNormal);
                            let nr: f64 = raw_rng.sample(StandardNormal);
                            let grad = grad_w[0] * (x as f64 / geom.dims[0] as f64 - 0.5)
                                + grad_w[1] * (y as f64 / geom.dims[1] as f64 - 0.5)
                                + grad_w[2] * (z as f64 / geom.dims[2] as f64 - 0.5);
                            mod_data[idx] = (signal + params.noise_sigma * nm) as f32;
                            raw_data[idx] = (RAW_SCALE * (signal + params.noise_sigma * nr)
                                + shift
                                + grad) as f32;
                        }
                        idx += 1;
                    }
                }
            }
            let mod_vol = Volume::new(geom.dims, geom.spacing, mod_data)?;
            let raw_vol = Volume::new(geom.dims, geom.spacing, raw_data)?;
            write_volume(&mod_vol, &out_dir.join(format!("{id}_mod.json")))?;
            write_volume(&raw_vol, &out_dir.join(format!("{id}_raw.json")))?;

            minimal_rows.push((
                id.clone(),
                "SYNTH".to_string(),
                diagnosis,
                format!("{id}_raw.json"),
                Some(icv),
                None,
            ));
            modulated_rows.push((
                id.clone(),
                "SYNTH".to_string(),
                diagnosis,
                format!("{id}_mod.json"),
                Some(icv),
                None,
            ));
        }
    }

    let minimal_manifest = out_dir.join("manifest_minimal.csv");
    let modulated_manifest = out_dir.join("manifest_modulated.csv");
    write_manifest(&minimal_manifest, &minimal_rows)?;
    write_manifest(&modulated_manifest, &modulated_rows)?;
    Ok(SynthCohort {
        minimal_manifest,
        modulated_manifest,
        mask: mask_path,
        region: region_path,
    })
}
