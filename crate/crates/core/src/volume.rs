//! 3D scalar volumes, binary masks, and the masked preprocessing arithmetic.
//!
//! A [`Volume`] is the universal carrier for images, probability maps,
//! Jacobian fields, p-maps, and saliency maps. On disk a volume is a pair of
//! files: `<name>.json` holding only the geometry and `<name>.raw` holding
//! the voxel payload as little-endian IEEE-754 32-bit floats in x-fastest
//! order. The pairing keeps serialization bit-exact and dependency-free.
//!
//! Voxel arithmetic runs in 64-bit and is stored back as 32-bit; moment
//! reductions use a fixed (storage-order) summation so results are
//! reproducible across runs.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors for volume IO and preprocessing.
#[derive(Debug, Error)]
pub enum VolumeError {
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("malformed volume header {path}: {reason}")]
    BadHeader { path: PathBuf, reason: String },
    #[error("missing raw payload {path}")]
    MissingPayload { path: PathBuf },
    #[error("geometry mismatch: expected {expected} bytes of payload, found {actual}")]
    GeometryMismatch { expected: usize, actual: usize },
    #[error("volume geometry {found:?} does not match {expected:?}")]
    DimsMismatch {
        expected: [usize; 3],
        found: [usize; 3],
    },
    #[error("volume contains non-finite data")]
    NonFiniteData,
    #[error("all in-mask voxels are equal; cannot normalize to unit variance")]
    ZeroVariance,
    #[error("Jacobian determinant must be positive everywhere (voxel {index} = {value})")]
    NonPositiveJacobian { index: usize, value: f32 },
    #[error("probability map value out of [0,1] (voxel {index} = {value})")]
    ProbabilityOutOfRange { index: usize, value: f32 },
    #[error("intracranial volume must be positive, got {0}")]
    NonPositiveIcv(f64),
    #[error("mask has no interior voxels")]
    EmptyMask,
    #[error("mask voxels must be exactly 0 or 1 (voxel {index} = {value})")]
    MaskNotBinary { index: usize, value: f32 },
    #[error("feature vector length {features} does not match mask interior {mask}")]
    FeatureCountMismatch { features: usize, mask: usize },
}

const DTYPE: &str = "f32le";
const ORDER: &str = "x-fastest";

#[derive(Debug, Serialize, Deserialize)]
struct VolumeHeader {
    dims: [usize; 3],
    spacing_mm: [f64; 3],
    dtype: String,
    order: String,
}

/// A dense 3D scalar field with voxel spacing.
///
/// Data is stored x-fastest (then y, then z): flat index
/// `x + nx * (y + ny * z)`. All values are finite by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Volume {
    dims: [usize; 3],
    spacing_mm: [f64; 3],
    data: Vec<f32>,
}

impl Volume {
    /// Build a volume from raw data in x-fastest order.
    ///
    /// Rejects empty dims, length mismatches, and non-finite values.
    pub fn new(dims: [usize; 3], spacing_mm: [f64; 3], data: Vec<f32>) -> Result<Self, VolumeError> {
        let n = dims[0] * dims[1] * dims[2];
        if dims.iter().any(|&d| d == 0) || spacing_mm.iter().any(|&s| !(s > 0.0)) {
            return Err(VolumeError::BadHeader {
                path: PathBuf::new(),
                reason: format!("invalid geometry dims={dims:?} spacing={spacing_mm:?}"),
            });
        }
        if data.len() != n {
            return Err(VolumeError::GeometryMismatch {
                expected: n * 4,
                actual: data.len() * 4,
            });
        }
        if !data.iter().all(|v| v.is_finite()) {
            return Err(VolumeError::NonFiniteData);
        }
        Ok(Volume {
            dims,
            spacing_mm,
            data,
        })
    }

    /// All-zero volume of the given geometry.
    pub fn zeros(dims: [usize; 3], spacing_mm: [f64; 3]) -> Self {
        Volume {
            dims,
            spacing_mm,
            data: vec![0.0; dims[0] * dims[1] * dims[2]],
        }
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn spacing_mm(&self) -> [f64; 3] {
        self.spacing_mm
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn data(&self) -> &[f32] {
        &self.data
    }

    /// Flat index of voxel (x, y, z).
    pub fn index(&self, x: usize, y: usize, z: usize) -> usize {
        x + self.dims[0] * (y + self.dims[1] * z)
    }

    pub fn same_geometry(&self, other: &Volume) -> bool {
        self.dims == other.dims && self.spacing_mm == other.spacing_mm
    }

    fn check_geometry(&self, other: &Volume) -> Result<(), VolumeError> {
        if self.same_geometry(other) {
            Ok(())
        } else {
            Err(VolumeError::DimsMismatch {
                expected: self.dims,
                found: other.dims,
            })
        }
    }

    /// Elementwise map into a new volume; output must stay finite.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Volume, VolumeError> {
        let data: Vec<f32> = self.data.iter().map(|&v| f(f64::from(v)) as f32).collect();
        if !data.iter().all(|v| v.is_finite()) {
            return Err(VolumeError::NonFiniteData);
        }
        Ok(Volume {
            dims: self.dims,
            spacing_mm: self.spacing_mm,
            data,
        })
    }
}

/// A binary brain mask sharing `Volume` geometry.
#[derive(Debug, Clone, PartialEq)]
pub struct Mask {
    dims: [usize; 3],
    spacing_mm: [f64; 3],
    interior: Vec<bool>,
    count: usize,
}

impl Mask {
    /// Interpret a volume as a mask. Voxels must be exactly 0.0 or 1.0 and at
    /// least one voxel must be set.
    pub fn from_volume(v: &Volume) -> Result<Self, VolumeError> {
        let mut interior = Vec::with_capacity(v.data.len());
        for (i, &val) in v.data.iter().enumerate() {
            if val == 0.0 {
                interior.push(false);
            } else if val == 1.0 {
                interior.push(true);
            } else {
                return Err(VolumeError::MaskNotBinary {
                    index: i,
                    value: val,
                });
            }
        }
        let count = interior.iter().filter(|&&b| b).count();
        if count == 0 {
            return Err(VolumeError::EmptyMask);
        }
        Ok(Mask {
            dims: v.dims,
            spacing_mm: v.spacing_mm,
            interior,
            count,
        })
    }

    /// Mask with every voxel set.
    pub fn full(dims: [usize; 3], spacing_mm: [f64; 3]) -> Self {
        let n = dims[0] * dims[1] * dims[2];
        Mask {
            dims,
            spacing_mm,
            interior: vec![true; n],
            count: n,
        }
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn spacing_mm(&self) -> [f64; 3] {
        self.spacing_mm
    }

    /// Number of interior (1) voxels.
    pub fn interior_count(&self) -> usize {
        self.count
    }

    pub fn contains(&self, flat_index: usize) -> bool {
        self.interior[flat_index]
    }

    /// Iterator over flat indices of interior voxels, ascending.
    pub fn interior_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.interior
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i))
    }

    pub fn check_geometry(&self, v: &Volume) -> Result<(), VolumeError> {
        if self.dims == v.dims && self.spacing_mm == v.spacing_mm {
            Ok(())
        } else {
            Err(VolumeError::DimsMismatch {
                expected: self.dims,
                found: v.dims,
            })
        }
    }

    /// Render the mask as a 0.0/1.0 volume (its file representation).
    pub fn to_volume(&self) -> Volume {
        Volume {
            dims: self.dims,
            spacing_mm: self.spacing_mm,
            data: self.interior.iter().map(|&b| f32::from(b)).collect(),
        }
    }
}

/// Voxel values extracted from a masked volume, with enough bookkeeping to
/// invert the extraction.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    /// One value per interior voxel, in ascending flat-index order.
    pub values: Vec<f64>,
    /// Flat volume index of each feature; strictly increasing.
    pub voxel_index_map: Vec<usize>,
}

fn raw_path(header_path: &Path) -> PathBuf {
    header_path.with_extension("raw")
}

/// Read a `<name>.json` + `<name>.raw` volume pair.
pub fn read_volume(path: &Path) -> Result<Volume, VolumeError> {
    let text = fs::read_to_string(path).map_err(|source| VolumeError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let header: VolumeHeader = serde_json::from_str(&text).map_err(|e| VolumeError::BadHeader {
        path: path.to_path_buf(),
        reason: e.to_string(),
    })?;
    if header.dtype != DTYPE || header.order != ORDER {
        return Err(VolumeError::BadHeader {
            path: path.to_path_buf(),
            reason: format!(
                "unsupported dtype/order {}/{} (expected {DTYPE}/{ORDER})",
                header.dtype, header.order
            ),
        });
    }
    let raw = raw_path(path);
    let payload = match fs::read(&raw) {
        Ok(p) => p,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
            return Err(VolumeError::MissingPayload { path: raw })
        }
        Err(source) => return Err(VolumeError::Io { path: raw, source }),
    };
    let n = header.dims[0] * header.dims[1] * header.dims[2];
    if payload.len() != n * 4 {
        return Err(VolumeError::GeometryMismatch {
            expected: n * 4,
            actual: payload.len(),
        });
    }
    let data: Vec<f32> = payload
        .chunks_exact(4)
        .map(|b| f32::from_le_bytes([b[0], b[1], b[2], b[3]]))
        .collect();
    Volume::new(header.dims, header.spacing_mm, data)
}

/// Write `v` as a `<name>.json` + `<name>.raw` pair; inverse of [`read_volume`]
/// down to the byte level.
pub fn write_volume(v: &Volume, path: &Path) -> Result<(), VolumeError> {
    let header = VolumeHeader {
        dims: v.dims,
        spacing_mm: v.spacing_mm,
        dtype: DTYPE.to_string(),
        order: ORDER.to_string(),
    };
    let text = serde_json::to_string(&header).expect("header serialization cannot fail");
    let io_err = |path: &Path| {
        let p = path.to_path_buf();
        move |source| VolumeError::Io { path: p, source }
    };
    let mut f = fs::File::create(path).map_err(io_err(path))?;
    f.write_all(text.as_bytes()).map_err(io_err(path))?;
    f.write_all(b"\n").map_err(io_err(path))?;

    let raw = raw_path(path);
    let mut payload = Vec::with_capacity(v.data.len() * 4);
    for &val in &v.data {
        payload.extend_from_slice(&val.to_le_bytes());
    }
    fs::write(&raw, payload).map_err(io_err(&raw))?;
    Ok(())
}

/// In-mask moments (population variance), fixed storage-order summation.
fn masked_moments(v: &Volume, m: &Mask) -> (f64, f64) {
    let mut sum = 0.0f64;
    let mut sumsq = 0.0f64;
    for i in m.interior_indices() {
        let x = f64::from(v.data[i]);
        sum += x;
        sumsq += x * x;
    }
    let n = m.interior_count() as f64;
    let mean = sum / n;
    let var = (sumsq / n - mean * mean).max(0.0);
    (mean, var)
}

/// Normalize `v` to zero mean and unit variance over the mask interior.
///
/// Population (1/N) variance. Voxels outside the mask are set to 0 so that
/// downstream consumers all see identical out-of-mask content.
pub fn normalize_in_mask(v: &Volume, m: &Mask) -> Result<Volume, VolumeError> {
    m.check_geometry(v)?;
    let (mean, var) = masked_moments(v, m);
    if var == 0.0 {
        return Err(VolumeError::ZeroVariance);
    }
    let std = var.sqrt();
    let mut data = vec![0.0f32; v.data.len()];
    for i in m.interior_indices() {
        data[i] = ((f64::from(v.data[i]) - mean) / std) as f32;
    }
    Ok(Volume {
        dims: v.dims,
        spacing_mm: v.spacing_mm,
        data,
    })
}

/// Voxelwise product of a probability map and a Jacobian-determinant field.
pub fn modulate(prob: &Volume, jac_det: &Volume) -> Result<Volume, VolumeError> {
    prob.check_geometry(jac_det)?;
    for (i, &p) in prob.data.iter().enumerate() {
        if !(0.0..=1.0).contains(&p) {
            return Err(VolumeError::ProbabilityOutOfRange { index: i, value: p });
        }
    }
    for (i, &j) in jac_det.data.iter().enumerate() {
        if j <= 0.0 {
            return Err(VolumeError::NonPositiveJacobian { index: i, value: j });
        }
    }
    let data: Vec<f32> = prob
        .data
        .iter()
        .zip(&jac_det.data)
        .map(|(&p, &j)| (f64::from(p) * f64::from(j)) as f32)
        .collect();
    Ok(Volume {
        dims: prob.dims,
        spacing_mm: prob.spacing_mm,
        data,
    })
}

/// Divide every voxel by the intracranial volume (head-size correction).
pub fn divide_by_icv(v: &Volume, icv_mm3: f64) -> Result<Volume, VolumeError> {
    if !(icv_mm3 > 0.0) {
        return Err(VolumeError::NonPositiveIcv(icv_mm3));
    }
    v.map(|x| x / icv_mm3)
}

/// Extract in-mask voxels as an ordered feature vector.
pub fn flatten_masked(v: &Volume, m: &Mask) -> Result<FeatureVector, VolumeError> {
    m.check_geometry(v)?;
    let mut values = Vec::with_capacity(m.interior_count());
    let mut voxel_index_map = Vec::with_capacity(m.interior_count());
    for i in m.interior_indices() {
        values.push(f64::from(v.data[i]));
        voxel_index_map.push(i);
    }
    Ok(FeatureVector {
        values,
        voxel_index_map,
    })
}

/// Inverse of [`flatten_masked`]: place feature values back on the grid,
/// filling out-of-mask voxels with `fill`.
pub fn unflatten(
    fv: &FeatureVector,
    m: &Mask,
    fill: f32,
) -> Result<Volume, VolumeError> {
    if fv.values.len() != m.interior_count() || fv.voxel_index_map.len() != fv.values.len() {
        return Err(VolumeError::FeatureCountMismatch {
            features: fv.values.len(),
            mask: m.interior_count(),
        });
    }
    let mut data = vec![fill; m.dims[0] * m.dims[1] * m.dims[2]];
    for (&idx, &val) in fv.voxel_index_map.iter().zip(&fv.values) {
        data[idx] = val as f32;
    }
    Volume::new(m.dims, m.spacing_mm, data)
}
