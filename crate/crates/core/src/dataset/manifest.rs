//! Manifest CSV ingestion.
//!
//! Schema (UTF-8, comma separated, header required):
//! `subject_id,cohort,diagnosis,volume_path,icv_mm3,followup_years`
//! where the last two columns may be empty. Relative volume paths are
//! resolved against the manifest's directory, so generated cohorts stay
//! relocatable.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use super::DatasetError;

pub const MANIFEST_HEADER: [&str; 6] = [
    "subject_id",
    "cohort",
    "diagnosis",
    "volume_path",
    "icv_mm3",
    "followup_years",
];

/// Closed diagnosis label set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub enum Diagnosis {
    #[serde(rename = "AD")]
    Ad,
    #[serde(rename = "CN")]
    Cn,
    #[serde(rename = "SCD")]
    Scd,
    #[serde(rename = "MCIc")]
    MciC,
    #[serde(rename = "MCInc")]
    MciNc,
}

impl Diagnosis {
    pub fn parse(s: &str) -> Result<Self, DatasetError> {
        match s {
            "AD" => Ok(Diagnosis::Ad),
            "CN" => Ok(Diagnosis::Cn),
            "SCD" => Ok(Diagnosis::Scd),
            "MCIc" => Ok(Diagnosis::MciC),
            "MCInc" => Ok(Diagnosis::MciNc),
            other => Err(DatasetError::UnknownDiagnosis(other.to_string())),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Diagnosis::Ad => "AD",
            Diagnosis::Cn => "CN",
            Diagnosis::Scd => "SCD",
            Diagnosis::MciC => "MCIc",
            Diagnosis::MciNc => "MCInc",
        }
    }
}

impl std::fmt::Display for Diagnosis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One study participant. Volume files are referenced, never opened here.
#[derive(Debug, Clone, PartialEq)]
pub struct SubjectRecord {
    pub subject_id: String,
    pub cohort: String,
    pub diagnosis: Diagnosis,
    pub volume_path: PathBuf,
    pub icv_mm3: Option<f64>,
    pub followup_years: Option<f64>,
}

fn parse_optional_f64(
    field: &str,
    name: &str,
    line: u64,
    positive: bool,
) -> Result<Option<f64>, DatasetError> {
    if field.is_empty() {
        return Ok(None);
    }
    let v: f64 = field.parse().map_err(|_| DatasetError::MalformedRow {
        line,
        reason: format!("{name} is not a number: {field:?}"),
    })?;
    let ok = if positive { v > 0.0 } else { v >= 0.0 };
    if !v.is_finite() || !ok {
        return Err(DatasetError::MalformedRow {
            line,
            reason: format!("{name} out of range: {field:?}"),
        });
    }
    Ok(Some(v))
}

/// Load a manifest CSV. Referenced volumes are validated lazily by callers.
pub fn load_manifest(path: &Path) -> Result<Vec<SubjectRecord>, DatasetError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_path(path)
        .map_err(DatasetError::Csv)?;
    {
        let found = reader.headers()?;
        let expected = MANIFEST_HEADER.join(",");
        let found_str = found.iter().collect::<Vec<_>>().join(",");
        if found_str != expected {
            return Err(DatasetError::HeaderMismatch {
                expected,
                found: found_str,
            });
        }
    }
    let base = path.parent().unwrap_or_else(|| Path::new(""));
    let mut records = Vec::new();
    let mut seen = BTreeSet::new();
    for (i, row) in reader.records().enumerate() {
        let row = row?;
        let line = i as u64 + 2; // 1-based, after the header
        let field = |k: usize| row.get(k).unwrap_or("");
        let subject_id = field(0).to_string();
        if subject_id.is_empty() {
            return Err(DatasetError::MalformedRow {
                line,
                reason: "empty subject_id".into(),
            });
        }
        if !seen.insert(subject_id.clone()) {
            return Err(DatasetError::DuplicateSubjectId(subject_id));
        }
        let diagnosis = Diagnosis::parse(field(2))?;
        if field(3).is_empty() {
            return Err(DatasetError::MalformedRow {
                line,
                reason: "empty volume_path".into(),
            });
        }
        let raw_path = PathBuf::from(field(3));
        let volume_path = if raw_path.is_absolute() {
            raw_path
        } else {
            base.join(raw_path)
        };
        records.push(SubjectRecord {
            subject_id,
            cohort: field(1).to_string(),
            diagnosis,
            volume_path,
            icv_mm3: parse_optional_f64(field(4), "icv_mm3", line, true)?,
            followup_years: parse_optional_f64(field(5), "followup_years", line, false)?,
        });
    }
    Ok(records)
}

/// Write a manifest with the canonical schema. `volume_path` entries are
/// written exactly as given (callers pass paths relative to `path`'s parent
/// to keep the cohort relocatable).
pub fn write_manifest(
    path: &Path,
    rows: &[(String, String, Diagnosis, String, Option<f64>, Option<f64>)],
) -> Result<(), DatasetError> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(MANIFEST_HEADER)?;
    for (id, cohort, dx, vol, icv, fu) in rows {
        let icv_s = icv.map(|v| v.to_string()).unwrap_or_default();
        let fu_s = fu.map(|v| v.to_string()).unwrap_or_default();
        w.write_record([id.as_str(), cohort, dx.as_str(), vol, &icv_s, &fu_s])?;
    }
    w.flush().map_err(|source| DatasetError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(())
}
