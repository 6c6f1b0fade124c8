//! The metadata file format: one JSON object per (algorithm, suite) pair
//! holding every run's full per-generation logs.
//!
//! The key structure is load-bearing — downstream tooling pattern-matches on
//! `{"problem_type","all_data"}` / `{"problem_id","data"}` / `{"X","Y","T"}` —
//! so serialization is validated on every write and must round-trip
//! byte-identically.

use std::path::{Path, PathBuf};

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::fsio;
use crate::optimizers::{RunObjectives, RunRecord};
use crate::problems::ProblemType;
use crate::Result;

/// Objective log of one run: scalar rows for single-objective problems,
/// two-vector rows for bi-objective ones.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ObjectiveLog {
    Soo(Vec<Vec<f64>>),
    Moo(Vec<Vec<[f64; 2]>>),
}

impl ObjectiveLog {
    pub fn generations(&self) -> usize {
        match self {
            ObjectiveLog::Soo(v) => v.len(),
            ObjectiveLog::Moo(v) => v.len(),
        }
    }
}

/// One run's record: populations `X`, objectives `Y`, wall-clock seconds `T`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunData {
    #[serde(rename = "X")]
    pub x: Vec<Vec<Vec<f64>>>,
    #[serde(rename = "Y")]
    pub y: ObjectiveLog,
    #[serde(rename = "T")]
    pub t: f64,
}

/// All runs of one algorithm on one problem instance, keyed
/// `"run_1"…"run_K"` in execution order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetadataRecord {
    pub problem_id: String,
    pub data: IndexMap<String, RunData>,
}

/// The aggregate for a whole suite: one record per instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteMetadata {
    pub problem_type: String,
    pub all_data: Vec<MetadataRecord>,
}

impl SuiteMetadata {
    /// Assemble from canonical `[instance][run]` plan output. Takes the
    /// records by value: full-protocol logs run to gigabytes, and moving them
    /// in keeps peak memory at one copy.
    pub fn from_records(problem_type: ProblemType, records: Vec<Vec<RunRecord>>) -> SuiteMetadata {
        let all_data = records
            .into_iter()
            .map(|runs| {
                let problem_id = runs
                    .first()
                    .map(|r| r.problem_id.clone())
                    .unwrap_or_default();
                let mut data = IndexMap::with_capacity(runs.len());
                for (k, record) in runs.into_iter().enumerate() {
                    data.insert(
                        format!("run_{}", k + 1),
                        RunData {
                            x: record.x_log,
                            y: match record.y_log {
                                RunObjectives::Soo(v) => ObjectiveLog::Soo(v),
                                RunObjectives::Moo(v) => ObjectiveLog::Moo(v),
                            },
                            t: record.wall_time_s,
                        },
                    );
                }
                MetadataRecord { problem_id, data }
            })
            .collect();
        SuiteMetadata {
            problem_type: problem_type.as_str().to_string(),
            all_data,
        }
    }

    pub fn instance_count(&self) -> usize {
        self.all_data.len()
    }

    pub fn run_count(&self) -> usize {
        self.all_data.iter().map(|r| r.data.len()).sum()
    }

    /// Schema invariants: unique instance ids; per record, contiguous
    /// `run_1…run_K` keys (K = the suite-wide maximum); per run, `|X| = |Y|`
    /// and `T ≥ 0`. Missing runs are reported as an incomplete experiment
    /// naming every absent `(problem_id, k)`.
    pub fn validate(&self) -> Result<()> {
        let mut seen = std::collections::HashSet::new();
        for record in &self.all_data {
            if !seen.insert(record.problem_id.as_str()) {
                return Err(Error::Inconsistent(format!(
                    "duplicate instance id {} in metadata",
                    record.problem_id
                )));
            }
        }
        let k_max = self
            .all_data
            .iter()
            .map(|r| r.data.len())
            .max()
            .unwrap_or(0);
        let mut missing = Vec::new();
        for record in &self.all_data {
            for k in 1..=k_max {
                if !record.data.contains_key(&format!("run_{k}")) {
                    missing.push((record.problem_id.clone(), k));
                }
            }
        }
        if !missing.is_empty() {
            return Err(Error::IncompleteExperiment(missing));
        }
        for record in &self.all_data {
            for (key, run) in &record.data {
                if run.x.len() != run.y.generations() {
                    return Err(Error::Inconsistent(format!(
                        "{} {}: {} X generations vs {} Y generations",
                        record.problem_id,
                        key,
                        run.x.len(),
                        run.y.generations()
                    )));
                }
                if !(run.t >= 0.0) {
                    return Err(Error::Inconsistent(format!(
                        "{} {}: negative or non-finite T {}",
                        record.problem_id, key, run.t
                    )));
                }
            }
        }
        Ok(())
    }

    /// The exact bytes `save` writes: pretty JSON plus a trailing newline.
    pub fn canonical_bytes(&self) -> Result<Vec<u8>> {
        let mut bytes = serde_json::to_vec_pretty(self)?;
        bytes.push(b'\n');
        Ok(bytes)
    }

    /// Canonical bytes with every `T` zeroed — the mode-invariance
    /// comparator, since wall-times are the only field parallelism may change.
    pub fn canonical_bytes_zero_t(&self) -> Result<Vec<u8>> {
        let mut copy = self.clone();
        for record in &mut copy.all_data {
            for run in record.data.values_mut() {
                run.t = 0.0;
            }
        }
        copy.canonical_bytes()
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        self.validate()?;
        fsio::write_atomic(path, &self.canonical_bytes()?)
    }

    pub fn load(path: &Path) -> Result<SuiteMetadata> {
        let md: SuiteMetadata = fsio::read_json(path)?;
        md.validate()?;
        Ok(md)
    }

    pub fn record(&self, problem_id: &str) -> Option<&MetadataRecord> {
        self.all_data.iter().find(|r| r.problem_id == problem_id)
    }
}

/// Filename convention inside an experiment store:
/// `metadata_<algorithm>_<suite>.json`.
pub fn metadata_filename(algorithm_id: &str, suite_name: &str) -> String {
    format!("metadata_{algorithm_id}_{suite_name}.json")
}

/// Load the stored metadata for `(algorithm, suite)` from an experiment
/// directory, verifying completeness.
pub fn get_metadata(store: &Path, algorithm_id: &str, suite_name: &str) -> Result<SuiteMetadata> {
    let path: PathBuf = store.join(metadata_filename(algorithm_id, suite_name));
    if !path.exists() {
        return Err(Error::Inconsistent(format!(
            "no stored metadata for algorithm `{algorithm_id}` on suite `{suite_name}` \
             (expected {})",
            path.display()
        )));
    }
    SuiteMetadata::load(&path)
}
