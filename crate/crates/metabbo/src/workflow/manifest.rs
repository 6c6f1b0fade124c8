//! Run manifests: the sidecar JSON written next to every train/test output,
//! recording the fully resolved configuration, seeds, wall-clock time, and
//! code version — everything a rerun or a later `analyze` needs.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::fsio;
use crate::workflow::config::ExperimentConfig;
use crate::Result;

/// Which snapshot a test run evaluated (absent for baselines).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SnapshotRef {
    pub path: String,
    pub epoch: usize,
    pub cumulative_seconds: f64,
    pub train_score: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    /// Which command produced this manifest: `"train"` or `"test"`.
    pub command: String,
    pub code_version: String,
    /// Label used in artifact filenames and rank tables.
    pub algorithm: String,
    /// The configuration with every default spelled out.
    pub config: ExperimentConfig,
    pub base_seed: u64,
    pub wall_time_s: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub snapshot: Option<SnapshotRef>,
}

impl Manifest {
    pub fn save(&self, path: &Path) -> Result<()> {
        fsio::write_json_atomic(path, self)
    }

    pub fn load(path: &Path) -> Result<Manifest> {
        fsio::read_json(path)
    }
}

pub fn code_version() -> String {
    format!("{} {}", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION"))
}

pub const TRAIN_MANIFEST: &str = "manifest_train.json";

pub fn test_manifest_filename(algorithm: &str, suite_name: &str) -> String {
    format!("manifest_test_{algorithm}_{suite_name}.json")
}

/// The sidecar manifest belonging to a metadata file:
/// `…/metadata_<x>.json` → `…/manifest_test_<x>.json`. Analysis resolves
/// problem definitions (optima, reference points) through this file, so a
/// metadata file that was renamed away from the convention is rejected.
pub fn manifest_path_for_metadata(metadata_path: &Path) -> Result<PathBuf> {
    let name = metadata_path
        .file_name()
        .and_then(|n| n.to_str())
        .unwrap_or_default();
    let stem = name
        .strip_prefix("metadata_")
        .and_then(|s| s.strip_suffix(".json"))
        .ok_or_else(|| {
            Error::Inconsistent(format!(
                "{}: expected a `metadata_<algorithm>_<suite>.json` file (its \
                 sidecar manifest locates the suite definition)",
                metadata_path.display()
            ))
        })?;
    Ok(metadata_path.with_file_name(format!("manifest_test_{stem}.json")))
}
