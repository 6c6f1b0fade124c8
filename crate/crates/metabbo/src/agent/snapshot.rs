//! Training snapshots: the full parameter vector at each epoch, with
//! cumulative wall-time and a train-set score, persisted one JSON file per
//! epoch so an interrupted run keeps everything finished so far.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::agent::policy::{MetaPolicy, ARCHITECTURE, THETA_LEN};
use crate::error::Error;
use crate::fsio;
use crate::Result;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Snapshot {
    pub epoch: usize,
    /// Layer widths, so a loaded file can be checked against the policy the
    /// code builds before any run starts.
    pub architecture: Vec<usize>,
    pub theta: Vec<f64>,
    /// Wall-clock time since training started, in seconds.
    pub cumulative_seconds: f64,
    /// Mean greedy-episode return on the train split at this epoch.
    pub train_score: f64,
}

impl Snapshot {
    pub fn new(epoch: usize, theta: Vec<f64>, cumulative_seconds: f64, train_score: f64) -> Self {
        Snapshot {
            epoch,
            architecture: ARCHITECTURE.to_vec(),
            theta,
            cumulative_seconds,
            train_score,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.architecture != ARCHITECTURE {
            return Err(Error::InvalidSnapshot(format!(
                "architecture {:?} does not match this build's {:?}",
                self.architecture, ARCHITECTURE
            )));
        }
        if self.theta.len() != THETA_LEN {
            return Err(Error::ThetaLength {
                expected: THETA_LEN,
                found: self.theta.len(),
            });
        }
        if self.theta.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidSnapshot(format!(
                "epoch {}: non-finite parameter",
                self.epoch
            )));
        }
        if !self.cumulative_seconds.is_finite() || self.cumulative_seconds < 0.0 {
            return Err(Error::InvalidSnapshot(format!(
                "epoch {}: bad cumulative_seconds {}",
                self.epoch, self.cumulative_seconds
            )));
        }
        if !self.train_score.is_finite() {
            return Err(Error::InvalidSnapshot(format!(
                "epoch {}: non-finite train_score",
                self.epoch
            )));
        }
        Ok(())
    }

    /// Cumulative training time in hours (the unit the efficiency metric uses).
    pub fn hours(&self) -> f64 {
        self.cumulative_seconds / 3600.0
    }

    pub fn policy(&self) -> Result<MetaPolicy> {
        MetaPolicy::from_theta(self.theta.clone())
    }
}

/// `snapshot_<epoch>.json`
pub fn snapshot_filename(epoch: usize) -> String {
    format!("snapshot_{epoch}.json")
}

pub fn save_snapshot(dir: &Path, snapshot: &Snapshot) -> Result<PathBuf> {
    snapshot.validate()?;
    let path = dir.join(snapshot_filename(snapshot.epoch));
    fsio::write_json_atomic(&path, snapshot)?;
    Ok(path)
}

pub fn load_snapshot(path: &Path) -> Result<Snapshot> {
    let snapshot: Snapshot = fsio::read_json(path)?;
    snapshot.validate()?;
    Ok(snapshot)
}

/// Load every `snapshot_*.json` in a directory, ordered by epoch, and check
/// the cross-snapshot invariants: distinct consecutive-feeling epochs and
/// strictly increasing cumulative time.
pub fn load_snapshot_dir(dir: &Path) -> Result<Vec<Snapshot>> {
    let mut found: Vec<(usize, PathBuf)> = Vec::new();
    let entries = std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    for entry in entries {
        let entry = entry.map_err(|e| Error::io(dir, e))?;
        let name = entry.file_name();
        let name = name.to_string_lossy();
        if let Some(epoch) = name
            .strip_prefix("snapshot_")
            .and_then(|rest| rest.strip_suffix(".json"))
            .and_then(|num| num.parse::<usize>().ok())
        {
            found.push((epoch, entry.path()));
        }
    }
    if found.is_empty() {
        return Err(Error::InvalidSnapshot(format!(
            "no snapshot_*.json files in {}",
            dir.display()
        )));
    }
    found.sort_by_key(|(epoch, _)| *epoch);
    let mut snapshots = Vec::with_capacity(found.len());
    for (epoch, path) in found {
        let s = load_snapshot(&path)?;
        if s.epoch != epoch {
            return Err(Error::InvalidSnapshot(format!(
                "{} claims epoch {}, filename says {}",
                path.display(),
                s.epoch,
                epoch
            )));
        }
        snapshots.push(s);
    }
    validate_sequence(&snapshots)?;
    Ok(snapshots)
}

/// Cross-snapshot invariants for an in-memory training history.
pub fn validate_sequence(snapshots: &[Snapshot]) -> Result<()> {
    for pair in snapshots.windows(2) {
        if pair[1].epoch <= pair[0].epoch {
            return Err(Error::InvalidSnapshot(format!(
                "epochs not increasing: {} then {}",
                pair[0].epoch, pair[1].epoch
            )));
        }
        if pair[1].cumulative_seconds <= pair[0].cumulative_seconds {
            return Err(Error::InvalidSnapshot(format!(
                "cumulative time not strictly increasing at epoch {}",
                pair[1].epoch
            )));
        }
    }
    Ok(())
}
