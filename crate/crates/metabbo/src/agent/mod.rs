//! The meta-level: state features, the policy network, episode rollouts,
//! learning signals, and training snapshots.
//!
//! An [`Agent`] is anything that can produce a [`RunRecord`] on a problem —
//! a classic baseline, a hand-fixed DE design, or a trained policy driving
//! the configurable DE. Test plans and metrics treat all three uniformly.

pub mod episode;
pub mod evolution;
pub mod features;
pub mod policy;
pub mod reinforce;
pub mod reward;
pub mod signal;
pub mod snapshot;

pub use episode::{
    episode, episode_fixed, episode_steps, meta_objective, meta_objective_fixed, Trajectory,
    TrajectoryStep,
};
pub use evolution::{es_update, rank_normalize, train_ne, NeConfig};
pub use features::{extract_features, mean_pairwise_distance, StateFeatures, FEATURE_COUNT};
pub use policy::{
    policy_forward, ActionMode, MetaPolicy, PolicyAction, ARCHITECTURE, SIGMA_ACTION, THETA_LEN,
};
pub use reinforce::{reinforce_gradient, train_rl, RlConfig};
pub use reward::reward;
pub use signal::{wrap_signal, SignalKind, SignalPayload, UniversalSignal};
pub use snapshot::{
    load_snapshot, load_snapshot_dir, save_snapshot, snapshot_filename, validate_sequence,
    Snapshot,
};

use crate::optimizers::{run_baseline, AlgorithmDesign, BaselineId, RunRecord};
use crate::problems::SuiteProblem;
use crate::{Error, Result};

/// Anything that can be put through a test plan.
#[derive(Clone, Debug)]
pub enum Agent {
    /// One of the classic optimizers (`rs`, `de`, `pso`, `shade`).
    Baseline(BaselineId),
    /// The configurable DE pinned to one design for the whole run.
    FixedDe { design: AlgorithmDesign, label: String },
    /// A meta-policy choosing a design every generation (greedy at test time).
    Policy { policy: MetaPolicy, label: String },
}

impl Agent {
    /// Stable identifier used in metadata filenames and rank tables.
    pub fn id(&self) -> &str {
        match self {
            Agent::Baseline(b) => b.name(),
            Agent::FixedDe { label, .. } | Agent::Policy { label, .. } => label,
        }
    }

    /// Execute one full run on a fresh problem.
    pub fn run(&self, problem: &SuiteProblem, seed: u64) -> Result<RunRecord> {
        match self {
            Agent::Baseline(b) => run_baseline(*b, problem, seed),
            Agent::FixedDe { design, .. } => {
                let soo = problem.as_soo().ok_or_else(|| Error::UnsupportedProblemType {
                    agent: self.id().to_string(),
                    problem_type: "MOO".into(),
                })?;
                episode_fixed(design, soo, seed).map(|(_, record)| record)
            }
            Agent::Policy { policy, .. } => {
                let soo = problem.as_soo().ok_or_else(|| Error::UnsupportedProblemType {
                    agent: self.id().to_string(),
                    problem_type: "MOO".into(),
                })?;
                episode(policy, soo, seed, ActionMode::Greedy).map(|(_, record)| record)
            }
        }
    }
}
