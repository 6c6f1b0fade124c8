//! Config-driven experiment workflow: the `train`, `test`, and `analyze`
//! entry points behind the CLI, plus strict configuration parsing and run
//! manifests.

pub mod commands;
pub mod config;
pub mod manifest;

pub use commands::{
    cmd_analyze, cmd_test, cmd_train, list_agents, list_suites, AnalyzeOutcome, PlanOverrides,
    TestOutcome, TrainOutcome,
};
pub use config::{AgentSpec, ExperimentConfig, ResolvedAgent};
pub use manifest::{
    code_version, manifest_path_for_metadata, test_manifest_filename, Manifest, SnapshotRef,
    TRAIN_MANIFEST,
};
