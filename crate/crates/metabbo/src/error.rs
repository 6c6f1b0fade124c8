use std::path::PathBuf;

use thiserror::Error;

/// Unified error type for every fallible operation in the crate.
///
/// The CLI prints these as machine-readable JSON (`{"kind": ..., "error": ...}`),
/// so each variant keeps a stable [`Error::kind`] tag alongside its display
/// message.
#[derive(Error, Debug)]
pub enum Error {
    #[error("unknown problem family `{0}`")]
    UnknownFamily(String),

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    #[error("unknown agent `{0}`")]
    UnknownAgent(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(
        "evaluation budget exhausted: requested {requested} evaluations but only {remaining} remain"
    )]
    BudgetExhausted { requested: usize, remaining: usize },

    #[error("problem instance is not fresh: {used} evaluations already consumed; \
             derive a per-run copy before starting a run")]
    InstanceNotFresh { used: usize },

    #[error("learning signal carries no data")]
    EmptySignal,

    #[error("learning signal kind `{declared}` does not match its payload `{payload}`")]
    SignalKindMismatch {
        declared: &'static str,
        payload: &'static str,
    },

    #[error("non-finite value in {0}")]
    NonFinite(String),

    #[error("parameter vector has length {found}, architecture requires {expected}")]
    ThetaLength { expected: usize, found: usize },

    #[error("run-seed collision between ({i0},{k0}) and ({i1},{k1}); change the base seed")]
    SeedCollision {
        i0: usize,
        k0: usize,
        i1: usize,
        k1: usize,
    },

    #[error("task for instance {instance} run {run} failed twice: {message}")]
    TaskFailure {
        instance: String,
        run: usize,
        message: String,
    },

    #[error("incomplete experiment: missing runs {0:?}")]
    IncompleteExperiment(Vec<(String, usize)>),

    #[error("inconsistent inputs: {0}")]
    Inconsistent(String),

    #[error("indicator undefined: {0}")]
    DegenerateIndicator(String),

    #[error("agent `{agent}` does not support {problem_type} problems")]
    UnsupportedProblemType {
        agent: String,
        problem_type: String,
    },

    #[error("snapshot invalid: {0}")]
    InvalidSnapshot(String),

    #[error("configuration invalid ({path}): {message}")]
    Config { path: PathBuf, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("JSON: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable machine-readable tag for the CLI's JSON error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::UnknownFamily(_) => "unknown-family",
            Error::UnknownSuite(_) => "unknown-suite",
            Error::UnknownAgent(_) => "unknown-agent",
            Error::InvalidParameter(_) => "invalid-parameter",
            Error::BudgetExhausted { .. } => "budget-exhausted",
            Error::InstanceNotFresh { .. } => "instance-not-fresh",
            Error::EmptySignal => "empty-signal",
            Error::SignalKindMismatch { .. } => "signal-kind-mismatch",
            Error::NonFinite(_) => "non-finite",
            Error::ThetaLength { .. } => "theta-length",
            Error::SeedCollision { .. } => "seed-collision",
            Error::TaskFailure { .. } => "task-failure",
            Error::IncompleteExperiment(_) => "incomplete-experiment",
            Error::Inconsistent(_) => "inconsistent",
            Error::DegenerateIndicator(_) => "degenerate-indicator",
            Error::UnsupportedProblemType { .. } => "unsupported-problem-type",
            Error::InvalidSnapshot(_) => "invalid-snapshot",
            Error::Config { .. } => "config",
            Error::Io { .. } => "io",
            Error::Json(_) => "json",
        }
    }

    /// Attach a path to a bare I/O error.
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
