//! Problem side of the testbed: synthetic single-objective families with
//! seeded shift/rotation composition, bi-objective ZDT instances, and suite
//! construction with train/test splits.

pub mod families;
pub mod instance;
pub mod moo;
pub mod rotation;
pub mod suite;

pub use families::Family;
pub use instance::{ProblemInstance, SOO_BOUNDS};
pub use moo::{MooInstance, ZdtVariant};
pub use suite::{build_suite, Suite, SuiteKind, SuiteSpec, SUITE_KINDS};

use serde::{Deserialize, Serialize};

/// Problem category of a suite; serialized into metadata headers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProblemType {
    #[serde(rename = "SOO")]
    Soo,
    #[serde(rename = "SOO-noisy")]
    SooNoisy,
    #[serde(rename = "MOO")]
    Moo,
}

impl ProblemType {
    pub fn as_str(&self) -> &'static str {
        match self {
            ProblemType::Soo => "SOO",
            ProblemType::SooNoisy => "SOO-noisy",
            ProblemType::Moo => "MOO",
        }
    }

    pub fn is_moo(&self) -> bool {
        matches!(self, ProblemType::Moo)
    }
}

impl std::fmt::Display for ProblemType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Either flavor of problem instance, as stored in a [`Suite`].
#[derive(Clone, Debug)]
pub enum SuiteProblem {
    Soo(ProblemInstance),
    Moo(MooInstance),
}

impl SuiteProblem {
    pub fn id(&self) -> &str {
        match self {
            SuiteProblem::Soo(p) => p.id(),
            SuiteProblem::Moo(p) => p.id(),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            SuiteProblem::Soo(p) => p.dim(),
            SuiteProblem::Moo(p) => p.dim(),
        }
    }

    pub fn max_fes(&self) -> usize {
        match self {
            SuiteProblem::Soo(p) => p.max_fes(),
            SuiteProblem::Moo(p) => p.max_fes(),
        }
    }

    /// Per-run copy with a zeroed budget counter (and, for noisy problems, a
    /// run-specific noise stream).
    pub fn fresh_for_run(&self, run_seed: u64) -> SuiteProblem {
        match self {
            SuiteProblem::Soo(p) => SuiteProblem::Soo(p.fresh_for_run(run_seed)),
            SuiteProblem::Moo(p) => SuiteProblem::Moo(p.fresh_for_run(run_seed)),
        }
    }

    pub fn as_soo(&self) -> Option<&ProblemInstance> {
        match self {
            SuiteProblem::Soo(p) => Some(p),
            SuiteProblem::Moo(_) => None,
        }
    }

    pub fn as_moo(&self) -> Option<&MooInstance> {
        match self {
            SuiteProblem::Moo(p) => Some(p),
            SuiteProblem::Soo(_) => None,
        }
    }
}
