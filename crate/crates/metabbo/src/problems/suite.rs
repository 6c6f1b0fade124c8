//! Suite construction: named collections of instances with a train/test split.

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::problems::families::Family;
use crate::problems::instance::ProblemInstance;
use crate::problems::moo::{MooInstance, ZdtVariant};
use crate::problems::{ProblemType, SuiteProblem};
use crate::seed::{hash_seeds, rng_from};
use crate::Result;

const INSTANCE_STREAM: u64 = 0x696e_7374; // "inst"
const SPLIT_STREAM: u64 = 0x73_706c; // "spl"

/// JSON suite specification.
///
/// ```json
/// {"suite": "soo-10d", "dim": 10, "max_fes": 20000, "seed": 42,
///  "train": 8, "test": 16, "noise_sigma": 0.0}
/// ```
///
/// `dim`, `max_fes` and `noise_sigma` default per suite kind; `families`
/// optionally restricts which function families (or ZDT variants) are cycled.
/// `name` labels the built suite in filenames and reports (defaults to the
/// kind name) so that two differently-seeded suites of the same kind stay
/// distinguishable. Unknown keys are rejected.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SuiteSpec {
    pub suite: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_fes: Option<usize>,
    #[serde(default = "default_suite_seed")]
    pub seed: u64,
    pub train: usize,
    pub test: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise_sigma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub families: Option<Vec<String>>,
}

fn default_suite_seed() -> u64 {
    42
}

impl SuiteSpec {
    /// The default experiment: 24 instances of `soo-10d`, split 8 train / 16 test.
    pub fn default_soo_10d() -> Self {
        SuiteSpec {
            suite: "soo-10d".into(),
            name: None,
            dim: None,
            max_fes: None,
            seed: 42,
            train: 8,
            test: 16,
            noise_sigma: None,
            families: None,
        }
    }

    /// The label the built suite carries: the explicit `name`, else the kind.
    pub fn display_name(&self) -> &str {
        self.name.as_deref().unwrap_or(&self.suite)
    }

    /// Spec with every default filled in explicitly (for manifests).
    pub fn resolved(&self) -> Result<SuiteSpec> {
        let kind = SuiteKind::parse(&self.suite)?;
        validate_suite_name(self.display_name())?;
        Ok(SuiteSpec {
            suite: self.suite.clone(),
            name: Some(self.display_name().to_string()),
            dim: Some(self.dim.unwrap_or(kind.default_dim)),
            max_fes: Some(self.max_fes.unwrap_or(kind.default_max_fes)),
            seed: self.seed,
            train: self.train,
            test: self.test,
            noise_sigma: Some(self.noise_sigma.unwrap_or(kind.default_sigma)),
            families: self.families.clone(),
        })
    }
}

/// Suite names end up in artifact filenames, so keep them path-safe.
fn validate_suite_name(name: &str) -> Result<()> {
    let ok = !name.is_empty()
        && name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.'));
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "suite name `{name}` must be non-empty and use only ASCII \
             letters, digits, `-`, `_`, `.`"
        )))
    }
}

/// Static description of one suite kind (for defaults and `list-suites`).
#[derive(Clone, Copy, Debug)]
pub struct SuiteKind {
    pub name: &'static str,
    pub problem_type: ProblemType,
    pub default_dim: usize,
    pub default_max_fes: usize,
    pub default_sigma: f64,
    pub description: &'static str,
}

pub const SUITE_KINDS: [SuiteKind; 5] = [
    SuiteKind {
        name: "soo-10d",
        problem_type: ProblemType::Soo,
        default_dim: 10,
        default_max_fes: 20_000,
        default_sigma: 0.0,
        description: "single-objective, 10-D, 10 families cycled, budget 2e4",
    },
    SuiteKind {
        name: "soo-30d",
        problem_type: ProblemType::Soo,
        default_dim: 30,
        default_max_fes: 50_000,
        default_sigma: 0.0,
        description: "single-objective, 30-D, 10 families cycled, budget 5e4",
    },
    SuiteKind {
        name: "soo-noisy-10d",
        problem_type: ProblemType::SooNoisy,
        default_dim: 10,
        default_max_fes: 20_000,
        default_sigma: 0.01,
        description: "like soo-10d with Gaussian observation noise (sigma 0.01)",
    },
    SuiteKind {
        name: "soo-noisy-30d",
        problem_type: ProblemType::SooNoisy,
        default_dim: 30,
        default_max_fes: 50_000,
        default_sigma: 0.01,
        description: "like soo-30d with Gaussian observation noise (sigma 0.01)",
    },
    SuiteKind {
        name: "zdt",
        problem_type: ProblemType::Moo,
        default_dim: 30,
        default_max_fes: 5_000,
        default_sigma: 0.0,
        description: "bi-objective ZDT1/2/3 cycled, budget 5e3",
    },
];

impl SuiteKind {
    pub fn parse(name: &str) -> Result<SuiteKind> {
        SUITE_KINDS
            .iter()
            .copied()
            .find(|k| k.name == name)
            .ok_or_else(|| Error::UnknownSuite(name.to_string()))
    }
}

/// An ordered list of problem instances plus a train/test split.
#[derive(Clone, Debug)]
pub struct Suite {
    pub name: String,
    pub problem_type: ProblemType,
    pub instances: Vec<SuiteProblem>,
    pub train_ids: Vec<usize>,
    pub test_ids: Vec<usize>,
    /// Raised when the spec asked for an empty test split; accepted, but
    /// downstream analysis against held-out data becomes impossible.
    pub empty_test_warning: bool,
}

impl Suite {
    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    pub fn train_instances(&self) -> Vec<SuiteProblem> {
        self.train_ids
            .iter()
            .map(|&i| self.instances[i].clone())
            .collect()
    }

    pub fn test_instances(&self) -> Vec<SuiteProblem> {
        self.test_ids
            .iter()
            .map(|&i| self.instances[i].clone())
            .collect()
    }

    pub fn instance_by_id(&self, id: &str) -> Option<&SuiteProblem> {
        self.instances.iter().find(|p| p.id() == id)
    }
}

/// Build the suite described by `spec`: deterministic instance list (seeded
/// per-instance landscapes) and a seeded-shuffle train/test split.
pub fn build_suite(spec: &SuiteSpec) -> Result<Suite> {
    let kind = SuiteKind::parse(&spec.suite)?;
    validate_suite_name(spec.display_name())?;
    let dim = spec.dim.unwrap_or(kind.default_dim);
    let max_fes = spec.max_fes.unwrap_or(kind.default_max_fes);
    let sigma = spec.noise_sigma.unwrap_or(kind.default_sigma);
    let count = spec.train + spec.test;
    if count == 0 {
        return Err(Error::InvalidParameter(
            "suite needs at least one instance (train + test ≥ 1)".into(),
        ));
    }

    let mut instances = Vec::with_capacity(count);
    match kind.problem_type {
        ProblemType::Soo | ProblemType::SooNoisy => {
            let families = match &spec.families {
                Some(names) => names
                    .iter()
                    .map(|n| Family::parse(n))
                    .collect::<Result<Vec<_>>>()?,
                None => Family::ALL.to_vec(),
            };
            for idx in 0..count {
                let family = families[idx % families.len()];
                let inst_seed = hash_seeds(&[spec.seed, INSTANCE_STREAM, idx as u64]);
                let mut p = ProblemInstance::new(family, dim, inst_seed, sigma, max_fes)?;
                p.set_id(format!("p{:02}_{}", idx + 1, family.name()));
                instances.push(SuiteProblem::Soo(p));
            }
        }
        ProblemType::Moo => {
            if spec.noise_sigma.map_or(false, |s| s > 0.0) {
                return Err(Error::InvalidParameter(
                    "noise_sigma is not supported for the zdt suite".into(),
                ));
            }
            let variants = match &spec.families {
                Some(names) => names
                    .iter()
                    .map(|n| ZdtVariant::parse(n))
                    .collect::<Result<Vec<_>>>()?,
                None => ZdtVariant::ALL.to_vec(),
            };
            for idx in 0..count {
                let variant = variants[idx % variants.len()];
                let mut p = MooInstance::new(variant, dim, max_fes)?;
                p.set_id(format!("p{:02}_{}", idx + 1, variant.name()));
                instances.push(SuiteProblem::Moo(p));
            }
        }
    }

    let mut order: Vec<usize> = (0..count).collect();
    order.shuffle(&mut rng_from(&[spec.seed, SPLIT_STREAM]));
    let mut train_ids: Vec<usize> = order[..spec.train].to_vec();
    let mut test_ids: Vec<usize> = order[spec.train..].to_vec();
    train_ids.sort_unstable();
    test_ids.sort_unstable();

    let problem_type = match kind.problem_type {
        ProblemType::Moo => ProblemType::Moo,
        _ if sigma > 0.0 => ProblemType::SooNoisy,
        _ => ProblemType::Soo,
    };

    let empty_test_warning = spec.test == 0;
    if empty_test_warning {
        log::warn!(
            "suite `{}` built with an empty test split; held-out evaluation is unavailable",
            spec.suite
        );
    }

    Ok(Suite {
        name: spec.display_name().to_string(),
        problem_type,
        instances,
        train_ids,
        test_ids,
        empty_test_warning,
    })
}
