//! Experiment configuration: one strict JSON document drives both `train`
//! and `test`. Unknown keys anywhere in the document are rejected, and the
//! whole config is validated before any output is written.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::agent::{NeConfig, RlConfig};
use crate::error::Error;
use crate::optimizers::BaselineId;
use crate::parallel::{TestPlan, TestPlanSpec};
use crate::problems::SuiteSpec;
use crate::Result;

/// Agent selection. `kind` is `"rl"`, `"ne"`, or a baseline id
/// (`"de"`, `"shade"`, `"pso"`, `"rs"`); the trainable kinds may carry a
/// `training` section with their hyperparameters (defaults apply field-wise).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgentSpec {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub training: Option<serde_json::Value>,
}

/// The resolved agent: either a trainer with concrete hyperparameters or a
/// classic baseline.
#[derive(Clone, Debug, PartialEq)]
pub enum ResolvedAgent {
    Rl(RlConfig),
    Ne(NeConfig),
    Baseline(BaselineId),
}

impl ResolvedAgent {
    pub fn kind_name(&self) -> &'static str {
        match self {
            ResolvedAgent::Rl(_) => "rl",
            ResolvedAgent::Ne(_) => "ne",
            ResolvedAgent::Baseline(b) => b.name(),
        }
    }
}

impl AgentSpec {
    pub fn baseline(id: BaselineId) -> AgentSpec {
        AgentSpec {
            kind: id.name().to_string(),
            training: None,
        }
    }

    /// Parse the kind and, for trainable kinds, the strict `training`
    /// section. Baselines must not carry one.
    pub fn resolve(&self) -> Result<ResolvedAgent> {
        match self.kind.as_str() {
            "rl" => {
                let cfg: RlConfig = match &self.training {
                    Some(v) => serde_json::from_value(v.clone())?,
                    None => RlConfig::default(),
                };
                cfg.validate()?;
                Ok(ResolvedAgent::Rl(cfg))
            }
            "ne" => {
                let cfg: NeConfig = match &self.training {
                    Some(v) => serde_json::from_value(v.clone())?,
                    None => NeConfig::default(),
                };
                cfg.validate()?;
                Ok(ResolvedAgent::Ne(cfg))
            }
            other => {
                let id = BaselineId::parse(other)?;
                if self.training.is_some() {
                    return Err(Error::InvalidParameter(format!(
                        "baseline agent `{other}` takes no training section"
                    )));
                }
                Ok(ResolvedAgent::Baseline(id))
            }
        }
    }
}

/// The full experiment description.
///
/// ```json
/// {
///   "suite": {"suite": "soo-10d", "train": 8, "test": 16},
///   "agent": {"kind": "rl", "training": {"epochs": 20}},
///   "plan": {"mode": 4, "runs": 51, "workers": 8, "base_seed": 2025},
///   "output_dir": "runs/exp1"
/// }
/// ```
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub suite: SuiteSpec,
    pub agent: AgentSpec,
    #[serde(default)]
    pub plan: TestPlanSpec,
    pub output_dir: PathBuf,
}

impl ExperimentConfig {
    /// Read and fully validate a config file. Any problem — unreadable file,
    /// unknown key, unknown suite or agent, out-of-range hyperparameter —
    /// surfaces here, before a single output is written.
    pub fn load(path: &Path) -> Result<ExperimentConfig> {
        let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
        let config: ExperimentConfig =
            serde_json::from_slice(&bytes).map_err(|e| Error::Config {
                path: path.to_path_buf(),
                message: e.to_string(),
            })?;
        config.validate().map_err(|e| Error::Config {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        Ok(config)
    }

    /// Validate every section without touching the filesystem.
    pub fn validate(&self) -> Result<()> {
        self.suite.resolved()?;
        self.agent.resolve()?;
        TestPlan::from_spec(&self.plan)?;
        if self.output_dir.as_os_str().is_empty() {
            return Err(Error::InvalidParameter("output_dir is empty".into()));
        }
        Ok(())
    }

    /// The config with every default filled in explicitly — what the
    /// manifest records so a rerun needs no implicit knowledge.
    pub fn resolved(&self) -> Result<ExperimentConfig> {
        let agent = match self.agent.resolve()? {
            ResolvedAgent::Rl(cfg) => AgentSpec {
                kind: "rl".into(),
                training: Some(serde_json::to_value(cfg)?),
            },
            ResolvedAgent::Ne(cfg) => AgentSpec {
                kind: "ne".into(),
                training: Some(serde_json::to_value(cfg)?),
            },
            ResolvedAgent::Baseline(id) => AgentSpec::baseline(id),
        };
        Ok(ExperimentConfig {
            suite: self.suite.resolved()?,
            agent,
            plan: self.plan.clone(),
            output_dir: self.output_dir.clone(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write_config(dir: &Path, text: &str) -> PathBuf {
        let path = dir.join("config.json");
        std::fs::write(&path, text).unwrap();
        path
    }

    const GOOD: &str = r#"{
        "suite": {"suite": "soo-10d", "train": 8, "test": 16},
        "agent": {"kind": "rl", "training": {"epochs": 3, "batch_size": 4}},
        "plan": {"mode": 4, "runs": 5, "workers": 2, "base_seed": 7},
        "output_dir": "out"
    }"#;

    #[test]
    fn valid_config_loads_with_defaults_applied() {
        let dir = tempfile::tempdir().unwrap();
        let config = ExperimentConfig::load(&write_config(dir.path(), GOOD)).unwrap();
        let ResolvedAgent::Rl(rl) = config.agent.resolve().unwrap() else {
            panic!("expected the policy-gradient trainer");
        };
        assert_eq!(rl.epochs, 3);
        assert_eq!(rl.batch_size, 4);
        // Unspecified hyperparameters take their documented defaults.
        assert_eq!(rl.seed, RlConfig::default().seed);
        assert_eq!(config.plan.runs, 5);
    }

    #[test]
    fn unknown_keys_fail_at_every_level() {
        let dir = tempfile::tempdir().unwrap();
        for bad in [
            GOOD.replace("\"output_dir\"", "\"out_dir\""),
            GOOD.replace("\"epochs\"", "\"epoch\""),
            GOOD.replace("\"mode\"", "\"md\""),
            GOOD.replace("\"suite\": \"soo-10d\"", "\"suite\": \"soo-10d\", \"x\": 1"),
        ] {
            let err = ExperimentConfig::load(&write_config(dir.path(), &bad)).unwrap_err();
            assert!(matches!(err, Error::Config { .. }), "accepted: {bad}");
        }
    }

    #[test]
    fn plan_section_is_optional_and_defaults_to_the_paper_protocol() {
        let dir = tempfile::tempdir().unwrap();
        let text = r#"{
            "suite": {"suite": "soo-10d", "train": 8, "test": 16},
            "agent": {"kind": "de"},
            "output_dir": "out"
        }"#;
        let config = ExperimentConfig::load(&write_config(dir.path(), text)).unwrap();
        assert_eq!(config.plan.mode, 4);
        assert_eq!(config.plan.runs, 51);
        assert_eq!(config.plan.workers, 8);
    }

    #[test]
    fn baseline_with_training_section_is_rejected() {
        let spec = AgentSpec {
            kind: "shade".into(),
            training: Some(serde_json::json!({"epochs": 2})),
        };
        assert!(matches!(
            spec.resolve(),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn unknown_agent_kind_is_rejected() {
        let spec = AgentSpec {
            kind: "cma-es".into(),
            training: None,
        };
        assert!(matches!(spec.resolve(), Err(Error::UnknownAgent(_))));
    }

    #[test]
    fn trainer_hyperparameters_are_strict_too() {
        let spec = AgentSpec {
            kind: "ne".into(),
            training: Some(serde_json::json!({"populaton": 8})),
        };
        assert!(spec.resolve().is_err());
        // Odd ES populations break mirrored pairs and are caught at resolve.
        let odd = AgentSpec {
            kind: "ne".into(),
            training: Some(serde_json::json!({"population": 7})),
        };
        assert!(odd.resolve().is_err());
    }

    #[test]
    fn resolved_config_spells_out_every_default() {
        let dir = tempfile::tempdir().unwrap();
        let config = ExperimentConfig::load(&write_config(dir.path(), GOOD)).unwrap();
        let resolved = config.resolved().unwrap();
        assert_eq!(resolved.suite.dim, Some(10));
        assert_eq!(resolved.suite.max_fes, Some(20_000));
        let training = resolved.agent.training.unwrap();
        assert_eq!(training["epochs"], 3);
        assert_eq!(
            training["learning_rate"],
            serde_json::json!(RlConfig::default().learning_rate)
        );
        // Resolving is idempotent.
        let again = ExperimentConfig::load(&write_config(dir.path(), GOOD)).unwrap();
        assert_eq!(again.resolved().unwrap(), again.resolved().unwrap());
    }
}
