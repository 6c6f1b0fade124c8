//! The train → test → analyze workflow. Each command loads and fully
//! validates its inputs before writing anything, writes every artifact
//! atomically, and returns a summary the CLI prints.

use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::agent::{load_snapshot, save_snapshot, train_ne, train_rl, Agent, MetaPolicy};
use crate::error::Error;
use crate::fsio;
use crate::metrics::{
    anti_nfl, convergence_stats, emit_outputs, metadata_filename, perf_score, rank_table,
    AlgorithmArtifacts, AntiNflRow, EfficiencyRow, RankTable, SuiteMetadata,
};
use crate::optimizers::BaselineId;
use crate::parallel::{run_test_plan, TestPlan, TestPlanSpec};
use crate::problems::{build_suite, SUITE_KINDS};
use crate::workflow::config::{ExperimentConfig, ResolvedAgent};
use crate::workflow::manifest::{
    code_version, manifest_path_for_metadata, test_manifest_filename, Manifest, SnapshotRef,
    TRAIN_MANIFEST,
};
use crate::Result;

/// What `train` produced (empty for baselines, which have nothing to train).
#[derive(Debug)]
pub struct TrainOutcome {
    pub message: String,
    /// One file per snapshot, written incrementally in epoch order.
    pub snapshot_paths: Vec<PathBuf>,
    pub manifest_path: Option<PathBuf>,
}

/// Train the configured agent on the suite's train split and write every
/// snapshot plus a manifest. Baselines are a no-op with an explanation.
pub fn cmd_train(config_path: &Path) -> Result<TrainOutcome> {
    let config = ExperimentConfig::load(config_path)?;
    let resolved = config.agent.resolve()?;
    let (kind, seed) = match &resolved {
        ResolvedAgent::Baseline(id) => {
            return Ok(TrainOutcome {
                message: format!(
                    "agent `{}` is a classic baseline with no trainable parameters; \
                     training is a no-op — run `test` directly",
                    id.name()
                ),
                snapshot_paths: Vec::new(),
                manifest_path: None,
            })
        }
        ResolvedAgent::Rl(cfg) => ("rl", cfg.seed),
        ResolvedAgent::Ne(cfg) => ("ne", cfg.seed),
    };

    let suite = build_suite(&config.suite)?;
    let train_set = suite.train_instances();
    if train_set.is_empty() {
        return Err(Error::InvalidParameter(format!(
            "suite `{}` has an empty train split; nothing to train on",
            suite.name
        )));
    }

    let snapshot_dir = config.output_dir.join("snapshots");
    let initial = MetaPolicy::seeded(seed);
    let mut snapshot_paths = Vec::new();
    let started = Instant::now();
    let snapshots = match &resolved {
        ResolvedAgent::Rl(cfg) => train_rl(&initial, &train_set, cfg, |snap| {
            snapshot_paths.push(save_snapshot(&snapshot_dir, snap)?);
            Ok(())
        })?,
        ResolvedAgent::Ne(cfg) => train_ne(&initial, &train_set, cfg, |snap| {
            snapshot_paths.push(save_snapshot(&snapshot_dir, snap)?);
            Ok(())
        })?,
        ResolvedAgent::Baseline(_) => unreachable!("handled above"),
    };
    let wall_time_s = started.elapsed().as_secs_f64();

    let manifest = Manifest {
        command: "train".into(),
        code_version: code_version(),
        algorithm: kind.to_string(),
        config: config.resolved()?,
        base_seed: seed,
        wall_time_s,
        snapshot: None,
    };
    let manifest_path = config.output_dir.join(TRAIN_MANIFEST);
    manifest.save(&manifest_path)?;

    let last = snapshots.last().expect("trainers always emit snapshot 0");
    Ok(TrainOutcome {
        message: format!(
            "trained `{kind}` for {} epoch(s) on {} instance(s) in {:.1}s; \
             {} snapshots in {}; final train score {:.4}",
            snapshots.len() - 1,
            train_set.len(),
            wall_time_s,
            snapshots.len(),
            snapshot_dir.display(),
            last.train_score,
        ),
        snapshot_paths,
        manifest_path: Some(manifest_path),
    })
}

/// Command-line overrides for the config's test plan.
#[derive(Clone, Copy, Debug, Default)]
pub struct PlanOverrides {
    pub mode: Option<u8>,
    pub runs: Option<usize>,
    pub workers: Option<usize>,
    pub base_seed: Option<u64>,
}

impl PlanOverrides {
    fn apply(&self, spec: &TestPlanSpec) -> TestPlanSpec {
        TestPlanSpec {
            mode: self.mode.unwrap_or(spec.mode),
            runs: self.runs.unwrap_or(spec.runs),
            workers: self.workers.unwrap_or(spec.workers),
            base_seed: self.base_seed.unwrap_or(spec.base_seed),
        }
    }
}

#[derive(Debug)]
pub struct TestOutcome {
    pub message: String,
    pub algorithm: String,
    pub metadata_path: PathBuf,
    pub summary_path: PathBuf,
    pub manifest_path: PathBuf,
    pub instances: usize,
    pub runs_per_instance: usize,
    pub wall_time_s: f64,
    pub runs_per_sec: f64,
    pub perf: f64,
}

/// Execute the test plan on the suite's test split and write the metadata,
/// a per-instance performance summary, and a sidecar manifest. Baselines run
/// as-is; `rl`/`ne` agents need a snapshot from `train`.
pub fn cmd_test(
    config_path: &Path,
    snapshot_path: Option<&Path>,
    overrides: &PlanOverrides,
) -> Result<TestOutcome> {
    let mut config = ExperimentConfig::load(config_path)?;
    config.plan = overrides.apply(&config.plan);
    let plan = TestPlan::from_spec(&config.plan)?;

    let (agent, snapshot_ref) = match (config.agent.resolve()?, snapshot_path) {
        (ResolvedAgent::Baseline(id), None) => (Agent::Baseline(id), None),
        (ResolvedAgent::Baseline(id), Some(_)) => {
            return Err(Error::InvalidParameter(format!(
                "baseline agent `{}` takes no snapshot",
                id.name()
            )))
        }
        (ResolvedAgent::Rl(_), None) | (ResolvedAgent::Ne(_), None) => {
            return Err(Error::InvalidParameter(format!(
                "agent kind `{}` is a trained policy; pass --snapshot <file> \
                 produced by `train`",
                config.agent.kind,
            )))
        }
        (resolved @ (ResolvedAgent::Rl(_) | ResolvedAgent::Ne(_)), Some(path)) => {
            // Validates θ length against the architecture before any run.
            let snap = load_snapshot(path)?;
            let label = format!("{}-e{}", resolved.kind_name(), snap.epoch);
            let policy = snap.policy()?;
            let reference = SnapshotRef {
                path: path.display().to_string(),
                epoch: snap.epoch,
                cumulative_seconds: snap.cumulative_seconds,
                train_score: snap.train_score,
            };
            (Agent::Policy { policy, label }, Some(reference))
        }
    };
    let label = agent.id().to_string();

    let suite = build_suite(&config.suite)?;
    let instances = suite.test_instances();
    if instances.is_empty() {
        return Err(Error::InvalidParameter(format!(
            "suite `{}` has an empty test split; nothing to evaluate",
            suite.name
        )));
    }

    let outcome = run_test_plan(&agent, &instances, &plan)?;
    let md = SuiteMetadata::from_records(suite.problem_type, &outcome.records);
    let metadata_path = config.output_dir.join(metadata_filename(&label, &suite.name));
    md.save(&metadata_path)?;

    let report = perf_score(&md, &suite)?;
    let summary_path = config
        .output_dir
        .join(format!("summary_{label}_{}.json", suite.name));
    fsio::write_json_atomic(&summary_path, &report)?;

    let manifest = Manifest {
        command: "test".into(),
        code_version: code_version(),
        algorithm: label.clone(),
        config: config.resolved()?,
        base_seed: config.plan.base_seed,
        wall_time_s: outcome.wall_time_s,
        snapshot: snapshot_ref,
    };
    let manifest_path = config
        .output_dir
        .join(test_manifest_filename(&label, &suite.name));
    manifest.save(&manifest_path)?;

    Ok(TestOutcome {
        message: format!(
            "tested `{label}` on {} instance(s) × {} run(s) (mode {}, {} workers) \
             in {:.1}s — {:.2} runs/s, Perf {:.4}; metadata at {}",
            instances.len(),
            config.plan.runs,
            config.plan.mode,
            config.plan.workers,
            outcome.wall_time_s,
            outcome.runs_per_sec(),
            report.perf,
            metadata_path.display(),
        ),
        algorithm: label,
        metadata_path,
        summary_path,
        manifest_path,
        instances: instances.len(),
        runs_per_instance: config.plan.runs,
        wall_time_s: outcome.wall_time_s,
        runs_per_sec: outcome.runs_per_sec(),
        perf: report.perf,
    })
}

struct AnalysisEntry {
    artifacts: AlgorithmArtifacts,
    snapshot: Option<SnapshotRef>,
    is_train: bool,
}

fn load_analysis_entry(path: &Path, is_train: bool) -> Result<AnalysisEntry> {
    let md = SuiteMetadata::load(path)?;
    let manifest_path = manifest_path_for_metadata(path)?;
    if !manifest_path.exists() {
        return Err(Error::Inconsistent(format!(
            "{}: missing sidecar manifest {} — `test` writes it next to each \
             metadata file, and analysis needs it to rebuild the suite definition",
            path.display(),
            manifest_path.display()
        )));
    }
    let manifest = Manifest::load(&manifest_path)?;
    let suite = build_suite(&manifest.config.suite)?;
    if md.problem_type != suite.problem_type.as_str() {
        return Err(Error::Inconsistent(format!(
            "{}: metadata problem_type `{}` does not match suite `{}` ({})",
            path.display(),
            md.problem_type,
            suite.name,
            suite.problem_type.as_str()
        )));
    }
    let report = perf_score(&md, &suite)?;
    let convergence = convergence_stats(&md, &suite)?;
    Ok(AnalysisEntry {
        artifacts: AlgorithmArtifacts {
            algorithm: manifest.algorithm,
            suite_name: suite.name.clone(),
            metadata: md,
            report,
            convergence,
        },
        snapshot: manifest.snapshot,
        is_train,
    })
}

#[derive(Debug)]
pub struct AnalyzeOutcome {
    pub message: String,
    pub written: Vec<PathBuf>,
    pub anti_nfl: Vec<AntiNflRow>,
}

/// Post-process metadata files into CSV tables and convergence data.
///
/// Performance and convergence curves are always emitted. Rank tables appear
/// per suite once two algorithms share it; efficiency rows appear for
/// snapshot-backed entries (the sidecar carries the training time); the
/// robustness indicator appears per algorithm when `--train` metadata is
/// paired with test-suite metadata of the same algorithm.
pub fn cmd_analyze(
    train_paths: &[PathBuf],
    test_paths: &[PathBuf],
    out_dir: &Path,
) -> Result<AnalyzeOutcome> {
    if train_paths.is_empty() && test_paths.is_empty() {
        return Err(Error::InvalidParameter(
            "analyze needs at least one metadata file (--train and/or --test)".into(),
        ));
    }
    let mut entries = Vec::new();
    for path in train_paths {
        entries.push(load_analysis_entry(path, true)?);
    }
    for path in test_paths {
        entries.push(load_analysis_entry(path, false)?);
    }

    let mut seen = std::collections::HashSet::new();
    for entry in &entries {
        let key = (
            entry.artifacts.algorithm.clone(),
            entry.artifacts.suite_name.clone(),
        );
        if !seen.insert(key.clone()) {
            return Err(Error::Inconsistent(format!(
                "algorithm `{}` on suite `{}` appears twice in the analysis inputs",
                key.0, key.1
            )));
        }
    }

    // One rank table per suite that at least two algorithms share.
    let mut suite_order: Vec<&str> = Vec::new();
    for entry in &entries {
        if !suite_order.contains(&entry.artifacts.suite_name.as_str()) {
            suite_order.push(&entry.artifacts.suite_name);
        }
    }
    let mut ranks: Vec<(String, RankTable)> = Vec::new();
    for suite_name in suite_order {
        let group: Vec<(String, crate::metrics::PerfReport)> = entries
            .iter()
            .filter(|e| e.artifacts.suite_name == suite_name)
            .map(|e| (e.artifacts.algorithm.clone(), e.artifacts.report.clone()))
            .collect();
        if group.len() >= 2 {
            ranks.push((suite_name.to_string(), rank_table(&group)?));
        }
    }

    let mut efficiency: Vec<EfficiencyRow> = Vec::new();
    for entry in &entries {
        if let Some(snapshot) = &entry.snapshot {
            let hours = snapshot.cumulative_seconds / 3600.0;
            if hours <= 0.0 {
                log::warn!(
                    "{} (epoch {}): no elapsed training time, skipping its efficiency row",
                    entry.artifacts.algorithm,
                    snapshot.epoch
                );
                continue;
            }
            efficiency.push(EfficiencyRow {
                algorithm: entry.artifacts.algorithm.clone(),
                epoch: snapshot.epoch,
                hours,
                perf: entry.artifacts.report.perf,
                efficiency: entry.artifacts.report.perf / hours,
            });
        }
    }
    efficiency.sort_by(|a, b| {
        a.algorithm
            .cmp(&b.algorithm)
            .then(a.epoch.cmp(&b.epoch))
            .then(a.hours.total_cmp(&b.hours))
    });

    let mut nfl_rows: Vec<AntiNflRow> = Vec::new();
    for entry in entries.iter().filter(|e| e.is_train) {
        let algorithm = &entry.artifacts.algorithm;
        if nfl_rows.iter().any(|r| &r.algorithm == algorithm) {
            return Err(Error::Inconsistent(format!(
                "algorithm `{algorithm}` has two training-suite references"
            )));
        }
        let perf_tests: Vec<f64> = entries
            .iter()
            .filter(|e| !e.is_train && &e.artifacts.algorithm == algorithm)
            .map(|e| e.artifacts.report.perf)
            .collect();
        if perf_tests.is_empty() {
            return Err(Error::DegenerateIndicator(format!(
                "the robustness indicator pairs one algorithm's training-suite \
                 performance with its performance on held-out suites; `{algorithm}` \
                 has --train metadata but no --test metadata"
            )));
        }
        nfl_rows.push(AntiNflRow {
            algorithm: algorithm.clone(),
            perf_train: entry.artifacts.report.perf,
            test_suites: perf_tests.len(),
            value: anti_nfl(entry.artifacts.report.perf, &perf_tests)?,
        });
    }

    let artifacts: Vec<AlgorithmArtifacts> =
        entries.into_iter().map(|e| e.artifacts).collect();
    let written = emit_outputs(out_dir, &artifacts, &ranks, &efficiency, &nfl_rows)?;
    Ok(AnalyzeOutcome {
        message: format!(
            "analyzed {} metadata file(s): {} artifact(s) in {}{}",
            artifacts.len(),
            written.len(),
            out_dir.display(),
            if nfl_rows.is_empty() {
                String::new()
            } else {
                let parts: Vec<String> = nfl_rows
                    .iter()
                    .map(|r| format!("{} {:.4} (B={})", r.algorithm, r.value, r.test_suites))
                    .collect();
                format!("; robustness: {}", parts.join(", "))
            }
        ),
        written,
        anti_nfl: nfl_rows,
    })
}

/// Human-readable suite catalogue for the `list-suites` command.
pub fn list_suites() -> String {
    let mut out = String::from("suites usable as `suite.suite` in a config:\n");
    for kind in SUITE_KINDS {
        out.push_str(&format!(
            "  {:14} {:10} dim {:>2}, budget {:>5}, noise {:<5} — {}\n",
            kind.name,
            kind.problem_type.as_str(),
            kind.default_dim,
            kind.default_max_fes,
            kind.default_sigma,
            kind.description,
        ));
    }
    out.push_str(
        "config fields: suite, train, test (instance counts), and optional \
         name, dim, max_fes, seed, noise_sigma, families\n",
    );
    out
}

/// Human-readable agent catalogue for the `list-agents` command.
pub fn list_agents() -> String {
    let mut out = String::from("agents usable as `agent.kind` in a config:\n");
    for id in BaselineId::ALL {
        let what = match id {
            BaselineId::Rs => "uniform random sampling",
            BaselineId::De => "differential evolution, rand/1/bin, F=0.5, CR=0.9",
            BaselineId::Pso => "particle swarm, constriction coefficients",
            BaselineId::Shade => "success-history adaptive differential evolution",
        };
        out.push_str(&format!("  {:6} {what}\n", id.name()));
    }
    out.push_str("  rl     meta-policy trained by policy gradient; configures DE per generation\n");
    out.push_str("  ne     meta-policy trained by evolution strategies on the policy parameters\n");
    out.push_str(
        "`rl`/`ne` accept a `training` section in the config; `test` for them \
         needs --snapshot from a previous `train`\n",
    );
    out
}
