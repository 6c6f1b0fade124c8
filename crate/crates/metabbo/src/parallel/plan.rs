//! Test plans: run an agent K times on every instance of a suite, distributed
//! over a worker pool in one of four scheduling modes.
//!
//! The modes only change *what gets dispatched together*; every run's seed is
//! `hash64(base_seed, instance_index, run_index)`, so the recorded data is
//! identical across modes and worker counts — only wall-times differ.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::agent::Agent;
use crate::error::Error;
use crate::optimizers::RunRecord;
use crate::parallel::pool::WorkerPool;
use crate::problems::SuiteProblem;
use crate::seed::hash_seeds;
use crate::Result;

/// How tasks are grouped for dispatch.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlanMode {
    /// Instances in groups of `workers`; within a group, one run per instance
    /// at a time.
    InstanceBatches = 1,
    /// One instance at a time; its runs fan out over the pool.
    RunsWithinInstance = 2,
    /// All instances fan out; each task executes its instance's runs serially.
    InstancesSerialRuns = 3,
    /// The full instance × run grid fans out as independent tasks.
    FullGrid = 4,
}

impl PlanMode {
    pub fn from_number(mode: u8) -> Result<PlanMode> {
        match mode {
            1 => Ok(PlanMode::InstanceBatches),
            2 => Ok(PlanMode::RunsWithinInstance),
            3 => Ok(PlanMode::InstancesSerialRuns),
            4 => Ok(PlanMode::FullGrid),
            other => Err(Error::InvalidParameter(format!(
                "test-plan mode must be 1–4, got {other}"
            ))),
        }
    }

    pub fn number(&self) -> u8 {
        *self as u8
    }
}

/// On-disk plan description.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TestPlanSpec {
    #[serde(default = "default_mode")]
    pub mode: u8,
    #[serde(default = "default_runs")]
    pub runs: usize,
    #[serde(default = "default_workers")]
    pub workers: usize,
    #[serde(default = "default_base_seed")]
    pub base_seed: u64,
}

fn default_mode() -> u8 {
    4
}
fn default_runs() -> usize {
    51
}
fn default_workers() -> usize {
    8
}
fn default_base_seed() -> u64 {
    2025
}

impl Default for TestPlanSpec {
    fn default() -> Self {
        TestPlanSpec {
            mode: default_mode(),
            runs: default_runs(),
            workers: default_workers(),
            base_seed: default_base_seed(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct TestPlan {
    pub mode: PlanMode,
    pub runs: usize,
    pub workers: usize,
    pub base_seed: u64,
}

impl TestPlan {
    pub fn from_spec(spec: &TestPlanSpec) -> Result<TestPlan> {
        if spec.runs == 0 {
            return Err(Error::InvalidParameter(
                "test plan needs at least one run per instance".into(),
            ));
        }
        if spec.workers == 0 {
            return Err(Error::InvalidParameter(
                "test plan needs at least one worker".into(),
            ));
        }
        Ok(TestPlan {
            mode: PlanMode::from_number(spec.mode)?,
            runs: spec.runs,
            workers: spec.workers,
            base_seed: spec.base_seed,
        })
    }
}

/// Seed of run `k` on instance `i` — independent of mode and worker count.
pub fn run_seed(base_seed: u64, instance: usize, run: usize) -> u64 {
    hash_seeds(&[base_seed, instance as u64, run as u64])
}

/// Verify all `instances × runs` derived seeds are pairwise distinct.
pub fn check_seed_collisions(base_seed: u64, instances: usize, runs: usize) -> Result<()> {
    let mut seen: HashMap<u64, (usize, usize)> = HashMap::with_capacity(instances * runs);
    for i in 0..instances {
        for k in 0..runs {
            let seed = run_seed(base_seed, i, k);
            if let Some(&(i0, k0)) = seen.get(&seed) {
                return Err(Error::SeedCollision {
                    i0,
                    k0,
                    i1: i,
                    k1: k,
                });
            }
            seen.insert(seed, (i, k));
        }
    }
    Ok(())
}

/// Everything a finished plan produces: records in canonical
/// `[instance][run]` order plus the coordinator's wall-clock time.
#[derive(Debug)]
pub struct PlanRun {
    pub records: Vec<Vec<RunRecord>>,
    pub wall_time_s: f64,
}

impl PlanRun {
    pub fn total_runs(&self) -> usize {
        self.records.iter().map(|r| r.len()).sum()
    }

    pub fn runs_per_sec(&self) -> f64 {
        self.total_runs() as f64 / self.wall_time_s.max(1e-9)
    }
}

/// A dispatchable unit: one instance and the run indices to execute serially.
#[derive(Clone)]
struct Task {
    instance: usize,
    runs: Vec<usize>,
}

fn dispatch_waves(mode: PlanMode, n_instances: usize, runs: usize, workers: usize) -> Vec<Vec<Task>> {
    let all_instances: Vec<usize> = (0..n_instances).collect();
    match mode {
        PlanMode::InstanceBatches => {
            let mut waves = Vec::new();
            for chunk in all_instances.chunks(workers.max(1)) {
                for k in 0..runs {
                    waves.push(
                        chunk
                            .iter()
                            .map(|&i| Task {
                                instance: i,
                                runs: vec![k],
                            })
                            .collect(),
                    );
                }
            }
            waves
        }
        PlanMode::RunsWithinInstance => all_instances
            .iter()
            .map(|&i| {
                (0..runs)
                    .map(|k| Task {
                        instance: i,
                        runs: vec![k],
                    })
                    .collect()
            })
            .collect(),
        PlanMode::InstancesSerialRuns => vec![all_instances
            .iter()
            .map(|&i| Task {
                instance: i,
                runs: (0..runs).collect(),
            })
            .collect()],
        PlanMode::FullGrid => vec![all_instances
            .iter()
            .flat_map(|&i| {
                (0..runs).map(move |k| Task {
                    instance: i,
                    runs: vec![k],
                })
            })
            .collect()],
    }
}

fn execute_task(
    agent: &Agent,
    problems: &[SuiteProblem],
    base_seed: u64,
    task: &Task,
) -> std::result::Result<Vec<(usize, RunRecord)>, (usize, String)> {
    let problem = &problems[task.instance];
    let mut out = Vec::with_capacity(task.runs.len());
    for &k in &task.runs {
        let seed = run_seed(base_seed, task.instance, k);
        let fresh = problem.fresh_for_run(seed);
        match agent.run(&fresh, seed) {
            Ok(record) => out.push((k, record)),
            Err(e) => return Err((k, e.to_string())),
        }
    }
    Ok(out)
}

/// Run the plan. Results are aggregated in canonical `(instance, run)` order
/// regardless of completion order; a failed task is retried once with the
/// same derived seed before the plan aborts naming the failing `(i, k)`.
pub fn run_test_plan(agent: &Agent, problems: &[SuiteProblem], plan: &TestPlan) -> Result<PlanRun> {
    if problems.is_empty() {
        return Err(Error::InvalidParameter("test plan has no instances".into()));
    }
    check_seed_collisions(plan.base_seed, problems.len(), plan.runs)?;

    let start = std::time::Instant::now();
    let pool = WorkerPool::new(plan.workers);
    let mut records: Vec<Vec<Option<RunRecord>>> = problems
        .iter()
        .map(|_| (0..plan.runs).map(|_| None).collect())
        .collect();

    let agent = std::sync::Arc::new(agent.clone());
    let problems_shared = std::sync::Arc::new(problems.to_vec());
    let base_seed = plan.base_seed;

    for wave in dispatch_waves(plan.mode, problems.len(), plan.runs, plan.workers) {
        let outcomes = {
            let agent = std::sync::Arc::clone(&agent);
            let problems = std::sync::Arc::clone(&problems_shared);
            pool.run_batch(wave.clone(), move |task| {
                execute_task(&agent, &problems, base_seed, &task)
            })
        };
        for (task, outcome) in wave.into_iter().zip(outcomes) {
            let retried = match outcome {
                Ok(Ok(done)) => Ok(done),
                // Either an in-task error or a panic: retry once, same seeds,
                // on the coordinator.
                Ok(Err(_)) | Err(_) => {
                    execute_task(&agent, &problems_shared, base_seed, &task).map_err(
                        |(k, message)| Error::TaskFailure {
                            instance: problems_shared[task.instance].id().to_string(),
                            run: k + 1,
                            message,
                        },
                    )
                }
            };
            for (k, record) in retried? {
                records[task.instance][k] = Some(record);
            }
        }
    }

    let records: Vec<Vec<RunRecord>> = records
        .into_iter()
        .map(|runs| runs.into_iter().map(|r| r.expect("every (i,k) dispatched")).collect())
        .collect();
    Ok(PlanRun {
        records,
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optimizers::BaselineId;
    use crate::problems::{build_suite, SuiteSpec};

    fn tiny_suite() -> Vec<SuiteProblem> {
        let spec: SuiteSpec = serde_json::from_str(
            r#"{"suite":"soo-10d","dim":10,"max_fes":1000,"seed":3,"train":0,"test":4}"#,
        )
        .unwrap();
        build_suite(&spec).unwrap().test_instances()
    }

    fn plan(mode: u8, runs: usize, workers: usize) -> TestPlan {
        TestPlan::from_spec(&TestPlanSpec {
            mode,
            runs,
            workers,
            base_seed: 2025,
        })
        .unwrap()
    }

    #[test]
    fn spec_json_matches_the_documented_shape() {
        let spec: TestPlanSpec =
            serde_json::from_str(r#"{"mode": 4, "runs": 51, "workers": 8, "base_seed": 2025}"#)
                .unwrap();
        assert_eq!(spec, TestPlanSpec::default());
        // Range validation happens at plan construction, not JSON parse time.
        assert!(serde_json::from_str::<TestPlanSpec>(r#"{"mode": 9}"#).is_ok());
        assert!(TestPlan::from_spec(&TestPlanSpec { mode: 9, ..Default::default() }).is_err());
        assert!(serde_json::from_str::<TestPlanSpec>(r#"{"modes": 4}"#).is_err());
    }

    #[test]
    fn all_modes_produce_identical_data() {
        let problems = tiny_suite();
        let agent = Agent::Baseline(BaselineId::De);
        let reference = run_test_plan(&agent, &problems, &plan(1, 3, 2)).unwrap();
        for mode in [2u8, 3, 4] {
            let other = run_test_plan(&agent, &problems, &plan(mode, 3, 2)).unwrap();
            for (a_runs, b_runs) in reference.records.iter().zip(&other.records) {
                for (a, b) in a_runs.iter().zip(b_runs) {
                    assert_eq!(a.x_log, b.x_log, "mode {mode} diverged");
                    assert_eq!(a.seed, b.seed);
                }
            }
        }
    }

    #[test]
    fn worker_count_does_not_change_data() {
        let problems = tiny_suite();
        let agent = Agent::Baseline(BaselineId::Shade);
        let one = run_test_plan(&agent, &problems, &plan(4, 2, 1)).unwrap();
        let eight = run_test_plan(&agent, &problems, &plan(4, 2, 8)).unwrap();
        for (a_runs, b_runs) in one.records.iter().zip(&eight.records) {
            for (a, b) in a_runs.iter().zip(b_runs) {
                assert_eq!(a.x_log, b.x_log);
            }
        }
    }

    #[test]
    fn task_counts_match_the_grid() {
        let problems = tiny_suite();
        let agent = Agent::Baseline(BaselineId::Rs);
        let out = run_test_plan(&agent, &problems, &plan(3, 5, 4)).unwrap();
        assert_eq!(out.records.len(), 4);
        assert_eq!(out.total_runs(), 20);
        assert!(out.runs_per_sec() > 0.0);
    }

    #[test]
    fn seeds_are_mode_independent_and_collision_checked() {
        assert_eq!(run_seed(2025, 3, 7), run_seed(2025, 3, 7));
        assert_ne!(run_seed(2025, 3, 7), run_seed(2025, 7, 3));
        check_seed_collisions(2025, 16, 51).unwrap();
        check_seed_collisions(42, 100, 100).unwrap();
    }

    #[test]
    fn moo_with_unsupported_agent_fails_after_retry_naming_the_run() {
        use crate::problems::{MooInstance, ZdtVariant};
        let problems = vec![SuiteProblem::Moo(
            MooInstance::new(ZdtVariant::Zdt1, 30, 1_000).unwrap(),
        )];
        let agent = Agent::Baseline(BaselineId::De);
        let err = run_test_plan(&agent, &problems, &plan(4, 2, 2)).unwrap_err();
        match err {
            Error::TaskFailure { run, .. } => assert_eq!(run, 1),
            other => panic!("expected task failure, got {other:?}"),
        }
    }
}
