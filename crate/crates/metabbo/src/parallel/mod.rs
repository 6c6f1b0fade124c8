//! Parallel execution: a worker pool, vectorized episode environments, and
//! the four test-plan scheduling modes.
//!
//! Everything here is engineered around one guarantee: results are a pure
//! function of `(agent, problem, derived seed)`, so parallelism changes
//! wall-time and nothing else.

pub mod plan;
pub mod pool;
pub mod vec_env;

pub use plan::{
    check_seed_collisions, run_seed, run_test_plan, PlanMode, PlanRun, TestPlan, TestPlanSpec,
};
pub use pool::{TaskOutcome, WorkerPool};
pub use vec_env::{rollout_batch, Transition, VecEnv};
