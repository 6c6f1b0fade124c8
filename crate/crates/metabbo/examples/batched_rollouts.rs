//! Collect training episodes through the vectorized environment: one policy
//! forward pass drives a whole batch of instances per generation, and a
//! worker pool splits the objective evaluations. Results are identical with
//! and without workers.
//!
//! ```sh
//! cargo run --release --example batched_rollouts
//! ```

use std::time::Instant;

use metabbo::agent::{ActionMode, MetaPolicy};
use metabbo::parallel::{rollout_batch, WorkerPool};
use metabbo::problems::{build_suite, SuiteSpec};

fn main() -> metabbo::Result<()> {
    let spec = SuiteSpec {
        train: 4,
        test: 0,
        dim: Some(8),
        max_fes: Some(5_000),
        seed: 31,
        ..SuiteSpec::default_soo_10d()
    };
    let suite = build_suite(&spec)?;
    let policy = MetaPolicy::seeded(6);

    let tasks = || -> Vec<_> {
        suite
            .train_instances()
            .iter()
            .filter_map(|p| p.as_soo().cloned())
            .flat_map(|inst| (0..4u64).map(move |k| (inst.fresh_for_run(k), 1000 + k)))
            .collect()
    };
    let batch = tasks();
    println!("rolling out {} episodes (4 instances × 4 seeds, sampled actions)\n", batch.len());

    let start = Instant::now();
    let serial = rollout_batch(&policy, ActionMode::Sample, batch, None)?;
    let serial_s = start.elapsed().as_secs_f64();

    let pool = WorkerPool::new(4);
    let start = Instant::now();
    let pooled = rollout_batch(&policy, ActionMode::Sample, tasks(), Some(&pool))?;
    let pooled_s = start.elapsed().as_secs_f64();

    for (a, b) in serial.iter().zip(&pooled) {
        assert_eq!(a.ret, b.ret, "worker count must not change any episode");
    }

    println!("{:<22} {:>8.2}s", "serial", serial_s);
    println!("{:<22} {:>8.2}s", "4-worker pool", pooled_s);
    println!("\nper-episode returns (identical in both runs):");
    for t in &serial {
        println!("  {:<16} seed {:>5}  return {:>7.4}", t.problem_id, t.seed, t.ret);
    }
    Ok(())
}
