//! Train a meta-policy with the policy-gradient trainer on a small suite and
//! compare it against the fixed DE configuration it is meant to outgrow.
//!
//! ```sh
//! cargo run --release --example train_policy_gradient
//! ```

use metabbo::agent::{meta_objective, meta_objective_fixed, train_rl, MetaPolicy, RlConfig};
use metabbo::optimizers::DEFAULT_DE_DESIGN;
use metabbo::problems::{build_suite, SuiteSpec};

fn main() -> metabbo::Result<()> {
    let spec = SuiteSpec {
        train: 3,
        test: 0,
        dim: Some(5),
        max_fes: Some(4_000),
        seed: 11,
        ..SuiteSpec::default_soo_10d()
    };
    let suite = build_suite(&spec)?;
    let train_set = suite.train_instances();

    let config = RlConfig {
        epochs: 12,
        episodes_per_instance: 8,
        learning_rate: 0.03,
        batch_size: 16,
        workers: 0,
        seed: 2,
        eval_seeds: 2,
    };

    let initial = MetaPolicy::seeded(config.seed);
    println!("training on {} instances, {} epochs\n", train_set.len(), config.epochs);
    let snapshots = train_rl(&initial, &train_set, &config, |snap| {
        println!(
            "epoch {:>2}  train score {:>8.4}  ({:.1}s cumulative)",
            snap.epoch, snap.train_score, snap.cumulative_seconds
        );
        Ok(())
    })?;

    let best = snapshots
        .iter()
        .max_by(|a, b| a.train_score.total_cmp(&b.train_score))
        .expect("at least the initial snapshot");
    let eval_seeds: Vec<u64> = (100..110).collect();
    let fixed = meta_objective_fixed(&DEFAULT_DE_DESIGN, &train_set, &eval_seeds)?;
    let first = MetaPolicy::from_theta(snapshots.first().unwrap().theta.clone())?;
    let trained = MetaPolicy::from_theta(best.theta.clone())?;
    let before = meta_objective(&first, &train_set, &eval_seeds)?;
    let after = meta_objective(&trained, &train_set, &eval_seeds)?;

    println!("\nmean episode return on fresh seeds:");
    println!("  fixed DE (F=0.5, CR=0.9, rand/1/bin)  {fixed:.4}");
    println!("  policy before training                {before:.4}");
    println!("  policy at best epoch ({})              {after:.4}", best.epoch);
    Ok(())
}
