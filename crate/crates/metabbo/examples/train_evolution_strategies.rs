//! Train a meta-policy with the evolution-strategies trainer (mirrored
//! perturbation sampling on the policy parameters), then save the best
//! snapshot and reload it bit for bit.
//!
//! ```sh
//! cargo run --release --example train_evolution_strategies
//! ```

use metabbo::agent::{load_snapshot, save_snapshot, train_ne, MetaPolicy, NeConfig};
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

    let config = NeConfig {
        generations: 10,
        population: 8,
        sigma: 0.1,
        learning_rate: 0.02,
        workers: 0,
        seed: 9,
        eval_seeds: 2,
    };

    let initial = MetaPolicy::seeded(config.seed);
    println!(
        "training on {} instances, {} generations × λ={}\n",
        train_set.len(),
        config.generations,
        config.population
    );
    let snapshots = train_ne(&initial, &train_set, &config, |snap| {
        println!(
            "generation {:>2}  train score {:>8.4}  ({:.1}s cumulative)",
            snap.epoch, snap.train_score, snap.cumulative_seconds
        );
        Ok(())
    })?;

    let best = snapshots
        .iter()
        .max_by(|a, b| a.train_score.total_cmp(&b.train_score))
        .expect("at least the initial snapshot");
    let dir = tempfile::tempdir().map_err(|e| metabbo::Error::io(std::env::temp_dir(), e))?;
    let path = save_snapshot(dir.path(), best)?;
    let reloaded = load_snapshot(&path)?;
    assert_eq!(reloaded.theta, best.theta);

    println!(
        "\nbest epoch {} (score {:.4}) saved to {} and reloaded: θ identical, {} parameters",
        best.epoch,
        best.train_score,
        path.display(),
        reloaded.theta.len()
    );
    Ok(())
}
