//! The complete experiment pipeline driven by config files, exactly as the
//! `metabbo` binary runs it: train a policy, evaluate it on its own suite and
//! on a freshly seeded held-out suite, then post-process everything into
//! performance, rank, efficiency, and robustness tables.
//!
//! ```sh
//! cargo run --release --example full_workflow
//! ```

use std::fs;
use std::path::Path;

use metabbo::workflow::{cmd_analyze, cmd_test, cmd_train, PlanOverrides};

fn write_config(path: &Path, contents: serde_json::Value) -> metabbo::Result<()> {
    fs::write(path, serde_json::to_vec_pretty(&contents).expect("static JSON"))
        .map_err(|e| metabbo::Error::io(path, e))
}

fn main() -> metabbo::Result<()> {
    let dir = tempfile::tempdir().map_err(|e| metabbo::Error::io(std::env::temp_dir(), e))?;
    let root = dir.path();
    let out = root.join("out");
    let out_str = out.to_str().expect("utf-8 temp path");

    let suite = serde_json::json!({
        "suite": "soo-10d", "train": 2, "test": 2,
        "dim": 5, "max_fes": 3000, "seed": 7
    });
    let holdout = serde_json::json!({
        "suite": "soo-10d", "name": "soo-10d-holdout", "train": 0, "test": 3,
        "dim": 5, "max_fes": 3000, "seed": 1234
    });
    let plan = serde_json::json!({"mode": 4, "runs": 5, "workers": 2, "base_seed": 99});

    let train_cfg = root.join("train.json");
    write_config(
        &train_cfg,
        serde_json::json!({
            "suite": suite,
            "agent": {"kind": "ne", "training": {"generations": 3, "population": 6, "seed": 4}},
            "plan": plan,
            "output_dir": out_str,
        }),
    )?;
    let holdout_cfg = root.join("test_holdout.json");
    write_config(
        &holdout_cfg,
        serde_json::json!({
            "suite": holdout,
            "agent": {"kind": "ne", "training": {"generations": 3, "population": 6, "seed": 4}},
            "plan": plan,
            "output_dir": out_str,
        }),
    )?;

    let trained = cmd_train(&train_cfg)?;
    println!("{}", trained.message);
    let snapshot = trained.snapshot_paths.last().expect("training saves snapshots");

    let no_overrides = PlanOverrides::default();
    let on_suite = cmd_test(&train_cfg, Some(snapshot), &no_overrides)?;
    println!("{}", on_suite.message);
    let held_out = cmd_test(&holdout_cfg, Some(snapshot), &no_overrides)?;
    println!("{}", held_out.message);

    let tables = root.join("tables");
    let analyzed = cmd_analyze(
        &[on_suite.metadata_path.clone()],
        &[held_out.metadata_path.clone()],
        &tables,
    )?;
    println!("{}\n", analyzed.message);

    println!("analysis artifacts:");
    let mut names: Vec<String> = fs::read_dir(&tables)
        .map_err(|e| metabbo::Error::io(&tables, e))?
        .filter_map(|entry| Some(entry.ok()?.file_name().to_string_lossy().into_owned()))
        .collect();
    names.sort();
    for name in names {
        println!("  {name}");
    }
    Ok(())
}
