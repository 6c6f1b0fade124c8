//! Run three optimizers through the same test plan, score each run log on a
//! normalized 0-to-1 scale, and build the cross-instance rank table.
//!
//! ```sh
//! cargo run --release --example score_and_rank
//! ```

use metabbo::agent::Agent;
use metabbo::metrics::{convergence_stats, perf_score, rank_table, SuiteMetadata};
use metabbo::optimizers::BaselineId;
use metabbo::parallel::{run_test_plan, TestPlan, TestPlanSpec};
use metabbo::problems::{build_suite, SuiteSpec};

fn main() -> metabbo::Result<()> {
    let spec = SuiteSpec {
        train: 0,
        test: 4,
        dim: Some(10),
        max_fes: Some(8_000),
        seed: 5,
        ..SuiteSpec::default_soo_10d()
    };
    let suite = build_suite(&spec)?;
    let problems = suite.test_instances();
    let plan = TestPlan::from_spec(&TestPlanSpec {
        mode: 4,
        runs: 7,
        workers: 2,
        base_seed: 1,
    })?;

    let mut reports = Vec::new();
    let mut metadata = Vec::new();
    for id in [BaselineId::Rs, BaselineId::De, BaselineId::Shade] {
        let outcome = run_test_plan(&Agent::Baseline(id), &problems, &plan)?;
        let md = SuiteMetadata::from_records(suite.problem_type, &outcome.records);
        let report = perf_score(&md, &suite)?;
        println!("{:<6} suite performance {:.4}", id.name(), report.perf);
        reports.push((id.name().to_string(), report));
        metadata.push((id, md));
    }

    let table = rank_table(&reports)?;
    println!("\nmean rank across {} instances (1 = best):", table.instance_ids.len());
    for row in &table.rows {
        let per_instance: Vec<String> =
            row.per_instance.iter().map(|r| format!("{r:.1}")).collect();
        println!(
            "  {:<6} average {:.2}  (per instance: {})",
            row.algorithm,
            row.average,
            per_instance.join(", ")
        );
    }

    let winner = &table.rows[0].algorithm;
    let winner_md = &metadata
        .iter()
        .find(|(id, _)| id.name() == winner)
        .expect("ranked algorithms came from this list")
        .1;
    let curves = convergence_stats(winner_md, &suite)?;
    let curve = &curves[0];
    println!("\nconvergence of `{winner}` on {} (median [q25, q75]):", curve.instance_id);
    let n = curve.rows.len();
    for row in curve.rows.iter().step_by((n / 6).max(1)) {
        println!(
            "  generation {:>3}  {:>12.4e}  [{:.4e}, {:.4e}]",
            row.generation, row.median, row.q25, row.q75
        );
    }
    Ok(())
}
