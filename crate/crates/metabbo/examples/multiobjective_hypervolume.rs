//! Optimize bi-objective ZDT instances and track solution quality with the
//! hypervolume indicator: the area dominated by the non-dominated front,
//! measured against a fixed reference point.
//!
//! ```sh
//! cargo run --release --example multiobjective_hypervolume
//! ```

use metabbo::agent::Agent;
use metabbo::metrics::{hypervolume_2d, perf_score, SuiteMetadata};
use metabbo::optimizers::BaselineId;
use metabbo::parallel::{run_test_plan, TestPlan, TestPlanSpec};
use metabbo::problems::{build_suite, SuiteSpec};

fn main() -> metabbo::Result<()> {
    let front = [[0.0, 1.0], [0.25, 0.5], [0.75, 0.25], [1.0, 0.0]];
    println!(
        "hand-checkable case: 4-point front vs reference (2, 2) → HV = {}\n",
        hypervolume_2d(&front, [2.0, 2.0])
    );

    let spec = SuiteSpec {
        suite: "zdt".into(),
        train: 0,
        test: 3,
        dim: Some(10),
        max_fes: Some(4_000),
        seed: 8,
        ..SuiteSpec::default_soo_10d()
    };
    let suite = build_suite(&spec)?;
    let problems = suite.test_instances();
    let plan = TestPlan::from_spec(&TestPlanSpec {
        mode: 4,
        runs: 5,
        workers: 2,
        base_seed: 3,
    })?;

    let outcome = run_test_plan(&Agent::Baseline(BaselineId::Rs), &problems, &plan)?;
    let md = SuiteMetadata::from_records(suite.problem_type, &outcome.records);
    let report = perf_score(&md, &suite)?;

    println!("random search on {} ZDT instances × {} runs:", problems.len(), 5);
    for inst in &report.instances {
        let problem = suite
            .instance_by_id(&inst.problem_id)
            .and_then(|p| p.as_moo())
            .expect("MOO suite");
        println!(
            "  {:<10} reference {:?}  mean final HV {:.4}  normalized score {:.4}",
            inst.problem_id,
            problem.reference_point(),
            inst.mean_final_best,
            inst.score
        );
    }
    println!(
        "\nsuite performance {:.4} (share of the reference box each front dominates)",
        report.perf
    );
    Ok(())
}
