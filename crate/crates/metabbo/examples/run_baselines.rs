//! Run the four classic optimizers on a small single-objective suite and
//! compare their final objective gaps.
//!
//! ```sh
//! cargo run --example run_baselines
//! ```

use metabbo::optimizers::{run_baseline, BaselineId};
use metabbo::problems::{build_suite, SuiteSpec};

fn main() -> metabbo::Result<()> {
    let spec = SuiteSpec {
        suite: "soo-10d".into(),
        train: 0,
        test: 5,
        dim: Some(10),
        max_fes: Some(10_000),
        seed: 42,
        ..SuiteSpec::default_soo_10d()
    };
    let suite = build_suite(&spec)?;

    println!(
        "{} optimizers × {} instances, {} evaluations each\n",
        BaselineId::ALL.len(),
        suite.len(),
        spec.max_fes.unwrap()
    );
    print!("{:<16}", "instance");
    for id in BaselineId::ALL {
        print!("{:>12}", id.name());
    }
    println!();

    for problem in &suite.instances {
        let f_opt = problem.as_soo().expect("SOO suite").f_opt();
        print!("{:<16}", problem.id());
        for id in BaselineId::ALL {
            let record = run_baseline(id, problem, 7)?;
            let gap = record.final_best.expect("SOO run has a best value") - f_opt;
            print!("{gap:>12.3e}");
        }
        println!();
    }
    println!("\n(entries are final best-minus-optimum; same run seed everywhere)");
    Ok(())
}
