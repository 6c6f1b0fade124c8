//! Acceptance gate: end-to-end checks of the guarantees this crate makes,
//! one verdict line per criterion. Every check runs even if an earlier one
//! fails; the process exits nonzero if any criterion fails.
//!
//! ```sh
//! cargo test --test acceptance
//! ```

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use metabbo::agent::{
    episode, meta_objective, meta_objective_fixed, reinforce_gradient, train_ne, train_rl,
    ActionMode, Agent, MetaPolicy, NeConfig, RlConfig, SignalKind, SignalPayload, Snapshot,
    Trajectory,
};
use metabbo::agent::{episode_steps, wrap_signal};
use metabbo::metrics::{
    anti_nfl, hypervolume_2d, learning_efficiency, perf_score, SuiteMetadata,
};
use metabbo::optimizers::{run_baseline, BaselineId, RunObjectives, DEFAULT_DE_DESIGN};
use metabbo::parallel::{rollout_batch, run_test_plan, TestPlan, TestPlanSpec, WorkerPool};
use metabbo::problems::{build_suite, Family, ProblemInstance, SuiteProblem, SuiteSpec};
use metabbo::workflow::{cmd_test, PlanOverrides};

type Verdict = Result<String, String>;

fn main() {
    let criteria: &[(&str, fn() -> Verdict)] = &[
        ("metadata schema and byte round-trip", metadata_schema_and_round_trip),
        ("scheduling-mode invariance", scheduling_mode_invariance),
        ("parallel speedup", parallel_speedup),
        ("metric oracles", metric_oracles),
        ("optimizer sanity", optimizer_sanity),
        ("policy-gradient check", policy_gradient_check),
        ("meta-learning smoke test", meta_learning_smoke_test),
        ("protocol counts", protocol_counts),
        ("reward telescoping", reward_telescoping),
    ];

    let mut failed = 0;
    for (number, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|panic| {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into());
            Err(format!("panic: {msg}"))
        });
        let seconds = start.elapsed().as_secs_f64();
        match verdict {
            Ok(detail) => {
                println!("[{}/9] PASS {name} ({seconds:.1}s) — {detail}", number + 1);
            }
            Err(detail) => {
                failed += 1;
                println!("[{}/9] FAIL {name} ({seconds:.1}s) — {detail}", number + 1);
            }
        }
    }

    if failed > 0 {
        println!("acceptance: {failed} of 9 criteria failed");
        std::process::exit(1);
    }
    println!("acceptance: all 9 criteria passed");
}

fn err(context: &str, e: impl std::fmt::Display) -> String {
    format!("{context}: {e}")
}

/// Simple splitmix-style generator so oracle inputs don't depend on library
/// RNG choices.
struct Mix(u64);

impl Mix {
    fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

fn small_soo_spec(instances: usize, max_fes: usize, seed: u64) -> SuiteSpec {
    SuiteSpec {
        suite: "soo-10d".into(),
        name: None,
        dim: Some(10),
        max_fes: Some(max_fes),
        seed,
        train: 0,
        test: instances,
        noise_sigma: None,
        families: None,
    }
}

// --- 1: every emitted metadata file has the exact nested key structure and
// survives a parse → serialize cycle byte for byte -------------------------

fn metadata_schema_and_round_trip() -> Verdict {
    let dir = tempfile::tempdir().map_err(|e| err("tempdir", e))?;
    let config_path = dir.path().join("config.json");
    let config = serde_json::json!({
        "suite": {"suite": "soo-10d", "train": 0, "test": 3, "dim": 6, "max_fes": 2000, "seed": 3},
        "agent": {"kind": "de"},
        "plan": {"mode": 4, "runs": 4, "workers": 2, "base_seed": 5},
        "output_dir": dir.path().join("out").to_str().unwrap(),
    });
    std::fs::write(&config_path, serde_json::to_vec_pretty(&config).unwrap())
        .map_err(|e| err("write config", e))?;

    let outcome = cmd_test(&config_path, None, &PlanOverrides::default())
        .map_err(|e| err("test command", e))?;

    let disk_bytes = std::fs::read(&outcome.metadata_path).map_err(|e| err("read metadata", e))?;
    let value: serde_json::Value =
        serde_json::from_slice(&disk_bytes).map_err(|e| err("parse metadata", e))?;

    let exact_keys = |v: &serde_json::Value, want: &[&str], what: &str| -> Result<(), String> {
        let obj = v.as_object().ok_or_else(|| format!("{what} is not an object"))?;
        let got: Vec<&str> = obj.keys().map(|k| k.as_str()).collect();
        if got != want {
            return Err(format!("{what} keys {got:?}, expected {want:?}"));
        }
        Ok(())
    };

    exact_keys(&value, &["problem_type", "all_data"], "top level")?;
    let records = value["all_data"].as_array().ok_or("all_data is not an array")?;
    for record in records {
        exact_keys(record, &["problem_id", "data"], "record")?;
        let runs = record["data"].as_object().ok_or("data is not an object")?;
        for (k, (key, run)) in runs.iter().enumerate() {
            if key != &format!("run_{}", k + 1) {
                return Err(format!("run key {key:?} at position {k}"));
            }
            exact_keys(run, &["X", "Y", "T"], "run")?;
        }
    }

    let loaded = SuiteMetadata::load(&outcome.metadata_path).map_err(|e| err("load", e))?;
    loaded.validate().map_err(|e| err("validate", e))?;
    let round_trip = loaded.canonical_bytes().map_err(|e| err("serialize", e))?;
    if round_trip != disk_bytes {
        let at = round_trip
            .iter()
            .zip(&disk_bytes)
            .position(|(a, b)| a != b)
            .unwrap_or(round_trip.len().min(disk_bytes.len()));
        return Err(format!("round-trip differs from disk at byte {at}"));
    }

    Ok(format!(
        "{} records × {} runs, {} bytes identical after reload",
        records.len(),
        loaded.run_count(),
        disk_bytes.len()
    ))
}

// --- 2: the (mode, workers) grid changes scheduling only -------------------

fn scheduling_mode_invariance() -> Verdict {
    let suite = build_suite(&small_soo_spec(4, 3000, 21)).map_err(|e| err("suite", e))?;
    let problems = suite.test_instances();
    let agent = Agent::Baseline(BaselineId::De);

    let mut reference: Option<Vec<u8>> = None;
    let mut plans = 0;
    for mode in 1..=4u8 {
        for workers in [1usize, 8] {
            let plan = TestPlan::from_spec(&TestPlanSpec {
                mode,
                runs: 5,
                workers,
                base_seed: 2,
            })
            .map_err(|e| err("plan", e))?;
            let outcome = run_test_plan(&agent, &problems, &plan).map_err(|e| err("run", e))?;
            let md = SuiteMetadata::from_records(suite.problem_type, &outcome.records);
            let bytes = md.canonical_bytes_zero_t().map_err(|e| err("bytes", e))?;
            match &reference {
                None => reference = Some(bytes),
                Some(first) if *first != bytes => {
                    return Err(format!("mode {mode} with {workers} workers diverges"));
                }
                _ => {}
            }
            plans += 1;
        }
    }
    Ok(format!(
        "{plans} (mode, workers) combinations, identical bytes apart from timings"
    ))
}

// --- 3: more workers must buy proportional throughput ----------------------

fn parallel_speedup() -> Verdict {
    let suite = build_suite(&SuiteSpec::default_soo_10d()).map_err(|e| err("suite", e))?;
    let problems = suite.test_instances();
    let agent = Agent::Baseline(BaselineId::De);

    let measure_plan = |workers: usize| -> Result<f64, String> {
        let plan = TestPlan::from_spec(&TestPlanSpec {
            mode: 4,
            runs: 51,
            workers,
            base_seed: 9,
        })
        .map_err(|e| err("plan", e))?;
        let outcome = run_test_plan(&agent, &problems, &plan).map_err(|e| err("run", e))?;
        Ok(outcome.runs_per_sec())
    };

    let mut single = Vec::new();
    let mut pooled = Vec::new();
    for _ in 0..3 {
        single.push(measure_plan(1)?);
        pooled.push(measure_plan(8)?);
    }
    let plan_ratio = median(&mut pooled) / median(&mut single);

    let policy = MetaPolicy::seeded(3);
    let train_instances: Vec<ProblemInstance> = build_suite(&SuiteSpec::default_soo_10d())
        .map_err(|e| err("suite", e))?
        .train_instances()
        .iter()
        .filter_map(|p| p.as_soo().cloned())
        .collect();
    let tasks = || -> Vec<(ProblemInstance, u64)> {
        (0..16)
            .map(|k| {
                let inst = &train_instances[k % train_instances.len()];
                (inst.fresh_for_run(k as u64), 400 + k as u64)
            })
            .collect()
    };

    let pool = WorkerPool::new(8);
    let mut serial_eps = Vec::new();
    let mut batched_eps = Vec::new();
    for _ in 0..3 {
        let start = Instant::now();
        for (inst, seed) in tasks() {
            episode(&policy, &inst, seed, ActionMode::Sample).map_err(|e| err("episode", e))?;
        }
        serial_eps.push(16.0 / start.elapsed().as_secs_f64());

        let start = Instant::now();
        rollout_batch(&policy, ActionMode::Sample, tasks(), Some(&pool))
            .map_err(|e| err("rollout", e))?;
        batched_eps.push(16.0 / start.elapsed().as_secs_f64());
    }
    let training_ratio = median(&mut batched_eps) / median(&mut serial_eps);

    let detail = format!(
        "8-worker plan throughput {plan_ratio:.2}× single-worker (need ≥ 4), \
         batch-of-16 training throughput {training_ratio:.2}× serial (need ≥ 3)"
    );
    if plan_ratio >= 4.0 && training_ratio >= 3.0 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

// --- 4: closed-form metric implementations vs independent arithmetic -------

fn metric_oracles() -> Verdict {
    // Robustness indicator vs direct arithmetic.
    let mut rng = Mix(41);
    for case in 0..100 {
        let perf_train = rng.range(0.05, 1.0);
        let b = 1 + (rng.next_u64() % 8) as usize;
        let tests: Vec<f64> = (0..b).map(|_| rng.range(0.01, 1.0)).collect();
        let direct = (tests.iter().map(|t| (t - perf_train) / perf_train).sum::<f64>()
            / b as f64)
            .exp();
        let got = anti_nfl(perf_train, &tests).map_err(|e| err("anti_nfl", e))?;
        if (got - direct).abs() > 1e-12 {
            return Err(format!("robustness case {case}: {got} vs direct {direct}"));
        }
    }
    let halved = anti_nfl(0.5, &[0.25]).map_err(|e| err("anti_nfl", e))?;
    if (halved - (-0.5f64).exp()).abs() > 1e-12 {
        return Err(format!("exp(-1/2) case: {halved}"));
    }

    // Learning efficiency vs Perf/T computed by hand.
    let suite = build_suite(&small_soo_spec(2, 1500, 11)).map_err(|e| err("suite", e))?;
    let problems = suite.test_instances();
    let theta = MetaPolicy::seeded(1).theta().to_vec();
    let snapshots = vec![
        Snapshot::new(1, theta.clone(), 1800.0, 0.5),
        Snapshot::new(2, theta, 9000.0, 0.6),
    ];
    let mut mds = Vec::new();
    for offset in 0..2u64 {
        let plan = TestPlan::from_spec(&TestPlanSpec {
            mode: 4,
            runs: 2,
            workers: 1,
            base_seed: 4 + offset,
        })
        .map_err(|e| err("plan", e))?;
        let run = run_test_plan(&Agent::Baseline(BaselineId::Rs), &problems, &plan)
            .map_err(|e| err("run", e))?;
        mds.push(SuiteMetadata::from_records(suite.problem_type, &run.records));
    }
    let table = learning_efficiency(&snapshots, &mds, &suite).map_err(|e| err("efficiency", e))?;
    for ((snapshot, md), (epoch, efficiency)) in snapshots.iter().zip(&mds).zip(&table) {
        let perf = perf_score(md, &suite).map_err(|e| err("perf", e))?.perf;
        let by_hand = perf / snapshot.hours();
        if *epoch != snapshot.epoch || (efficiency - by_hand).abs() > 1e-12 {
            return Err(format!(
                "efficiency epoch {epoch}: {efficiency} vs Perf/T {by_hand}"
            ));
        }
    }

    // Hypervolume vs a 1000×1000 grid count over the reference box.
    let mut rng = Mix(1302);
    let mut max_error = 0.0f64;
    for case in 0..50 {
        let count = 1 + (rng.next_u64() % 20) as usize;
        let front: Vec<[f64; 2]> = (0..count)
            .map(|_| [rng.range(0.0, 1.0), rng.range(0.0, 1.0)])
            .collect();
        let reference = [1.0, 1.0];
        let exact = hypervolume_2d(&front, reference);

        let cells = 1000;
        let step = 1.0 / cells as f64;
        let mut dominated = 0u64;
        for i in 0..cells {
            let x = (i as f64 + 0.5) * step;
            for j in 0..cells {
                let y = (j as f64 + 0.5) * step;
                if front.iter().any(|p| p[0] <= x && p[1] <= y) {
                    dominated += 1;
                }
            }
        }
        let grid = dominated as f64 * step * step;
        let error = (exact - grid).abs();
        max_error = max_error.max(error);
        if error > 2e-3 {
            return Err(format!("hypervolume case {case}: |{exact} − {grid}| = {error:.2e}"));
        }
    }

    Ok(format!(
        "robustness ≤ 1e-12 on 100 cases incl. exp(−½); efficiency ≡ Perf/T; \
         hypervolume within {max_error:.1e} of the grid oracle on 50 fronts"
    ))
}

// --- 5: the classic optimizers actually optimize ---------------------------

fn optimizer_sanity() -> Verdict {
    let problem = ProblemInstance::new(Family::Sphere, 10, 77, 0.0, 20_000)
        .map_err(|e| err("problem", e))?;
    let suite_problem = SuiteProblem::Soo(problem);

    let median_gap = |id: BaselineId| -> Result<f64, String> {
        let mut gaps: Vec<f64> = (0..11u64)
            .map(|seed| {
                let record = run_baseline(id, &suite_problem, seed).map_err(|e| err("run", e))?;
                let f_opt = suite_problem.as_soo().unwrap().f_opt();
                Ok(record.final_best.expect("single-objective run") - f_opt)
            })
            .collect::<Result<_, String>>()?;
        Ok(median(&mut gaps))
    };

    let rs = median_gap(BaselineId::Rs)?;
    let de = median_gap(BaselineId::De)?;
    let pso = median_gap(BaselineId::Pso)?;
    let shade = median_gap(BaselineId::Shade)?;

    let detail = format!(
        "median final gaps over 11 seeds — rs {rs:.3e}, de {de:.3e}, pso {pso:.3e}, shade {shade:.3e}"
    );
    if shade <= 1e-2 * rs && de < rs && pso < rs {
        Ok(detail)
    } else {
        Err(detail)
    }
}

// --- 6: the analytic policy gradient matches finite differences ------------

fn policy_gradient_check() -> Verdict {
    let policy = MetaPolicy::seeded(15);
    let problem = ProblemInstance::new(Family::Rastrigin, 4, 5, 0.0, 2_100)
        .map_err(|e| err("problem", e))?;
    let trajectories: Vec<Trajectory> = (0..3u64)
        .map(|seed| {
            episode(&policy, &problem.fresh_for_run(seed), seed, ActionMode::Sample)
                .map(|(t, _)| t)
                .map_err(|e| err("episode", e))
        })
        .collect::<Result<_, String>>()?;

    let baseline: f64 =
        trajectories.iter().map(|t| t.ret).sum::<f64>() / trajectories.len() as f64;
    let surrogate = |candidate: &MetaPolicy| -> f64 {
        trajectories
            .iter()
            .map(|t| {
                let advantage = t.ret - baseline;
                advantage
                    * t.steps
                        .iter()
                        .map(|s| candidate.log_prob(&s.features, &s.action))
                        .sum::<f64>()
            })
            .sum::<f64>()
            / trajectories.len() as f64
    };

    let signal = wrap_signal(
        SignalKind::RlTrajectories,
        SignalPayload::Trajectories(trajectories.clone()),
    )
    .map_err(|e| err("signal", e))?;
    let grad = reinforce_gradient(&policy, &signal).map_err(|e| err("gradient", e))?;

    let mut rng = Mix(600);
    let h = 1e-5;
    let mut worst = 0.0f64;
    for probe in 0..64 {
        let mut direction: Vec<f64> = (0..grad.len())
            .map(|_| rng.range(-1.0, 1.0))
            .collect();
        let norm = direction.iter().map(|d| d * d).sum::<f64>().sqrt();
        direction.iter_mut().for_each(|d| *d /= norm);

        let analytic: f64 = grad.iter().zip(&direction).map(|(g, d)| g * d).sum();
        let plus = surrogate(&policy.perturbed(&direction, h));
        let minus = surrogate(&policy.perturbed(&direction, -h));
        let numeric = (plus - minus) / (2.0 * h);

        let relative = (analytic - numeric).abs() / analytic.abs().max(numeric.abs()).max(1e-9);
        worst = worst.max(relative);
        if relative >= 1e-4 {
            return Err(format!(
                "probe {probe}: analytic {analytic:.6e} vs numeric {numeric:.6e} (rel {relative:.2e})"
            ));
        }
    }
    Ok(format!("64 directional probes, worst relative error {worst:.2e}"))
}

// --- 7: twenty epochs of meta-training beat the fixed design ---------------

fn meta_learning_smoke_test() -> Verdict {
    let spec = SuiteSpec {
        suite: "soo-10d".into(),
        name: None,
        dim: Some(10),
        max_fes: Some(5_000),
        seed: 42,
        train: 8,
        test: 16,
        noise_sigma: None,
        families: Some(vec!["sphere".into(), "ellipsoid".into(), "rastrigin".into()]),
    };
    let suite = build_suite(&spec).map_err(|e| err("suite", e))?;
    let train_set = suite.train_instances();
    let held_out = suite.test_instances();

    let best_policy = |snapshots: &[Snapshot]| -> Result<MetaPolicy, String> {
        let best = snapshots
            .iter()
            .max_by(|a, b| a.train_score.total_cmp(&b.train_score))
            .ok_or("no snapshots")?;
        MetaPolicy::from_theta(best.theta.clone()).map_err(|e| err("theta", e))
    };

    let rl_config = RlConfig {
        epochs: 20,
        episodes_per_instance: 8,
        learning_rate: 0.03,
        batch_size: 16,
        workers: 0,
        seed: 7,
        eval_seeds: 2,
    };
    let rl_snapshots = train_rl(&MetaPolicy::seeded(7), &train_set, &rl_config, |_| Ok(()))
        .map_err(|e| err("policy-gradient training", e))?;
    let rl_policy = best_policy(&rl_snapshots)?;

    let ne_config = NeConfig {
        generations: 20,
        population: 16,
        sigma: 0.1,
        learning_rate: 0.02,
        workers: 0,
        seed: 7,
        eval_seeds: 2,
    };
    let ne_snapshots = train_ne(&MetaPolicy::seeded(7), &train_set, &ne_config, |_| Ok(()))
        .map_err(|e| err("evolution training", e))?;
    let ne_policy = best_policy(&ne_snapshots)?;

    let seeds: Vec<u64> = (0..5u64).map(|k| 9_000 + k).collect();

    // One-sided sign test: H0 "policy no better than fixed design", win
    // probability ½. p = P(wins ≥ observed | n untied instances).
    let sign_test = |label: &str, policy: &MetaPolicy| -> Result<String, String> {
        let mut wins = 0u32;
        let mut untied = 0u32;
        let mut policy_total = 0.0;
        let mut fixed_total = 0.0;
        for instance in &held_out {
            let single = std::slice::from_ref(instance);
            let p = meta_objective(policy, single, &seeds).map_err(|e| err("eval", e))?;
            let f = meta_objective_fixed(&DEFAULT_DE_DESIGN, single, &seeds)
                .map_err(|e| err("eval", e))?;
            policy_total += p;
            fixed_total += f;
            if p != f {
                untied += 1;
                if p > f {
                    wins += 1;
                }
            }
        }
        let p_value = binomial_tail(wins, untied);
        let mean_policy = policy_total / held_out.len() as f64;
        let mean_fixed = fixed_total / held_out.len() as f64;
        let detail = format!(
            "{label}: {wins}/{untied} wins (p = {p_value:.4}), \
             held-out return {mean_policy:.4} vs fixed {mean_fixed:.4}"
        );
        if p_value <= 0.05 && mean_policy >= mean_fixed {
            Ok(detail)
        } else {
            Err(detail)
        }
    };

    let rl_detail = sign_test("policy-gradient", &rl_policy)?;
    let ne_detail = sign_test("evolution", &ne_policy)?;
    Ok(format!("{rl_detail}; {ne_detail}"))
}

/// P(X ≥ wins) for X ~ Binomial(n, ½).
fn binomial_tail(wins: u32, n: u32) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut tail = 0u128;
    for k in wins..=n {
        tail += choose(n, k);
    }
    tail as f64 / (1u128 << n) as f64
}

fn choose(n: u32, k: u32) -> u128 {
    let k = k.min(n - k);
    let mut out = 1u128;
    for i in 0..k {
        out = out * (n - i) as u128 / (i + 1) as u128;
    }
    out
}

// --- 8: the default experiment's record counts ------------------------------

fn protocol_counts() -> Verdict {
    let suite = build_suite(&SuiteSpec::default_soo_10d()).map_err(|e| err("suite", e))?;
    let problems = suite.test_instances();
    let plan = TestPlan::from_spec(&TestPlanSpec::default()).map_err(|e| err("plan", e))?;
    let outcome =
        run_test_plan(&Agent::Baseline(BaselineId::Rs), &problems, &plan).map_err(|e| err("run", e))?;

    if outcome.records.len() != 16 {
        return Err(format!("{} test instances, expected 16", outcome.records.len()));
    }
    if outcome.records.iter().any(|runs| runs.len() != 51) {
        return Err("some instance did not get 51 runs".into());
    }
    if outcome.total_runs() != 816 {
        return Err(format!("{} records, expected 816", outcome.total_runs()));
    }
    let generation_counts: BTreeSet<usize> = outcome
        .records
        .iter()
        .flatten()
        .map(|record| record.generations())
        .collect();
    if generation_counts != BTreeSet::from([200]) {
        return Err(format!(
            "per-run generation counts {generation_counts:?}, expected exactly 200 (1 init + 199)"
        ));
    }
    if episode_steps(20_000) != 199 {
        return Err(format!("episode_steps(20000) = {}", episode_steps(20_000)));
    }
    Ok("16 instances × 51 runs = 816 records, each 199 post-init generations".into())
}

// --- 9: episode rewards telescope to the overall normalized progress -------

fn reward_telescoping() -> Verdict {
    let families = [
        Family::Sphere,
        Family::Ellipsoid,
        Family::Rastrigin,
        Family::Rosenbrock,
        Family::Schwefel,
    ];
    let mut rng = Mix(99);
    let mut worst = 0.0f64;
    for case in 0..200u64 {
        let family = families[(rng.next_u64() % families.len() as u64) as usize];
        let dim = 2 + (rng.next_u64() % 9) as usize;
        let budget = 600 + (rng.next_u64() % 2400) as usize;
        let problem = ProblemInstance::new(family, dim, rng.next_u64(), 0.0, budget)
            .map_err(|e| err("problem", e))?;
        let policy = MetaPolicy::seeded(case);
        let mode = if case % 2 == 0 { ActionMode::Greedy } else { ActionMode::Sample };

        let (trajectory, record) =
            episode(&policy, &problem, rng.next_u64(), mode).map_err(|e| err("episode", e))?;
        let y0 = match &record.y_log {
            RunObjectives::Soo(generations) => {
                generations[0].iter().copied().fold(f64::INFINITY, f64::min)
            }
            RunObjectives::Moo(_) => unreachable!("single-objective episode"),
        };
        let best = record.final_best.expect("single-objective episode");
        let progress = (y0 - best) / (y0 - problem.f_opt());
        let gap = (trajectory.sum_rewards() - progress).abs();
        worst = worst.max(gap);
        if gap >= 1e-10 {
            return Err(format!(
                "case {case} ({} {dim}d, budget {budget}): |Σr − progress| = {gap:.2e}",
                family.name()
            ));
        }
    }
    Ok(format!("200 random episodes, worst telescoping gap {worst:.1e}"))
}
