//! Suite-level indicators derived from normalized performance: training
//! efficiency over wall-clock hours and robustness under problem shift.

use crate::agent::Snapshot;
use crate::error::Error;
use crate::metrics::metadata::SuiteMetadata;
use crate::metrics::perf::perf_score;
use crate::problems::Suite;
use crate::Result;

/// Robustness of performance when moving from the training suite to unseen
/// test suites: `exp(mean relative shift)`. 1.0 means no degradation; below
/// 1.0 the policy lost ground out of distribution.
pub fn anti_nfl(perf_train: f64, perf_tests: &[f64]) -> Result<f64> {
    if !(perf_train > 0.0) {
        return Err(Error::DegenerateIndicator(format!(
            "relative performance shift needs a positive training-suite \
             performance, got {perf_train}"
        )));
    }
    if perf_tests.is_empty() {
        return Err(Error::DegenerateIndicator(
            "no test-suite performances to compare against".into(),
        ));
    }
    let mean_shift = perf_tests
        .iter()
        .map(|p| (p - perf_train) / perf_train)
        .sum::<f64>()
        / perf_tests.len() as f64;
    Ok(mean_shift.exp())
}

/// Performance per training hour for each snapshot: `(epoch, perf / hours)`.
/// Snapshots and metadata must be aligned one-to-one; zero training time is
/// rejected (the snapshot written before the first epoch has no efficiency).
pub fn learning_efficiency(
    snapshots: &[Snapshot],
    md_per_snapshot: &[SuiteMetadata],
    suite: &Suite,
) -> Result<Vec<(usize, f64)>> {
    if snapshots.len() != md_per_snapshot.len() {
        return Err(Error::InvalidParameter(format!(
            "{} snapshots but {} metadata objects",
            snapshots.len(),
            md_per_snapshot.len()
        )));
    }
    let mut out = Vec::with_capacity(snapshots.len());
    for (snap, md) in snapshots.iter().zip(md_per_snapshot) {
        let hours = snap.hours();
        if !(hours > 0.0) {
            return Err(Error::DegenerateIndicator(format!(
                "snapshot {} has no elapsed training time",
                snap.epoch
            )));
        }
        let report = perf_score(md, suite)?;
        out.push((snap.epoch, report.perf / hours));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equal_train_and_test_performance_gives_one() {
        assert!((anti_nfl(0.7, &[0.7, 0.7, 0.7]).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn symmetric_deviations_cancel() {
        assert!((anti_nfl(0.5, &[0.4, 0.6]).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn halved_performance_gives_exp_minus_half() {
        let v = anti_nfl(0.5, &[0.25, 0.25]).unwrap();
        assert!((v - (-0.5f64).exp()).abs() < 1e-12, "got {v}");
        assert!((v - 0.60653).abs() < 1e-5);
    }

    #[test]
    fn indicator_is_scale_covariant() {
        let mut rng_state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            rng_state ^= rng_state << 13;
            rng_state ^= rng_state >> 7;
            rng_state ^= rng_state << 17;
            (rng_state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..100 {
            let train = 0.1 + next();
            let tests: Vec<f64> = (0..4).map(|_| 0.1 + next()).collect();
            let c = 0.5 + 3.0 * next();
            let base = anti_nfl(train, &tests).unwrap();
            let scaled_tests: Vec<f64> = tests.iter().map(|t| c * t).collect();
            let scaled = anti_nfl(c * train, &scaled_tests).unwrap();
            assert!((base - scaled).abs() < 1e-12 * base.max(1.0));
        }
    }

    #[test]
    fn zero_or_negative_training_performance_is_degenerate() {
        assert!(matches!(
            anti_nfl(0.0, &[0.5]),
            Err(Error::DegenerateIndicator(_))
        ));
        assert!(matches!(
            anti_nfl(-0.1, &[0.5]),
            Err(Error::DegenerateIndicator(_))
        ));
    }

    #[test]
    fn empty_test_list_is_degenerate() {
        assert!(matches!(
            anti_nfl(0.5, &[]),
            Err(Error::DegenerateIndicator(_))
        ));
    }

    fn tiny_suite_and_metadata() -> (Suite, SuiteMetadata) {
        use crate::optimizers::{run_baseline, BaselineId};
        use crate::problems::{build_suite, SuiteSpec};
        let spec = SuiteSpec {
            families: Some(vec!["sphere".into()]),
            max_fes: Some(600),
            train: 0,
            test: 2,
            ..SuiteSpec::default_soo_10d()
        };
        let suite = build_suite(&spec).unwrap();
        let records: Vec<Vec<_>> = suite
            .test_instances()
            .iter()
            .map(|p| {
                (0..2u64)
                    .map(|k| run_baseline(BaselineId::De, &p.fresh_for_run(k), k).unwrap())
                    .collect()
            })
            .collect();
        let md = SuiteMetadata::from_records(suite.problem_type, records);
        (suite, md)
    }

    #[test]
    fn efficiency_is_performance_divided_by_hours() {
        use crate::agent::MetaPolicy;
        let (suite, md) = tiny_suite_and_metadata();
        let theta = MetaPolicy::zeros().theta().to_vec();
        let snaps = vec![
            Snapshot::new(1, theta.clone(), 3600.0, 0.0),
            Snapshot::new(2, theta, 4.0 * 3600.0, 0.0),
        ];
        let perf = perf_score(&md, &suite).unwrap().perf;
        let eff = learning_efficiency(&snaps, &[md.clone(), md], &suite).unwrap();
        assert_eq!(eff.len(), 2);
        assert_eq!(eff[0].0, 1);
        assert!((eff[0].1 - perf / 1.0).abs() < 1e-12);
        assert!((eff[1].1 - perf / 4.0).abs() < 1e-12);
        // Constant performance with growing time decays strictly.
        assert!(eff[1].1 < eff[0].1);
    }

    #[test]
    fn zero_training_time_is_rejected() {
        use crate::agent::MetaPolicy;
        let (suite, md) = tiny_suite_and_metadata();
        let snaps = vec![Snapshot::new(0, MetaPolicy::zeros().theta().to_vec(), 0.0, 0.0)];
        assert!(matches!(
            learning_efficiency(&snaps, &[md], &suite),
            Err(Error::DegenerateIndicator(_))
        ));
    }

    #[test]
    fn misaligned_snapshot_and_metadata_lists_are_rejected() {
        use crate::agent::MetaPolicy;
        let (suite, md) = tiny_suite_and_metadata();
        let snaps = vec![Snapshot::new(1, MetaPolicy::zeros().theta().to_vec(), 10.0, 0.0)];
        assert!(matches!(
            learning_efficiency(&snaps, &[md.clone(), md], &suite),
            Err(Error::InvalidParameter(_))
        ));
    }
}
