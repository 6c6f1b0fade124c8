//! Normalized performance: a bounded [0, 1] score per run, averaged up to
//! instance and suite level.
//!
//! Single-objective runs score by log-gap closure — how far, on a log10
//! scale, the run moved from its initial gap toward a resolution floor of
//! 1e-8. Bi-objective runs score by final hypervolume relative to the
//! reference box.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::metrics::hypervolume::hypervolume_2d;
use crate::metrics::metadata::{ObjectiveLog, SuiteMetadata};
use crate::problems::{Suite, SuiteProblem};
use crate::Result;

/// Gap resolution floor for the log-gap score.
pub const PERF_EPS: f64 = 1e-8;

/// Log-gap closure score of one single-objective run.
pub fn run_score_soo(y0: f64, y_final: f64, f_opt: f64) -> f64 {
    let gap0 = (y0 - f_opt).max(0.0) + PERF_EPS;
    let gap = (y_final - f_opt).max(0.0) + PERF_EPS;
    let denominator = gap0.log10() - PERF_EPS.log10();
    if denominator <= 0.0 {
        return 1.0; // started at (or below) the resolution floor: solved
    }
    ((gap0.log10() - gap.log10()) / denominator).clamp(0.0, 1.0)
}

/// Hypervolume-ratio score of one bi-objective run: final-generation front
/// hypervolume over the volume of the reference-to-ideal box.
pub fn run_score_moo(final_population: &[[f64; 2]], reference: [f64; 2], ideal: [f64; 2]) -> f64 {
    let box_volume = (reference[0] - ideal[0]) * (reference[1] - ideal[1]);
    if box_volume <= 0.0 {
        return 0.0;
    }
    (hypervolume_2d(final_population, reference) / box_volume).clamp(0.0, 1.0)
}

/// Per-instance summary: normalized score plus the raw final bests behind it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstancePerf {
    pub problem_id: String,
    /// Mean per-run normalized score, in [0, 1].
    pub score: f64,
    /// Raw final best per run (SOO: best objective; MOO: final hypervolume).
    pub final_bests: Vec<f64>,
    pub mean_final_best: f64,
    pub std_final_best: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerfReport {
    pub instances: Vec<InstancePerf>,
    /// Mean instance score: the suite-level normalized performance.
    pub perf: f64,
    /// Whether larger raw final bests are better (true for hypervolume).
    pub higher_is_better: bool,
}

fn soo_run_stats(y: &[Vec<f64>]) -> Option<(f64, f64)> {
    let mins: Vec<f64> = y
        .iter()
        .map(|gen| gen.iter().cloned().fold(f64::INFINITY, f64::min))
        .collect();
    let y0 = *mins.first()?;
    let best = mins.into_iter().fold(f64::INFINITY, f64::min);
    Some((y0, best))
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Score a whole metadata object against the suite that produced it.
/// Metadata records must match the suite's test instances one-to-one (same
/// ids, any order in the suite).
pub fn perf_score(md: &SuiteMetadata, suite: &Suite) -> Result<PerfReport> {
    md.validate()?;
    let higher_is_better = suite.problem_type.is_moo();
    let mut instances = Vec::with_capacity(md.all_data.len());
    for record in &md.all_data {
        let problem = suite.instance_by_id(&record.problem_id).ok_or_else(|| {
            Error::Inconsistent(format!(
                "metadata instance {} not present in suite {}",
                record.problem_id, suite.name
            ))
        })?;
        let mut scores = Vec::with_capacity(record.data.len());
        let mut final_bests = Vec::with_capacity(record.data.len());
        for (key, run) in &record.data {
            match (&run.y, problem) {
                (ObjectiveLog::Soo(y), SuiteProblem::Soo(p)) => {
                    let (y0, best) = soo_run_stats(y).ok_or_else(|| {
                        Error::Inconsistent(format!(
                            "{} {}: empty objective log",
                            record.problem_id, key
                        ))
                    })?;
                    scores.push(run_score_soo(y0, best, p.f_opt()));
                    final_bests.push(best);
                }
                (ObjectiveLog::Moo(y), SuiteProblem::Moo(p)) => {
                    let last = y.last().ok_or_else(|| {
                        Error::Inconsistent(format!(
                            "{} {}: empty objective log",
                            record.problem_id, key
                        ))
                    })?;
                    let hv = hypervolume_2d(last, p.reference_point());
                    scores.push(run_score_moo(last, p.reference_point(), p.ideal_point()));
                    final_bests.push(hv);
                }
                _ => {
                    return Err(Error::Inconsistent(format!(
                        "{} {}: objective log shape does not match the suite's problem type",
                        record.problem_id, key
                    )))
                }
            }
        }
        let (score, _) = mean_std(&scores);
        let (mean_final_best, std_final_best) = mean_std(&final_bests);
        instances.push(InstancePerf {
            problem_id: record.problem_id.clone(),
            score,
            final_bests,
            mean_final_best,
            std_final_best,
        });
    }
    if instances.is_empty() {
        return Err(Error::Inconsistent("metadata holds no instances".into()));
    }
    let perf = instances.iter().map(|i| i.score).sum::<f64>() / instances.len() as f64;
    Ok(PerfReport {
        instances,
        perf,
        higher_is_better,
    })
}
