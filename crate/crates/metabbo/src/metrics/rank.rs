//! Cross-algorithm rank tables: per-instance ranks of mean final bests with
//! tie-sharing, averaged into one rank per algorithm.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::metrics::perf::PerfReport;
use crate::Result;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankRow {
    pub algorithm: String,
    /// Rank on each instance, aligned with [`RankTable::instance_ids`].
    pub per_instance: Vec<f64>,
    pub average: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankTable {
    pub instance_ids: Vec<String>,
    /// Sorted by average rank; equal averages fall back to algorithm name so
    /// the presentation order is deterministic.
    pub rows: Vec<RankRow>,
}

/// Tie-shared 1-based ranks of `values`, smaller-is-better unless flipped.
fn shared_ranks(values: &[f64], higher_is_better: bool) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| {
        let cmp = values[a].partial_cmp(&values[b]).expect("finite values");
        if higher_is_better {
            cmp.reverse()
        } else {
            cmp
        }
    });
    let mut ranks = vec![0.0; values.len()];
    let mut pos = 0;
    while pos < order.len() {
        let mut end = pos + 1;
        while end < order.len() && values[order[end]] == values[order[pos]] {
            end += 1;
        }
        // Positions pos..end (0-based) tie: share the mean 1-based rank.
        let shared = (pos + 1 + end) as f64 / 2.0;
        for &idx in &order[pos..end] {
            ranks[idx] = shared;
        }
        pos = end;
    }
    ranks
}

/// Rank every algorithm on every instance by mean final best and average the
/// ranks. All reports must cover the same instances (any order) and agree on
/// the ranking direction.
pub fn rank_table(reports: &[(String, PerfReport)]) -> Result<RankTable> {
    let Some((_, first)) = reports.first() else {
        return Err(Error::InvalidParameter(
            "rank table needs at least one algorithm".into(),
        ));
    };
    let instance_ids: Vec<String> = first
        .instances
        .iter()
        .map(|i| i.problem_id.clone())
        .collect();
    let higher_is_better = first.higher_is_better;

    let mut names = std::collections::HashSet::new();
    // means[a][i]: algorithm a's mean final best on instance i.
    let mut means = Vec::with_capacity(reports.len());
    for (name, report) in reports {
        if !names.insert(name.as_str()) {
            return Err(Error::InvalidParameter(format!(
                "algorithm {name} appears twice in the rank table"
            )));
        }
        if report.higher_is_better != higher_is_better {
            return Err(Error::Inconsistent(format!(
                "{name}: mixed ranking directions (single- and multi-objective \
                 reports cannot share a rank table)"
            )));
        }
        let mut row = Vec::with_capacity(instance_ids.len());
        for id in &instance_ids {
            let inst = report
                .instances
                .iter()
                .find(|i| &i.problem_id == id)
                .ok_or_else(|| {
                    Error::Inconsistent(format!("{name} was not evaluated on instance {id}"))
                })?;
            row.push(inst.mean_final_best);
        }
        if report.instances.len() != instance_ids.len() {
            return Err(Error::Inconsistent(format!(
                "{name} covers {} instances, expected {}",
                report.instances.len(),
                instance_ids.len()
            )));
        }
        means.push(row);
    }

    let mut per_algorithm: Vec<Vec<f64>> = vec![Vec::with_capacity(instance_ids.len()); reports.len()];
    for i in 0..instance_ids.len() {
        let column: Vec<f64> = means.iter().map(|row| row[i]).collect();
        for (a, rank) in shared_ranks(&column, higher_is_better).into_iter().enumerate() {
            per_algorithm[a].push(rank);
        }
    }

    let mut rows: Vec<RankRow> = reports
        .iter()
        .zip(per_algorithm)
        .map(|((name, _), per_instance)| {
            let average = per_instance.iter().sum::<f64>() / per_instance.len() as f64;
            RankRow {
                algorithm: name.clone(),
                per_instance,
                average,
            }
        })
        .collect();
    rows.sort_by(|a, b| {
        a.average
            .partial_cmp(&b.average)
            .expect("finite averages")
            .then_with(|| a.algorithm.cmp(&b.algorithm))
    });
    Ok(RankTable { instance_ids, rows })
}
