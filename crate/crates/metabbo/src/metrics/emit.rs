//! Analysis artifacts on disk: CSV tables (performance, rank, efficiency,
//! robustness) and per-instance convergence curves, plus re-emission of the
//! validated metadata JSON. Every file is written atomically.

use std::path::{Path, PathBuf};

use crate::fsio;
use crate::metrics::hypervolume::hypervolume_2d;
use crate::metrics::metadata::{metadata_filename, ObjectiveLog, SuiteMetadata};
use crate::metrics::perf::PerfReport;
use crate::metrics::rank::RankTable;
use crate::problems::{Suite, SuiteProblem};
use crate::error::Error;
use crate::Result;

/// Linear-interpolation quantile of an unsorted sample (the convention used
/// by numpy's default): `p` in [0, 1].
pub fn quantile(values: &[f64], p: f64) -> f64 {
    debug_assert!(!values.is_empty());
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite samples"));
    let h = (sorted.len() - 1) as f64 * p.clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    let frac = h - lo as f64;
    if lo + 1 < sorted.len() {
        sorted[lo] + frac * (sorted[lo + 1] - sorted[lo])
    } else {
        sorted[lo]
    }
}

/// One generation's spread over the K runs of an instance.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceRow {
    pub generation: usize,
    pub median: f64,
    pub q25: f64,
    pub q75: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceCurve {
    pub instance_id: String,
    pub rows: Vec<ConvergenceRow>,
}

/// Per-generation progress statistic of one run: best-so-far objective for
/// single-objective logs, per-generation hypervolume for bi-objective ones.
fn progress_series(y: &ObjectiveLog, problem: &SuiteProblem) -> Result<Vec<f64>> {
    match (y, problem) {
        (ObjectiveLog::Soo(gens), SuiteProblem::Soo(_)) => {
            let mut best = f64::INFINITY;
            Ok(gens
                .iter()
                .map(|gen| {
                    best = gen.iter().cloned().fold(best, f64::min);
                    best
                })
                .collect())
        }
        (ObjectiveLog::Moo(gens), SuiteProblem::Moo(p)) => Ok(gens
            .iter()
            .map(|gen| hypervolume_2d(gen, p.reference_point()))
            .collect()),
        _ => Err(Error::Inconsistent(
            "objective log shape does not match the suite's problem type".into(),
        )),
    }
}

/// Median and quartiles of the progress statistic across runs, per
/// generation, for every instance in the metadata.
pub fn convergence_stats(md: &SuiteMetadata, suite: &Suite) -> Result<Vec<ConvergenceCurve>> {
    let mut curves = Vec::with_capacity(md.all_data.len());
    for record in &md.all_data {
        let problem = suite.instance_by_id(&record.problem_id).ok_or_else(|| {
            Error::Inconsistent(format!(
                "metadata instance {} not present in suite {}",
                record.problem_id, suite.name
            ))
        })?;
        let series: Vec<Vec<f64>> = record
            .data
            .values()
            .map(|run| progress_series(&run.y, problem))
            .collect::<Result<_>>()?;
        let generations = series.iter().map(Vec::len).min().unwrap_or(0);
        let rows = (0..generations)
            .map(|g| {
                let sample: Vec<f64> = series.iter().map(|s| s[g]).collect();
                ConvergenceRow {
                    generation: g,
                    median: quantile(&sample, 0.5),
                    q25: quantile(&sample, 0.25),
                    q75: quantile(&sample, 0.75),
                }
            })
            .collect();
        curves.push(ConvergenceCurve {
            instance_id: record.problem_id.clone(),
            rows,
        });
    }
    Ok(curves)
}

fn csv_field(raw: &str) -> String {
    if raw.contains([',', '"', '\n']) {
        format!("\"{}\"", raw.replace('"', "\"\""))
    } else {
        raw.to_string()
    }
}

fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut text = header.join(",");
    text.push('\n');
    for row in rows {
        let escaped: Vec<String> = row.iter().map(|f| csv_field(f)).collect();
        text.push_str(&escaped.join(","));
        text.push('\n');
    }
    fsio::write_atomic(path, text.as_bytes())
}

/// Inputs for one (algorithm, suite) pair in an analysis.
#[derive(Clone, Debug)]
pub struct AlgorithmArtifacts {
    pub algorithm: String,
    pub suite_name: String,
    pub metadata: SuiteMetadata,
    pub report: PerfReport,
    pub convergence: Vec<ConvergenceCurve>,
}

/// One efficiency-curve point: performance per training hour at a snapshot.
#[derive(Clone, Debug, PartialEq)]
pub struct EfficiencyRow {
    pub algorithm: String,
    pub epoch: usize,
    pub hours: f64,
    pub perf: f64,
    pub efficiency: f64,
}

/// One robustness value: performance shift from the training suite to
/// `test_suites` unseen suites.
#[derive(Clone, Debug, PartialEq)]
pub struct AntiNflRow {
    pub algorithm: String,
    pub perf_train: f64,
    pub test_suites: usize,
    pub value: f64,
}

/// Write every analysis artifact into `destination` and return the paths:
/// validated metadata JSON, `perf.csv` + `perf_instances.csv`, rank tables
/// (`rank.csv` for a single suite, `rank_<suite>.csv` each when several
/// suites are ranked), `efficiency.csv` / `anti_nfl.csv` (when rows exist),
/// and one `convergence_<algorithm>_<suite>.csv` per entry.
pub fn emit_outputs(
    destination: &Path,
    entries: &[AlgorithmArtifacts],
    ranks: &[(String, RankTable)],
    efficiency: &[EfficiencyRow],
    anti_nfl: &[AntiNflRow],
) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(destination)
        .map_err(|e| Error::io(destination.display().to_string(), e))?;
    let mut written = Vec::new();

    for entry in entries {
        let md_path = destination.join(metadata_filename(&entry.algorithm, &entry.suite_name));
        entry.metadata.save(&md_path)?;
        written.push(md_path);

        let conv_path = destination.join(format!(
            "convergence_{}_{}.csv",
            entry.algorithm, entry.suite_name
        ));
        let rows: Vec<Vec<String>> = entry
            .convergence
            .iter()
            .flat_map(|curve| {
                curve.rows.iter().map(|r| {
                    vec![
                        curve.instance_id.clone(),
                        r.generation.to_string(),
                        r.median.to_string(),
                        r.q25.to_string(),
                        r.q75.to_string(),
                    ]
                })
            })
            .collect();
        write_csv(
            &conv_path,
            &["instance_id", "generation", "median", "q25", "q75"],
            &rows,
        )?;
        written.push(conv_path);
    }

    let perf_path = destination.join("perf.csv");
    let perf_rows: Vec<Vec<String>> = entries
        .iter()
        .map(|e| {
            vec![
                e.algorithm.clone(),
                e.suite_name.clone(),
                e.report.perf.to_string(),
                e.report.instances.len().to_string(),
                e.metadata.run_count().to_string(),
            ]
        })
        .collect();
    write_csv(
        &perf_path,
        &["algorithm", "suite", "perf", "instances", "runs"],
        &perf_rows,
    )?;
    written.push(perf_path);

    let inst_path = destination.join("perf_instances.csv");
    let inst_rows: Vec<Vec<String>> = entries
        .iter()
        .flat_map(|e| {
            e.report.instances.iter().map(|i| {
                vec![
                    e.algorithm.clone(),
                    e.suite_name.clone(),
                    i.problem_id.clone(),
                    i.score.to_string(),
                    i.mean_final_best.to_string(),
                    i.std_final_best.to_string(),
                    i.final_bests.len().to_string(),
                ]
            })
        })
        .collect();
    write_csv(
        &inst_path,
        &[
            "algorithm",
            "suite",
            "problem_id",
            "score",
            "mean_final_best",
            "std_final_best",
            "runs",
        ],
        &inst_rows,
    )?;
    written.push(inst_path);

    for (suite_name, table) in ranks {
        let rank_path = if ranks.len() == 1 {
            destination.join("rank.csv")
        } else {
            destination.join(format!("rank_{suite_name}.csv"))
        };
        let mut header = vec!["algorithm".to_string(), "average".to_string()];
        header.extend(table.instance_ids.iter().cloned());
        let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
        let rows: Vec<Vec<String>> = table
            .rows
            .iter()
            .map(|row| {
                let mut out = vec![row.algorithm.clone(), row.average.to_string()];
                out.extend(row.per_instance.iter().map(f64::to_string));
                out
            })
            .collect();
        write_csv(&rank_path, &header_refs, &rows)?;
        written.push(rank_path);
    }

    if !efficiency.is_empty() {
        let eff_path = destination.join("efficiency.csv");
        let rows: Vec<Vec<String>> = efficiency
            .iter()
            .map(|r| {
                vec![
                    r.algorithm.clone(),
                    r.epoch.to_string(),
                    r.hours.to_string(),
                    r.perf.to_string(),
                    r.efficiency.to_string(),
                ]
            })
            .collect();
        write_csv(
            &eff_path,
            &["algorithm", "epoch", "hours", "perf", "efficiency"],
            &rows,
        )?;
        written.push(eff_path);
    }

    if !anti_nfl.is_empty() {
        let nfl_path = destination.join("anti_nfl.csv");
        let rows: Vec<Vec<String>> = anti_nfl
            .iter()
            .map(|r| {
                vec![
                    r.algorithm.clone(),
                    r.perf_train.to_string(),
                    r.test_suites.to_string(),
                    r.value.to_string(),
                ]
            })
            .collect();
        write_csv(
            &nfl_path,
            &["algorithm", "perf_train", "test_suites", "anti_nfl"],
            &rows,
        )?;
        written.push(nfl_path);
    }

    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::metadata::{MetadataRecord, RunData};
    use crate::metrics::perf::perf_score;
    use crate::metrics::rank::rank_table;
    use crate::problems::{build_suite, SuiteSpec};
    use indexmap::IndexMap;

    #[test]
    fn quantiles_interpolate_linearly() {
        let sample = [3.0, 1.0, 4.0, 2.0];
        assert_eq!(quantile(&sample, 0.25), 1.75);
        assert_eq!(quantile(&sample, 0.5), 2.5);
        assert_eq!(quantile(&sample, 0.75), 3.25);
        assert_eq!(quantile(&sample, 0.0), 1.0);
        assert_eq!(quantile(&sample, 1.0), 4.0);
        assert_eq!(quantile(&[7.0], 0.5), 7.0);
    }

    fn soo_run(y_gens: Vec<Vec<f64>>) -> RunData {
        let x: Vec<Vec<Vec<f64>>> = y_gens
            .iter()
            .map(|gen| gen.iter().map(|_| vec![0.0; 10]).collect())
            .collect();
        RunData {
            x,
            y: ObjectiveLog::Soo(y_gens),
            t: 0.0,
        }
    }

    fn tiny_suite() -> Suite {
        let spec = SuiteSpec {
            families: Some(vec!["sphere".into()]),
            max_fes: Some(600),
            train: 0,
            test: 1,
            ..SuiteSpec::default_soo_10d()
        };
        build_suite(&spec).unwrap()
    }

    #[test]
    fn convergence_uses_best_so_far_across_runs() {
        let suite = tiny_suite();
        let id = suite.test_instances()[0].id().to_string();
        let mut data = IndexMap::new();
        // Run 1 improves 9 → 3 → 3 (best-so-far keeps the 3).
        data.insert("run_1".into(), soo_run(vec![vec![9.0], vec![3.0], vec![5.0]]));
        // Run 2 improves 7 → 7 → 1.
        data.insert("run_2".into(), soo_run(vec![vec![7.0], vec![8.0], vec![1.0]]));
        let md = SuiteMetadata {
            problem_type: "SOO".into(),
            all_data: vec![MetadataRecord {
                problem_id: id.clone(),
                data,
            }],
        };
        let curves = convergence_stats(&md, &suite).unwrap();
        assert_eq!(curves.len(), 1);
        assert_eq!(curves[0].instance_id, id);
        let medians: Vec<f64> = curves[0].rows.iter().map(|r| r.median).collect();
        assert_eq!(medians, [8.0, 5.0, 2.0]);
        // q25 interpolates between the two runs.
        assert_eq!(curves[0].rows[2].q25, 1.5);
        assert_eq!(curves[0].rows[2].q75, 2.5);
        // Generations are 0-based and complete.
        assert_eq!(
            curves[0].rows.iter().map(|r| r.generation).collect::<Vec<_>>(),
            [0, 1, 2]
        );
    }

    #[test]
    fn csv_fields_with_commas_are_quoted() {
        assert_eq!(csv_field("plain"), "plain");
        assert_eq!(csv_field("a,b"), "\"a,b\"");
        assert_eq!(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
    }

    fn analysis_entry(algorithm: &str) -> (AlgorithmArtifacts, Suite) {
        use crate::optimizers::{run_baseline, BaselineId};
        let suite = tiny_suite();
        let optimizer = if algorithm == "de" {
            BaselineId::De
        } else {
            BaselineId::Rs
        };
        let records: Vec<Vec<_>> = suite
            .test_instances()
            .iter()
            .map(|p| {
                (0..3u64)
                    .map(|k| run_baseline(optimizer, &p.fresh_for_run(k), k).unwrap())
                    .collect()
            })
            .collect();
        let md = SuiteMetadata::from_records(suite.problem_type, records);
        let report = perf_score(&md, &suite).unwrap();
        let convergence = convergence_stats(&md, &suite).unwrap();
        (
            AlgorithmArtifacts {
                algorithm: algorithm.to_string(),
                suite_name: suite.name.clone(),
                metadata: md,
                report,
                convergence,
            },
            suite,
        )
    }

    #[test]
    fn emit_outputs_writes_the_full_artifact_set() {
        let dir = tempfile::tempdir().unwrap();
        let (de, _) = analysis_entry("de");
        let (rs, _) = analysis_entry("rs");
        let table = rank_table(&[
            ("de".into(), de.report.clone()),
            ("rs".into(), rs.report.clone()),
        ])
        .unwrap();
        let eff = [EfficiencyRow {
            algorithm: "de".into(),
            epoch: 3,
            hours: 0.5,
            perf: 0.6,
            efficiency: 1.2,
        }];
        let nfl = [AntiNflRow {
            algorithm: "de".into(),
            perf_train: 0.5,
            test_suites: 2,
            value: 1.0,
        }];
        let written = emit_outputs(
            dir.path(),
            &[de.clone(), rs],
            &[("soo-10d".to_string(), table)],
            &eff,
            &nfl,
        )
        .unwrap();
        let names: Vec<String> = written
            .iter()
            .map(|p| p.file_name().unwrap().to_string_lossy().into_owned())
            .collect();
        for expected in [
            "metadata_de_soo-10d.json",
            "convergence_de_soo-10d.csv",
            "metadata_rs_soo-10d.json",
            "convergence_rs_soo-10d.csv",
            "perf.csv",
            "perf_instances.csv",
            "rank.csv",
            "efficiency.csv",
            "anti_nfl.csv",
        ] {
            assert!(names.contains(&expected.to_string()), "missing {expected}");
        }

        // Rank CSV: header plus one row per algorithm.
        let rank_text = std::fs::read_to_string(dir.path().join("rank.csv")).unwrap();
        let lines: Vec<&str> = rank_text.lines().collect();
        assert_eq!(lines.len(), 1 + 2);
        assert!(lines[0].starts_with("algorithm,average,"));

        // Re-emitted metadata is the canonical byte form.
        let loaded = SuiteMetadata::load(&dir.path().join("metadata_de_soo-10d.json")).unwrap();
        assert_eq!(loaded, de.metadata);

        // Convergence CSV rows: one per (instance, generation).
        let conv_text =
            std::fs::read_to_string(dir.path().join("convergence_de_soo-10d.csv")).unwrap();
        let expected_rows: usize = de.convergence.iter().map(|c| c.rows.len()).sum();
        assert_eq!(conv_text.lines().count(), 1 + expected_rows);
        assert_eq!(
            conv_text.lines().next().unwrap(),
            "instance_id,generation,median,q25,q75"
        );
    }

    #[test]
    fn optional_tables_are_skipped_when_absent() {
        let dir = tempfile::tempdir().unwrap();
        let (de, _) = analysis_entry("de");
        emit_outputs(dir.path(), &[de], &[], &[], &[]).unwrap();
        assert!(!dir.path().join("rank.csv").exists());
        assert!(!dir.path().join("efficiency.csv").exists());
        assert!(!dir.path().join("anti_nfl.csv").exists());
        assert!(dir.path().join("perf.csv").exists());
    }
}
