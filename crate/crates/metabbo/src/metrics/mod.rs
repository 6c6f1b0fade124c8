//! Metadata records and the derived metrics: normalized performance,
//! learning efficiency, robustness under problem shift, hypervolume, rank
//! tables, and the CSV/JSON artifact writers.

pub mod emit;
pub mod hypervolume;
pub mod indicators;
pub mod metadata;
pub mod perf;
pub mod rank;

pub use emit::{
    convergence_stats, emit_outputs, quantile, AlgorithmArtifacts, AntiNflRow, ConvergenceCurve,
    ConvergenceRow, EfficiencyRow,
};
pub use hypervolume::hypervolume_2d;
pub use indicators::{anti_nfl, learning_efficiency};
pub use metadata::{
    get_metadata, metadata_filename, MetadataRecord, ObjectiveLog, RunData, SuiteMetadata,
};
pub use perf::{perf_score, run_score_moo, run_score_soo, InstancePerf, PerfReport, PERF_EPS};
pub use rank::{rank_table, RankRow, RankTable};
