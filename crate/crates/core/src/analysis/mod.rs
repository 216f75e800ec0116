//! Representation robustness analyses.

pub mod corr;
pub mod rank;
pub mod summary;
pub mod timeseries;

pub use corr::{corpus_residuals, correlation_matrix, pearson, spearman, CorrMatrix};
pub use rank::{
    degree_ranking, degree_scores, filtered_hg_ranking, CardinalityFilter, DegreeWeight, FilterMode, RankEntry,
    RankTable,
};
pub use summary::{corpus_summary, summary_table, PlaySummary};
pub use timeseries::{prominence_timeseries, timeseries_table, ProminenceSample, ProminenceSeries, DEFAULT_WINDOW};
