//! Experiment runner, method recommender and rank statistics behind the
//! `ontodem` command.

pub mod experiment;
pub mod recommend;
pub mod stats;

pub use experiment::{
    run_experiment, run_one, summarize, write_metrics_csv, write_summary_csv, write_transitions, EnvKind,
    ExperimentError, ExperimentSpec, RunRecord, Scenario, SummaryRow, Variant,
};
pub use recommend::{recommend_methods, Preconditions, Recommendation, Technique, Thresholds, TriggerMetrics};
pub use stats::{mann_whitney_u, median, Alternative, MwuResult, StatsError, EXACT_LIMIT};
