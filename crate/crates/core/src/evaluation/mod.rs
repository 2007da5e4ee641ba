//! Ground-truth generation, accuracy measures and Monte-Carlo plan scoring.

pub mod metrics;
pub mod scoring;
pub mod truth;

pub use metrics::{cosine_accuracy, dl_distance, rank_discrepancy};
pub use scoring::{
    aggregate_report, evaluate_insight, score_insight, score_insight_par, simulate_lengths, simulate_lengths_par,
    simulation_trace,
    InsightScores, InterfaceAggregate, ScoreReport, ScoreRow, Summary, DEFAULT_SIMULATIONS,
};
pub use truth::{gen_ground_truth, truth_ranking, GroundTruth, TruthEntry};
