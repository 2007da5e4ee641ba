//! Monte-Carlo plan-quality scoring and per-interface aggregation.
//!
//! Simulation `i` of a run seeded with `s` draws from its own ChaCha stream
//! `(s, i)`, so serial and parallel runs produce identical lengths.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::insight::payload::InterfaceKind;
use crate::insight::{belief_to_ranking, Insight};
use crate::planner::{belief_from_insight, execute_with_replan, ObjectBelief, PlanTrace, TaskSpec, WorldState};
use crate::scalar::Scalar;
use crate::scene::SceneBundle;

use super::metrics::{cosine_accuracy, rank_discrepancy};
use super::truth::GroundTruth;

pub const DEFAULT_SIMULATIONS: usize = 50;

fn sim_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

fn beliefs_for<T: Scalar>(task: &TaskSpec, insights: &BTreeMap<String, Insight<T>>) -> Result<BTreeMap<String, ObjectBelief>> {
    task.objects()
        .into_iter()
        .map(|object| {
            let insight = insights.get(object).ok_or_else(|| Error::EmptyInsight(object.to_string()))?;
            Ok((object.to_string(), belief_from_insight(insight)?))
        })
        .collect()
}

fn one_simulation<T: Scalar>(
    scene: &SceneBundle<T>,
    task: &TaskSpec,
    beliefs: &BTreeMap<String, ObjectBelief>,
    truth: &GroundTruth<T>,
    seed: u64,
    index: usize,
) -> Result<PlanTrace> {
    let mut rng = sim_rng(seed, index);
    let world = WorldState { object_locations: truth.sample_locations(&task.objects(), &mut rng)? };
    execute_with_replan(scene, task, beliefs, &world)
}

fn check_inputs<T: Scalar>(scene: &SceneBundle<T>, task: &TaskSpec, truth: &GroundTruth<T>, n_sims: usize) -> Result<()> {
    if n_sims == 0 {
        return Err(Error::InvalidInput("number of simulations must be positive".into()));
    }
    task.validate(scene)?;
    for object in task.objects() {
        super::truth::validate_entry(object, truth.entry(object)?)?;
    }
    truth.validate(scene)
}

/// Trace lengths of `n_sims` simulations, in simulation order.
pub fn simulate_lengths<T: Scalar>(
    scene: &SceneBundle<T>,
    task: &TaskSpec,
    insights: &BTreeMap<String, Insight<T>>,
    truth: &GroundTruth<T>,
    n_sims: usize,
    seed: u64,
) -> Result<Vec<usize>> {
    check_inputs(scene, task, truth, n_sims)?;
    let beliefs = beliefs_for(task, insights)?;
    (0..n_sims)
        .map(|i| one_simulation(scene, task, &beliefs, truth, seed, i).map(|t| t.length))
        .collect()
}

/// Same as [`simulate_lengths`], spread over the rayon pool.
pub fn simulate_lengths_par<T: Scalar>(
    scene: &SceneBundle<T>,
    task: &TaskSpec,
    insights: &BTreeMap<String, Insight<T>>,
    truth: &GroundTruth<T>,
    n_sims: usize,
    seed: u64,
) -> Result<Vec<usize>> {
    check_inputs(scene, task, truth, n_sims)?;
    let beliefs = beliefs_for(task, insights)?;
    (0..n_sims)
        .into_par_iter()
        .map(|i| one_simulation(scene, task, &beliefs, truth, seed, i).map(|t| t.length))
        .collect()
}

/// Full trace of simulation `index` of a run seeded with `seed`.
pub fn simulation_trace<T: Scalar>(
    scene: &SceneBundle<T>,
    task: &TaskSpec,
    insights: &BTreeMap<String, Insight<T>>,
    truth: &GroundTruth<T>,
    seed: u64,
    index: usize,
) -> Result<PlanTrace> {
    check_inputs(scene, task, truth, 1)?;
    let beliefs = beliefs_for(task, insights)?;
    one_simulation(scene, task, &beliefs, truth, seed, index)
}

fn mean_length(lengths: &[usize]) -> f64 {
    lengths.iter().map(|&l| l as u64).sum::<u64>() as f64 / lengths.len() as f64
}

/// Mean trace length over `n_sims` seeded simulations against worlds drawn
/// from `truth`.
pub fn score_insight<T: Scalar>(
    scene: &SceneBundle<T>,
    task: &TaskSpec,
    insights: &BTreeMap<String, Insight<T>>,
    truth: &GroundTruth<T>,
    n_sims: usize,
    seed: u64,
) -> Result<f64> {
    simulate_lengths(scene, task, insights, truth, n_sims, seed).map(|l| mean_length(&l))
}

pub fn score_insight_par<T: Scalar>(
    scene: &SceneBundle<T>,
    task: &TaskSpec,
    insights: &BTreeMap<String, Insight<T>>,
    truth: &GroundTruth<T>,
    n_sims: usize,
    seed: u64,
) -> Result<f64> {
    simulate_lengths_par(scene, task, insights, truth, n_sims, seed).map(|l| mean_length(&l))
}

/// All per-session metrics for one set of compiled insight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InsightScores {
    pub mean_trace_length: f64,
    /// Mean cosine accuracy over the task objects; `None` for rankings.
    pub accuracy: Option<f64>,
    /// Rank discrepancy summed over the task objects.
    pub rank_discrepancy: u64,
}

pub fn evaluate_insight<T: Scalar>(
    scene: &SceneBundle<T>,
    task: &TaskSpec,
    insights: &BTreeMap<String, Insight<T>>,
    truth: &GroundTruth<T>,
    n_sims: usize,
    seed: u64,
) -> Result<InsightScores> {
    let mean_trace_length = score_insight_par(scene, task, insights, truth, n_sims, seed)?;
    let mut accuracies = Vec::new();
    let mut rank_total = 0u64;
    for object in task.objects() {
        let entry = truth.entry(object)?;
        let insight = insights.get(object).ok_or_else(|| Error::EmptyInsight(object.to_string()))?;
        let ranking = match insight {
            Insight::Belief(b) => {
                accuracies.push(cosine_accuracy(b, entry, scene)?.to_f64_lossy());
                belief_to_ranking(b)?
            }
            Insight::Ranking(r) => r.clone(),
        };
        rank_total += rank_discrepancy(&ranking, entry)? as u64;
    }
    let accuracy = (accuracies.len() == task.objects().len())
        .then(|| accuracies.iter().sum::<f64>() / accuracies.len() as f64);
    Ok(InsightScores { mean_trace_length, accuracy, rank_discrepancy: rank_total })
}

/// One scored session.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreRow {
    pub session_id: String,
    pub interface: InterfaceKind,
    pub mean_trace_length: f64,
    pub accuracy: Option<f64>,
    pub rank_discrepancy: u64,
    pub duration_s: f64,
    pub n_sims: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mean: f64,
    /// Sample standard deviation; zero for a single value.
    pub sd: f64,
    pub n: usize,
}

impl Summary {
    pub fn of(values: &[f64]) -> Option<Self> {
        let n = values.len();
        if n == 0 {
            return None;
        }
        let mean = values.iter().sum::<f64>() / n as f64;
        let sd = if n < 2 {
            0.0
        } else {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
        };
        Some(Self { mean, sd, n })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterfaceAggregate {
    pub interface: InterfaceKind,
    pub sessions: usize,
    pub mean_trace_length: Summary,
    pub accuracy: Option<Summary>,
    pub rank_discrepancy: Summary,
    pub duration_s: Summary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreReport {
    pub rows: Vec<ScoreRow>,
    pub aggregates: Vec<InterfaceAggregate>,
}

/// Per-interface mean and sample SD of every metric; rows are kept as given.
pub fn aggregate_report(rows: &[ScoreRow]) -> ScoreReport {
    let mut by_interface: BTreeMap<InterfaceKind, Vec<&ScoreRow>> = BTreeMap::new();
    for row in rows {
        by_interface.entry(row.interface).or_default().push(row);
    }
    let aggregates = by_interface
        .into_iter()
        .map(|(interface, group)| {
            let col = |f: &dyn Fn(&ScoreRow) -> f64| group.iter().map(|r| f(r)).collect::<Vec<_>>();
            let accuracies: Vec<f64> = group.iter().filter_map(|r| r.accuracy).collect();
            InterfaceAggregate {
                interface,
                sessions: group.len(),
                mean_trace_length: Summary::of(&col(&|r| r.mean_trace_length)).expect("group is non-empty"),
                accuracy: Summary::of(&accuracies),
                rank_discrepancy: Summary::of(&col(&|r| r.rank_discrepancy as f64)).expect("group is non-empty"),
                duration_s: Summary::of(&col(&|r| r.duration_s)).expect("group is non-empty"),
            }
        })
        .collect();
    ScoreReport { rows: rows.to_vec(), aggregates }
}
