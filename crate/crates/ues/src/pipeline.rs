//! Session scoring shared by the CLI and the HTTP service.

use std::collections::BTreeMap;

use ues_core::evaluation::{evaluate_insight, simulation_trace, ScoreRow};
use ues_core::planner::PlanTrace;
use ues_core::{Error, GroundTruth, Insight, TaskSpec};

use crate::error::{Result, ServiceError};
use crate::session::Session;
use crate::store::{report_key, LoadedScene, Store};

/// Compiles every task object's payload.
pub fn compile_insight(loaded: &LoadedScene, task: &TaskSpec, session: &Session) -> Result<BTreeMap<String, Insight>> {
    task.objects()
        .into_iter()
        .map(|object| {
            let payload = session
                .insight
                .get(object)
                .ok_or_else(|| Error::EmptyInsight(object.to_string()))?;
            Ok((object.to_string(), payload.compile(&loaded.scene, &loaded.cells)?))
        })
        .collect()
}

fn ensure_submitted(session: &Session) -> Result<()> {
    if session.is_submitted() {
        Ok(())
    } else {
        Err(ServiceError::Precondition(format!("session `{}` has not been submitted", session.id)))
    }
}

/// Scores a submitted session against a ground truth. Pure: touches no store.
pub fn score_session(
    loaded: &LoadedScene,
    session: &Session,
    truth: &GroundTruth,
    n_sims: usize,
    seed: u64,
) -> Result<ScoreRow> {
    ensure_submitted(session)?;
    if n_sims == 0 {
        return Err(Error::InvalidInput("number of simulations must be positive".into()).into());
    }
    let task = TaskSpec::umbrella_in_bag(&loaded.scene);
    let insights = compile_insight(loaded, &task, session)?;
    let scores = evaluate_insight(&loaded.scene, &task, &insights, truth, n_sims, seed)?;
    Ok(ScoreRow {
        session_id: session.id.clone(),
        interface: session.interface,
        mean_trace_length: scores.mean_trace_length,
        accuracy: scores.accuracy,
        rank_discrepancy: scores.rank_discrepancy,
        duration_s: session.duration_s().unwrap_or(0.0),
        n_sims,
        seed,
    })
}

/// Trace of one simulation of a scored session.
pub fn session_trace(loaded: &LoadedScene, session: &Session, truth: &GroundTruth, seed: u64, index: usize) -> Result<PlanTrace> {
    let task = TaskSpec::umbrella_in_bag(&loaded.scene);
    let insights = compile_insight(loaded, &task, session)?;
    Ok(simulation_trace(&loaded.scene, &task, &insights, truth, seed, index)?)
}

/// Scores a stored session, reusing a stored row for the same
/// session, truth, seed and simulation count.
pub fn score_stored(store: &Store, session_id: &str, truth_id: &str, n_sims: usize, seed: u64) -> Result<ScoreRow> {
    if n_sims == 0 {
        return Err(Error::InvalidInput("number of simulations must be positive".into()).into());
    }
    let session = store.load_session(session_id)?;
    let truth = store.load_truth(truth_id)?;
    ensure_submitted(&session)?;
    let key = report_key(session_id, truth_id, seed, n_sims);
    if let Some(row) = store.load_report(&key)? {
        return Ok(row);
    }
    let loaded = store.scene(&session.scene_id)?;
    let row = score_session(&loaded, &session, &truth, n_sims, seed)?;
    store.save_report(&key, &row)?;
    Ok(row)
}
