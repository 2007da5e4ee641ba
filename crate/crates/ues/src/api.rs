//! HTTP JSON API.

use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::{Arc, Mutex};

use axum::body::Bytes;
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use chrono::Utc;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use ues_core::evaluation::{ScoreReport, ScoreRow, DEFAULT_SIMULATIONS};
use ues_core::scene::AreaKind;
use ues_core::{Error as CoreError, InsightPayload, InterfaceKind, TaskSpec};

use crate::error::{Result, ServiceError};
use crate::pipeline::score_stored;
use crate::session::{Session, SessionState};
use crate::store::Store;

pub struct AppState {
    pub store: Store,
    session_locks: Mutex<HashMap<String, Arc<tokio::sync::Mutex<()>>>>,
}

impl AppState {
    pub fn new(store: Store) -> Arc<Self> {
        Arc::new(Self { store, session_locks: Mutex::new(HashMap::new()) })
    }

    fn session_lock(&self, id: &str) -> Arc<tokio::sync::Mutex<()>> {
        self.session_locks.lock().expect("lock table").entry(id.to_string()).or_default().clone()
    }
}

#[derive(Serialize)]
struct ErrorBody {
    code: &'static str,
    message: String,
}

impl IntoResponse for ServiceError {
    fn into_response(self) -> Response {
        let status = StatusCode::from_u16(self.status()).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
        (status, Json(ErrorBody { code: self.code(), message: self.to_string() })).into_response()
    }
}

fn parse_body<D: DeserializeOwned>(body: &Bytes) -> Result<D> {
    serde_json::from_slice(body).map_err(|e| ServiceError::BadRequest(format!("request body: {e}")))
}

pub fn router(state: Arc<AppState>, static_dir: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/api/scenes", get(list_scenes))
        .route("/api/scenes/{id}", get(get_scene))
        .route("/api/sessions", post(create_session))
        .route("/api/sessions/{id}", get(get_session))
        .route("/api/sessions/{id}/insight/{object_id}", get(get_insight).put(put_insight))
        .route("/api/sessions/{id}/submit", post(submit))
        .route("/api/simulate", post(simulate))
        .route("/api/reports", get(reports))
        .with_state(state);
    match static_dir {
        Some(dir) => api.fallback_service(tower_http::services::ServeDir::new(dir)),
        None => api,
    }
}

#[derive(Serialize)]
struct AreaSummary {
    id: String,
    kind: AreaKind,
}

#[derive(Serialize)]
struct SceneSummary {
    id: String,
    width: u32,
    height: u32,
    resolution: f64,
    waypoints: usize,
    areas: Vec<AreaSummary>,
}

async fn list_scenes(State(state): State<Arc<AppState>>) -> Result<Json<Vec<SceneSummary>>> {
    let mut out = Vec::new();
    for id in state.store.scene_ids()? {
        let loaded = state.store.scene(&id)?;
        let map = loaded.scene.map();
        out.push(SceneSummary {
            id,
            width: map.width,
            height: map.height,
            resolution: map.resolution,
            waypoints: loaded.scene.waypoints().len(),
            areas: loaded
                .scene
                .areas()
                .iter()
                .map(|a| AreaSummary { id: a.id.clone(), kind: a.kind })
                .collect(),
        });
    }
    Ok(Json(out))
}

async fn get_scene(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> Result<Json<serde_json::Value>> {
    Ok(Json(state.store.scene_document(&id)?))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NewSession {
    scene_id: String,
    interface: InterfaceKind,
    #[serde(default)]
    truth_id: Option<String>,
}

async fn create_session(State(state): State<Arc<AppState>>, body: Bytes) -> Result<(StatusCode, Json<Session>)> {
    let req: NewSession = parse_body(&body)?;
    state.store.scene(&req.scene_id)?;
    if let Some(t) = &req.truth_id {
        state.store.load_truth(t)?;
    }
    let session = Session::new(req.scene_id, req.interface, req.truth_id);
    state.store.save_session(&session)?;
    Ok((StatusCode::CREATED, Json(session)))
}

async fn get_session(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> Result<Json<Session>> {
    Ok(Json(state.store.load_session(&id)?))
}

async fn get_insight(
    State(state): State<Arc<AppState>>,
    Path((id, object_id)): Path<(String, String)>,
) -> Result<Json<InsightPayload>> {
    let session = state.store.load_session(&id)?;
    session
        .insight
        .get(&object_id)
        .cloned()
        .map(Json)
        .ok_or_else(|| ServiceError::not_found("insight", format!("{id}/{object_id}")))
}

async fn put_insight(
    State(state): State<Arc<AppState>>,
    Path((id, object_id)): Path<(String, String)>,
    body: Bytes,
) -> Result<Json<InsightPayload>> {
    let payload: InsightPayload = parse_body(&body)?;
    let lock = state.session_lock(&id);
    let _guard = lock.lock().await;
    let mut session = state.store.load_session(&id)?;
    if session.is_submitted() {
        return Err(ServiceError::Conflict(format!("session `{id}` is submitted and read-only")));
    }
    if payload.object_id != object_id {
        return Err(ServiceError::BadRequest(format!(
            "payload is for `{}`, not `{object_id}`",
            payload.object_id
        )));
    }
    if payload.interface != session.interface {
        return Err(ServiceError::BadRequest(format!(
            "session uses the {} interface, payload is {}",
            session.interface, payload.interface
        )));
    }
    let loaded = state.store.scene(&session.scene_id)?;
    let task = TaskSpec::umbrella_in_bag(&loaded.scene);
    if !task.objects().contains(&object_id.as_str()) {
        return Err(ServiceError::not_found("object", object_id));
    }
    // drafts may be empty; anything else that fails to compile is rejected
    match payload.compile::<f64>(&loaded.scene, &loaded.cells) {
        Ok(_) | Err(CoreError::EmptyInsight(_)) => {}
        Err(e) => return Err(e.into()),
    }
    session.insight.insert(object_id, payload.clone());
    state.store.save_session(&session)?;
    Ok(Json(payload))
}

async fn submit(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> Result<Json<Session>> {
    let lock = state.session_lock(&id);
    let _guard = lock.lock().await;
    let mut session = state.store.load_session(&id)?;
    if session.is_submitted() {
        return Err(ServiceError::Conflict(format!("session `{id}` was already submitted")));
    }
    session.state = SessionState::Submitted;
    session.submitted_at = Some(Utc::now());
    state.store.save_session(&session)?;
    Ok(Json(session))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SimulateRequest {
    session_id: String,
    #[serde(default)]
    truth_id: Option<String>,
    #[serde(default = "default_sims")]
    n_sims: usize,
    #[serde(default)]
    seed: u64,
}

fn default_sims() -> usize {
    DEFAULT_SIMULATIONS
}

async fn simulate(State(state): State<Arc<AppState>>, body: Bytes) -> Result<Json<ScoreRow>> {
    let req: SimulateRequest = parse_body(&body)?;
    let truth_id = match req.truth_id {
        Some(t) => t,
        None => state
            .store
            .load_session(&req.session_id)?
            .truth_id
            .ok_or_else(|| ServiceError::BadRequest("no truth_id given and the session has none".into()))?,
    };
    let row = tokio::task::spawn_blocking(move || {
        score_stored(&state.store, &req.session_id, &truth_id, req.n_sims, req.seed)
    })
    .await
    .map_err(|e| ServiceError::Store(std::io::Error::other(e)))??;
    Ok(Json(row))
}

async fn reports(State(state): State<Arc<AppState>>) -> Result<Json<ScoreReport>> {
    Ok(Json(crate::report::report(&state.store.reports()?)))
}
