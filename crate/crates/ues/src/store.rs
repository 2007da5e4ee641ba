//! File-backed document store.
//!
//! ```text
//! <root>/scenes/<id>.json     scene bundles
//! <root>/sessions/<id>.json   elicitation sessions
//! <root>/truths/<id>.json     ground-truth distributions
//! <root>/reports/<key>.json   scored rows, keyed by session.truth.seed.n_sims
//! ```
//!
//! Every write goes to a temporary file in the target directory and is
//! renamed into place, so readers never see a partial document.

use std::collections::HashMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use serde::de::DeserializeOwned;
use serde::Serialize;
use ues_core::evaluation::ScoreRow;
use ues_core::{voronoi_assign, GroundTruth, Scene, VoronoiAssignment, STUDY_MAP_ID, STUDY_MAP_JSON};

use crate::error::{Result, ServiceError};
use crate::session::Session;

const DIRS: [&str; 4] = ["scenes", "sessions", "truths", "reports"];

/// A parsed scene with its pixel partition.
pub struct LoadedScene {
    pub scene: Scene,
    pub cells: VoronoiAssignment,
}

pub struct Store {
    root: PathBuf,
    scenes: Mutex<HashMap<String, Arc<LoadedScene>>>,
}

/// Ids double as file names: ASCII letters, digits, `-` and `_` only.
pub fn valid_id(id: &str) -> bool {
    !id.is_empty() && id.len() <= 128 && id.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'-' || b == b'_')
}

fn check_id(kind: &'static str, id: &str) -> Result<()> {
    if valid_id(id) {
        Ok(())
    } else {
        Err(ServiceError::not_found(kind, id))
    }
}

/// Atomically replaces `path` with `bytes`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = path.parent().unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

pub fn report_key(session_id: &str, truth_id: &str, seed: u64, n_sims: usize) -> String {
    format!("{session_id}.{truth_id}.{seed}.{n_sims}")
}

impl Store {
    /// Opens (creating if needed) a store and seeds the bundled study map.
    pub fn open(root: impl Into<PathBuf>) -> Result<Self> {
        let root = root.into();
        for d in DIRS {
            fs::create_dir_all(root.join(d))?;
        }
        let study = root.join("scenes").join(format!("{STUDY_MAP_ID}.json"));
        if !study.exists() {
            write_atomic(&study, STUDY_MAP_JSON.as_bytes())?;
        }
        Ok(Self { root, scenes: Mutex::new(HashMap::new()) })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    fn path(&self, dir: &str, id: &str) -> PathBuf {
        self.root.join(dir).join(format!("{id}.json"))
    }

    fn read_doc<D: DeserializeOwned>(&self, kind: &'static str, dir: &str, id: &str) -> Result<D> {
        check_id(kind, id)?;
        let path = self.path(dir, id);
        let bytes = match fs::read(&path) {
            Ok(b) => b,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Err(ServiceError::not_found(kind, id)),
            Err(e) => return Err(e.into()),
        };
        serde_json::from_slice(&bytes).map_err(|e| ServiceError::Corrupt {
            path: path.display().to_string(),
            reason: e.to_string(),
        })
    }

    fn write_doc<D: Serialize>(&self, dir: &str, id: &str, doc: &D) -> Result<()> {
        let mut bytes = serde_json::to_vec_pretty(doc).expect("documents serialize");
        bytes.push(b'\n');
        write_atomic(&self.path(dir, id), &bytes)?;
        Ok(())
    }

    /// Ids of the documents in `dir`, sorted.
    fn list(&self, dir: &str) -> Result<Vec<String>> {
        let mut ids: Vec<String> = fs::read_dir(self.root.join(dir))?
            .filter_map(|e| e.ok())
            .filter_map(|e| {
                let name = e.file_name().into_string().ok()?;
                let id = name.strip_suffix(".json")?;
                valid_id(id).then(|| id.to_string())
            })
            .collect();
        ids.sort();
        Ok(ids)
    }

    pub fn scene_ids(&self) -> Result<Vec<String>> {
        self.list("scenes")
    }

    /// The stored bundle document as written.
    pub fn scene_document(&self, id: &str) -> Result<serde_json::Value> {
        self.read_doc("scene", "scenes", id)
    }

    /// Parsed and partitioned scene, cached after first use.
    pub fn scene(&self, id: &str) -> Result<Arc<LoadedScene>> {
        if let Some(s) = self.scenes.lock().expect("scene cache").get(id) {
            return Ok(s.clone());
        }
        let doc = self.scene_document(id)?;
        let scene = Scene::from_json(doc.to_string().as_bytes())?;
        let cells = voronoi_assign(&scene);
        let loaded = Arc::new(LoadedScene { scene, cells });
        self.scenes.lock().expect("scene cache").insert(id.to_string(), loaded.clone());
        Ok(loaded)
    }

    /// Validates and stores a scene bundle.
    pub fn put_scene(&self, id: &str, bytes: &[u8]) -> Result<()> {
        if !valid_id(id) {
            return Err(ServiceError::BadRequest(format!("invalid scene id `{id}`")));
        }
        Scene::from_json(bytes)?;
        write_atomic(&self.path("scenes", id), bytes)?;
        self.scenes.lock().expect("scene cache").remove(id);
        Ok(())
    }

    pub fn session_ids(&self) -> Result<Vec<String>> {
        self.list("sessions")
    }

    pub fn load_session(&self, id: &str) -> Result<Session> {
        self.read_doc("session", "sessions", id)
    }

    pub fn save_session(&self, session: &Session) -> Result<()> {
        self.write_doc("sessions", &session.id, session)
    }

    pub fn load_truth(&self, id: &str) -> Result<GroundTruth> {
        check_id("truth", id)?;
        let path = self.path("truths", id);
        let bytes = match fs::read(&path) {
            Ok(b) => b,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Err(ServiceError::not_found("truth", id)),
            Err(e) => return Err(e.into()),
        };
        Ok(GroundTruth::from_json(&bytes)?)
    }

    pub fn save_truth(&self, id: &str, truth: &GroundTruth) -> Result<()> {
        if !valid_id(id) {
            return Err(ServiceError::BadRequest(format!("invalid truth id `{id}`")));
        }
        write_atomic(&self.path("truths", id), truth.to_json_pretty().as_bytes())?;
        Ok(())
    }

    pub fn load_report(&self, key: &str) -> Result<Option<ScoreRow>> {
        let path = self.root.join("reports").join(format!("{key}.json"));
        match fs::read(&path) {
            Ok(bytes) => serde_json::from_slice(&bytes).map(Some).map_err(|e| ServiceError::Corrupt {
                path: path.display().to_string(),
                reason: e.to_string(),
            }),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(e.into()),
        }
    }

    pub fn save_report(&self, key: &str, row: &ScoreRow) -> Result<()> {
        let path = self.root.join("reports").join(format!("{key}.json"));
        let bytes = serde_json::to_vec_pretty(row).expect("rows serialize");
        write_atomic(&path, &bytes)?;
        Ok(())
    }

    /// All stored rows, ordered by report key.
    pub fn reports(&self) -> Result<Vec<ScoreRow>> {
        let mut keys: Vec<String> = fs::read_dir(self.root.join("reports"))?
            .filter_map(|e| e.ok())
            .filter_map(|e| e.file_name().into_string().ok()?.strip_suffix(".json").map(str::to_string))
            .collect();
        keys.sort();
        let mut rows = Vec::new();
        for k in keys {
            if let Some(row) = self.load_report(&k)? {
                rows.push(row);
            }
        }
        Ok(rows)
    }
}
