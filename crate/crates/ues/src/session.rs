use std::collections::BTreeMap;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use ues_core::{InsightPayload, InterfaceKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SessionState {
    Open,
    Submitted,
}

/// One participant's use of one interface. Immutable once submitted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Session {
    pub id: String,
    pub scene_id: String,
    pub interface: InterfaceKind,
    pub state: SessionState,
    pub created_at: DateTime<Utc>,
    #[serde(default)]
    pub submitted_at: Option<DateTime<Utc>>,
    /// Ground truth to score against when none is given explicitly.
    #[serde(default)]
    pub truth_id: Option<String>,
    /// Draft payload per object id.
    #[serde(default)]
    pub insight: BTreeMap<String, InsightPayload>,
}

impl Session {
    pub fn new(scene_id: impl Into<String>, interface: InterfaceKind, truth_id: Option<String>) -> Self {
        Self {
            id: uuid::Uuid::new_v4().simple().to_string(),
            scene_id: scene_id.into(),
            interface,
            state: SessionState::Open,
            created_at: Utc::now(),
            submitted_at: None,
            truth_id,
            insight: BTreeMap::new(),
        }
    }

    pub fn is_submitted(&self) -> bool {
        self.state == SessionState::Submitted
    }

    /// Seconds from open to submit, or `None` while open.
    pub fn duration_s(&self) -> Option<f64> {
        self.submitted_at
            .map(|t| (t - self.created_at).num_microseconds().unwrap_or(i64::MAX) as f64 / 1e6)
    }
}
