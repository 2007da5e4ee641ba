use thiserror::Error;

#[derive(Debug, Error)]
pub enum ServiceError {
    #[error("unknown {kind} `{id}`")]
    NotFound { kind: &'static str, id: String },
    #[error("{0}")]
    Conflict(String),
    #[error("{0}")]
    Precondition(String),
    #[error("{0}")]
    BadRequest(String),
    #[error(transparent)]
    Core(#[from] ues_core::Error),
    #[error("store unavailable: {0}")]
    Store(#[from] std::io::Error),
    #[error("corrupt store document {path}: {reason}")]
    Corrupt { path: String, reason: String },
}

pub type Result<T> = std::result::Result<T, ServiceError>;

impl ServiceError {
    pub fn not_found(kind: &'static str, id: impl Into<String>) -> Self {
        Self::NotFound { kind, id: id.into() }
    }

    /// Stable machine-readable code for the JSON error body.
    pub fn code(&self) -> &'static str {
        use ues_core::Error as E;
        match self {
            Self::NotFound { .. } => "not_found",
            Self::Conflict(_) => "conflict",
            Self::Precondition(_) => "precondition_failed",
            Self::BadRequest(_) => "bad_request",
            Self::Core(e) => match e {
                E::MalformedBundle(_) => "malformed_bundle",
                E::InvalidGeometry(_) => "invalid_geometry",
                E::DisconnectedGraph { .. } => "disconnected_graph",
                E::UnknownArea(_) => "unknown_area",
                E::UnknownWaypoint(_) => "unknown_waypoint",
                E::OutOfBounds { .. } => "out_of_bounds",
                E::EmptyInsight(_) => "empty_insight",
                E::InsightExhausted(_) => "insight_exhausted",
                E::InsufficientCandidates { .. } => "insufficient_candidates",
                E::InvalidInput(_) => "invalid_input",
            },
            Self::Store(_) => "store_unavailable",
            Self::Corrupt { .. } => "corrupt_store",
        }
    }

    pub fn status(&self) -> u16 {
        match self {
            Self::NotFound { .. } => 404,
            Self::Conflict(_) => 409,
            Self::Precondition(_) => 412,
            Self::BadRequest(_) => 400,
            Self::Core(_) => 422,
            Self::Store(_) | Self::Corrupt { .. } => 500,
        }
    }
}
