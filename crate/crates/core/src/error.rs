use thiserror::Error;

/// Errors raised by scene loading, insight compilation, planning and scoring.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("malformed scene bundle: {0}")]
    MalformedBundle(String),

    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("navigation graph is disconnected ({components} components)")]
    DisconnectedGraph { components: usize },

    #[error("unknown area `{0}`")]
    UnknownArea(String),

    #[error("unknown waypoint `{0}`")]
    UnknownWaypoint(String),

    #[error("point ({x}, {y}) lies outside the {width}x{height} map")]
    OutOfBounds {
        x: f64,
        y: f64,
        width: u32,
        height: u32,
    },

    #[error("empty insight for `{0}`")]
    EmptyInsight(String),

    #[error("insight for `{0}` is exhausted")]
    InsightExhausted(String),

    #[error("need {needed} candidate waypoints, only {available} available")]
    InsufficientCandidates { needed: usize, available: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
