//! Scene insight elicitation toolkit.
//!
//! Humans describe where task objects probably are (precise points with
//! likelihood sliders, painted heat maps, or ranked points). This crate turns
//! that input into categorical beliefs over the robot's navigation waypoints,
//! runs a determinize-and-replan fetch-and-deliver simulation guided by those
//! beliefs, and scores the insight against ground truth.
//!
//! Everything numeric is generic over [`Scalar`] (`f32` or `f64`). The
//! aliases below fix the scalar to `f64`, which is what the file formats and
//! the service use; `*32` aliases exist for single precision.

pub mod error;
pub mod evaluation;
pub mod geometry;
pub mod insight;
pub mod planner;
pub mod routing;
pub mod scalar;
pub mod scene;
pub mod voronoi;

pub use error::{Error, Result};
pub use insight::payload::{InsightPayload, InterfaceKind};
pub use planner::{Action, ObjectBelief, PlanTrace, TaskSpec, WorldState};
pub use scalar::Scalar;
pub use voronoi::{voronoi_assign, VoronoiAssignment};

pub type Point = geometry::Point<f64>;
pub type Scene = scene::SceneBundle<f64>;
pub type Belief = insight::CategoricalBelief<f64>;
pub type Insight = insight::Insight<f64>;
pub type PaintField = insight::PaintField<f64>;
pub type GroundTruth = evaluation::GroundTruth<f64>;

pub type Point32 = geometry::Point<f32>;
pub type Scene32 = scene::SceneBundle<f32>;
pub type Belief32 = insight::CategoricalBelief<f32>;
pub type Insight32 = insight::Insight<f32>;
pub type PaintField32 = insight::PaintField<f32>;
pub type GroundTruth32 = evaluation::GroundTruth<f32>;

/// Office study map: meeting room, office, copy room, kitchen, hallway and
/// workspace, with shelves, desks and a countertop as surfaces.
pub const STUDY_MAP_JSON: &str = include_str!("../assets/study_map.json");

/// Id under which the study map is registered.
pub const STUDY_MAP_ID: &str = "study";

pub fn study_map() -> Scene {
    Scene::from_json(STUDY_MAP_JSON.as_bytes()).expect("bundled study map is valid")
}
