//! Wire format for raw insight submitted by an elicitation front end.
//!
//! ```json
//! {"object_id": "umbrella", "interface": "precision", "points": [{"x": 10.5, "y": 4.0, "slider": 0.6}]}
//! {"object_id": "bag", "interface": "paint", "paint": [{"x": 3, "y": 7, "b": 0.25}]}
//! ```
//!
//! Exactly one of `points` / `paint` is present and it must match the
//! interface tag. Paint is sparse: pixels not listed have brightness zero.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Pixel, Point};
use crate::scalar::Scalar;
use crate::scene::SceneBundle;
use crate::voronoi::VoronoiAssignment;

use super::{
    paint_to_belief, precision_to_belief, rank_to_ranking, Insight, PaintField, PrecisionInput, RankInput,
    SelectedPoint,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InterfaceKind {
    Precision,
    Paint,
    Rank,
}

impl InterfaceKind {
    pub const ALL: [InterfaceKind; 3] = [InterfaceKind::Precision, InterfaceKind::Paint, InterfaceKind::Rank];

    pub fn as_str(&self) -> &'static str {
        match self {
            InterfaceKind::Precision => "precision",
            InterfaceKind::Paint => "paint",
            InterfaceKind::Rank => "rank",
        }
    }
}

impl fmt::Display for InterfaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for InterfaceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "precision" => Ok(Self::Precision),
            "paint" => Ok(Self::Paint),
            "rank" => Ok(Self::Rank),
            other => Err(Error::InvalidInput(format!("unknown interface `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PayloadPoint {
    pub x: f64,
    pub y: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slider: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PaintSample {
    pub x: u32,
    pub y: u32,
    pub b: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InsightPayload {
    pub object_id: String,
    pub interface: InterfaceKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<PayloadPoint>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub paint: Option<Vec<PaintSample>>,
}

impl InsightPayload {
    /// Structural checks that do not need the scene. Empty drafts pass.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidInput(msg));
        match (self.interface, &self.points, &self.paint) {
            (InterfaceKind::Paint, None, Some(samples)) => {
                let mut seen = HashSet::new();
                for s in samples {
                    if !(0.0..=1.0).contains(&s.b) {
                        return bad(format!("brightness {} at ({}, {}) outside [0, 1]", s.b, s.x, s.y));
                    }
                    if !seen.insert((s.x, s.y)) {
                        return bad(format!("pixel ({}, {}) listed twice", s.x, s.y));
                    }
                }
                Ok(())
            }
            (InterfaceKind::Precision | InterfaceKind::Rank, Some(points), None) => {
                for p in points {
                    if !(p.x.is_finite() && p.y.is_finite()) {
                        return bad("non-finite point coordinate".into());
                    }
                    match (self.interface, p.slider) {
                        (InterfaceKind::Precision, None) => return bad("precision point without slider".into()),
                        (InterfaceKind::Precision, Some(s)) if !(0.0..=1.0).contains(&s) => {
                            return bad(format!("slider {s} outside [0, 1]"))
                        }
                        (InterfaceKind::Rank, Some(_)) => return bad("rank points carry no slider".into()),
                        _ => {}
                    }
                }
                Ok(())
            }
            (kind, _, _) => bad(format!(
                "`{kind}` payload must carry exactly `{}`",
                if kind == InterfaceKind::Paint { "paint" } else { "points" }
            )),
        }
    }

    pub fn to_precision_input<T: Scalar>(&self) -> Result<PrecisionInput<T>> {
        self.validate()?;
        let points = self.points.as_deref().unwrap_or_default();
        Ok(PrecisionInput {
            object_id: self.object_id.clone(),
            points: points
                .iter()
                .map(|p| SelectedPoint {
                    position: Point::new(T::lit(p.x), T::lit(p.y)),
                    slider: T::lit(p.slider.unwrap_or(0.0)),
                })
                .collect(),
        })
    }

    pub fn to_rank_input<T: Scalar>(&self) -> Result<RankInput<T>> {
        self.validate()?;
        let points = self.points.as_deref().unwrap_or_default();
        Ok(RankInput {
            object_id: self.object_id.clone(),
            points: points.iter().map(|p| Point::new(T::lit(p.x), T::lit(p.y))).collect(),
        })
    }

    pub fn to_paint_field<T: Scalar>(&self, width: u32, height: u32) -> Result<PaintField<T>> {
        self.validate()?;
        let mut field = PaintField::new(self.object_id.clone(), width, height);
        for s in self.paint.as_deref().unwrap_or_default() {
            field.set(Pixel::new(s.x, s.y), T::lit(s.b))?;
        }
        Ok(field)
    }

    pub fn from_paint_field<T: Scalar>(field: &PaintField<T>) -> Self {
        Self {
            object_id: field.object_id.clone(),
            interface: InterfaceKind::Paint,
            points: None,
            paint: Some(
                field
                    .iter()
                    .map(|(px, b)| PaintSample { x: px.i, y: px.j, b: b.to_f64_lossy() })
                    .collect(),
            ),
        }
    }

    /// Compiles to a belief (precision, paint) or a ranking (rank).
    pub fn compile<T: Scalar>(&self, scene: &SceneBundle<T>, assignment: &VoronoiAssignment) -> Result<Insight<T>> {
        match self.interface {
            InterfaceKind::Precision => precision_to_belief(&self.to_precision_input()?, scene).map(Insight::Belief),
            InterfaceKind::Paint => {
                let field = self.to_paint_field(scene.map().width, scene.map().height)?;
                paint_to_belief(&field, assignment).map(Insight::Belief)
            }
            InterfaceKind::Rank => rank_to_ranking(&self.to_rank_input()?, scene).map(Insight::Ranking),
        }
    }
}
