//! Compiling raw human input into beliefs over waypoints.
//!
//! Three input styles are supported:
//!
//! * **precision**: free-floating points, each with a slider `s_u` in `[0, 1]`.
//!   Sliders are used as probabilities directly when they sum to at most one
//!   (an incomplete distribution) and are divided by their sum otherwise. Each
//!   point's mass goes to the waypoint nearest its exact position.
//! * **paint**: a brightness field `b_x` over pixels. A waypoint's probability
//!   is the brightness inside its Voronoi cell over the total brightness.
//! * **rank**: an ordered list of points, most likely first, mapped to their
//!   nearest waypoints.

mod brush;
pub mod payload;

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Pixel, Point};
use crate::scalar::Scalar;
use crate::scene::SceneBundle;
use crate::voronoi::VoronoiAssignment;

pub use brush::{apply_brush, BrushConfig};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelectedPoint<T> {
    pub position: Point<T>,
    pub slider: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrecisionInput<T> {
    pub object_id: String,
    /// Stored exactly as entered; never snapped to waypoints.
    pub points: Vec<SelectedPoint<T>>,
}

/// Sparse brightness field; absent pixels have brightness zero.
#[derive(Debug, Clone, PartialEq)]
pub struct PaintField<T> {
    pub object_id: String,
    width: u32,
    height: u32,
    brightness: BTreeMap<Pixel, T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankInput<T> {
    pub object_id: String,
    /// Index 0 is the most likely location.
    pub points: Vec<Point<T>>,
}

/// Categorical distribution over waypoints. Only positive entries are stored;
/// the total may fall short of one for incomplete precision input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CategoricalBelief<T> {
    pub object_id: String,
    pub probabilities: BTreeMap<String, T>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WaypointRanking {
    pub object_id: String,
    /// Distinct waypoint ids, most likely first.
    pub ranked: Vec<String>,
}

/// Compiled insight for one object.
#[derive(Debug, Clone, PartialEq)]
pub enum Insight<T> {
    Belief(CategoricalBelief<T>),
    Ranking(WaypointRanking),
}

impl<T> Insight<T> {
    pub fn object_id(&self) -> &str {
        match self {
            Insight::Belief(b) => &b.object_id,
            Insight::Ranking(r) => &r.object_id,
        }
    }
}

impl<T: Scalar> PaintField<T> {
    pub fn new(object_id: impl Into<String>, width: u32, height: u32) -> Self {
        Self {
            object_id: object_id.into(),
            width,
            height,
            brightness: BTreeMap::new(),
        }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn get(&self, px: Pixel) -> T {
        self.brightness.get(&px).copied().unwrap_or_else(T::zero)
    }

    /// Sets one pixel. Zero removes the entry.
    pub fn set(&mut self, px: Pixel, b: T) -> Result<()> {
        if px.i >= self.width || px.j >= self.height {
            return Err(Error::OutOfBounds {
                x: px.i as f64,
                y: px.j as f64,
                width: self.width,
                height: self.height,
            });
        }
        if !(b >= T::zero() && b <= T::one()) {
            return Err(Error::InvalidInput(format!("brightness {b} outside [0, 1]")));
        }
        if b == T::zero() {
            self.brightness.remove(&px);
        } else {
            self.brightness.insert(px, b);
        }
        Ok(())
    }

    /// Positive entries in pixel order.
    pub fn iter(&self) -> impl Iterator<Item = (Pixel, T)> + '_ {
        self.brightness.iter().map(|(&p, &b)| (p, b))
    }

    pub fn len(&self) -> usize {
        self.brightness.len()
    }

    pub fn is_empty(&self) -> bool {
        self.brightness.is_empty()
    }

    pub fn total(&self) -> T {
        self.brightness.values().sum()
    }

    pub(crate) fn entry_mut(&mut self, px: Pixel) -> &mut T {
        self.brightness.entry(px).or_insert_with(T::zero)
    }
}

impl<T: Scalar> CategoricalBelief<T> {
    pub fn total(&self) -> T {
        self.probabilities.values().sum()
    }

    pub fn probability(&self, waypoint: &str) -> T {
        self.probabilities.get(waypoint).copied().unwrap_or_else(T::zero)
    }

    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }
}

/// Slider values become probabilities: unchanged when they sum to at most
/// one, otherwise divided by their sum.
pub fn normalize_sliders<T: Scalar>(sliders: &[T]) -> Vec<T> {
    let sum: T = sliders.iter().sum();
    if sum <= T::one() {
        sliders.to_vec()
    } else {
        sliders.iter().map(|&s| s / sum).collect()
    }
}

pub fn precision_to_belief<T: Scalar>(
    input: &PrecisionInput<T>,
    scene: &SceneBundle<T>,
) -> Result<CategoricalBelief<T>> {
    if input.points.is_empty() {
        return Err(Error::EmptyInsight(input.object_id.clone()));
    }
    for p in &input.points {
        if !(p.slider >= T::zero() && p.slider <= T::one()) {
            return Err(Error::InvalidInput(format!("slider {} outside [0, 1]", p.slider)));
        }
        scene.map().check_bounds(&p.position)?;
    }
    let sliders: Vec<T> = input.points.iter().map(|p| p.slider).collect();
    let mut probabilities = BTreeMap::new();
    for (p, mass) in input.points.iter().zip(normalize_sliders(&sliders)) {
        if mass > T::zero() {
            let k = scene.nearest_index(&p.position);
            *probabilities
                .entry(scene.waypoint_id(k).to_string())
                .or_insert_with(T::zero) += mass;
        }
    }
    Ok(CategoricalBelief {
        object_id: input.object_id.clone(),
        probabilities,
    })
}

pub fn paint_to_belief<T: Scalar>(
    field: &PaintField<T>,
    assignment: &VoronoiAssignment,
) -> Result<CategoricalBelief<T>> {
    if field.width != assignment.width() || field.height != assignment.height() {
        return Err(Error::InvalidInput(format!(
            "paint field is {}x{} but the map is {}x{}",
            field.width,
            field.height,
            assignment.width(),
            assignment.height()
        )));
    }
    let ids = assignment.waypoint_ids();
    let mut per_cell = vec![T::zero(); ids.len()];
    let mut total = T::zero();
    for (px, b) in field.iter() {
        per_cell[assignment.owner_index(px)] += b;
        total += b;
    }
    if total <= T::zero() {
        return Err(Error::EmptyInsight(field.object_id.clone()));
    }
    let probabilities = ids
        .iter()
        .zip(per_cell)
        .filter(|(_, mass)| *mass > T::zero())
        .map(|(id, mass)| (id.clone(), mass / total))
        .collect();
    Ok(CategoricalBelief {
        object_id: field.object_id.clone(),
        probabilities,
    })
}

/// Maps ranked points to waypoints; a waypoint reached twice keeps its
/// higher rank.
pub fn rank_to_ranking<T: Scalar>(input: &RankInput<T>, scene: &SceneBundle<T>) -> Result<WaypointRanking> {
    if input.points.is_empty() {
        return Err(Error::EmptyInsight(input.object_id.clone()));
    }
    let mut seen = HashSet::new();
    let mut ranked = Vec::new();
    for p in &input.points {
        let id = scene.nearest_waypoint(p)?;
        if seen.insert(id) {
            ranked.push(id.to_string());
        }
    }
    Ok(WaypointRanking {
        object_id: input.object_id.clone(),
        ranked,
    })
}

/// Positive-probability waypoints by descending probability, ties by id.
pub fn belief_to_ranking<T: Scalar>(belief: &CategoricalBelief<T>) -> Result<WaypointRanking> {
    let mut entries: Vec<(&String, T)> = belief
        .probabilities
        .iter()
        .filter(|(_, &p)| p > T::zero())
        .map(|(id, &p)| (id, p))
        .collect();
    if entries.is_empty() {
        return Err(Error::EmptyInsight(belief.object_id.clone()));
    }
    // BTreeMap iteration is already id-ordered; a stable sort keeps that for ties.
    entries.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap_or(std::cmp::Ordering::Equal));
    Ok(WaypointRanking {
        object_id: belief.object_id.clone(),
        ranked: entries.into_iter().map(|(id, _)| id.clone()).collect(),
    })
}
