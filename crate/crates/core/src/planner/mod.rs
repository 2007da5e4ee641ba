//! Determinize-and-replan task execution for the fetch-and-deliver task
//! "put the carried object into the container".
//!
//! Each object's insight is collapsed to its most likely waypoint; the robot
//! plans shortest-path legs to those waypoints and replans whenever an
//! observation contradicts the assumption. Once an object's candidates run
//! out, the robot sweeps unvisited waypoints nearest-first.
//!
//! On this fixed domain a classical planner's output on the determinized
//! problem is exactly: leg to the carried object, pick, leg to the container,
//! place. That composition is built directly from shortest paths.

mod executor;
pub mod trace;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::insight::{belief_to_ranking, Insight};
use crate::scalar::Scalar;
use crate::scene::SceneBundle;

pub use executor::execute_with_replan;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaskSpec {
    pub carried_object: String,
    pub container_object: String,
    pub start_waypoint: String,
}

impl TaskSpec {
    /// Umbrella-into-bag task starting at the waypoint nearest the map's
    /// upper-right corner.
    pub fn umbrella_in_bag<T: Scalar>(scene: &SceneBundle<T>) -> Self {
        Self {
            carried_object: "umbrella".into(),
            container_object: "bag".into(),
            start_waypoint: scene.upper_right_waypoint().to_string(),
        }
    }

    pub fn validate<T: Scalar>(&self, scene: &SceneBundle<T>) -> Result<()> {
        if self.carried_object == self.container_object {
            return Err(Error::InvalidInput(format!(
                "carried object and container are both `{}`",
                self.carried_object
            )));
        }
        scene.waypoint_index(&self.start_waypoint).map(|_| ())
    }

    pub fn objects(&self) -> [&str; 2] {
        [&self.carried_object, &self.container_object]
    }
}

/// Ordered location hypotheses for one object and the index of the one
/// currently assumed. `cursor == candidates.len()` means the insight is used up.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObjectBelief {
    pub object_id: String,
    pub candidates: Vec<String>,
    pub cursor: usize,
}

impl ObjectBelief {
    pub fn new(object_id: impl Into<String>, candidates: Vec<String>) -> Self {
        Self {
            object_id: object_id.into(),
            candidates,
            cursor: 0,
        }
    }

    pub fn current(&self) -> Option<&str> {
        self.candidates.get(self.cursor).map(String::as_str)
    }

    pub fn is_exhausted(&self) -> bool {
        self.cursor >= self.candidates.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WorldState {
    pub object_locations: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Action {
    Move { from: String, to: String },
    Observe { at: String },
    Pick { object: String, at: String },
    Place { object: String, container: String, at: String },
}

impl Action {
    /// Whether the action counts toward trace length. Observing is free.
    pub fn is_costed(&self) -> bool {
        !matches!(self, Action::Observe { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PlanTrace {
    pub actions: Vec<Action>,
    pub length: usize,
}

impl PlanTrace {
    pub fn from_actions(actions: Vec<Action>) -> Self {
        let length = trace_length(&actions);
        Self { actions, length }
    }
}

/// Moves plus picks plus places.
pub fn trace_length(actions: &[Action]) -> usize {
    actions.iter().filter(|a| a.is_costed()).count()
}

/// Candidates in order of decreasing likelihood, cursor at the front.
pub fn belief_from_insight<T: Scalar>(insight: &Insight<T>) -> Result<ObjectBelief> {
    let ranking = match insight {
        Insight::Belief(b) => belief_to_ranking(b)?,
        Insight::Ranking(r) => {
            if r.ranked.is_empty() {
                return Err(Error::EmptyInsight(r.object_id.clone()));
            }
            r.clone()
        }
    };
    Ok(ObjectBelief::new(ranking.object_id, ranking.ranked))
}

/// Assumes every object sits at its current candidate.
pub fn determinize(beliefs: &BTreeMap<String, ObjectBelief>) -> Result<BTreeMap<String, String>> {
    beliefs
        .iter()
        .map(|(object, belief)| {
            belief
                .current()
                .map(|w| (object.clone(), w.to_string()))
                .ok_or_else(|| Error::InsightExhausted(object.clone()))
        })
        .collect()
}

/// Appends the moves of a shortest-path leg, observing at every waypoint entered.
pub(crate) fn push_leg<T: Scalar>(scene: &SceneBundle<T>, from: usize, to: usize, out: &mut Vec<Action>) {
    let path = scene.path_indices(from, to);
    for hop in path.windows(2) {
        out.push(Action::Move {
            from: scene.waypoint_id(hop[0]).to_string(),
            to: scene.waypoint_id(hop[1]).to_string(),
        });
        out.push(Action::Observe { at: scene.waypoint_id(hop[1]).to_string() });
    }
}

/// Plan under assumed object locations: observe where the robot stands, go
/// get the carried object (unless already held), then take it to the container.
pub fn make_plan<T: Scalar>(
    scene: &SceneBundle<T>,
    task: &TaskSpec,
    assumed: &BTreeMap<String, String>,
    robot_at: &str,
    holding: Option<&str>,
) -> Result<Vec<Action>> {
    task.validate(scene)?;
    let lookup = |object: &str| -> Result<usize> {
        let w = assumed
            .get(object)
            .ok_or_else(|| Error::InvalidInput(format!("no assumed location for `{object}`")))?;
        scene.waypoint_index(w)
    };
    let mut pos = scene.waypoint_index(robot_at)?;
    let mut actions = vec![Action::Observe { at: robot_at.to_string() }];
    match holding {
        None => {
            let target = lookup(&task.carried_object)?;
            push_leg(scene, pos, target, &mut actions);
            pos = target;
            actions.push(Action::Pick {
                object: task.carried_object.clone(),
                at: scene.waypoint_id(pos).to_string(),
            });
        }
        Some(obj) if obj == task.carried_object => {}
        Some(obj) => {
            return Err(Error::InvalidInput(format!("robot holds `{obj}`, not the carried object")));
        }
    }
    let target = lookup(&task.container_object)?;
    push_leg(scene, pos, target, &mut actions);
    actions.push(Action::Place {
        object: task.carried_object.clone(),
        container: task.container_object.clone(),
        at: scene.waypoint_id(target).to_string(),
    });
    Ok(actions)
}
