use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::scene::SceneBundle;

use super::{Action, ObjectBelief, PlanTrace, TaskSpec, WorldState};

/// Mutable simulation state, index-based.
struct Run<'a, T> {
    scene: &'a SceneBundle<T>,
    pos: usize,
    visited: Vec<bool>,
    /// Ground-truth location of [carried, container].
    truth: [usize; 2],
    /// Locations seen so far.
    known: [Option<usize>; 2],
    candidates: [Vec<usize>; 2],
    cursors: [usize; 2],
    actions: Vec<Action>,
}

impl<T: Scalar> Run<'_, T> {
    fn observe(&mut self) {
        self.visited[self.pos] = true;
        for k in 0..2 {
            if self.truth[k] == self.pos {
                self.known[k] = Some(self.pos);
            }
        }
        self.actions.push(Action::Observe { at: self.scene.waypoint_id(self.pos).to_string() });
    }

    /// Where to look for object `k` next: a sighting if any, else the next
    /// candidate not yet ruled out, else the nearest unvisited waypoint.
    fn resolve(&mut self, k: usize) -> usize {
        if let Some(w) = self.known[k] {
            return w;
        }
        let cands = &self.candidates[k];
        while self.cursors[k] < cands.len() && self.visited[cands[self.cursors[k]]] {
            self.cursors[k] += 1;
        }
        if let Some(&w) = cands.get(self.cursors[k]) {
            return w;
        }
        // Strict comparison over ascending indices keeps the smallest id on ties.
        let mut best: Option<(usize, T)> = None;
        for v in (0..self.visited.len()).filter(|&v| !self.visited[v]) {
            let d = self.scene.distance(self.pos, v);
            if best.is_none_or(|(_, bd)| d < bd) {
                best = Some((v, d));
            }
        }
        best.expect("an unseen object lies at an unvisited waypoint").0
    }

    /// Moves until object `k` is at the robot's waypoint.
    fn fetch(&mut self, k: usize) {
        let mut target = self.resolve(k);
        let mut path = self.scene.path_indices(self.pos, target);
        let mut step = 1;
        while self.known[k] != Some(self.pos) {
            let next = path[step];
            self.actions.push(Action::Move {
                from: self.scene.waypoint_id(self.pos).to_string(),
                to: self.scene.waypoint_id(next).to_string(),
            });
            self.pos = next;
            self.observe();

            let revised = match self.known[k] {
                Some(w) => w,
                None if self.visited[target] => self.resolve(k),
                None => target,
            };
            if revised != target {
                target = revised;
                path = self.scene.path_indices(self.pos, target);
                step = 1;
            } else {
                step += 1;
            }
        }
    }
}

fn candidate_indices<T: Scalar>(
    scene: &SceneBundle<T>,
    beliefs: &BTreeMap<String, ObjectBelief>,
    object: &str,
) -> Result<(Vec<usize>, usize)> {
    match beliefs.get(object) {
        None => Ok((Vec::new(), 0)),
        Some(b) => {
            let idx = b
                .candidates
                .iter()
                .map(|w| scene.waypoint_index(w))
                .collect::<Result<Vec<_>>>()?;
            Ok((idx, b.cursor.min(b.candidates.len())))
        }
    }
}

/// Simulates the task against a ground-truth world.
///
/// The robot observes at the start and at every waypoint it enters and
/// remembers what it saw. It heads for the carried object's assumed location;
/// arriving there without finding it advances to the next candidate that has
/// not already been ruled out and replans. Sighting an object anywhere pins
/// its location. When candidates run out, the robot visits the nearest
/// unvisited waypoint (shortest-path weight, ties by id) until the object
/// turns up. After the pick the same procedure runs for the container.
///
/// A missing or empty belief means the search starts in nearest-first mode.
pub fn execute_with_replan<T: Scalar>(
    scene: &SceneBundle<T>,
    task: &TaskSpec,
    beliefs: &BTreeMap<String, ObjectBelief>,
    world: &WorldState,
) -> Result<PlanTrace> {
    task.validate(scene)?;
    let locate = |object: &str| -> Result<usize> {
        let w = world
            .object_locations
            .get(object)
            .ok_or_else(|| Error::InvalidInput(format!("world has no location for `{object}`")))?;
        scene.waypoint_index(w)
    };
    let truth = [locate(&task.carried_object)?, locate(&task.container_object)?];
    let (c0, k0) = candidate_indices(scene, beliefs, &task.carried_object)?;
    let (c1, k1) = candidate_indices(scene, beliefs, &task.container_object)?;

    let mut run = Run {
        scene,
        pos: scene.waypoint_index(&task.start_waypoint)?,
        visited: vec![false; scene.waypoints().len()],
        truth,
        known: [None, None],
        candidates: [c0, c1],
        cursors: [k0, k1],
        actions: Vec::new(),
    };
    run.observe();

    run.fetch(0);
    run.actions.push(Action::Pick {
        object: task.carried_object.clone(),
        at: scene.waypoint_id(run.pos).to_string(),
    });
    run.fetch(1);
    run.actions.push(Action::Place {
        object: task.carried_object.clone(),
        container: task.container_object.clone(),
        at: scene.waypoint_id(run.pos).to_string(),
    });

    Ok(PlanTrace::from_actions(run.actions))
}
