//! Preliminary scene information: the discretized map, labeled areas,
//! waypoints and the navigation graph between them.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{point_in_polygon, segment_hits_polygon, validate_simple_polygon, Pixel, Point};
use crate::routing::RouteTable;
use crate::scalar::Scalar;
use crate::voronoi::VoronoiAssignment;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridMap<T> {
    pub width: u32,
    pub height: u32,
    /// Meters per pixel. Carried for display; never used in metrics.
    pub resolution: T,
}

impl<T: Scalar> GridMap<T> {
    pub fn pixel_count(&self) -> usize {
        self.width as usize * self.height as usize
    }

    pub fn contains(&self, p: &Point<T>) -> bool {
        p.is_finite()
            && p.x >= T::zero()
            && p.y >= T::zero()
            && p.x <= T::lit(self.width as f64)
            && p.y <= T::lit(self.height as f64)
    }

    pub fn check_bounds(&self, p: &Point<T>) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::OutOfBounds {
                x: p.x.to_f64_lossy(),
                y: p.y.to_f64_lossy(),
                width: self.width,
                height: self.height,
            })
        }
    }

    pub fn pixels(&self) -> impl Iterator<Item = Pixel> + '_ {
        (0..self.height).flat_map(move |j| (0..self.width).map(move |i| Pixel::new(i, j)))
    }

    /// Row-major linear index of a pixel.
    pub fn linear(&self, px: Pixel) -> usize {
        px.j as usize * self.width as usize + px.i as usize
    }

    pub fn in_grid(&self, px: Pixel) -> bool {
        px.i < self.width && px.j < self.height
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AreaKind {
    /// Traversable: rooms, corridors.
    Region,
    /// Not traversable: tables, shelves, counters.
    Surface,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Area<T> {
    pub id: String,
    pub kind: AreaKind,
    pub polygon: Vec<Point<T>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Waypoint<T> {
    pub id: String,
    pub position: Point<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NavEdge<T> {
    pub a: usize,
    pub b: usize,
    pub weight: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Route<T> {
    pub waypoints: Vec<String>,
    pub weight: T,
}

/// A validated scene. Waypoints are stored sorted by id, so index order is
/// lexicographic id order; every deterministic tie-break in the crate relies
/// on this.
#[derive(Debug, Clone)]
pub struct SceneBundle<T> {
    map: GridMap<T>,
    areas: Vec<Area<T>>,
    waypoints: Vec<Waypoint<T>>,
    edges: Vec<NavEdge<T>>,
    adjacency: Vec<Vec<(usize, T)>>,
    index: HashMap<String, usize>,
    routes: OnceLock<RouteTable<T>>,
}

// On-disk layout of a scene bundle.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBundle {
    map: RawMap,
    areas: Vec<RawArea>,
    waypoints: Vec<RawWaypoint>,
    nav_edges: Vec<(String, String)>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMap {
    width: u32,
    height: u32,
    resolution: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawArea {
    id: String,
    kind: AreaKind,
    polygon: Vec<[f64; 2]>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawWaypoint {
    id: String,
    x: f64,
    y: f64,
}

impl<T: Scalar> SceneBundle<T> {
    /// Builds and validates a scene. Edge weights are the Euclidean distance
    /// between endpoint positions; duplicate edges collapse into one.
    pub fn new(
        map: GridMap<T>,
        areas: Vec<Area<T>>,
        mut waypoints: Vec<Waypoint<T>>,
        nav_edges: &[(String, String)],
    ) -> Result<Self> {
        if map.width == 0 || map.height == 0 {
            return Err(Error::InvalidGeometry(format!(
                "map must be at least 1x1, got {}x{}",
                map.width, map.height
            )));
        }
        if !(map.resolution.is_finite() && map.resolution > T::zero()) {
            return Err(Error::InvalidGeometry("map resolution must be positive".into()));
        }

        let mut area_ids = HashSet::new();
        for area in &areas {
            if !area_ids.insert(area.id.as_str()) {
                return Err(Error::MalformedBundle(format!("duplicate area id `{}`", area.id)));
            }
            validate_simple_polygon(&area.polygon)
                .map_err(|d| Error::InvalidGeometry(format!("area `{}`: {d}", area.id)))?;
        }

        if waypoints.is_empty() {
            return Err(Error::InvalidGeometry("scene has no waypoints".into()));
        }
        waypoints.sort_by(|a, b| a.id.cmp(&b.id));
        if let Some(w) = waypoints.windows(2).find(|w| w[0].id == w[1].id) {
            return Err(Error::MalformedBundle(format!("duplicate waypoint id `{}`", w[0].id)));
        }
        for w in &waypoints {
            if !map.contains(&w.position) {
                return Err(Error::InvalidGeometry(format!(
                    "waypoint `{}` lies outside the map bounds",
                    w.id
                )));
            }
            let in_region = areas
                .iter()
                .any(|a| a.kind == AreaKind::Region && point_in_polygon(&w.position, &a.polygon));
            if !in_region {
                return Err(Error::InvalidGeometry(format!(
                    "waypoint `{}` is not inside any region",
                    w.id
                )));
            }
        }

        let index: HashMap<String, usize> =
            waypoints.iter().enumerate().map(|(k, w)| (w.id.clone(), k)).collect();

        let mut seen = BTreeSet::new();
        for (a, b) in nav_edges {
            let ia = *index
                .get(a)
                .ok_or_else(|| Error::MalformedBundle(format!("edge references unknown waypoint `{a}`")))?;
            let ib = *index
                .get(b)
                .ok_or_else(|| Error::MalformedBundle(format!("edge references unknown waypoint `{b}`")))?;
            if ia == ib {
                return Err(Error::MalformedBundle(format!("self-loop edge on `{a}`")));
            }
            seen.insert((ia.min(ib), ia.max(ib)));
        }
        let edges: Vec<NavEdge<T>> = seen
            .into_iter()
            .map(|(a, b)| NavEdge {
                a,
                b,
                weight: waypoints[a].position.distance(&waypoints[b].position),
            })
            .collect();

        let mut adjacency = vec![Vec::new(); waypoints.len()];
        for e in &edges {
            adjacency[e.a].push((e.b, e.weight));
            adjacency[e.b].push((e.a, e.weight));
        }
        for row in &mut adjacency {
            row.sort_by_key(|&(v, _)| v);
        }

        let components = count_components(&adjacency);
        if components > 1 {
            return Err(Error::DisconnectedGraph { components });
        }

        Ok(Self {
            map,
            areas,
            waypoints,
            edges,
            adjacency,
            index,
            routes: OnceLock::new(),
        })
    }

    /// Parses and validates a scene bundle document. Never panics on bad input.
    pub fn from_json(bytes: &[u8]) -> Result<Self> {
        let raw: RawBundle =
            serde_json::from_slice(bytes).map_err(|e| Error::MalformedBundle(e.to_string()))?;
        let conv = |v: f64| -> Result<T> {
            if v.is_finite() {
                Ok(T::lit(v))
            } else {
                Err(Error::InvalidGeometry("non-finite coordinate".into()))
            }
        };
        let map = GridMap {
            width: raw.map.width,
            height: raw.map.height,
            resolution: conv(raw.map.resolution)?,
        };
        let areas = raw
            .areas
            .into_iter()
            .map(|a| {
                Ok(Area {
                    id: a.id,
                    kind: a.kind,
                    polygon: a
                        .polygon
                        .iter()
                        .map(|&[x, y]| Ok(Point::new(conv(x)?, conv(y)?)))
                        .collect::<Result<_>>()?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let waypoints = raw
            .waypoints
            .into_iter()
            .map(|w| {
                Ok(Waypoint {
                    id: w.id,
                    position: Point::new(conv(w.x)?, conv(w.y)?),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(map, areas, waypoints, &raw.nav_edges)
    }

    /// Serializes back to the bundle document layout (waypoints in id order).
    pub fn to_json(&self) -> serde_json::Value {
        let raw = RawBundle {
            map: RawMap {
                width: self.map.width,
                height: self.map.height,
                resolution: self.map.resolution.to_f64_lossy(),
            },
            areas: self
                .areas
                .iter()
                .map(|a| RawArea {
                    id: a.id.clone(),
                    kind: a.kind,
                    polygon: a.polygon.iter().map(|p| [p.x.to_f64_lossy(), p.y.to_f64_lossy()]).collect(),
                })
                .collect(),
            waypoints: self
                .waypoints
                .iter()
                .map(|w| RawWaypoint {
                    id: w.id.clone(),
                    x: w.position.x.to_f64_lossy(),
                    y: w.position.y.to_f64_lossy(),
                })
                .collect(),
            nav_edges: self
                .edges
                .iter()
                .map(|e| (self.waypoints[e.a].id.clone(), self.waypoints[e.b].id.clone()))
                .collect(),
        };
        serde_json::to_value(raw).expect("bundle serializes")
    }

    pub fn map(&self) -> &GridMap<T> {
        &self.map
    }

    pub fn areas(&self) -> &[Area<T>] {
        &self.areas
    }

    pub fn waypoints(&self) -> &[Waypoint<T>] {
        &self.waypoints
    }

    pub fn edges(&self) -> &[NavEdge<T>] {
        &self.edges
    }

    pub fn adjacency(&self) -> &[Vec<(usize, T)>] {
        &self.adjacency
    }

    pub fn waypoint_ids(&self) -> impl Iterator<Item = &str> {
        self.waypoints.iter().map(|w| w.id.as_str())
    }

    pub fn waypoint_index(&self, id: &str) -> Result<usize> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownWaypoint(id.to_string()))
    }

    pub fn waypoint_id(&self, index: usize) -> &str {
        &self.waypoints[index].id
    }

    pub fn area(&self, id: &str) -> Result<&Area<T>> {
        self.areas
            .iter()
            .find(|a| a.id == id)
            .ok_or_else(|| Error::UnknownArea(id.to_string()))
    }

    /// `X_a`: pixels whose center lies inside the area polygon (boundary inclusive).
    pub fn pixels_in_area(&self, area_id: &str) -> Result<Vec<Pixel>> {
        let area = self.area(area_id)?;
        Ok(self
            .map
            .pixels()
            .filter(|px| point_in_polygon(&px.center(), &area.polygon))
            .collect())
    }

    /// Index of the closest waypoint; equidistant waypoints resolve to the smallest id.
    pub fn nearest_index(&self, p: &Point<T>) -> usize {
        let mut best = 0;
        let mut best_d = self.waypoints[0].position.distance_sq(p);
        for (k, w) in self.waypoints.iter().enumerate().skip(1) {
            let d = w.position.distance_sq(p);
            if d < best_d {
                best = k;
                best_d = d;
            }
        }
        best
    }

    pub fn nearest_waypoint(&self, p: &Point<T>) -> Result<&str> {
        self.map.check_bounds(p)?;
        Ok(&self.waypoints[self.nearest_index(p)].id)
    }

    /// Waypoint closest to the map's upper-right corner `(width, 0)`.
    pub fn upper_right_waypoint(&self) -> &str {
        let corner = Point::new(T::lit(self.map.width as f64), T::zero());
        &self.waypoints[self.nearest_index(&corner)].id
    }

    pub fn routes(&self) -> &RouteTable<T> {
        self.routes.get_or_init(|| RouteTable::build(&self.adjacency))
    }

    /// Shortest-path weight between two waypoint indices; symmetric exactly.
    pub fn distance(&self, a: usize, b: usize) -> T {
        self.routes().distance(a, b)
    }

    pub fn path_indices(&self, from: usize, to: usize) -> Vec<usize> {
        self.routes().path(&self.adjacency, from, to)
    }

    pub fn shortest_path(&self, from: &str, to: &str) -> Result<Route<T>> {
        let a = self.waypoint_index(from)?;
        let b = self.waypoint_index(to)?;
        Ok(Route {
            waypoints: self.path_indices(a, b).into_iter().map(|k| self.waypoints[k].id.clone()).collect(),
            weight: self.distance(a, b),
        })
    }

    /// Suggests navigation edges: pairs of waypoints whose Voronoi cells share
    /// a pixel boundary and whose straight connection avoids every surface.
    /// Advisory output; bundles always carry their own edges.
    pub fn propose_nav_edges(&self, assignment: &VoronoiAssignment) -> Vec<(String, String)> {
        let (w, h) = (self.map.width, self.map.height);
        let mut pairs = BTreeSet::new();
        for j in 0..h {
            for i in 0..w {
                let here = assignment.owner_index(Pixel::new(i, j));
                for next in [Pixel::new(i + 1, j), Pixel::new(i, j + 1)] {
                    if self.map.in_grid(next) {
                        let there = assignment.owner_index(next);
                        if here != there {
                            pairs.insert((here.min(there), here.max(there)));
                        }
                    }
                }
            }
        }
        pairs
            .into_iter()
            .filter(|&(a, b)| {
                let (pa, pb) = (&self.waypoints[a].position, &self.waypoints[b].position);
                !self
                    .areas
                    .iter()
                    .any(|area| area.kind == AreaKind::Surface && segment_hits_polygon(pa, pb, &area.polygon))
            })
            .map(|(a, b)| (self.waypoints[a].id.clone(), self.waypoints[b].id.clone()))
            .collect()
    }
}

fn count_components<T>(adjacency: &[Vec<(usize, T)>]) -> usize {
    let mut seen = vec![false; adjacency.len()];
    let mut components = 0;
    for start in 0..adjacency.len() {
        if seen[start] {
            continue;
        }
        components += 1;
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for &(v, _) in &adjacency[u] {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
    }
    components
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::voronoi::voronoi_assign;

    fn square(id: &str, kind: AreaKind, x0: f64, y0: f64, x1: f64, y1: f64) -> Area<f64> {
        Area {
            id: id.into(),
            kind,
            polygon: vec![Point::new(x0, y0), Point::new(x1, y0), Point::new(x1, y1), Point::new(x0, y1)],
        }
    }

    fn wp(id: &str, x: f64, y: f64) -> Waypoint<f64> {
        Waypoint { id: id.into(), position: Point::new(x, y) }
    }

    fn grid(w: u32, h: u32) -> GridMap<f64> {
        GridMap { width: w, height: h, resolution: 0.05 }
    }

    fn e(a: &str, b: &str) -> (String, String) {
        (a.into(), b.into())
    }

    #[test]
    fn square_area_pixels() {
        let scene = SceneBundle::new(
            grid(20, 20),
            vec![square("room", AreaKind::Region, 0.0, 0.0, 10.0, 10.0)],
            vec![wp("a", 5.0, 5.0)],
            &[],
        )
        .unwrap();
        let px = scene.pixels_in_area("room").unwrap();
        assert_eq!(px.len(), 100);
        assert!(px.iter().all(|p| p.i < 10 && p.j < 10));
        assert_eq!(scene.pixels_in_area("nope"), Err(Error::UnknownArea("nope".into())));
    }

    #[test]
    fn full_cover_area_is_whole_map() {
        let scene = SceneBundle::new(
            grid(7, 5),
            vec![square("all", AreaKind::Region, 0.0, 0.0, 7.0, 5.0)],
            vec![wp("a", 1.0, 1.0)],
            &[],
        )
        .unwrap();
        assert_eq!(scene.pixels_in_area("all").unwrap().len(), 35);
    }

    #[test]
    fn rejects_structural_problems() {
        let room = || vec![square("room", AreaKind::Region, 0.0, 0.0, 10.0, 10.0)];
        assert!(matches!(
            SceneBundle::new(grid(10, 10), room(), vec![], &[]),
            Err(Error::InvalidGeometry(_))
        ));
        assert_eq!(
            SceneBundle::new(grid(10, 10), room(), vec![wp("a", 1.0, 1.0), wp("b", 2.0, 2.0)], &[])
                .unwrap_err(),
            Error::DisconnectedGraph { components: 2 }
        );
        assert!(matches!(
            SceneBundle::new(grid(10, 10), room(), vec![wp("a", 1.0, 1.0), wp("a", 2.0, 2.0)], &[]),
            Err(Error::MalformedBundle(_))
        ));
        assert!(matches!(
            SceneBundle::new(grid(10, 10), room(), vec![wp("a", 1.0, 1.0)], &[e("a", "z")]),
            Err(Error::MalformedBundle(_))
        ));
        let with_surface = vec![square("table", AreaKind::Surface, 0.0, 0.0, 10.0, 10.0)];
        assert!(matches!(
            SceneBundle::new(grid(10, 10), with_surface, vec![wp("a", 1.0, 1.0)], &[]),
            Err(Error::InvalidGeometry(_))
        ));
        assert!(matches!(
            SceneBundle::new(grid(10, 10), room(), vec![wp("a", 11.0, 1.0)], &[]),
            Err(Error::InvalidGeometry(_))
        ));
        let line = Area {
            id: "flat".into(),
            kind: AreaKind::Region,
            polygon: vec![Point::new(0.0, 0.0), Point::new(1.0, 1.0), Point::new(2.0, 2.0)],
        };
        assert!(matches!(
            SceneBundle::new(grid(10, 10), vec![line], vec![wp("a", 1.0, 1.0)], &[]),
            Err(Error::InvalidGeometry(_))
        ));
    }

    #[test]
    fn edges_are_deduplicated_and_weighted() {
        let scene = SceneBundle::new(
            grid(10, 10),
            vec![square("room", AreaKind::Region, 0.0, 0.0, 10.0, 10.0)],
            vec![wp("b", 4.0, 5.0), wp("a", 1.0, 1.0)],
            &[e("a", "b"), e("b", "a")],
        )
        .unwrap();
        assert_eq!(scene.edges().len(), 1);
        assert_eq!(scene.edges()[0].weight, 5.0);
        assert_eq!(scene.waypoint_id(0), "a");
    }

    #[test]
    fn nearest_waypoint_tie_and_bounds() {
        let scene = SceneBundle::new(
            grid(10, 10),
            vec![square("room", AreaKind::Region, 0.0, 0.0, 10.0, 10.0)],
            vec![wp("w2", 2.0, 5.0), wp("w1", 8.0, 5.0)],
            &[e("w1", "w2")],
        )
        .unwrap();
        assert_eq!(scene.nearest_waypoint(&Point::new(5.0, 1.0)).unwrap(), "w1");
        assert_eq!(scene.nearest_waypoint(&Point::new(2.0, 5.0)).unwrap(), "w2");
        assert!(matches!(
            scene.nearest_waypoint(&Point::new(-0.1, 1.0)),
            Err(Error::OutOfBounds { .. })
        ));
    }

    #[test]
    fn shortest_path_trivial_cases() {
        let scene = SceneBundle::new(
            grid(10, 10),
            vec![square("room", AreaKind::Region, 0.0, 0.0, 10.0, 10.0)],
            vec![wp("a", 1.0, 1.0), wp("b", 4.0, 5.0)],
            &[e("a", "b")],
        )
        .unwrap();
        let r = scene.shortest_path("a", "a").unwrap();
        assert_eq!(r.waypoints, vec!["a"]);
        assert_eq!(r.weight, 0.0);
        let r = scene.shortest_path("a", "b").unwrap();
        assert_eq!(r.waypoints, vec!["a", "b"]);
        assert_eq!(r.weight, 5.0);
        assert_eq!(scene.shortest_path("a", "x"), Err(Error::UnknownWaypoint("x".into())));
    }

    #[test]
    fn proposed_edges_avoid_surfaces() {
        let scene = SceneBundle::new(
            grid(30, 10),
            vec![
                square("hall", AreaKind::Region, 0.0, 0.0, 30.0, 10.0),
                square("crate", AreaKind::Surface, 14.0, 0.0, 16.0, 10.0),
            ],
            vec![wp("a", 5.0, 5.0), wp("b", 25.0, 5.0), wp("c", 5.0, 9.0)],
            &[e("a", "b"), e("a", "c")],
        )
        .unwrap();
        let asg = voronoi_assign(&scene);
        let proposed = scene.propose_nav_edges(&asg);
        assert!(proposed.contains(&e("a", "c")));
        assert!(!proposed.contains(&e("a", "b")));
    }

    #[test]
    fn json_round_trip_and_garbage() {
        let doc = br#"{"map":{"width":10,"height":10,"resolution":0.1},
            "areas":[{"id":"r","kind":"region","polygon":[[0,0],[10,0],[10,10],[0,10]]}],
            "waypoints":[{"id":"b","x":6,"y":5},{"id":"a","x":2,"y":5}],
            "nav_edges":[["a","b"]]}"#;
        let scene = SceneBundle::<f64>::from_json(doc).unwrap();
        let again = SceneBundle::<f64>::from_json(scene.to_json().to_string().as_bytes()).unwrap();
        assert_eq!(again.waypoints(), scene.waypoints());
        assert_eq!(again.edges(), scene.edges());
        assert!(matches!(SceneBundle::<f64>::from_json(b"{"), Err(Error::MalformedBundle(_))));
        assert!(matches!(SceneBundle::<f64>::from_json(b"\xff\x00"), Err(Error::MalformedBundle(_))));
    }
}
