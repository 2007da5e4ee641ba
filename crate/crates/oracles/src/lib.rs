//! Slow, obviously-correct reference implementations for cross-checking
//! `ues-core`. Nothing here shares code with the library beyond its data
//! types and scene constructor.

use std::collections::{BTreeMap, HashMap, HashSet};

use rand::Rng;
use ues_core::geometry::Pixel;
use ues_core::scene::{Area, AreaKind, GridMap, Waypoint};
use ues_core::{Action, Point, Scene};

/// Ties in accumulated path weight closer than this are treated as equal.
pub const WEIGHT_TOL: f64 = 1e-9;

pub fn square(x0: f64, y0: f64, x1: f64, y1: f64) -> Vec<Point> {
    vec![Point::new(x0, y0), Point::new(x1, y0), Point::new(x1, y1), Point::new(x0, y1)]
}

/// Scene with a single region covering the map and the given waypoints.
pub fn open_scene(width: u32, height: u32, waypoints: &[(&str, f64, f64)], edges: &[(&str, &str)]) -> Scene {
    let areas = vec![Area {
        id: "floor".into(),
        kind: AreaKind::Region,
        polygon: square(0.0, 0.0, width as f64, height as f64),
    }];
    let wps = waypoints
        .iter()
        .map(|&(id, x, y)| Waypoint { id: id.to_string(), position: Point::new(x, y) })
        .collect();
    let edges: Vec<(String, String)> = edges.iter().map(|&(a, b)| (a.to_string(), b.to_string())).collect();
    Scene::new(GridMap { width, height, resolution: 0.05 }, areas, wps, &edges).expect("oracle scene is valid")
}

/// Random connected scene: `n` waypoints at distinct integer positions with
/// shuffled ids, a random spanning tree plus a few extra edges.
pub fn random_scene<R: Rng>(rng: &mut R, width: u32, height: u32, n: usize) -> Scene {
    let mut taken = HashSet::new();
    let mut pts = Vec::new();
    while pts.len() < n {
        let x = rng.random_range(0..=width);
        let y = rng.random_range(0..=height);
        if taken.insert((x, y)) {
            pts.push((x as f64, y as f64));
        }
    }
    let mut ids: Vec<String> = (0..n).map(|k| format!("w{k:02}")).collect();
    for k in (1..n).rev() {
        ids.swap(k, rng.random_range(0..=k));
    }
    let mut edges = Vec::new();
    for k in 1..n {
        let parent = rng.random_range(0..k);
        edges.push((ids[k].clone(), ids[parent].clone()));
    }
    for _ in 0..rng.random_range(0..=n) {
        let a = rng.random_range(0..n);
        let b = rng.random_range(0..n);
        if a != b {
            edges.push((ids[a].clone(), ids[b].clone()));
        }
    }
    let wps: Vec<(&str, f64, f64)> = ids.iter().zip(&pts).map(|(id, &(x, y))| (id.as_str(), x, y)).collect();
    let edge_refs: Vec<(&str, &str)> = edges.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    open_scene(width, height, &wps, &edge_refs)
}

/// Waypoint positions keyed by id, in the order the scene reports them.
pub fn positions(scene: &Scene) -> Vec<(String, f64, f64)> {
    scene
        .waypoints()
        .iter()
        .map(|w| (w.id.clone(), w.position.x, w.position.y))
        .collect()
}

/// Linear scan for the nearest waypoint; equal distances go to the smaller id.
pub fn nearest_by_scan(waypoints: &[(String, f64, f64)], x: f64, y: f64) -> String {
    let mut best: Option<(&str, f64)> = None;
    for (id, wx, wy) in waypoints {
        let d = (wx - x) * (wx - x) + (wy - y) * (wy - y);
        best = match best {
            None => Some((id, d)),
            Some((bid, bd)) if d < bd || (d == bd && id.as_str() < bid) => Some((id, d)),
            keep => keep,
        };
    }
    best.expect("at least one waypoint").0.to_string()
}

/// Owner id of every pixel, row-major.
pub fn voronoi_by_scan(scene: &Scene) -> Vec<String> {
    let wps = positions(scene);
    let (w, h) = (scene.map().width, scene.map().height);
    let mut out = Vec::with_capacity((w * h) as usize);
    for j in 0..h {
        for i in 0..w {
            out.push(nearest_by_scan(&wps, i as f64 + 0.5, j as f64 + 0.5));
        }
    }
    out
}

fn on_segment(px: f64, py: f64, ax: f64, ay: f64, bx: f64, by: f64) -> bool {
    let len = ((bx - ax).powi(2) + (by - ay).powi(2)).sqrt();
    let da = ((px - ax).powi(2) + (py - ay).powi(2)).sqrt();
    let db = ((px - bx).powi(2) + (py - by).powi(2)).sqrt();
    (da + db - len).abs() <= 1e-12 * len.max(1.0)
}

/// Winding-number membership, boundary inclusive.
pub fn inside_by_winding(poly: &[(f64, f64)], px: f64, py: f64) -> bool {
    let n = poly.len();
    let mut winding = 0i32;
    for k in 0..n {
        let (ax, ay) = poly[k];
        let (bx, by) = poly[(k + 1) % n];
        if on_segment(px, py, ax, ay, bx, by) {
            return true;
        }
        let cross = (bx - ax) * (py - ay) - (px - ax) * (by - ay);
        if ay <= py {
            if by > py && cross > 0.0 {
                winding += 1;
            }
        } else if by <= py && cross < 0.0 {
            winding -= 1;
        }
    }
    winding != 0
}

pub fn pixels_in_polygon(poly: &[(f64, f64)], width: u32, height: u32) -> Vec<Pixel> {
    let mut out = Vec::new();
    for i in 0..width {
        for j in 0..height {
            if inside_by_winding(poly, i as f64 + 0.5, j as f64 + 0.5) {
                out.push(Pixel::new(i, j));
            }
        }
    }
    out.sort();
    out
}

/// Probability per waypoint from points and raw sliders.
pub fn precision_oracle(waypoints: &[(String, f64, f64)], points: &[(f64, f64, f64)]) -> BTreeMap<String, f64> {
    let total: f64 = points.iter().map(|p| p.2).sum();
    let mut out = BTreeMap::new();
    for &(x, y, s) in points {
        let mass = if total > 1.0 { s / total } else { s };
        if mass > 0.0 {
            *out.entry(nearest_by_scan(waypoints, x, y)).or_insert(0.0) += mass;
        }
    }
    out
}

/// Probability per waypoint from a brightness lookup over the whole grid.
pub fn paint_oracle(
    waypoints: &[(String, f64, f64)],
    width: u32,
    height: u32,
    brightness: &HashMap<(u32, u32), f64>,
) -> BTreeMap<String, f64> {
    let mut mass: BTreeMap<String, f64> = BTreeMap::new();
    let mut total = 0.0;
    for j in 0..height {
        for i in 0..width {
            let b = brightness.get(&(i, j)).copied().unwrap_or(0.0);
            if b > 0.0 {
                *mass.entry(nearest_by_scan(waypoints, i as f64 + 0.5, j as f64 + 0.5)).or_insert(0.0) += b;
                total += b;
            }
        }
    }
    mass.into_iter().map(|(k, v)| (k, v / total)).collect()
}

/// Optimal string alignment distance straight from its recurrence.
pub fn osa_recursive<A: PartialEq>(a: &[A], b: &[A]) -> usize {
    fn go<A: PartialEq>(a: &[A], b: &[A], i: usize, j: usize, memo: &mut HashMap<(usize, usize), usize>) -> usize {
        if i == 0 {
            return j;
        }
        if j == 0 {
            return i;
        }
        if let Some(&d) = memo.get(&(i, j)) {
            return d;
        }
        let mut best = (go(a, b, i - 1, j, memo) + 1)
            .min(go(a, b, i, j - 1, memo) + 1)
            .min(go(a, b, i - 1, j - 1, memo) + usize::from(a[i - 1] != b[j - 1]));
        if i > 1 && j > 1 && a[i - 1] == b[j - 2] && a[i - 2] == b[j - 1] {
            best = best.min(go(a, b, i - 2, j - 2, memo) + 1);
        }
        memo.insert((i, j), best);
        best
    }
    go(a, b, a.len(), b.len(), &mut HashMap::new())
}

/// All-pairs shortest routes found by enumerating every simple path. Among
/// routes within [`WEIGHT_TOL`] of the optimum, the lexicographically
/// smallest id sequence wins.
pub struct BruteRoutes {
    routes: HashMap<String, HashMap<String, (f64, Vec<String>)>>,
}

impl BruteRoutes {
    pub fn new(scene: &Scene) -> Self {
        let ids: Vec<String> = scene.waypoint_ids().map(str::to_string).collect();
        let mut nbrs: HashMap<&str, Vec<(&str, f64)>> = HashMap::new();
        for e in scene.edges() {
            let (a, b) = (ids[e.a].as_str(), ids[e.b].as_str());
            let pa = &scene.waypoints()[e.a].position;
            let pb = &scene.waypoints()[e.b].position;
            let w = ((pa.x - pb.x).powi(2) + (pa.y - pb.y).powi(2)).sqrt();
            nbrs.entry(a).or_default().push((b, w));
            nbrs.entry(b).or_default().push((a, w));
        }
        let mut routes = HashMap::new();
        for s in &ids {
            let mut best: HashMap<String, (f64, Vec<String>)> = HashMap::new();
            let mut path = vec![s.clone()];
            let mut on_path: HashSet<String> = HashSet::from([s.clone()]);
            extend(&nbrs, &mut path, &mut on_path, 0.0, &mut best);
            routes.insert(s.clone(), best);
        }
        Self { routes }
    }

    pub fn route(&self, a: &str, b: &str) -> &[String] {
        &self.routes[a][b].1
    }

    pub fn weight(&self, a: &str, b: &str) -> f64 {
        self.routes[a][b].0
    }

    pub fn hops(&self, a: &str, b: &str) -> usize {
        self.route(a, b).len() - 1
    }
}

fn extend(
    nbrs: &HashMap<&str, Vec<(&str, f64)>>,
    path: &mut Vec<String>,
    on_path: &mut HashSet<String>,
    weight: f64,
    best: &mut HashMap<String, (f64, Vec<String>)>,
) {
    let end = path.last().expect("non-empty path").clone();
    let better = match best.get(&end) {
        None => true,
        Some((w, p)) => weight < w - WEIGHT_TOL || (weight <= w + WEIGHT_TOL && path.as_slice() < p.as_slice()),
    };
    if better {
        best.insert(end.clone(), (weight, path.clone()));
    }
    for &(next, w) in nbrs.get(end.as_str()).map(Vec::as_slice).unwrap_or(&[]) {
        if on_path.insert(next.to_string()) {
            path.push(next.to_string());
            extend(nbrs, path, on_path, weight + w, best);
            path.pop();
            on_path.remove(next);
        }
    }
}

/// Reference executor for the fetch-and-deliver task, written directly from
/// the behavioral description: observe on arrival, head for the first
/// candidate not yet ruled out, otherwise the nearest unvisited waypoint,
/// and reconsider only on reaching the target or sighting the object.
pub fn reference_run(
    scene: &Scene,
    routes: &BruteRoutes,
    start: &str,
    carried: &str,
    container: &str,
    beliefs: &HashMap<String, Vec<String>>,
    world: &HashMap<String, String>,
) -> Vec<Action> {
    let ids: Vec<String> = scene.waypoint_ids().map(str::to_string).collect();
    let mut actions = Vec::new();
    let mut seen: HashMap<String, String> = HashMap::new();
    let mut visited: HashSet<String> = HashSet::new();
    let mut pos = start.to_string();

    let look = |at: &str, actions: &mut Vec<Action>, seen: &mut HashMap<String, String>, visited: &mut HashSet<String>| {
        actions.push(Action::Observe { at: at.to_string() });
        visited.insert(at.to_string());
        for (obj, w) in world {
            if w == at {
                seen.insert(obj.clone(), w.clone());
            }
        }
    };
    look(&pos, &mut actions, &mut seen, &mut visited);

    for obj in [carried, container] {
        loop {
            if seen.get(obj) == Some(&pos) {
                break;
            }
            let target = if let Some(w) = seen.get(obj) {
                w.clone()
            } else if let Some(c) = beliefs
                .get(obj)
                .into_iter()
                .flatten()
                .find(|c| !visited.contains(*c))
            {
                c.clone()
            } else {
                let mut best: Option<(&String, f64)> = None;
                for w in &ids {
                    if visited.contains(w) {
                        continue;
                    }
                    let d = routes.weight(&pos, w);
                    if best.is_none_or(|(_, bd)| d < bd - WEIGHT_TOL) {
                        best = Some((w, d));
                    }
                }
                best.expect("object must be somewhere unvisited").0.clone()
            };
            let route = routes.route(&pos, &target).to_vec();
            for next in &route[1..] {
                actions.push(Action::Move { from: pos.clone(), to: next.clone() });
                pos = next.clone();
                look(&pos, &mut actions, &mut seen, &mut visited);
                if pos == target || seen.get(obj).is_some_and(|w| *w != target) {
                    break;
                }
            }
        }
        if obj == carried {
            actions.push(Action::Pick { object: carried.to_string(), at: pos.clone() });
        } else {
            actions.push(Action::Place {
                object: carried.to_string(),
                container: container.to_string(),
                at: pos.clone(),
            });
        }
    }
    actions
}

/// Three small scenes with integer edge lengths, so route ties are exact.
pub fn hand_built_scenes() -> Vec<(&'static str, Scene, &'static str)> {
    // square of side 3: opposite corners are tied two ways
    let square4 = open_scene(
        10,
        10,
        &[("d", 1.0, 1.0), ("b", 4.0, 1.0), ("a", 4.0, 4.0), ("c", 1.0, 4.0)],
        &[("d", "b"), ("b", "a"), ("a", "c"), ("c", "d")],
    );
    // star around a hub with one 3-4-5 chord
    let star5 = open_scene(
        10,
        10,
        &[("hub", 5.0, 5.0), ("n", 5.0, 1.0), ("e", 8.0, 5.0), ("w", 1.0, 5.0), ("s", 5.0, 8.0)],
        &[("hub", "n"), ("hub", "e"), ("hub", "w"), ("hub", "s"), ("n", "e")],
    );
    // 2x3 ladder, rungs 3, rails 4, one diagonal 5
    let ladder6 = open_scene(
        10,
        10,
        &[
            ("p", 1.0, 1.0),
            ("k", 5.0, 1.0),
            ("f", 9.0, 1.0),
            ("m", 1.0, 4.0),
            ("a", 5.0, 4.0),
            ("z", 9.0, 4.0),
        ],
        &[("p", "k"), ("k", "f"), ("m", "a"), ("a", "z"), ("p", "m"), ("k", "a"), ("f", "z"), ("p", "a")],
    );
    vec![("square4", square4, "d"), ("star5", star5, "w"), ("ladder6", ladder6, "p")]
}

/// Every ordered list of distinct ids with length at most `max_len`,
/// including the empty list.
pub fn ordered_selections(ids: &[String], max_len: usize) -> Vec<Vec<String>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::<String>::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for prefix in &frontier {
            for id in ids {
                if !prefix.contains(id) {
                    let mut p = prefix.clone();
                    p.push(id.clone());
                    next.push(p);
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}
