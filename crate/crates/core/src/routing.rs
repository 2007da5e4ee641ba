//! All-pairs shortest paths over the navigation graph.
//!
//! Distances for the pair `(a, b)` always come from the Dijkstra run rooted
//! at the smaller waypoint index, so `distance(a, b) == distance(b, a)`
//! bit-for-bit. Among equal-weight paths the one with the lexicographically
//! smallest waypoint sequence wins; waypoints are indexed in id order, so
//! comparing indices compares ids.

use crate::scalar::Scalar;

#[derive(Debug, Clone)]
pub struct RouteTable<T> {
    /// `rows[s][v]` is the distance from `s` to `v` computed by the run rooted at `s`.
    rows: Vec<Vec<T>>,
}

fn dijkstra<T: Scalar>(adjacency: &[Vec<(usize, T)>], source: usize) -> Vec<T> {
    let n = adjacency.len();
    let mut dist = vec![T::infinity(); n];
    let mut done = vec![false; n];
    dist[source] = T::zero();
    for _ in 0..n {
        let mut best: Option<usize> = None;
        for v in 0..n {
            if !done[v] && dist[v].is_finite() && best.is_none_or(|b| dist[v] < dist[b]) {
                best = Some(v);
            }
        }
        let Some(u) = best else { break };
        done[u] = true;
        for &(v, w) in &adjacency[u] {
            let cand = dist[u] + w;
            if cand < dist[v] {
                dist[v] = cand;
            }
        }
    }
    dist
}

impl<T: Scalar> RouteTable<T> {
    pub fn build(adjacency: &[Vec<(usize, T)>]) -> Self {
        let rows = (0..adjacency.len()).map(|s| dijkstra(adjacency, s)).collect();
        Self { rows }
    }

    pub fn distance(&self, a: usize, b: usize) -> T {
        let (s, t) = if a <= b { (a, b) } else { (b, a) };
        self.rows[s][t]
    }

    /// Waypoint indices of the canonical shortest path from `from` to `to`, inclusive.
    pub fn path(&self, adjacency: &[Vec<(usize, T)>], from: usize, to: usize) -> Vec<usize> {
        if from == to {
            return vec![from];
        }
        let s = from.min(to);
        let t = from.max(to);
        let ds = &self.rows[s];
        let tight = |u: usize, v: usize, w: T| ds[u] + w == ds[v];

        if from == s {
            // nodes from which `t` is reachable along tight edges
            let mut reaches = vec![false; adjacency.len()];
            reaches[t] = true;
            let mut stack = vec![t];
            while let Some(v) = stack.pop() {
                for &(u, w) in &adjacency[v] {
                    if !reaches[u] && tight(u, v, w) {
                        reaches[u] = true;
                        stack.push(u);
                    }
                }
            }
            let mut path = vec![s];
            let mut cur = s;
            while cur != t {
                cur = adjacency[cur]
                    .iter()
                    .filter(|&&(v, w)| reaches[v] && tight(cur, v, w))
                    .map(|&(v, _)| v)
                    .min()
                    .expect("tight successor exists on a connected graph");
                path.push(cur);
            }
            path
        } else {
            // walk backwards along tight edges from the far end to the root
            let mut path = vec![from];
            let mut cur = from;
            while cur != s {
                cur = adjacency[cur]
                    .iter()
                    .filter(|&&(u, w)| tight(u, cur, w))
                    .map(|&(u, _)| u)
                    .min()
                    .expect("tight predecessor exists on a connected graph");
                path.push(cur);
            }
            path
        }
    }
}
