//! Planar primitives in pixel coordinates.
//!
//! Pixel `(i, j)` covers the unit square `[i, i+1) x [j, j+1)`; its center is
//! `(i + 0.5, j + 0.5)`. Polygons are closed implicitly (last vertex connects
//! to the first).

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point<T> {
    pub x: T,
    pub y: T,
}

impl<T: Scalar> Point<T> {
    pub fn new(x: T, y: T) -> Self {
        Self { x, y }
    }

    pub fn distance_sq(&self, other: &Self) -> T {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    pub fn distance(&self, other: &Self) -> T {
        self.distance_sq(other).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

/// Integer pixel index on a grid map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Pixel {
    pub i: u32,
    pub j: u32,
}

impl Pixel {
    pub const fn new(i: u32, j: u32) -> Self {
        Self { i, j }
    }

    pub fn center<T: Scalar>(&self) -> Point<T> {
        let half = T::lit(0.5);
        Point::new(T::lit(self.i as f64) + half, T::lit(self.j as f64) + half)
    }

    /// The pixel whose square contains `p`. Points on the far map edge
    /// (`x == width` or `y == height`) clamp into the last row/column.
    pub fn containing<T: Scalar>(p: &Point<T>, width: u32, height: u32) -> Self {
        let clamp = |v: T, n: u32| -> u32 {
            let f = v.floor().to_f64_lossy();
            if f < 0.0 {
                0
            } else {
                (f as u64).min(n as u64 - 1) as u32
            }
        };
        Self::new(clamp(p.x, width), clamp(p.y, height))
    }
}

/// Signed area of the triangle `(a, b, c)`, doubled.
fn orient<T: Scalar>(a: &Point<T>, b: &Point<T>, c: &Point<T>) -> T {
    (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
}

fn within_box<T: Scalar>(a: &Point<T>, b: &Point<T>, p: &Point<T>) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

pub fn point_on_segment<T: Scalar>(p: &Point<T>, a: &Point<T>, b: &Point<T>) -> bool {
    orient(a, b, p) == T::zero() && within_box(a, b, p)
}

/// Closed-segment intersection test, including collinear overlap and shared endpoints.
pub fn segments_intersect<T: Scalar>(
    p1: &Point<T>,
    p2: &Point<T>,
    q1: &Point<T>,
    q2: &Point<T>,
) -> bool {
    let zero = T::zero();
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    if ((d1 > zero && d2 < zero) || (d1 < zero && d2 > zero))
        && ((d3 > zero && d4 < zero) || (d3 < zero && d4 > zero))
    {
        return true;
    }
    (d1 == zero && within_box(q1, q2, p1))
        || (d2 == zero && within_box(q1, q2, p2))
        || (d3 == zero && within_box(p1, p2, q1))
        || (d4 == zero && within_box(p1, p2, q2))
}

fn edges<T>(poly: &[Point<T>]) -> impl Iterator<Item = (&Point<T>, &Point<T>)> {
    let n = poly.len();
    (0..n).map(move |k| (&poly[k], &poly[(k + 1) % n]))
}

/// Even-odd containment; points exactly on an edge count as inside.
pub fn point_in_polygon<T: Scalar>(p: &Point<T>, poly: &[Point<T>]) -> bool {
    let mut inside = false;
    for (a, b) in edges(poly) {
        if point_on_segment(p, a, b) {
            return true;
        }
        if (a.y > p.y) != (b.y > p.y) {
            let x_cross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if p.x < x_cross {
                inside = !inside;
            }
        }
    }
    inside
}

pub fn signed_area<T: Scalar>(poly: &[Point<T>]) -> T {
    let two = T::lit(2.0);
    edges(poly).map(|(a, b)| a.x * b.y - b.x * a.y).sum::<T>() / two
}

/// Why a vertex list fails to describe a simple polygon.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PolygonDefect {
    TooFewVertices(usize),
    NonFinite,
    ZeroArea,
    RepeatedVertex(usize),
    SelfIntersection(usize, usize),
}

impl std::fmt::Display for PolygonDefect {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::TooFewVertices(n) => write!(f, "polygon has {n} vertices, need at least 3"),
            Self::NonFinite => f.write_str("polygon has a non-finite coordinate"),
            Self::ZeroArea => f.write_str("polygon is degenerate (zero area)"),
            Self::RepeatedVertex(k) => write!(f, "vertex {k} repeats its predecessor"),
            Self::SelfIntersection(a, b) => write!(f, "edges {a} and {b} intersect"),
        }
    }
}

/// Checks that `poly` is a simple polygon: at least three distinct
/// consecutive vertices, nonzero area, and no edge touching a non-adjacent
/// edge. Adjacent edges may only share their common vertex.
pub fn validate_simple_polygon<T: Scalar>(poly: &[Point<T>]) -> Result<(), PolygonDefect> {
    let n = poly.len();
    if n < 3 {
        return Err(PolygonDefect::TooFewVertices(n));
    }
    if poly.iter().any(|p| !p.is_finite()) {
        return Err(PolygonDefect::NonFinite);
    }
    for k in 0..n {
        if poly[k] == poly[(k + 1) % n] {
            return Err(PolygonDefect::RepeatedVertex((k + 1) % n));
        }
    }
    if signed_area(poly) == T::zero() {
        return Err(PolygonDefect::ZeroArea);
    }
    for a in 0..n {
        let (a1, a2) = (&poly[a], &poly[(a + 1) % n]);
        for b in (a + 1)..n {
            let (b1, b2) = (&poly[b], &poly[(b + 1) % n]);
            let adjacent_next = b == a + 1;
            let adjacent_wrap = a == 0 && b == n - 1;
            if adjacent_next {
                // share a2 == b1; reject folding back along the same line
                if orient(a1, a2, b2) == T::zero() && within_box(a1, a2, b2)
                    || orient(b1, b2, a1) == T::zero() && within_box(b1, b2, a1)
                {
                    return Err(PolygonDefect::SelfIntersection(a, b));
                }
            } else if adjacent_wrap {
                // share a1 == b2
                if orient(b1, b2, a2) == T::zero() && within_box(b1, b2, a2)
                    || orient(a1, a2, b1) == T::zero() && within_box(a1, a2, b1)
                {
                    return Err(PolygonDefect::SelfIntersection(a, b));
                }
            } else if segments_intersect(a1, a2, b1, b2) {
                return Err(PolygonDefect::SelfIntersection(a, b));
            }
        }
    }
    Ok(())
}

/// True when the closed segment `a`-`b` touches the closed polygon.
pub fn segment_hits_polygon<T: Scalar>(a: &Point<T>, b: &Point<T>, poly: &[Point<T>]) -> bool {
    point_in_polygon(a, poly)
        || point_in_polygon(b, poly)
        || edges(poly).any(|(p, q)| segments_intersect(a, b, p, q))
}
