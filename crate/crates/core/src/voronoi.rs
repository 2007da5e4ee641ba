//! Partition of map pixels into per-waypoint Voronoi cells `X_w`.

use rayon::prelude::*;

use crate::geometry::Pixel;
use crate::scalar::Scalar;
use crate::scene::SceneBundle;

/// Owner of every pixel plus the inverse cell lists. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VoronoiAssignment {
    width: u32,
    height: u32,
    ids: Vec<String>,
    owner: Vec<u32>,
    cells: Vec<Vec<Pixel>>,
}

impl VoronoiAssignment {
    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    /// Waypoint ids in index order.
    pub fn waypoint_ids(&self) -> &[String] {
        &self.ids
    }

    pub fn owner_index(&self, px: Pixel) -> usize {
        self.owner[px.j as usize * self.width as usize + px.i as usize] as usize
    }

    pub fn owner(&self, px: Pixel) -> &str {
        &self.ids[self.owner_index(px)]
    }

    /// Pixels of the cell at waypoint index `k`, in row-major order.
    pub fn cell(&self, k: usize) -> &[Pixel] {
        &self.cells[k]
    }

    pub fn cell_of(&self, id: &str) -> Option<&[Pixel]> {
        self.ids.iter().position(|w| w == id).map(|k| self.cells[k].as_slice())
    }

    pub fn cells(&self) -> impl Iterator<Item = (&str, &[Pixel])> {
        self.ids.iter().map(String::as_str).zip(self.cells.iter().map(Vec::as_slice))
    }
}

/// Assigns each pixel center to its nearest waypoint. Equidistant pixels go
/// to the waypoint with the smallest id.
pub fn voronoi_assign<T: Scalar>(scene: &SceneBundle<T>) -> VoronoiAssignment {
    let map = scene.map();
    let width = map.width as usize;
    let mut owner = vec![0u32; map.pixel_count()];
    owner.par_chunks_mut(width).enumerate().for_each(|(j, row)| {
        for (i, slot) in row.iter_mut().enumerate() {
            let center = Pixel::new(i as u32, j as u32).center();
            *slot = scene.nearest_index(&center) as u32;
        }
    });

    let mut cells = vec![Vec::new(); scene.waypoints().len()];
    for (k, &o) in owner.iter().enumerate() {
        cells[o as usize].push(Pixel::new((k % width) as u32, (k / width) as u32));
    }

    VoronoiAssignment {
        width: map.width,
        height: map.height,
        ids: scene.waypoint_ids().map(str::to_string).collect(),
        owner,
        cells,
    }
}
