//! Frontier detection and the annotated map prompts built from it.

mod annotate;
mod font;
mod render;

pub use annotate::{
    annotate_decision, annotate_judgment, AnnotatedMap, Marker, MarkerKind, Purpose, FRONTIER_ORANGE, GOAL_BLUE,
    HISTORY_GREEN, ROBOT_RED,
};
pub use render::{render, render_png, Palette, PALETTE};

use serde::{Deserialize, Serialize};

use crate::geometry::{Cell, CellRect, NEIGHBORS_8};
use crate::mapping::SemanticMap;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FrontierError {
    #[error("no frontier cells on the map")]
    NoFrontiers,
}

/// A connected run of frontier cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrontierCluster {
    /// Member cells in row-major discovery order.
    pub cells: Vec<Cell>,
    /// Member closest to the centroid.
    pub representative: Cell,
}

/// A labeled exploration option.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrontierPoint {
    pub coord: Cell,
    pub cluster_size: usize,
    pub label: char,
}

/// Explored, unoccupied, and 8-adjacent to an unexplored cell of the map.
pub fn is_frontier_cell(map: &SemanticMap, c: Cell) -> bool {
    map.is_explored_free(c)
        && NEIGHBORS_8.iter().any(|&(dx, dy)| {
            let n = c.offset(dx, dy);
            map.in_bounds(n) && !map.is_explored(n)
        })
}

/// All frontier clusters of at least `min_size` cells inside `region`,
/// largest first; equal sizes keep row-major discovery order.
pub fn frontier_clusters(map: &SemanticMap, region: CellRect, min_size: usize) -> Vec<FrontierCluster> {
    let region = region.clipped(map.size(), map.size());
    let (w, h) = (region.width(), region.height());
    if w == 0 || h == 0 {
        return Vec::new();
    }
    let idx = |c: Cell| (c.y - region.min.y) as usize * w + (c.x - region.min.x) as usize;
    let mut is_front = vec![false; w * h];
    for c in region.cells() {
        is_front[idx(c)] = is_frontier_cell(map, c);
    }
    let mut seen = vec![false; w * h];
    let mut clusters = Vec::new();
    for start in region.cells() {
        let i = idx(start);
        if !is_front[i] || seen[i] {
            continue;
        }
        seen[i] = true;
        let mut cells = vec![start];
        let mut k = 0;
        while k < cells.len() {
            let c = cells[k];
            k += 1;
            for (dx, dy) in NEIGHBORS_8 {
                let n = c.offset(dx, dy);
                if region.contains(n) {
                    let j = idx(n);
                    if is_front[j] && !seen[j] {
                        seen[j] = true;
                        cells.push(n);
                    }
                }
            }
        }
        if cells.len() >= min_size {
            cells.sort_by_key(|c| (c.y, c.x));
            let representative = snap_to_centroid(&cells);
            clusters.push(FrontierCluster { cells, representative });
        }
    }
    clusters.sort_by_key(|c| std::cmp::Reverse(c.cells.len()));
    clusters
}

fn snap_to_centroid(cells: &[Cell]) -> Cell {
    let n = cells.len() as f64;
    let cx = cells.iter().map(|c| c.x as f64).sum::<f64>() / n;
    let cy = cells.iter().map(|c| c.y as f64).sum::<f64>() / n;
    let d2 = |c: &Cell| (c.x as f64 - cx).powi(2) + (c.y as f64 - cy).powi(2);
    *cells
        .iter()
        .min_by(|a, b| d2(a).total_cmp(&d2(b)))
        .expect("clusters are non-empty")
}

/// The `max_options` largest clusters, labeled `A`, `B`, ... in rank order.
pub fn detect_frontiers(
    map: &SemanticMap,
    region: CellRect,
    min_size: usize,
    max_options: usize,
) -> Result<Vec<FrontierPoint>, FrontierError> {
    let points = label_clusters(&frontier_clusters(map, region, min_size), max_options);
    if points.is_empty() {
        Err(FrontierError::NoFrontiers)
    } else {
        Ok(points)
    }
}

/// Labels the leading clusters of an already ranked list.
pub fn label_clusters(clusters: &[FrontierCluster], max_options: usize) -> Vec<FrontierPoint> {
    clusters
        .iter()
        .take(max_options.min(26))
        .enumerate()
        .map(|(i, c)| FrontierPoint {
            coord: c.representative,
            cluster_size: c.cells.len(),
            label: (b'A' + i as u8) as char,
        })
        .collect()
}
