use std::cmp::Reverse;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use super::SplPath;
use crate::category::Category;
use crate::geometry::{Cell, NEIGHBORS_8};
use crate::world::SceneGrid;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureClass {
    None,
    Detection,
    Planning,
    Exploration,
}

impl FailureClass {
    pub fn name(self) -> &'static str {
        match self {
            FailureClass::None => "none",
            FailureClass::Detection => "detection",
            FailureClass::Planning => "planning",
            FailureClass::Exploration => "exploration",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpisodeResult {
    pub goal: Category,
    pub success: bool,
    pub steps: u32,
    /// Distance travelled by each robot, meters.
    pub path_lengths_m: Vec<f64>,
    /// Robot whose stop ended the episode.
    pub stopper: Option<usize>,
    /// Shortest ground-truth path from the stopper's start to the goal, meters.
    pub shortest_path_m: Option<f64>,
    pub failure: FailureClass,
    /// Commitments to mapped goal cells that are not the goal.
    pub detection_traps: u32,
    pub oracle_errors: u32,
}

impl EpisodeResult {
    /// Path length entering SPL for this episode.
    pub fn spl_path_m(&self, mode: SplPath) -> Option<f64> {
        let r = self.stopper?;
        Some(match mode {
            SplPath::Own => self.path_lengths_m[r],
            SplPath::Sum => self.path_lengths_m.iter().sum(),
        })
    }
}

/// Fraction of successful episodes; 0 for an empty list.
pub fn compute_sr(results: &[EpisodeResult]) -> f64 {
    if results.is_empty() {
        return 0.0;
    }
    results.iter().filter(|r| r.success).count() as f64 / results.len() as f64
}

/// Mean over episodes of `S * l / max(p, l)`; 0 for an empty list.
pub fn compute_spl(results: &[EpisodeResult], mode: SplPath) -> f64 {
    if results.is_empty() {
        return 0.0;
    }
    let total: f64 = results
        .iter()
        .filter(|r| r.success)
        .map(|r| {
            let l = r.shortest_path_m.unwrap_or(0.0);
            let p = r.spl_path_m(mode).unwrap_or(0.0);
            let m = p.max(l);
            if m > 0.0 {
                l / m
            } else {
                1.0
            }
        })
        .sum();
    total / results.len() as f64
}

/// What an episode observed about the goal, for failure attribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct FailureEvidence {
    pub success: bool,
    /// A robot stopped away from every goal instance.
    pub wrong_stop: bool,
    /// A sensor ray hit a true goal instance at some step.
    pub goal_seen: bool,
    /// A true goal cell was mapped with the goal category.
    pub goal_mapped: bool,
}

/// Detection when the robot stopped at the wrong place or saw the goal without
/// ever mapping it as such; planning when the goal was mapped but not reached;
/// exploration otherwise.
pub fn classify_failure(e: &FailureEvidence) -> FailureClass {
    if e.success {
        FailureClass::None
    } else if e.wrong_stop || (e.goal_seen && !e.goal_mapped) {
        FailureClass::Detection
    } else if e.goal_mapped {
        FailureClass::Planning
    } else {
        FailureClass::Exploration
    }
}

/// Ground-truth travel distance in cells from every scene cell to the nearest
/// instance cell of `goal`: 8-connected Dijkstra over non-wall cells where
/// diagonals cost `sqrt 2` and may not cut wall corners. Row-major; infinite
/// where unreachable.
pub fn goal_distance_cells(scene: &SceneGrid, goal: Category) -> Vec<f64> {
    let (w, h) = (scene.width(), scene.height());
    let idx = |c: Cell| c.y as usize * w + c.x as usize;
    let mut dist = vec![f64::INFINITY; w * h];
    let mut heap = BinaryHeap::new();
    for o in scene.instances_of(goal) {
        for &c in &o.cells {
            dist[idx(c)] = 0.0;
            heap.push(Reverse((0f64.to_bits(), c.x, c.y)));
        }
    }
    // non-negative floats order like their bit patterns
    while let Some(Reverse((key, x, y))) = heap.pop() {
        let c = Cell::new(x, y);
        let d = dist[idx(c)];
        if d.to_bits() != key {
            continue;
        }
        for (dx, dy) in NEIGHBORS_8 {
            let n = c.offset(dx, dy);
            if !scene.in_bounds(n) || scene.is_wall(n) {
                continue;
            }
            let diagonal = dx != 0 && dy != 0;
            if diagonal && (scene.is_wall(c.offset(dx, 0)) || scene.is_wall(c.offset(0, dy))) {
                continue;
            }
            let nd = d + if diagonal { std::f64::consts::SQRT_2 } else { 1.0 };
            if nd < dist[idx(n)] {
                dist[idx(n)] = nd;
                heap.push(Reverse((nd.to_bits(), n.x, n.y)));
            }
        }
    }
    dist
}

/// Shortest ground-truth path in meters from `start` to the nearest instance
/// of `goal`, if one is reachable.
pub fn shortest_path_m(scene: &SceneGrid, start: Cell, goal: Category) -> Option<f64> {
    if !scene.in_bounds(start) {
        return None;
    }
    let d = goal_distance_cells(scene, goal)[start.y as usize * scene.width() + start.x as usize];
    d.is_finite().then(|| d * scene.cell_size())
}
