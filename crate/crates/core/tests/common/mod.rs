//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use semnav_core::category::Category;
use semnav_core::geometry::Cell;
use semnav_core::world::{ObjectInstance, SceneGrid};

/// Row-major free flags of a `w` x `h` grid.
pub struct Grid {
    pub w: usize,
    pub h: usize,
    pub free: Vec<bool>,
}

impl Grid {
    pub fn is_free(&self, x: i64, y: i64) -> bool {
        x >= 0
            && y >= 0
            && (x as usize) < self.w
            && (y as usize) < self.h
            && self.free[y as usize * self.w + x as usize]
    }

    /// Scene walls grown by `inflation` cells (Euclidean disc).
    pub fn inflated(scene: &SceneGrid, inflation: i64) -> Self {
        let (w, h) = (scene.width(), scene.height());
        let mut free = vec![true; w * h];
        for y in 0..h as i64 {
            for x in 0..w as i64 {
                if !scene.is_wall(Cell::new(x as i32, y as i32)) {
                    continue;
                }
                for dy in -inflation..=inflation {
                    for dx in -inflation..=inflation {
                        let (nx, ny) = (x + dx, y + dy);
                        if dx * dx + dy * dy <= inflation * inflation
                            && nx >= 0
                            && ny >= 0
                            && (nx as usize) < w
                            && (ny as usize) < h
                        {
                            free[ny as usize * w + nx as usize] = false;
                        }
                    }
                }
            }
        }
        Self { w, h, free }
    }
}

/// 8-connected Dijkstra from `sources`: unit axial steps, sqrt(2) diagonals,
/// diagonals only between two free axial neighbors. Infinite where
/// unreachable.
pub fn dijkstra(grid: &Grid, sources: &[(i64, i64)]) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; grid.w * grid.h];
    let mut heap = BinaryHeap::new();
    for &(x, y) in sources {
        if grid.is_free(x, y) {
            dist[y as usize * grid.w + x as usize] = 0.0;
            heap.push(Reverse((0u64, x, y)));
        }
    }
    while let Some(Reverse((bits, x, y))) = heap.pop() {
        let d = f64::from_bits(bits);
        if d > dist[y as usize * grid.w + x as usize] {
            continue;
        }
        for dy in -1i64..=1 {
            for dx in -1i64..=1 {
                if (dx, dy) == (0, 0) || !grid.is_free(x + dx, y + dy) {
                    continue;
                }
                if dx != 0 && dy != 0 && !(grid.is_free(x + dx, y) && grid.is_free(x, y + dy)) {
                    continue;
                }
                let nd = d + if dx != 0 && dy != 0 {
                    std::f64::consts::SQRT_2
                } else {
                    1.0
                };
                let i = (y + dy) as usize * grid.w + (x + dx) as usize;
                if nd < dist[i] {
                    dist[i] = nd;
                    heap.push(Reverse((nd.to_bits(), x + dx, y + dy)));
                }
            }
        }
    }
    dist
}

/// One node of the brute-force history simulator.
#[derive(Debug, Clone)]
pub struct BruteNode {
    pub x: i32,
    pub y: i32,
    pub bins: [f64; 360],
    pub visits: u32,
    pub score: f64,
}

/// Explicit 360-array history bookkeeping with a naive nearest-node scan.
#[derive(Debug, Clone, Default)]
pub struct BruteHistory {
    pub nodes: Vec<BruteNode>,
}

impl BruteHistory {
    /// Bin `b` covers degrees `[b, b + 1)`; it is overwritten when that span
    /// meets the open window `(view - f/2, view + f/2)` taken modulo 360.
    pub fn visit(&mut self, x: i32, y: i32, view_deg: f64, value: f64, fhfov: f64, radius: f64) -> f64 {
        let mut nearest: Option<(usize, f64)> = None;
        for (i, n) in self.nodes.iter().enumerate() {
            let d = (((n.x - x) as f64).powi(2) + ((n.y - y) as f64).powi(2)).sqrt();
            if nearest.is_none_or(|(_, bd)| d < bd) {
                nearest = Some((i, d));
            }
        }
        let idx = match nearest {
            Some((i, d)) if d < radius => i,
            _ => {
                self.nodes.push(BruteNode {
                    x,
                    y,
                    bins: [0.0; 360],
                    visits: 0,
                    score: 0.0,
                });
                self.nodes.len() - 1
            }
        };
        let (lo, hi) = (view_deg - fhfov / 2.0, view_deg + fhfov / 2.0);
        let node = &mut self.nodes[idx];
        for b in 0..360 {
            let covered = [-360.0, 0.0, 360.0]
                .iter()
                .any(|k| b as f64 + k < hi && b as f64 + k + 1.0 > lo);
            if covered {
                node.bins[b] = value;
            }
        }
        node.visits += 1;
        let mut sum = 0.0;
        for v in node.bins {
            sum += v;
        }
        node.score = sum / node.visits as f64;
        node.score
    }
}

fn rect(x0: i32, x1: i32, y0: i32, y1: i32) -> Vec<Cell> {
    (y0..y1).flat_map(|y| (x0..x1).map(move |x| Cell::new(x, y))).collect()
}

/// A room holding a bed, and a long dead-end corridor leading off it whose
/// far end is almost closed by a plant, leaving an alcove that cannot be
/// seen from the corridor.
pub struct TrapScene {
    pub scene: SceneGrid,
    /// Corridor end near the plant, `[min, max)` per axis.
    pub trap: (Cell, Cell),
    pub start: Cell,
}

pub fn trap_scene() -> TrapScene {
    let (w, h) = (230usize, 110usize);
    let mut walls = vec![true; w * h];
    for c in rect(3, 103, 3, 107).into_iter().chain(rect(103, 205, 48, 60)) {
        walls[c.y as usize * w + c.x as usize] = false;
    }
    let bed = ObjectInstance {
        id: 1,
        category: Category::Bed,
        cells: rect(8, 16, 90, 100),
    };
    let plant = ObjectInstance {
        id: 2,
        category: Category::Plant,
        cells: rect(188, 194, 51, 60),
    };
    TrapScene {
        scene: SceneGrid::new(w, h, 0.05, walls, vec![bed, plant]).expect("valid trap scene"),
        trap: (Cell::new(175, 48), Cell::new(205, 60)),
        start: Cell::new(160, 54),
    }
}
