use serde::{Deserialize, Serialize};

use super::layers::{Layer, SemanticMap};
use crate::geometry::{march_ray, Cell, Pose};
use crate::world::{HitKind, Observation};

/// Integer registration from scene cells to map cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapFrame {
    pub offset_x: i32,
    pub offset_y: i32,
}

impl MapFrame {
    pub const IDENTITY: MapFrame = MapFrame {
        offset_x: 0,
        offset_y: 0,
    };

    /// Frame that puts `anchor` (scene coordinates) at the center of a
    /// `map_size` map.
    pub fn centered_on(anchor: &Pose, map_size: usize) -> Self {
        let c = anchor.cell();
        let mid = (map_size / 2) as i32;
        Self {
            offset_x: mid - c.x,
            offset_y: mid - c.y,
        }
    }

    pub fn to_map(&self, c: Cell) -> Cell {
        c.offset(self.offset_x, self.offset_y)
    }

    pub fn to_scene(&self, c: Cell) -> Cell {
        c.offset(-self.offset_x, -self.offset_y)
    }

    pub fn pose_to_map(&self, p: &Pose) -> Pose {
        p.translated(self.offset_x, self.offset_y)
    }
}

/// One map write: raise `channel` at `cell` to at least `value`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MapWrite {
    pub channel: u8,
    pub cell: Cell,
    pub value: f32,
}

/// Sparse update produced by one robot at one timestep, in map coordinates.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct MapDelta {
    /// Robot cell after this step.
    pub current: Option<Cell>,
    /// Robot cell before this step; its marker migrates to the past layer.
    pub moved_from: Option<Cell>,
    pub writes: Vec<MapWrite>,
}

impl MapDelta {
    fn write(&mut self, layer: Layer, cell: Cell, value: f32) {
        self.writes.push(MapWrite {
            channel: layer.index() as u8,
            cell,
            value,
        });
    }

    /// Applies this delta to a single robot's own map.
    pub fn apply_local(&self, map: &mut SemanticMap) {
        if let Some(prev) = self.moved_from {
            map.set(Layer::Current, prev, 0.0);
            map.raise(Layer::Past.index(), prev, 1.0);
        }
        for w in &self.writes {
            map.raise(w.channel as usize, w.cell, w.value);
        }
        if let Some(c) = self.current {
            map.raise(Layer::Current.index(), c, 1.0);
        }
    }
}

/// Projects an observation into map writes.
///
/// Rays are re-marched from the observation pose in the scene frame and the
/// visited cells are shifted into the map frame. Cells a ray passes through
/// become explored; a wall hit marks obstacle; an object hit marks obstacle
/// and the reported category with the detection confidence.
pub fn project(obs: &Observation, frame: &MapFrame, moved_from: Option<Cell>, cell_size: f64) -> MapDelta {
    let pose = obs.pose;
    let robot = frame.to_map(pose.cell());
    let mut delta = MapDelta {
        current: Some(robot),
        moved_from,
        writes: Vec::new(),
    };
    delta.write(Layer::Explored, robot, 1.0);
    if let Some(prev) = moved_from {
        delta.write(Layer::Past, prev, 1.0);
    }
    for ray in &obs.rays {
        let dist = ray.distance_m / cell_size;
        let heading = pose.heading + ray.bearing;
        match ray.hit {
            HitKind::MaxRange => {
                march_ray(pose.x, pose.y, heading, dist, |c, _| {
                    delta.write(Layer::Explored, frame.to_map(c), 1.0);
                    true
                });
            }
            HitKind::Wall | HitKind::Object { .. } => {
                let mut last = None;
                march_ray(pose.x, pose.y, heading, dist + 1e-7 * dist.max(1.0), |c, _| {
                    if let Some(prev) = last {
                        delta.write(Layer::Explored, frame.to_map(prev), 1.0);
                    }
                    last = Some(c);
                    true
                });
                if let Some(hit) = last {
                    let cell = frame.to_map(hit);
                    delta.write(Layer::Explored, cell, 1.0);
                    delta.write(Layer::Obstacle, cell, 1.0);
                    if let Some(label) = ray.label {
                        delta.write(Layer::Category(label.category), cell, label.confidence as f32);
                    }
                }
            }
        }
    }
    delta
}

/// Marks the first cell along a blocked forward move that the map did not
/// already show as occupied.
pub fn collision_delta(map: &SemanticMap, pose_in_map: &Pose, move_cells: f64) -> Option<MapDelta> {
    let (sin, cos) = pose_in_map.heading.to_radians().sin_cos();
    let start = pose_in_map.cell();
    let n = (move_cells / 0.25).ceil().max(1.0) as usize;
    for i in 1..=n {
        let f = move_cells * i as f64 / n as f64;
        let c = Cell::containing(pose_in_map.x + f * cos, pose_in_map.y + f * sin);
        if c == start {
            continue;
        }
        if map.is_obstacle(c) {
            return None;
        }
        if !map.is_explored(c) || i == n {
            let mut d = MapDelta::default();
            d.write(Layer::Explored, c, 1.0);
            d.write(Layer::Obstacle, c, 1.0);
            return Some(d);
        }
    }
    None
}
