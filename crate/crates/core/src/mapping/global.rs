use super::layers::{Layer, SemanticMap, NUM_CHANNELS, OBSTACLE_THRESHOLD};
use super::project::MapDelta;
use super::MappingError;
use crate::geometry::{Cell, CellRect};

/// One robot's own top-down map and trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalSemanticMap {
    pub map: SemanticMap,
    pub trajectory: Vec<Cell>,
}

impl LocalSemanticMap {
    pub fn new(size: usize) -> Self {
        Self {
            map: SemanticMap::new(size),
            trajectory: Vec::new(),
        }
    }

    pub fn apply(&mut self, delta: &MapDelta) {
        delta.apply_local(&mut self.map);
        if let Some(c) = delta.current {
            if self.trajectory.last() != Some(&c) {
                self.trajectory.push(c);
            }
        }
    }
}

/// The shared map every robot reads and writes.
#[derive(Debug, Clone, PartialEq)]
pub struct GlobalSemanticMap {
    map: SemanticMap,
    current: Vec<Option<Cell>>,
    trajectories: Vec<Vec<Cell>>,
    explored_bbox: Option<CellRect>,
    newly_blocked: Vec<Cell>,
}

impl GlobalSemanticMap {
    pub fn new(size: usize, robots: usize) -> Self {
        Self {
            map: SemanticMap::new(size),
            current: vec![None; robots],
            trajectories: vec![Vec::new(); robots],
            explored_bbox: None,
            newly_blocked: Vec::new(),
        }
    }

    pub fn map(&self) -> &SemanticMap {
        &self.map
    }

    pub fn size(&self) -> usize {
        self.map.size()
    }

    pub fn robot_count(&self) -> usize {
        self.current.len()
    }

    pub fn current(&self, robot: usize) -> Option<Cell> {
        self.current.get(robot).copied().flatten()
    }

    pub fn trajectory(&self, robot: usize) -> &[Cell] {
        &self.trajectories[robot]
    }

    /// Bounding box of every explored cell, if any.
    pub fn explored_bbox(&self) -> Option<CellRect> {
        self.explored_bbox
    }

    /// True while nothing beyond the robots' own cells has been observed.
    pub fn is_fresh(&self) -> bool {
        self.map.explored_count() <= self.current.iter().flatten().count()
    }

    /// Cells that became occupied since the last call.
    pub fn take_newly_blocked(&mut self) -> Vec<Cell> {
        std::mem::take(&mut self.newly_blocked)
    }

    /// Applies one robot's delta. Deltas of a timestep are applied in robot
    /// index order by the caller.
    pub fn apply(&mut self, robot: usize, delta: &MapDelta) {
        let cur = Layer::Current;
        if let Some(prev) = delta.moved_from {
            let shared = self
                .current
                .iter()
                .enumerate()
                .any(|(r, c)| r != robot && *c == Some(prev));
            if !shared {
                self.map.set(cur, prev, 0.0);
            }
            self.map.raise(Layer::Past.index(), prev, 1.0);
        }
        let obstacle = Layer::Obstacle.index();
        let explored = Layer::Explored.index();
        for w in &delta.writes {
            let ch = w.channel as usize;
            let old = self.map.raise(ch, w.cell, w.value);
            if ch == obstacle && old < OBSTACLE_THRESHOLD && w.value >= OBSTACLE_THRESHOLD {
                self.newly_blocked.push(w.cell);
            }
            if ch == explored && self.map.in_bounds(w.cell) {
                match &mut self.explored_bbox {
                    Some(b) => b.include(w.cell),
                    None => self.explored_bbox = Some(CellRect::point(w.cell)),
                }
            }
        }
        if let Some(c) = delta.current {
            self.map.raise(cur.index(), c, 1.0);
            self.current[robot] = Some(c);
            if self.trajectories[robot].last() != Some(&c) {
                self.trajectories[robot].push(c);
            }
        }
    }
}

/// Cell-wise maximum of local maps after shifting each by its registration
/// offset. Trajectories are carried per robot in input order.
pub fn fuse(maps: &[LocalSemanticMap], offsets: &[(i32, i32)]) -> Result<GlobalSemanticMap, MappingError> {
    let Some(first) = maps.first() else {
        return Err(MappingError::Empty);
    };
    if offsets.len() != maps.len() {
        return Err(MappingError::RegistrationCount {
            maps: maps.len(),
            offsets: offsets.len(),
        });
    }
    let size = first.map.size();
    if let Some(bad) = maps.iter().find(|m| m.map.size() != size) {
        return Err(MappingError::SizeMismatch {
            expected: size,
            found: bad.map.size(),
        });
    }
    let mut out = GlobalSemanticMap::new(size, maps.len());
    for (r, (local, &off)) in maps.iter().zip(offsets).enumerate() {
        out.map.max_with(&local.map, off);
        out.trajectories[r] = local.trajectory.iter().map(|c| c.offset(off.0, off.1)).collect();
        out.current[r] = out.trajectories[r].last().copied();
    }
    let explored = Layer::Explored.index();
    for c in CellRect::square(size).cells() {
        if out.map.get_channel(explored, c) > 0.0 {
            match &mut out.explored_bbox {
                Some(b) => b.include(c),
                None => out.explored_bbox = Some(CellRect::point(c)),
            }
        }
    }
    debug_assert_eq!(out.map.to_le_bytes().len(), NUM_CHANNELS * size * size * 4);
    Ok(out)
}
