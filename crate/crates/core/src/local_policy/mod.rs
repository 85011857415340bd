//! Short-horizon control: a fast-marching distance field to the current
//! long-term goal and a steering rule that follows it.

mod control;
mod fmm;
mod rules;

pub use control::{descent_path, next_action, Gait, HEADING_DEADBAND_DEG, LOOKAHEAD_CELLS};
pub use fmm::{fmm_field, DistanceField, Traversability};
pub use rules::{is_stuck, keep_previous_goal, sample_explored_free};

use crate::geometry::{Cell, CellRect};
use crate::mapping::SemanticMap;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LocalPolicyError {
    #[error("goal cell ({}, {}) is not traversable", .0.x, .0.y)]
    GoalBlocked(Cell),
    #[error("no traversable path from ({}, {})", .0.x, .0.y)]
    Unreachable(Cell),
}

// Extra travel time marched past the robot so small detours reuse the field.
const FIELD_SLACK: f64 = 15.0;
// Cells of the upcoming path checked against newly blocked cells.
const PATH_CHECK_CELLS: usize = 10;

/// Per-robot distance field, recomputed only when the goal changes, the robot
/// leaves the computed area, or a newly blocked cell lands near its path.
#[derive(Debug, Clone, Default)]
pub struct PathCache {
    requested: Option<Cell>,
    field: Option<DistanceField>,
    pending: Vec<Cell>,
    recomputes: u64,
}

impl PathCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn invalidate(&mut self) {
        self.field = None;
        self.pending.clear();
    }

    /// Records cells that became blocked since the last computation.
    pub fn note_blocked(&mut self, cells: &[Cell]) {
        if self.field.is_some() {
            self.pending.extend_from_slice(cells);
        }
    }

    pub fn recomputes(&self) -> u64 {
        self.recomputes
    }

    fn stale(&self, goal: Cell, robot: Cell, inflation: i32) -> bool {
        let Some(field) = &self.field else { return true };
        if self.requested != Some(goal) || !field.get(robot).is_finite() {
            return true;
        }
        if self.pending.is_empty() {
            return false;
        }
        let reach = inflation + 1;
        let mut path = descent_path(field, robot, PATH_CHECK_CELLS);
        path.push(robot);
        path.iter().any(|p| {
            self.pending
                .iter()
                .any(|b| (b.x - p.x).abs() <= reach && (b.y - p.y).abs() <= reach)
        })
    }

    /// Field toward `goal` (snapped to the nearest traversable cell) over
    /// `region`, reusing the previous one when still valid.
    pub fn field_for(
        &mut self,
        map: &SemanticMap,
        region: CellRect,
        goal: Cell,
        robot: Cell,
        inflation: i32,
        always_free: &[Cell],
    ) -> Result<&DistanceField, LocalPolicyError> {
        if self.stale(goal, robot, inflation) {
            let mut rect = region;
            rect.include(goal);
            rect.include(robot);
            let grid = Traversability::from_map(map, rect, inflation, always_free);
            let target = grid.nearest_free(goal).ok_or(LocalPolicyError::GoalBlocked(goal))?;
            let field = fmm_field(&grid, target, Some((robot, FIELD_SLACK)))?;
            self.recomputes += 1;
            self.requested = Some(goal);
            self.pending.clear();
            self.field = Some(field);
        }
        Ok(self.field.as_ref().expect("field computed above"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mapping::Layer;

    #[test]
    fn cache_recomputes_only_for_blocking_news() {
        let mut map = SemanticMap::new(60);
        for c in CellRect::square(60).cells() {
            map.set(Layer::Explored, c, 1.0);
        }
        let region = CellRect::square(60);
        let (goal, robot) = (Cell::new(50, 30), Cell::new(10, 30));
        let mut cache = PathCache::new();
        cache.field_for(&map, region, goal, robot, 1, &[]).unwrap();
        cache.note_blocked(&[Cell::new(5, 5)]);
        cache.field_for(&map, region, goal, robot, 1, &[]).unwrap();
        assert_eq!(cache.recomputes(), 1);
        map.set(Layer::Obstacle, Cell::new(15, 30), 1.0);
        cache.note_blocked(&[Cell::new(15, 30)]);
        let f = cache.field_for(&map, region, goal, robot, 1, &[]).unwrap();
        assert!(!descent_path(f, robot, 40).contains(&Cell::new(15, 30)));
        assert_eq!(cache.recomputes(), 2);
        cache.field_for(&map, region, Cell::new(50, 31), robot, 1, &[]).unwrap();
        assert_eq!(cache.recomputes(), 3);
    }
}
