use rand::Rng;

use crate::geometry::{Cell, CellRect};
use crate::mapping::SemanticMap;
use crate::params::Params;

/// Whether a robot keeps its previous goal instead of re-deciding: the goal is
/// still far away and the view does not favor frontier exploration.
pub fn keep_previous_goal(dist_to_goal: f64, hfovs: f64, params: &Params) -> bool {
    dist_to_goal >= params.continuity_distance && hfovs < params.hfovs_threshold
}

/// Whether a robot moved too little since the previous scheduled tick.
pub fn is_stuck(displacement: f64, params: &Params) -> bool {
    displacement < params.stuck_distance
}

/// Uniform draw over explored free cells within `region`.
pub fn sample_explored_free<R: Rng + ?Sized>(map: &SemanticMap, region: CellRect, rng: &mut R) -> Option<Cell> {
    let region = region.clipped(map.size(), map.size());
    let cells: Vec<Cell> = region.cells().filter(|&c| map.is_explored_free(c)).collect();
    if cells.is_empty() {
        None
    } else {
        Some(cells[rng.gen_range(0..cells.len())])
    }
}
