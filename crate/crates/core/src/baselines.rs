//! Reference planners: greedy nearest-frontier assignment, cost-utility
//! frontier scoring and uniform random goals.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::geometry::{Cell, CellRect};
use crate::local_policy::{fmm_field, sample_explored_free, Traversability};
use crate::mapping::SemanticMap;

/// Which planner drives the robots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlannerKind {
    #[default]
    Mcoconav,
    Greedy,
    CostUtility,
    Random,
}

impl PlannerKind {
    pub const ALL: [PlannerKind; 4] = [
        PlannerKind::Mcoconav,
        PlannerKind::Greedy,
        PlannerKind::CostUtility,
        PlannerKind::Random,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PlannerKind::Mcoconav => "mcoconav",
            PlannerKind::Greedy => "greedy",
            PlannerKind::CostUtility => "cost_utility",
            PlannerKind::Random => "random",
        }
    }
}

impl std::fmt::Display for PlannerKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown planner {0:?}")]
pub struct UnknownPlanner(pub String);

impl std::str::FromStr for PlannerKind {
    type Err = UnknownPlanner;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| UnknownPlanner(s.to_string()))
    }
}

/// Repeatedly pairs the closest unassigned robot and frontier. Robots left
/// over once every frontier is taken go to their nearest frontier. Returns
/// one frontier index per robot, or `None` for all robots when there are no
/// frontiers.
pub fn greedy_assign(robots: &[Cell], frontiers: &[Cell]) -> Vec<Option<usize>> {
    let mut out = vec![None; robots.len()];
    if frontiers.is_empty() {
        return out;
    }
    let mut taken = vec![false; frontiers.len()];
    for _ in 0..robots.len().min(frontiers.len()) {
        let mut best: Option<(usize, usize, f64)> = None;
        for (r, rc) in robots.iter().enumerate() {
            if out[r].is_some() {
                continue;
            }
            for (f, fc) in frontiers.iter().enumerate() {
                let d = rc.dist(*fc);
                if !taken[f] && best.is_none_or(|(_, _, bd)| d < bd) {
                    best = Some((r, f, d));
                }
            }
        }
        let (r, f, _) = best.expect("an unassigned pair exists");
        out[r] = Some(f);
        taken[f] = true;
    }
    for (r, rc) in robots.iter().enumerate() {
        if out[r].is_none() {
            out[r] = nearest(*rc, frontiers);
        }
    }
    out
}

fn nearest(from: Cell, cells: &[Cell]) -> Option<usize> {
    cells
        .iter()
        .enumerate()
        .min_by(|a, b| from.dist(*a.1).total_cmp(&from.dist(*b.1)))
        .map(|(i, _)| i)
}

/// Utility minus weighted cost; an unreachable frontier scores `-inf`.
pub fn cost_utility(utility: f64, cost: f64, lambda: f64) -> f64 {
    if cost.is_finite() {
        utility - lambda * cost
    } else {
        f64::NEG_INFINITY
    }
}

/// Index of the best `(size, cost)` option, ties to the earliest; `None` when
/// every option is unreachable.
pub fn best_cost_utility(options: &[(f64, f64)], lambda: f64) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, &(u, c)) in options.iter().enumerate() {
        let s = cost_utility(u, c, lambda);
        if s > f64::NEG_INFINITY && best.is_none_or(|(_, bs)| s > bs) {
            best = Some((i, s));
        }
    }
    best.map(|(i, _)| i)
}

/// Geodesic distance in cells from `robot` to each target over the planning
/// view of `map` restricted to `region`.
pub fn geodesic_costs(map: &SemanticMap, region: CellRect, inflation: i32, robot: Cell, targets: &[Cell]) -> Vec<f64> {
    let mut rect = region;
    rect.include(robot);
    let grid = Traversability::from_map(map, rect, inflation, &[robot]);
    match fmm_field(&grid, robot, None) {
        Ok(field) => targets.iter().map(|&t| field.get(t)).collect(),
        Err(_) => vec![f64::INFINITY; targets.len()],
    }
}

/// Uniform draw over explored free cells.
pub fn random_goal<R: Rng + ?Sized>(map: &SemanticMap, region: CellRect, rng: &mut R) -> Option<Cell> {
    sample_explored_free(map, region, rng)
}
