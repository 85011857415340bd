use super::{DistanceField, LocalPolicyError};
use crate::geometry::{angle_diff, heading_of, Cell, Pose, NEIGHBORS_8};
use crate::world::Action;

/// Cells followed down the field before steering toward the result.
pub const LOOKAHEAD_CELLS: usize = 5;
/// Heading error tolerated before turning, degrees.
pub const HEADING_DEADBAND_DEG: f64 = 15.0;

/// Lowest 8-neighbor of `c`, refusing diagonals that cut a blocked corner.
fn steepest_neighbor(field: &DistanceField, c: Cell) -> Option<Cell> {
    let here = field.get(c);
    let mut best: Option<(Cell, f64)> = None;
    for (dx, dy) in NEIGHBORS_8 {
        let n = c.offset(dx, dy);
        let v = field.get(n);
        if !v.is_finite() || v >= here {
            continue;
        }
        if dx != 0 && dy != 0 && !(field.get(c.offset(dx, 0)).is_finite() && field.get(c.offset(0, dy)).is_finite()) {
            continue;
        }
        if best.is_none_or(|(_, bv)| v < bv) {
            best = Some((n, v));
        }
    }
    best.map(|(n, _)| n)
}

/// Cells visited by steepest descent from `from`, excluding `from`.
pub fn descent_path(field: &DistanceField, from: Cell, max_steps: usize) -> Vec<Cell> {
    let mut path = Vec::new();
    let mut cur = from;
    while path.len() < max_steps {
        match steepest_neighbor(field, cur) {
            Some(n) => {
                path.push(n);
                cur = n;
            }
            None => break,
        }
    }
    path
}

/// Forward stride and turn quantum of the robot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gait {
    pub stride_cells: f64,
    pub turn_deg: f64,
}

impl Gait {
    /// Whether a forward stroke along `heading` stays on finite cells and ends
    /// lower on the field than it starts.
    fn descends(&self, field: &DistanceField, pose: &Pose, heading: f64) -> bool {
        let cells = Pose::new(pose.x, pose.y, heading).stroke_cells(self.stride_cells);
        let here = field.get(pose.cell());
        cells.iter().all(|&c| field.get(c).is_finite()) && cells.last().is_none_or(|&c| field.get(c) < here)
    }
}

/// Steers along the field toward its goal.
///
/// Reachable headings (multiples of the turn quantum from the current one)
/// are ranked by their error to the descent direction; the current heading
/// wins ties inside the deadband and left turns win other ties. The first
/// heading whose stroke descends the field is taken. When none does, the
/// best-ranked heading is used anyway.
///
/// With `stop_radius = Some(r)` the robot stops once it is closer than `r`
/// cells to the goal. Without it, a robot standing on the goal turns in place.
pub fn next_action(
    field: &DistanceField,
    pose: &Pose,
    gait: &Gait,
    stop_radius: Option<f64>,
) -> Result<Action, LocalPolicyError> {
    if let Some(r) = stop_radius {
        if pose.dist_to_cell(field.goal) < r {
            return Ok(Action::Stop);
        }
    }
    let from = pose.cell();
    if !field.get(from).is_finite() {
        return Err(LocalPolicyError::Unreachable(from));
    }
    let target = descent_path(field, from, LOOKAHEAD_CELLS)
        .last()
        .copied()
        .unwrap_or(field.goal);
    let (tx, ty) = target.center();
    if (tx - pose.x).hypot(ty - pose.y) < 1e-9 {
        return Ok(Action::TurnLeft);
    }
    let desired = heading_of(tx - pose.x, ty - pose.y);
    let turns = (360.0 / gait.turn_deg).round() as i32;
    let half = turns / 2;
    let mut ranked: Vec<(i64, i32)> = (1 - (turns - half)..=half)
        .map(|k| {
            let err = angle_diff(desired, pose.heading + k as f64 * gait.turn_deg).abs();
            let err = if k == 0 && err <= HEADING_DEADBAND_DEG {
                0.0
            } else {
                err
            };
            ((err * 1e9).round() as i64, k)
        })
        .collect();
    ranked.sort_by_key(|&(err, k)| (err, k != 0, k > 0));
    let k = ranked
        .iter()
        .map(|&(_, k)| k)
        .find(|&k| gait.descends(field, pose, pose.heading + k as f64 * gait.turn_deg))
        .unwrap_or(ranked[0].1);
    Ok(match k {
        0 => Action::MoveForward,
        k if k < 0 || k == half => Action::TurnLeft,
        _ => Action::TurnRight,
    })
}

#[cfg(test)]
mod tests {
    use super::super::{fmm_field, Traversability};
    use super::*;
    use crate::geometry::{normalize_deg, CellRect};

    const GAIT: Gait = Gait {
        stride_cells: 5.0,
        turn_deg: 30.0,
    };

    fn field_to(goal: Cell) -> DistanceField {
        let rect = CellRect::square(30);
        fmm_field(&Traversability::new(rect, vec![true; 900]), goal, None).unwrap()
    }

    #[test]
    fn descends_monotonically() {
        let f = field_to(Cell::new(25, 25));
        let path = descent_path(&f, Cell::new(2, 3), 100);
        assert_eq!(path.last(), Some(&Cell::new(25, 25)));
        assert!(path.windows(2).all(|w| f.get(w[1]) < f.get(w[0])));
    }

    #[test]
    fn deadband_and_turn_direction() {
        let f = field_to(Cell::new(25, 10));
        let at = |h| next_action(&f, &Pose::at_cell(Cell::new(5, 10), h), &GAIT, None).unwrap();
        assert_eq!(at(0.0), Action::MoveForward);
        assert_eq!(at(10.0), Action::MoveForward);
        assert_eq!(at(90.0), Action::TurnLeft);
        assert_eq!(at(270.0), Action::TurnRight);
        assert_eq!(at(180.0), Action::TurnLeft);
    }

    #[test]
    fn blocked_stroke_turns_toward_a_clear_one() {
        let rect = CellRect::square(30);
        let mut free = vec![true; 900];
        free[10 * 30 + 9] = false;
        let f = fmm_field(&Traversability::new(rect, free), Cell::new(25, 10), None).unwrap();
        let mut pose = Pose::at_cell(Cell::new(5, 10), 0.0);
        for _ in 0..12 {
            match next_action(&f, &pose, &GAIT, None).unwrap() {
                Action::MoveForward => break,
                Action::TurnLeft => pose.heading = normalize_deg(pose.heading - 30.0),
                Action::TurnRight => pose.heading = normalize_deg(pose.heading + 30.0),
                a => panic!("unexpected {a:?}"),
            }
        }
        assert_ne!(pose.heading, 0.0);
        assert!(pose.stroke_cells(5.0).iter().all(|&c| f.get(c).is_finite()));
    }

    #[test]
    fn stops_only_inside_radius() {
        let f = field_to(Cell::new(10, 10));
        let near = Pose::at_cell(Cell::new(13, 10), 0.0);
        assert_eq!(next_action(&f, &near, &GAIT, Some(4.0)).unwrap(), Action::Stop);
        assert_ne!(next_action(&f, &near, &GAIT, None).unwrap(), Action::Stop);
        let far = Pose::at_cell(Cell::new(14, 10), 0.0);
        assert_ne!(next_action(&f, &far, &GAIT, Some(4.0)).unwrap(), Action::Stop);
    }
}
