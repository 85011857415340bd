use serde::{Deserialize, Serialize};

use super::{SceneGrid, WorldError};
use crate::category::Category;
use crate::geometry::{normalize_deg, Pose};

/// The six discrete robot actions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Action {
    MoveForward,
    TurnLeft,
    TurnRight,
    LookUp,
    LookDown,
    Stop,
}

impl Action {
    pub const ALL: [Action; 6] = [
        Action::MoveForward,
        Action::TurnLeft,
        Action::TurnRight,
        Action::LookUp,
        Action::LookDown,
        Action::Stop,
    ];
}

/// Motion parameters, in the scene's units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kinematics {
    pub move_step_m: f64,
    pub turn_step_deg: f64,
    /// Treat other robots as obstacles within one cell.
    pub robot_collisions: bool,
}

impl Default for Kinematics {
    fn default() -> Self {
        Self {
            move_step_m: 0.25,
            turn_step_deg: 30.0,
            robot_collisions: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepResult {
    pub pose: Pose,
    /// `move_forward` was blocked and the pose is unchanged.
    pub collision: bool,
}

/// Applies one action. Blocked forward motion leaves the pose unchanged and
/// raises the collision flag; turns rotate by the turn step (left is
/// counter-clockwise on screen, i.e. a negative heading change).
pub fn step(scene: &SceneGrid, pose: Pose, action: Action, others: &[Pose], kin: &Kinematics) -> StepResult {
    let unchanged = StepResult { pose, collision: false };
    match action {
        Action::TurnLeft => StepResult {
            pose: Pose {
                heading: normalize_deg(pose.heading - kin.turn_step_deg),
                ..pose
            },
            collision: false,
        },
        Action::TurnRight => StepResult {
            pose: Pose {
                heading: normalize_deg(pose.heading + kin.turn_step_deg),
                ..pose
            },
            collision: false,
        },
        Action::LookUp | Action::LookDown | Action::Stop => unchanged,
        Action::MoveForward => {
            let dist = kin.move_step_m / scene.cell_size();
            let target = pose.advanced(dist);
            let (tx, ty) = (target.x, target.y);
            let blocked_by_wall = pose.stroke_cells(dist).into_iter().any(|c| scene.is_wall(c));
            let blocked_by_robot = kin.robot_collisions
                && others
                    .iter()
                    .any(|o| point_segment_dist(o.x, o.y, pose.x, pose.y, tx, ty) < 1.0);
            if blocked_by_wall || blocked_by_robot {
                StepResult { pose, collision: true }
            } else {
                StepResult {
                    pose: target,
                    collision: false,
                }
            }
        }
    }
}

fn point_segment_dist(px: f64, py: f64, x0: f64, y0: f64, x1: f64, y1: f64) -> f64 {
    let (dx, dy) = (x1 - x0, y1 - y0);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((px - x0) * dx + (py - y0) * dy) / len2).clamp(0.0, 1.0)
    };
    (px - (x0 + t * dx)).hypot(py - (y0 + t * dy))
}

/// Distance in meters from `pose` to the nearest cell of any instance of
/// `category`.
pub fn distance_to_category(pose: &Pose, scene: &SceneGrid, category: Category) -> Result<f64, WorldError> {
    scene
        .instances_of(category)
        .flat_map(|o| o.cells.iter())
        .map(|&c| pose.dist_to_cell(c))
        .min_by(f64::total_cmp)
        .map(|d| d * scene.cell_size())
        .ok_or(WorldError::MissingCategory(category))
}

/// True iff the robot is strictly closer than `threshold_m` to an instance of
/// the goal category. The harness only grants success together with `stop`.
pub fn check_success(pose: &Pose, scene: &SceneGrid, goal: Category, threshold_m: f64) -> Result<bool, WorldError> {
    Ok(distance_to_category(pose, scene, goal)? < threshold_m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Cell;
    use crate::world::ObjectInstance;

    fn open_scene(w: usize, h: usize) -> SceneGrid {
        SceneGrid::new(w, h, 0.05, vec![false; w * h], vec![]).unwrap()
    }

    #[test]
    fn twelve_left_turns_restore_heading() {
        let scene = open_scene(4, 4);
        let mut pose = Pose::new(1.5, 1.5, 0.0);
        for _ in 0..12 {
            pose = step(&scene, pose, Action::TurnLeft, &[], &Kinematics::default()).pose;
        }
        assert_eq!(pose.heading, 0.0);
    }

    #[test]
    fn forward_at_ninety_degrees_moves_five_cells_down() {
        let scene = open_scene(30, 30);
        let r = step(
            &scene,
            Pose::new(10.0, 10.0, 90.0),
            Action::MoveForward,
            &[],
            &Kinematics::default(),
        );
        assert!(!r.collision);
        assert!((r.pose.x - 10.0).abs() < 1e-12);
        assert!((r.pose.y - 15.0).abs() < 1e-12);
    }

    #[test]
    fn wall_ahead_blocks_motion() {
        let mut walls = vec![false; 20 * 20];
        for y in 0..20 {
            walls[y * 20 + 12] = true;
        }
        let scene = SceneGrid::new(20, 20, 0.05, walls, vec![]).unwrap();
        // wall face at x = 12, two cells (0.1 m) ahead
        let pose = Pose::new(10.0, 5.5, 0.0);
        let r = step(&scene, pose, Action::MoveForward, &[], &Kinematics::default());
        assert!(r.collision);
        assert_eq!(r.pose, pose);
    }

    #[test]
    fn clipping_a_wall_corner_blocks_motion() {
        // The 30 degree segment crosses cell (10, 10) for under 0.1 cells.
        let mut walls = vec![false; 20 * 20];
        walls[10 * 20 + 10] = true;
        let scene = SceneGrid::new(20, 20, 0.05, walls, vec![]).unwrap();
        let pose = Pose::new(9.5, 9.2, 30.0);
        assert!(step(&scene, pose, Action::MoveForward, &[], &Kinematics::default()).collision);
        let beside = Pose::new(9.5, 8.5, 0.0);
        assert!(!step(&scene, beside, Action::MoveForward, &[], &Kinematics::default()).collision);
    }

    #[test]
    fn other_robot_blocks_unless_disabled() {
        let scene = open_scene(30, 30);
        let pose = Pose::new(5.5, 5.5, 0.0);
        let other = [Pose::new(8.5, 5.5, 0.0)];
        let mut kin = Kinematics::default();
        assert!(step(&scene, pose, Action::MoveForward, &other, &kin).collision);
        kin.robot_collisions = false;
        assert!(!step(&scene, pose, Action::MoveForward, &other, &kin).collision);
    }

    #[test]
    fn look_and_stop_keep_pose() {
        let scene = open_scene(4, 4);
        let pose = Pose::new(1.5, 1.5, 60.0);
        for a in [Action::LookUp, Action::LookDown, Action::Stop] {
            assert_eq!(step(&scene, pose, a, &[], &Kinematics::default()).pose, pose);
        }
    }

    fn scene_with_chair() -> SceneGrid {
        let chair = ObjectInstance {
            id: 1,
            category: Category::Chair,
            cells: vec![Cell::new(50, 50)],
        };
        SceneGrid::new(200, 200, 0.05, vec![false; 200 * 200], vec![chair]).unwrap()
    }

    #[test]
    fn success_uses_strict_threshold() {
        let scene = scene_with_chair();
        // chair center at (50.5, 50.5); 2 cells = 0.1 m
        let near = Pose::new(52.5, 50.5, 0.0);
        assert!(check_success(&near, &scene, Category::Chair, 0.2).unwrap());
        let boundary = Pose::new(54.5, 50.5, 0.0);
        assert!(!check_success(&boundary, &scene, Category::Chair, 0.2).unwrap());
        let far = Pose::new(150.5, 50.5, 0.0);
        assert!(!check_success(&far, &scene, Category::Chair, 0.2).unwrap());
    }

    #[test]
    fn success_requires_category_in_scene() {
        let scene = scene_with_chair();
        let pose = Pose::new(1.5, 1.5, 0.0);
        assert!(matches!(
            check_success(&pose, &scene, Category::Bed, 0.2),
            Err(WorldError::MissingCategory(Category::Bed))
        ));
    }
}
