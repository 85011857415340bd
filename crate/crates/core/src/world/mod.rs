//! Ground-truth scenes, robot kinematics and ray-cast sensing.

mod generate;
mod motion;
mod scene;
mod sensor;

pub use generate::{generate_scene, GenParams};
pub use motion::{check_success, distance_to_category, step, Action, Kinematics, StepResult};
pub use scene::{load_scene, ObjectInstance, SceneGrid};
pub use sensor::{sense, Detection, HitKind, Label, Observation, Ray, SensorParams};

use crate::category::Category;

#[derive(Debug, thiserror::Error)]
pub enum WorldError {
    #[error("scene parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid scene: {0}")]
    Invalid(String),
    #[error("infeasible generator parameters: {0}")]
    Infeasible(String),
    #[error("goal category {0} is not present in the scene")]
    MissingCategory(Category),
    #[error("{0}: {1}")]
    Io(String, #[source] std::io::Error),
}
