//! Top-down semantic maps: projection of observations and max-fusion.
//!
//! Layout: channels `0..K` are category confidences (in [`Category`] index
//! order), followed by obstacle, explored, current position and past
//! positions. [`SemanticMap::to_le_bytes`] dumps the grid channel-major, then
//! row-major, as little-endian `f32`.
//!
//! [`Category`]: crate::category::Category

mod global;
mod layers;
mod project;

pub use global::{fuse, GlobalSemanticMap, LocalSemanticMap};
pub use layers::{Layer, SemanticMap, NUM_CHANNELS, OBSTACLE_THRESHOLD};
pub use project::{collision_delta, project, MapDelta, MapFrame, MapWrite};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MappingError {
    #[error("no maps to fuse")]
    Empty,
    #[error("map size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("{maps} maps but {offsets} registration offsets")]
    RegistrationCount { maps: usize, offsets: usize },
}
