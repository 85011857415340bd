//! Tunable parameters shared by the planner, local policy and harness.
//!
//! Distances marked "cells" are measured on the map grid, whose cell size is
//! the scene's cell size (0.05 m by default, so 25 cells = 1.25 m).

use serde::{Deserialize, Serialize};

use crate::planner::HfovsMode;

/// Decoding parameters forwarded to a remote model endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DecodingParams {
    pub temperature: f64,
    pub top_p: f64,
    pub max_tokens: u32,
}

impl Default for DecodingParams {
    fn default() -> Self {
        Self {
            temperature: 1.0,
            top_p: 1.0,
            max_tokens: 256,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Params {
    pub decoding: DecodingParams,
    /// Simulation steps between planner ticks.
    pub update_interval: u32,
    pub tau_es: f64,
    pub tau_js: f64,
    pub hfovs_mode: HfovsMode,
    /// Horizontal field of view, degrees.
    pub fhfov: f64,
    pub frame_width: u32,
    pub frame_height: u32,

    /// Forward motion per `move_forward`, meters.
    pub move_step_m: f64,
    /// Rotation per turn action, degrees.
    pub turn_step_deg: f64,
    pub success_distance_m: f64,
    /// Robots block each other's forward motion within one cell.
    pub robot_collisions: bool,

    pub sensor_range_m: f64,
    pub rays_per_degree: f64,
    /// Per-ray probability of reporting a wrong category.
    pub detection_noise: f64,

    /// Side length of the square semantic map, cells.
    pub map_size: usize,
    /// Minimum category-layer value for a mapped cell to count as the goal.
    pub goal_detection_threshold: f32,

    pub frontier_min_cluster: usize,
    pub frontier_max_options: usize,

    /// Radius within which a visit updates an existing history node, cells.
    pub history_radius: f64,
    pub hfovs_threshold: f64,
    /// Distance to the previous goal above which it may be kept, cells.
    pub continuity_distance: f64,
    /// Displacement between ticks below which a robot counts as stuck, cells.
    pub stuck_distance: f64,
    /// Distance at which a frontier, history or random goal counts as reached, cells.
    pub goal_reached_distance: f64,

    /// Obstacle inflation radius before FMM, cells.
    pub inflation_radius: i32,
    pub lambda_cu: f64,

    /// Amplitude of the scripted oracle's uniform score noise.
    pub oracle_noise: f64,
}

impl Default for Params {
    fn default() -> Self {
        Self {
            decoding: DecodingParams::default(),
            update_interval: 25,
            tau_es: 2.0,
            tau_js: 1.0,
            hfovs_mode: HfovsMode::Centered,
            fhfov: 79.0,
            frame_width: 640,
            frame_height: 480,
            move_step_m: 0.25,
            turn_step_deg: 30.0,
            success_distance_m: 0.2,
            robot_collisions: true,
            sensor_range_m: 3.0,
            rays_per_degree: 2.0,
            detection_noise: 0.0,
            map_size: 480,
            goal_detection_threshold: 0.6,
            frontier_min_cluster: 4,
            frontier_max_options: 4,
            history_radius: 25.0,
            hfovs_threshold: 0.5,
            continuity_distance: 25.0,
            stuck_distance: 25.0,
            goal_reached_distance: 10.0,
            inflation_radius: 1,
            lambda_cu: 1.0,
            oracle_noise: 0.05,
        }
    }
}

impl Params {
    /// Number of rays spanning the field of view.
    pub fn ray_count(&self) -> usize {
        ((self.fhfov * self.rays_per_degree).round() as usize).max(1) + 1
    }
}
