//! Planar ray-cast stand-in for the RGB-D camera and detector.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::SceneGrid;
use crate::category::Category;
use crate::geometry::{march_ray, Pose};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensorParams {
    /// Horizontal field of view, degrees, in `(0, 360)`.
    pub fhfov: f64,
    pub max_range_m: f64,
    pub ray_count: usize,
    /// Probability that an object hit is reported with a wrong category.
    pub noise_rate: f64,
}

impl SensorParams {
    pub fn from_params(p: &crate::params::Params) -> Self {
        Self {
            fhfov: p.fhfov,
            max_range_m: p.sensor_range_m,
            ray_count: p.ray_count(),
            noise_rate: p.detection_noise,
        }
    }
}

/// What a ray ran into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum HitKind {
    Wall,
    Object { instance: u32 },
    MaxRange,
}

/// Category reported by the detector for an object hit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Label {
    pub category: Category,
    pub confidence: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ray {
    /// Degrees relative to the heading; negative is to the left.
    pub bearing: f64,
    pub distance_m: f64,
    pub hit: HitKind,
    /// Detector output; present exactly when `hit` is an object.
    pub label: Option<Label>,
}

/// One detected object as the planner sees it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Detection {
    pub category: Category,
    pub confidence: f64,
    /// Mean bearing of the rays that saw it, degrees.
    pub bearing: f64,
    pub distance_m: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    pub pose: Pose,
    pub rays: Vec<Ray>,
    pub detections: Vec<Detection>,
}

/// Casts `ray_count` rays uniformly over `[heading - fhfov/2, heading + fhfov/2]`.
///
/// With `noise_rate == 0` every object hit is labeled correctly with
/// confidence 1. Otherwise each hit is mislabeled with probability
/// `noise_rate`, taking a category drawn uniformly from the other categories.
pub fn sense(scene: &SceneGrid, pose: &Pose, params: &SensorParams, noise_seed: u64) -> Observation {
    let mut rng = ChaCha8Rng::seed_from_u64(noise_seed);
    let n = params.ray_count.max(1);
    let max_cells = params.max_range_m / scene.cell_size();
    let start = pose.cell();
    let mut rays = Vec::with_capacity(n);
    for k in 0..n {
        let bearing = if n == 1 {
            0.0
        } else {
            -params.fhfov / 2.0 + params.fhfov * k as f64 / (n - 1) as f64
        };
        let mut hit = HitKind::MaxRange;
        let mut dist = max_cells;
        march_ray(pose.x, pose.y, pose.heading + bearing, max_cells, |cell, t| {
            if scene.is_wall(cell) {
                hit = HitKind::Wall;
                dist = t;
                return false;
            }
            if cell != start {
                if let Some(obj) = scene.object_at(cell) {
                    hit = HitKind::Object { instance: obj.id };
                    dist = t;
                    return false;
                }
            }
            true
        });
        let label = match hit {
            HitKind::Object { instance } => {
                let truth = scene
                    .objects()
                    .iter()
                    .find(|o| o.id == instance)
                    .map(|o| o.category)
                    .expect("hit object exists");
                Some(label_hit(truth, params.noise_rate, &mut rng))
            }
            _ => None,
        };
        rays.push(Ray {
            bearing,
            distance_m: dist * scene.cell_size(),
            hit,
            label,
        });
    }
    let detections = aggregate_detections(&rays);
    Observation {
        pose: *pose,
        rays,
        detections,
    }
}

fn label_hit(truth: Category, noise_rate: f64, rng: &mut ChaCha8Rng) -> Label {
    if noise_rate <= 0.0 {
        return Label {
            category: truth,
            confidence: 1.0,
        };
    }
    if rng.gen::<f64>() < noise_rate {
        let others: Vec<Category> = Category::ALL.iter().copied().filter(|&c| c != truth).collect();
        Label {
            category: others[rng.gen_range(0..others.len())],
            confidence: rng.gen_range(0.3..0.8),
        }
    } else {
        Label {
            category: truth,
            confidence: rng.gen_range(0.6..1.0),
        }
    }
}

// Groups object rays by (instance, reported category) in ray order.
fn aggregate_detections(rays: &[Ray]) -> Vec<Detection> {
    struct Acc {
        instance: u32,
        category: Category,
        confidence: f64,
        bearing_sum: f64,
        count: usize,
        distance_m: f64,
    }
    let mut groups: Vec<Acc> = Vec::new();
    for ray in rays {
        let (HitKind::Object { instance }, Some(label)) = (ray.hit, ray.label) else {
            continue;
        };
        match groups
            .iter_mut()
            .find(|g| g.instance == instance && g.category == label.category)
        {
            Some(g) => {
                g.confidence = g.confidence.max(label.confidence);
                g.bearing_sum += ray.bearing;
                g.count += 1;
                g.distance_m = g.distance_m.min(ray.distance_m);
            }
            None => groups.push(Acc {
                instance,
                category: label.category,
                confidence: label.confidence,
                bearing_sum: ray.bearing,
                count: 1,
                distance_m: ray.distance_m,
            }),
        }
    }
    groups
        .into_iter()
        .map(|g| Detection {
            category: g.category,
            confidence: g.confidence,
            bearing: g.bearing_sum / g.count as f64,
            distance_m: g.distance_m,
        })
        .collect()
}
