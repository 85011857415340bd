//! Deterministic stand-in for the vision-language model.
//!
//! Closed forms, with `a` the noise amplitude and `u ~ U(-1, 1)` drawn from a
//! stream keyed by (seed, robot, tick, stage):
//!
//! * exploration: `es_floor` with no detections; otherwise
//!   `clamp(sum(conf * rel(cat, goal)) / sum(conf) + a*u)`, then raised to the
//!   highest confidence of any detection of the goal itself.
//! * judgment: `clamp(0.5 * (1 - s) + 0.5 * (1 - exp(-m / mass_scale)) + a*u)`
//!   where `s` is the explored fraction of the disk of radius
//!   `saturation_radius` around the robot and `m` the total size of the
//!   labeled frontiers.
//! * decision: softmax over frontiers of
//!   `semantic_weight * sem + size_weight * min(size / size_scale, 1) - dist / distance_scale`
//!   where `sem` is the largest `rel(cat, goal) * value * exp(-d / semantic_decay)`
//!   over mapped category cells at distance `d` from the frontier.

use rand::Rng;

use super::{ExplorationInput, MapInput, Nonce, Oracle, OracleError, PerceptionInput, SelectionDistribution, Stage};
use crate::category::{relatedness, Category, NUM_CATEGORIES};
use crate::geometry::Cell;
use crate::world::Detection;

#[derive(Debug, Clone, PartialEq)]
pub struct ScriptedConfig {
    pub seed: u64,
    pub noise: f64,
    pub es_floor: f64,
    pub saturation_radius: f64,
    pub mass_scale: f64,
    pub semantic_weight: f64,
    pub size_weight: f64,
    pub size_scale: f64,
    pub distance_scale: f64,
    pub semantic_decay: f64,
}

impl Default for ScriptedConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            noise: 0.05,
            es_floor: 0.5,
            saturation_radius: 25.0,
            mass_scale: 40.0,
            semantic_weight: 4.0,
            size_weight: 1.0,
            size_scale: 50.0,
            distance_scale: 100.0,
            semantic_decay: 30.0,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct ScriptedOracle {
    pub config: ScriptedConfig,
}

fn direction(bearing: f64) -> &'static str {
    if bearing < -15.0 {
        "to your left"
    } else if bearing > 15.0 {
        "to your right"
    } else {
        "in front of you"
    }
}

fn closeness(distance_m: f64) -> &'static str {
    if distance_m < 1.5 {
        "close to you"
    } else if distance_m < 3.0 {
        "at a moderate distance"
    } else {
        "far from you"
    }
}

/// One clause per detection, in order.
pub fn perceive_text(detections: &[Detection]) -> String {
    if detections.is_empty() {
        return "no notable objects are visible".to_string();
    }
    detections
        .iter()
        .map(|d| {
            format!(
                "{} {} is {}, {}",
                d.category.article(),
                d.category,
                direction(d.bearing),
                closeness(d.distance_m)
            )
        })
        .collect::<Vec<_>>()
        .join("; ")
}

impl ScriptedOracle {
    pub fn new(config: ScriptedConfig) -> Self {
        Self { config }
    }

    fn jitter(&self, nonce: Nonce, stage: Stage) -> f64 {
        if self.config.noise == 0.0 {
            return 0.0;
        }
        let mut rng = crate::seed::stream(&[self.config.seed, nonce.robot as u64, nonce.tick, stage as u64]);
        self.config.noise * rng.gen_range(-1.0..=1.0)
    }

    /// Exploration score without the prompt plumbing.
    pub fn exploration_value(&self, detections: &[Detection], goal: Category, nonce: Nonce) -> f64 {
        if detections.is_empty() {
            return self.config.es_floor;
        }
        let w: f64 = detections.iter().map(|d| d.confidence).sum();
        let prior = if w > 0.0 {
            detections
                .iter()
                .map(|d| d.confidence * relatedness(d.category, goal))
                .sum::<f64>()
                / w
        } else {
            self.config.es_floor
        };
        let es = (prior + self.jitter(nonce, Stage::Exploration)).clamp(0.0, 1.0);
        detections
            .iter()
            .filter(|d| d.category == goal)
            .map(|d| d.confidence)
            .fold(es, f64::max)
    }

    /// Judgment closed form from its two ingredients.
    pub fn judgment_value(&self, saturation: f64, frontier_mass: f64, nonce: Nonce) -> f64 {
        let js = 0.5 * (1.0 - saturation) + 0.5 * (1.0 - (-frontier_mass / self.config.mass_scale).exp());
        (js + self.jitter(nonce, Stage::Judgment)).clamp(0.0, 1.0)
    }

    fn saturation(&self, input: &MapInput<'_>) -> f64 {
        let map = input.annotated.base;
        let r = self.config.saturation_radius;
        let ri = r.ceil() as i32;
        let center = input.robot.cell();
        let (mut total, mut explored) = (0usize, 0usize);
        for dy in -ri..=ri {
            for dx in -ri..=ri {
                if ((dx * dx + dy * dy) as f64) > r * r {
                    continue;
                }
                total += 1;
                if map.is_explored(center.offset(dx, dy)) {
                    explored += 1;
                }
            }
        }
        explored as f64 / total as f64
    }

    fn decision_logits(&self, input: &MapInput<'_>) -> Vec<f64> {
        let c = &self.config;
        let map = input.annotated.base;
        let goal = input.prompt.goal;
        let mut semantic_cells: Vec<(Cell, f64)> = Vec::new();
        for cell in input.region.clipped(map.size(), map.size()).cells() {
            let best = (0..NUM_CATEGORIES)
                .filter_map(|k| {
                    let v = map.get_channel(k, cell);
                    let cat = Category::from_index(k)?;
                    (v > 0.0).then(|| relatedness(cat, goal) * v as f64)
                })
                .fold(0.0, f64::max);
            if best > 0.0 {
                semantic_cells.push((cell, best));
            }
        }
        input
            .frontiers
            .iter()
            .map(|f| {
                let sem = semantic_cells
                    .iter()
                    .map(|&(cell, w)| w * (-cell.dist(f.coord) / c.semantic_decay).exp())
                    .fold(0.0, f64::max);
                let size = (f.cluster_size as f64 / c.size_scale).min(1.0);
                let dist = input.robot.dist_to_cell(f.coord);
                c.semantic_weight * sem + c.size_weight * size - dist / c.distance_scale
            })
            .collect()
    }
}

impl Oracle for ScriptedOracle {
    fn perceive(&self, input: &PerceptionInput<'_>) -> Result<String, OracleError> {
        Ok(perceive_text(input.detections))
    }

    fn exploration_score(&self, input: &ExplorationInput<'_>) -> Result<f64, OracleError> {
        Ok(self.exploration_value(input.detections, input.prompt.goal, input.nonce))
    }

    fn judgment_score(&self, input: &MapInput<'_>) -> Result<f64, OracleError> {
        let mass: usize = input.frontiers.iter().map(|f| f.cluster_size).sum();
        Ok(self.judgment_value(self.saturation(input), mass as f64, input.nonce))
    }

    fn decision_scores(&self, input: &MapInput<'_>) -> Result<SelectionDistribution, OracleError> {
        if input.frontiers.is_empty() {
            return Err(OracleError::Contract("decision query without options".into()));
        }
        let options = input.frontiers.iter().map(|f| f.label.to_string()).collect();
        Ok(SelectionDistribution::softmax(options, &self.decision_logits(input)))
    }
}
