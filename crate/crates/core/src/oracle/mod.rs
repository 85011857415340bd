//! The scoring model behind the planner: turns prompts into descriptions,
//! Yes-probabilities and letter distributions.

mod prompt;
mod remote;
mod scripted;

pub use prompt::{detections_text, fill, ChainLink, PromptBuilder, PromptBundle, Stage, Templates, YES_NO};
pub use remote::{
    extract_distribution, RemoteConfig, RemoteOracle, ScoreRequest, ScoreResponse, TokenLogprob, ORACLE_URL_ENV,
};
pub use scripted::{perceive_text, ScriptedConfig, ScriptedOracle};

use serde::{Deserialize, Serialize};

use crate::frontier::{AnnotatedMap, FrontierPoint};
use crate::geometry::{CellRect, Pose};
use crate::world::Detection;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OracleError {
    #[error("template error: {0}")]
    Template(String),
    #[error("transport error: {0}")]
    Transport(String),
    #[error("request timed out")]
    Timeout,
    #[error("response violates the contract: {0}")]
    Contract(String),
}

/// Probabilities over a closed set of answer tokens.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionDistribution {
    pub options: Vec<String>,
    pub probs: Vec<f64>,
    /// Derived from the answer text rather than token probabilities.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub degraded: bool,
}

impl SelectionDistribution {
    /// Softmax of `logits`, one per option.
    pub fn softmax(options: Vec<String>, logits: &[f64]) -> Self {
        assert_eq!(options.len(), logits.len(), "one logit per option");
        let m = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let e: Vec<f64> = logits.iter().map(|l| (l - m).exp()).collect();
        let z: f64 = e.iter().sum();
        Self {
            options,
            probs: e.iter().map(|v| v / z).collect(),
            degraded: false,
        }
    }

    /// All mass on `chosen`.
    pub fn one_hot(options: Vec<String>, chosen: usize) -> Self {
        let probs = (0..options.len())
            .map(|i| if i == chosen { 1.0 } else { 0.0 })
            .collect();
        Self {
            options,
            probs,
            degraded: false,
        }
    }

    pub fn prob(&self, option: &str) -> Option<f64> {
        self.options.iter().position(|o| o == option).map(|i| self.probs[i])
    }

    /// Index of the most likely option; ties go to the earliest.
    pub fn argmax(&self) -> Option<usize> {
        self.probs
            .iter()
            .enumerate()
            .fold(None, |best: Option<(usize, f64)>, (i, &p)| match best {
                Some((_, bp)) if bp >= p => best,
                _ => Some((i, p)),
            })
            .map(|(i, _)| i)
    }
}

/// Identifies a query so seeded noise differs per robot and tick.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Nonce {
    pub robot: usize,
    pub tick: u64,
}

pub struct PerceptionInput<'a> {
    pub nonce: Nonce,
    pub prompt: &'a PromptBundle,
    pub detections: &'a [Detection],
}

pub struct ExplorationInput<'a> {
    pub nonce: Nonce,
    pub prompt: &'a PromptBundle,
    pub detections: &'a [Detection],
    pub description: &'a str,
}

/// Map-based queries. `robot` is in the map frame.
pub struct MapInput<'a> {
    pub nonce: Nonce,
    pub prompt: &'a PromptBundle,
    pub annotated: &'a AnnotatedMap<'a>,
    pub robot: Pose,
    pub frontiers: &'a [FrontierPoint],
    /// Part of the map holding observations.
    pub region: CellRect,
}

/// A model that answers the four reasoning stages.
pub trait Oracle: Sync {
    /// Whether prompts should carry rendered map images.
    fn wants_images(&self) -> bool {
        false
    }

    fn perceive(&self, input: &PerceptionInput<'_>) -> Result<String, OracleError>;

    /// Probability that the current view is worth exploring.
    fn exploration_score(&self, input: &ExplorationInput<'_>) -> Result<f64, OracleError>;

    /// Probability that the robot should keep exploring frontiers.
    fn judgment_score(&self, input: &MapInput<'_>) -> Result<f64, OracleError>;

    /// Distribution over the labeled frontiers.
    fn decision_scores(&self, input: &MapInput<'_>) -> Result<SelectionDistribution, OracleError>;
}
