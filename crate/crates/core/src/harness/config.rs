use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::baselines::PlannerKind;
use crate::category::Category;
use crate::geometry::Pose;
use crate::params::Params;
use crate::world::{generate_scene, load_scene, GenParams, SceneGrid};

/// Where an episode's scene comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "source", deny_unknown_fields)]
pub enum SceneSource {
    File {
        path: PathBuf,
    },
    Generated {
        seed: u64,
        #[serde(default)]
        params: GenParams,
    },
}

impl Default for SceneSource {
    fn default() -> Self {
        SceneSource::Generated {
            seed: 0,
            params: GenParams::default(),
        }
    }
}

impl SceneSource {
    pub fn load(&self) -> Result<SceneGrid, HarnessError> {
        Ok(match self {
            SceneSource::File { path } => load_scene(path)?,
            SceneSource::Generated { seed, params } => generate_scene(*seed, params)?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleKind {
    #[default]
    Scripted,
    Remote,
}

impl std::str::FromStr for OracleKind {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "scripted" => Ok(OracleKind::Scripted),
            "remote" => Ok(OracleKind::Remote),
            other => Err(HarnessError::Config(format!("unknown oracle {other:?}"))),
        }
    }
}

/// Path length used for the succeeding robot in SPL.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplPath {
    /// The path of the robot that stopped.
    #[default]
    Own,
    /// The summed path of all robots.
    Sum,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EpisodeConfig {
    pub scene: SceneSource,
    /// Drawn from the goal categories present in the scene when absent.
    pub goal: Option<Category>,
    pub robots: usize,
    pub max_steps: u32,
    pub planner: PlannerKind,
    pub oracle: OracleKind,
    pub params: Params,
    pub spl_path: SplPath,
    /// Master seed for start poses, sensing noise, oracle noise and resampling.
    pub seed: u64,
    /// Fixed scene-frame start poses, one per robot; seeded draws when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub starts: Option<Vec<Pose>>,
}

impl Default for EpisodeConfig {
    fn default() -> Self {
        Self {
            scene: SceneSource::default(),
            goal: None,
            robots: 2,
            max_steps: 500,
            planner: PlannerKind::Mcoconav,
            oracle: OracleKind::Scripted,
            params: Params::default(),
            spl_path: SplPath::Own,
            seed: 0,
            starts: None,
        }
    }
}

impl EpisodeConfig {
    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.robots == 0 {
            return Err(HarnessError::Config("robots must be at least 1".into()));
        }
        if self.max_steps == 0 {
            return Err(HarnessError::Config("max_steps must be at least 1".into()));
        }
        if self.params.update_interval == 0 {
            return Err(HarnessError::Config("update_interval must be at least 1".into()));
        }
        if !(self.params.fhfov > 0.0 && self.params.fhfov < 360.0) {
            return Err(HarnessError::Config("fhfov must lie in (0, 360)".into()));
        }
        if !(0.0..=1.0).contains(&self.params.detection_noise) {
            return Err(HarnessError::Config("detection_noise must lie in [0, 1]".into()));
        }
        if self.starts.as_ref().is_some_and(|s| s.len() != self.robots) {
            return Err(HarnessError::Config("starts must list one pose per robot".into()));
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        let c: Self = serde_json::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::Io(path.display().to_string(), e))?;
        Self::from_json(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip_and_rejections() {
        let c = EpisodeConfig {
            goal: Some(Category::Bed),
            robots: 3,
            ..Default::default()
        };
        let text = serde_json::to_string(&c).unwrap();
        assert_eq!(EpisodeConfig::from_json(&text).unwrap(), c);
        assert!(EpisodeConfig::from_json(r#"{"robots": 0}"#).is_err());
        assert!(EpisodeConfig::from_json(r#"{"robot": 2}"#).is_err());
        let partial = EpisodeConfig::from_json(r#"{"planner": "greedy", "params": {"tau_es": 3.0}}"#).unwrap();
        assert_eq!(partial.planner, PlannerKind::Greedy);
        assert_eq!(partial.params.tau_es, 3.0);
        assert_eq!(partial.params.update_interval, 25);
    }
}
