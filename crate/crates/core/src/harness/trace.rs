use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{EpisodeConfig, EpisodeResult, HarnessError};
use crate::category::Category;
use crate::geometry::Pose;
use crate::oracle::SelectionDistribution;
use crate::planner::LongTermGoal;
use crate::world::Action;

/// How a tick arrived at its goal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TickBranch {
    Frontier,
    History,
    /// Previous goal kept by the continuity rule.
    Keep,
    Resample,
    /// Chosen by a reference planner.
    Baseline,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TickRecord {
    pub t: u32,
    pub robot: usize,
    pub es: Option<f64>,
    pub js: Option<f64>,
    pub hfovs: Option<f64>,
    pub branch: TickBranch,
    pub ds: Option<SelectionDistribution>,
    pub goal: Option<LongTermGoal>,
    /// Digest of the shared history table after the tick.
    pub hs_digest: String,
}

/// One line of an episode trace. Poses are in scene coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum TraceRecord {
    Header {
        config: Box<EpisodeConfig>,
        goal: Category,
        scene_checksum: String,
        starts: Vec<Pose>,
    },
    Step {
        t: u32,
        robot: usize,
        pose: Pose,
        action: Action,
        collision: bool,
    },
    Tick(TickRecord),
    End {
        result: EpisodeResult,
    },
}

pub fn write_jsonl<T: Serialize>(path: &Path, records: &[T]) -> Result<(), HarnessError> {
    let io = |e| HarnessError::Io(path.display().to_string(), e);
    let mut out = std::io::BufWriter::new(std::fs::File::create(path).map_err(io)?);
    for r in records {
        let line = serde_json::to_string(r).map_err(|e| HarnessError::Config(e.to_string()))?;
        writeln!(out, "{line}").map_err(io)?;
    }
    out.flush().map_err(io)
}

pub fn read_trace(path: &Path) -> Result<Vec<TraceRecord>, HarnessError> {
    let io = |e| HarnessError::Io(path.display().to_string(), e);
    let file = std::fs::File::open(path).map_err(io)?;
    let mut records = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(io)?;
        if line.trim().is_empty() {
            continue;
        }
        records.push(serde_json::from_str(&line).map_err(|e| HarnessError::Trace(format!("line {}: {e}", i + 1)))?);
    }
    Ok(records)
}
