//! Episode orchestration, metrics, traces and the benchmark suite.

mod bench;
mod config;
mod episode;
mod metrics;
mod replay;
mod trace;

pub use bench::{
    failures_svg, results_csv, run_benchmark, summarize, write_report, BenchReport, CellSummary, EpisodeRecord,
    SuiteConfig, CSV_HEADER,
};
pub use config::{EpisodeConfig, OracleKind, SceneSource, SplPath};
pub use episode::{
    make_oracle, resolve_goal, run_episode, run_episode_with, scene_frame, start_poses, EpisodeOutcome, EpisodeView,
    MIN_START_DISTANCE_M,
};
pub use metrics::{
    classify_failure, compute_spl, compute_sr, goal_distance_cells, shortest_path_m, EpisodeResult, FailureClass,
    FailureEvidence,
};
pub use replay::{replay, view_overlay, FrameOptions, ReplaySummary};
pub use trace::{read_trace, write_jsonl, TickBranch, TickRecord, TraceRecord};

use crate::oracle::OracleError;
use crate::world::WorldError;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    World(#[from] WorldError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("{0}: {1}")]
    Io(String, #[source] std::io::Error),
    #[error("malformed trace: {0}")]
    Trace(String),
    #[error("replay diverged at record {index}: {detail}")]
    ReplayMismatch { index: usize, detail: String },
}
