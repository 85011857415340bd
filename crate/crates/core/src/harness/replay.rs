use std::path::{Path, PathBuf};

use super::trace::TraceRecord;
use super::{make_oracle, run_episode_with, EpisodeView, HarnessError};
use crate::frontier::{render_png, AnnotatedMap, Marker, MarkerKind, Purpose, GOAL_BLUE, ROBOT_RED};

/// Frame rendering options for [`replay`].
#[derive(Debug, Clone, PartialEq)]
pub struct FrameOptions {
    pub dir: PathBuf,
    /// Render every `every`-th step.
    pub every: u32,
    pub size: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReplaySummary {
    pub records: usize,
    pub frames: Vec<PathBuf>,
}

/// Robot arrows and long-term goal dots over the shared map.
pub fn view_overlay<'a>(view: &EpisodeView<'a>) -> AnnotatedMap<'a> {
    let mut markers: Vec<Marker> = view
        .goals
        .iter()
        .flatten()
        .map(|g| Marker {
            kind: MarkerKind::LastGoalDot,
            coord: g.coord,
            glyph: String::new(),
            color: GOAL_BLUE,
            heading: None,
        })
        .collect();
    markers.extend(view.poses.iter().map(|p| Marker {
        kind: MarkerKind::RobotArrow,
        coord: p.cell(),
        glyph: String::new(),
        color: ROBOT_RED,
        heading: Some(p.heading),
    }));
    AnnotatedMap {
        base: view.map,
        markers,
        purpose: Purpose::Judgment,
    }
}

/// Re-runs the episode described by a trace header and checks that every
/// record serializes to the same line as the file. Optionally writes PNG
/// frames of the shared map along the way.
pub fn replay(trace_path: &Path, frames: Option<&FrameOptions>) -> Result<ReplaySummary, HarnessError> {
    let io = |e| HarnessError::Io(trace_path.display().to_string(), e);
    let text = std::fs::read_to_string(trace_path).map_err(io)?;
    let lines: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
    let first = lines.first().ok_or_else(|| HarnessError::Trace("empty trace".into()))?;
    let header: TraceRecord = serde_json::from_str(first).map_err(|e| HarnessError::Trace(format!("line 1: {e}")))?;
    let TraceRecord::Header {
        config, scene_checksum, ..
    } = header
    else {
        return Err(HarnessError::Trace("first record is not a header".into()));
    };
    let scene = config.scene.load()?;
    if scene.checksum() != scene_checksum {
        return Err(HarnessError::ReplayMismatch {
            index: 0,
            detail: format!("scene checksum {} differs from {scene_checksum}", scene.checksum()),
        });
    }
    if let Some(f) = frames {
        std::fs::create_dir_all(&f.dir).map_err(|e| HarnessError::Io(f.dir.display().to_string(), e))?;
    }
    let oracle = make_oracle(&config)?;
    let mut written = Vec::new();
    let mut frame_error = None;
    let mut observer = |view: &EpisodeView<'_>| {
        let Some(f) = frames else { return };
        if frame_error.is_some() || !view.t.is_multiple_of(f.every.max(1)) {
            return;
        }
        let path = f.dir.join(format!("frame_{:05}.png", view.t));
        let png = render_png(&view_overlay(view), f.size, f.size);
        match std::fs::write(&path, png) {
            Ok(()) => written.push(path),
            Err(e) => frame_error = Some(HarnessError::Io(path.display().to_string(), e)),
        }
    };
    let outcome = run_episode_with(&config, &scene, oracle.as_ref(), true, Some(&mut observer))?;
    if let Some(e) = frame_error {
        return Err(e);
    }
    for (index, record) in outcome.trace.iter().enumerate() {
        let line = serde_json::to_string(record).map_err(|e| HarnessError::Trace(e.to_string()))?;
        match lines.get(index) {
            Some(&expected) if expected == line => {}
            Some(&expected) => {
                return Err(HarnessError::ReplayMismatch {
                    index,
                    detail: format!("expected {expected}, replayed {line}"),
                })
            }
            None => {
                return Err(HarnessError::ReplayMismatch {
                    index,
                    detail: "trace ends early".into(),
                })
            }
        }
    }
    if lines.len() != outcome.trace.len() {
        return Err(HarnessError::ReplayMismatch {
            index: outcome.trace.len(),
            detail: format!("trace has {} extra records", lines.len() - outcome.trace.len()),
        });
    }
    Ok(ReplaySummary {
        records: lines.len(),
        frames: written,
    })
}
