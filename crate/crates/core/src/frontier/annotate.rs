use serde::{Deserialize, Serialize};

use super::{FrontierError, FrontierPoint};
use crate::geometry::{Cell, Pose};
use crate::mapping::SemanticMap;
use crate::planner::{history_label, HistoryNode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MarkerKind {
    RobotArrow,
    LastGoalDot,
    HistoryLetter,
    FrontierLetter,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Purpose {
    Judgment,
    Decision,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Marker {
    pub kind: MarkerKind,
    pub coord: Cell,
    /// Text drawn at the marker; empty for the arrow and dot.
    pub glyph: String,
    pub color: [u8; 3],
    /// Arrow direction in degrees, for the robot arrow only.
    pub heading: Option<f64>,
}

/// A map snapshot plus the overlay drawn on top of it.
#[derive(Debug, Clone, PartialEq)]
pub struct AnnotatedMap<'a> {
    pub base: &'a SemanticMap,
    pub markers: Vec<Marker>,
    pub purpose: Purpose,
}

pub const ROBOT_RED: [u8; 3] = [220, 30, 30];
pub const GOAL_BLUE: [u8; 3] = [30, 60, 220];
pub const HISTORY_GREEN: [u8; 3] = [20, 140, 60];
pub const FRONTIER_ORANGE: [u8; 3] = [235, 130, 0];

fn frontier_markers(frontiers: &[FrontierPoint]) -> impl Iterator<Item = Marker> + '_ {
    frontiers.iter().map(|f| Marker {
        kind: MarkerKind::FrontierLetter,
        coord: f.coord,
        glyph: f.label.to_string(),
        color: FRONTIER_ORANGE,
        heading: None,
    })
}

/// Judgment prompt map: robot arrow, previous goal, every history node and
/// the labeled frontiers. `robot` and all coordinates are in the map frame.
pub fn annotate_judgment<'a>(
    base: &'a SemanticMap,
    robot: &Pose,
    last_goal: Option<Cell>,
    history: &[HistoryNode],
    frontiers: &[FrontierPoint],
) -> AnnotatedMap<'a> {
    let mut markers = vec![Marker {
        kind: MarkerKind::RobotArrow,
        coord: robot.cell(),
        glyph: String::new(),
        color: ROBOT_RED,
        heading: Some(robot.heading),
    }];
    if let Some(g) = last_goal {
        markers.push(Marker {
            kind: MarkerKind::LastGoalDot,
            coord: g,
            glyph: String::new(),
            color: GOAL_BLUE,
            heading: None,
        });
    }
    markers.extend(history.iter().enumerate().map(|(i, n)| Marker {
        kind: MarkerKind::HistoryLetter,
        coord: n.coord,
        glyph: history_label(i),
        color: HISTORY_GREEN,
        heading: None,
    }));
    markers.extend(frontier_markers(frontiers));
    AnnotatedMap {
        base,
        markers,
        purpose: Purpose::Judgment,
    }
}

/// Decision prompt map: frontier letters only.
pub fn annotate_decision<'a>(
    base: &'a SemanticMap,
    frontiers: &[FrontierPoint],
) -> Result<AnnotatedMap<'a>, FrontierError> {
    if frontiers.is_empty() {
        return Err(FrontierError::NoFrontiers);
    }
    Ok(AnnotatedMap {
        base,
        markers: frontier_markers(frontiers).collect(),
        purpose: Purpose::Decision,
    })
}
