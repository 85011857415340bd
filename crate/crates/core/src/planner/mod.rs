//! Long-term goal selection.

mod hfovs;
mod history;
mod tick;

pub use hfovs::{hfovs, HfovsMode, Temperatures, UnknownHfovsMode};
pub use history::{history_label, HistoryNode, HistoryNodes, HistoryUpdate, BINS};
pub use tick::{assess, decide, select_goal, Assessment, GoalKind, LongTermGoal, ScoreBundle, Selection, TickInput};
