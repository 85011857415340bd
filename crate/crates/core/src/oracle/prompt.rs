use std::path::Path;

use serde::{Deserialize, Serialize};

use super::OracleError;
use crate::category::Category;
use crate::frontier::FrontierPoint;
use crate::geometry::{Cell, Pose};
use crate::planner::{history_label, HistoryNode};
use crate::world::Detection;

/// Which step of the reasoning chain a prompt belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Perception,
    Exploration,
    Judgment,
    Decision,
}

impl Stage {
    pub fn name(self) -> &'static str {
        match self {
            Stage::Perception => "perception",
            Stage::Exploration => "exploration",
            Stage::Judgment => "judgment",
            Stage::Decision => "decision",
        }
    }
}

/// Instruction templates, one per stage. Placeholders are `{name}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Templates {
    pub perception: String,
    pub exploration: String,
    pub judgment: String,
    pub decision: String,
}

impl Default for Templates {
    fn default() -> Self {
        Self {
            perception: include_str!("../../templates/perception.txt").to_string(),
            exploration: include_str!("../../templates/exploration.txt").to_string(),
            judgment: include_str!("../../templates/judgment.txt").to_string(),
            decision: include_str!("../../templates/decision.txt").to_string(),
        }
    }
}

impl Templates {
    /// Reads `<stage>.txt` for every stage from `dir`.
    pub fn from_dir(dir: &Path) -> Result<Self, OracleError> {
        let read = |stage: Stage| {
            let p = dir.join(format!("{}.txt", stage.name()));
            std::fs::read_to_string(&p).map_err(|e| OracleError::Template(format!("{}: {e}", p.display())))
        };
        Ok(Self {
            perception: read(Stage::Perception)?,
            exploration: read(Stage::Exploration)?,
            judgment: read(Stage::Judgment)?,
            decision: read(Stage::Decision)?,
        })
    }

    fn get(&self, stage: Stage) -> &str {
        match stage {
            Stage::Perception => &self.perception,
            Stage::Exploration => &self.exploration,
            Stage::Judgment => &self.judgment,
            Stage::Decision => &self.decision,
        }
    }
}

/// One completed step of the chain, fed forward into later prompts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainLink {
    pub stage: Stage,
    pub output: String,
}

/// Everything sent to a model for one query.
#[derive(Debug, Clone, PartialEq)]
pub struct PromptBundle {
    pub stage: Stage,
    pub instruction: String,
    /// PNG images; empty unless the oracle consumes images.
    pub images: Vec<Vec<u8>>,
    pub detections_text: String,
    pub goal: Category,
    pub chain: Vec<ChainLink>,
    pub options: Vec<String>,
}

/// Replaces every `{key}` and fails if any placeholder is left.
pub fn fill(template: &str, values: &[(&str, &str)]) -> Result<String, OracleError> {
    let mut out = String::with_capacity(template.len() + 256);
    let mut rest = template;
    while let Some(open) = rest.find('{') {
        out.push_str(&rest[..open]);
        let after = &rest[open + 1..];
        let Some(close) = after.find('}') else {
            return Err(OracleError::Template("unterminated placeholder".into()));
        };
        let key = &after[..close];
        match values.iter().find(|(k, _)| *k == key) {
            Some((_, v)) => out.push_str(v),
            None => return Err(OracleError::Template(format!("unfilled placeholder {{{key}}}"))),
        }
        rest = &after[close + 1..];
    }
    out.push_str(rest);
    Ok(out)
}

/// Object list with confidences, one line per detection.
pub fn detections_text(detections: &[Detection]) -> String {
    if detections.is_empty() {
        return "(none)".to_string();
    }
    detections
        .iter()
        .map(|d| format!("- {} (confidence {:.2})", d.category, d.confidence))
        .collect::<Vec<_>>()
        .join("\n")
}

fn chain_text(chain: &[ChainLink]) -> String {
    if chain.is_empty() {
        return "(none)".to_string();
    }
    chain
        .iter()
        .map(|l| format!("[{}] {}", l.stage.name(), l.output))
        .collect::<Vec<_>>()
        .join("\n")
}

fn frontiers_text(frontiers: &[FrontierPoint]) -> String {
    if frontiers.is_empty() {
        return "(none)".to_string();
    }
    frontiers
        .iter()
        .map(|f| {
            format!(
                "{}: {} cells at ({}, {})",
                f.label, f.cluster_size, f.coord.x, f.coord.y
            )
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn history_text(nodes: &[HistoryNode]) -> String {
    if nodes.is_empty() {
        return "(none)".to_string();
    }
    nodes
        .iter()
        .enumerate()
        .map(|(i, n)| {
            format!(
                "{}: ({}, {}) score {:.3}",
                history_label(i),
                n.coord.x,
                n.coord.y,
                n.score
            )
        })
        .collect::<Vec<_>>()
        .join("\n")
}

pub const YES_NO: [&str; 2] = ["Yes", "No"];

/// Builds prompts from a template set.
#[derive(Debug, Clone, Default)]
pub struct PromptBuilder {
    pub templates: Templates,
}

impl PromptBuilder {
    fn bundle(
        &self,
        stage: Stage,
        goal: Category,
        detections: &[Detection],
        chain: Vec<ChainLink>,
        options: Vec<String>,
        extra: &[(&str, &str)],
    ) -> Result<PromptBundle, OracleError> {
        let det = detections_text(detections);
        let chain_s = chain_text(&chain);
        let opts = options.join(" or ");
        let mut values = vec![
            ("goal", goal.name()),
            ("goal_article", goal.article()),
            ("detections", det.as_str()),
            ("chain", chain_s.as_str()),
            ("options", opts.as_str()),
        ];
        values.extend_from_slice(extra);
        Ok(PromptBundle {
            stage,
            instruction: fill(self.templates.get(stage), &values)?,
            images: Vec::new(),
            detections_text: det,
            goal,
            chain,
            options,
        })
    }

    pub fn perception(&self, goal: Category, detections: &[Detection]) -> Result<PromptBundle, OracleError> {
        self.bundle(Stage::Perception, goal, detections, Vec::new(), Vec::new(), &[])
    }

    pub fn exploration(
        &self,
        goal: Category,
        detections: &[Detection],
        description: &str,
    ) -> Result<PromptBundle, OracleError> {
        let chain = vec![ChainLink {
            stage: Stage::Perception,
            output: description.to_string(),
        }];
        let options = YES_NO.iter().map(|s| s.to_string()).collect();
        self.bundle(
            Stage::Exploration,
            goal,
            detections,
            chain,
            options,
            &[("description", description)],
        )
    }

    /// `chain` carries the perception and exploration links.
    pub fn judgment(
        &self,
        goal: Category,
        chain: Vec<ChainLink>,
        frontiers: &[FrontierPoint],
        history: &[HistoryNode],
        robot: &Pose,
        last_goal: Option<Cell>,
    ) -> Result<PromptBundle, OracleError> {
        let location = match last_goal {
            Some(g) => format!(
                "you are at ({}, {}) facing {:.0} degrees; your previous goal was ({}, {})",
                robot.cell().x,
                robot.cell().y,
                robot.heading,
                g.x,
                g.y
            ),
            None => format!(
                "you are at ({}, {}) facing {:.0} degrees; you have no previous goal",
                robot.cell().x,
                robot.cell().y,
                robot.heading
            ),
        };
        let fr = frontiers_text(frontiers);
        let hist = history_text(history);
        let options = YES_NO.iter().map(|s| s.to_string()).collect();
        self.bundle(
            Stage::Judgment,
            goal,
            &[],
            chain,
            options,
            &[("frontiers", &fr), ("history", &hist), ("location", &location)],
        )
    }

    /// `chain` carries everything up to and including the judgment link.
    pub fn decision(
        &self,
        goal: Category,
        chain: Vec<ChainLink>,
        frontiers: &[FrontierPoint],
    ) -> Result<PromptBundle, OracleError> {
        let fr = frontiers_text(frontiers);
        let options = frontiers.iter().map(|f| f.label.to_string()).collect();
        self.bundle(Stage::Decision, goal, &[], chain, options, &[("frontiers", &fr)])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fill_rejects_unknown_placeholders() {
        assert_eq!(fill("a {x} b", &[("x", "1")]).unwrap(), "a 1 b");
        assert!(fill("a {y} b", &[("x", "1")]).is_err());
    }

    #[test]
    fn builtin_templates_fill_completely() {
        let b = PromptBuilder::default();
        let det = [Detection {
            category: Category::Sink,
            confidence: 0.8,
            bearing: 0.0,
            distance_m: 1.0,
        }];
        let p = b.perception(Category::Toilet, &det).unwrap();
        assert!(p.instruction.contains("sink (confidence 0.80)"));
        let e = b
            .exploration(Category::Toilet, &det, "a sink is in front of you")
            .unwrap();
        assert!(e.instruction.contains("a sink is in front of you"));
        assert_eq!(e.options, ["Yes", "No"]);
        let fr = [FrontierPoint {
            coord: Cell::new(3, 4),
            cluster_size: 9,
            label: 'A',
        }];
        let d = b.decision(Category::Toilet, vec![], &fr).unwrap();
        assert_eq!(d.options, ["A"]);
        assert!(!d.instruction.contains('{'));
    }
}
