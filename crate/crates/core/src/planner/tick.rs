use serde::{Deserialize, Serialize};

use super::{hfovs, HistoryNode, HistoryNodes, Temperatures};
use crate::category::Category;
use crate::frontier::{annotate_decision, annotate_judgment, render_png, FrontierPoint};
use crate::geometry::{Cell, CellRect, Pose};
use crate::mapping::SemanticMap;
use crate::oracle::{
    ChainLink, ExplorationInput, MapInput, Nonce, Oracle, OracleError, PerceptionInput, PromptBuilder,
    SelectionDistribution, Stage,
};
use crate::params::Params;
use crate::world::Detection;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GoalKind {
    Frontier,
    HistoryNode,
    RandomResample,
    /// A mapped cell of the goal category.
    GoalObject,
}

/// Where a robot is heading until the next re-plan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LongTermGoal {
    pub kind: GoalKind,
    pub coord: Cell,
    /// Simulation step at which the goal was chosen.
    pub set_at: u64,
}

/// Outcome of the selection rule, by index into its inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Selection {
    Frontier(usize),
    HistoryNode(usize),
    Resample,
}

/// Frontier with the highest decision probability when `score >= threshold`,
/// otherwise the history node with the highest score. Falls back to the other
/// branch when one is empty and to a random resample when both are.
pub fn select_goal(
    score: f64,
    threshold: f64,
    frontiers: &[FrontierPoint],
    decision: Option<&SelectionDistribution>,
    history: &HistoryNodes,
) -> Selection {
    let frontier = || {
        if frontiers.is_empty() {
            return None;
        }
        Some(Selection::Frontier(
            decision.and_then(|d| d.argmax()).unwrap_or(0).min(frontiers.len() - 1),
        ))
    };
    let node = || history.best().map(Selection::HistoryNode);
    let pick = if score >= threshold {
        frontier().or_else(node)
    } else {
        node().or_else(frontier)
    };
    pick.unwrap_or(Selection::Resample)
}

/// Scores gathered during one tick.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreBundle {
    pub es: f64,
    /// Absent when judgment was skipped on a fresh map.
    pub js: Option<f64>,
    pub hfovs: f64,
    pub ds: Option<SelectionDistribution>,
}

/// Read-only inputs to one robot's tick. Coordinates are in the map frame.
pub struct TickInput<'a> {
    pub robot: usize,
    pub tick: u64,
    pub goal: Category,
    pub map: &'a SemanticMap,
    /// Part of the map holding observations.
    pub region: CellRect,
    pub pose: Pose,
    pub detections: &'a [Detection],
    pub frontiers: &'a [FrontierPoint],
    pub last_goal: Option<Cell>,
    /// The shared map was initialized this tick.
    pub fresh: bool,
}

/// First half of a tick, safe to run for all robots concurrently.
#[derive(Debug, Clone, PartialEq)]
pub struct Assessment {
    pub scores: ScoreBundle,
    /// Frontier branch taken: forced on a fresh map, else HFOVS at threshold.
    pub explore: bool,
    pub chain: Vec<ChainLink>,
}

/// Renders prompt images only for oracles that consume them.
fn attach_image(
    oracle: &dyn Oracle,
    params: &Params,
    bundle: &mut crate::oracle::PromptBundle,
    map: &crate::frontier::AnnotatedMap<'_>,
) {
    if oracle.wants_images() {
        bundle
            .images
            .push(render_png(map, params.frame_width, params.frame_height));
    }
}

/// Perception, exploration and judgment queries followed by the HFOVS
/// combination.
pub fn assess(
    input: &TickInput<'_>,
    history: &[HistoryNode],
    oracle: &dyn Oracle,
    prompts: &PromptBuilder,
    params: &Params,
) -> Result<Assessment, OracleError> {
    let nonce = Nonce {
        robot: input.robot,
        tick: input.tick,
    };
    let p = prompts.perception(input.goal, input.detections)?;
    let description = oracle.perceive(&PerceptionInput {
        nonce,
        prompt: &p,
        detections: input.detections,
    })?;
    let e = prompts.exploration(input.goal, input.detections, &description)?;
    let es = oracle.exploration_score(&ExplorationInput {
        nonce,
        prompt: &e,
        detections: input.detections,
        description: &description,
    })?;
    let mut chain = vec![
        ChainLink {
            stage: Stage::Perception,
            output: description,
        },
        ChainLink {
            stage: Stage::Exploration,
            output: format!("{es:.4}"),
        },
    ];
    let temps = Temperatures {
        es: params.tau_es,
        js: params.tau_js,
    };
    let js = if input.fresh {
        None
    } else {
        let mut j = prompts.judgment(
            input.goal,
            chain.clone(),
            input.frontiers,
            history,
            &input.pose,
            input.last_goal,
        )?;
        let annotated = annotate_judgment(input.map, &input.pose, input.last_goal, history, input.frontiers);
        attach_image(oracle, params, &mut j, &annotated);
        let js = oracle.judgment_score(&MapInput {
            nonce,
            prompt: &j,
            annotated: &annotated,
            robot: input.pose,
            frontiers: input.frontiers,
            region: input.region,
        })?;
        chain.push(ChainLink {
            stage: Stage::Judgment,
            output: format!("{js:.4}"),
        });
        Some(js)
    };
    let score = hfovs(es, js.unwrap_or(1.0), temps, params.hfovs_mode);
    Ok(Assessment {
        scores: ScoreBundle {
            es,
            js,
            hfovs: score,
            ds: None,
        },
        explore: input.fresh || score >= params.hfovs_threshold,
        chain,
    })
}

/// Second half of a tick: the decision query when frontiers will be used,
/// then the selection rule. Returns the selection and fills `scores.ds`.
pub fn decide(
    input: &TickInput<'_>,
    assessment: &mut Assessment,
    history: &HistoryNodes,
    oracle: &dyn Oracle,
    prompts: &PromptBuilder,
    params: &Params,
) -> Result<Selection, OracleError> {
    let wants_frontier = assessment.explore || history.is_empty();
    if wants_frontier && !input.frontiers.is_empty() {
        let mut d = prompts.decision(input.goal, assessment.chain.clone(), input.frontiers)?;
        let annotated = annotate_decision(input.map, input.frontiers).expect("frontiers are non-empty");
        attach_image(oracle, params, &mut d, &annotated);
        let ds = oracle.decision_scores(&MapInput {
            nonce: Nonce {
                robot: input.robot,
                tick: input.tick,
            },
            prompt: &d,
            annotated: &annotated,
            robot: input.pose,
            frontiers: input.frontiers,
            region: input.region,
        })?;
        if ds.options.len() != input.frontiers.len() {
            return Err(OracleError::Contract(format!(
                "{} decision options for {} frontiers",
                ds.options.len(),
                input.frontiers.len()
            )));
        }
        assessment.scores.ds = Some(ds);
    }
    let threshold_score = if assessment.explore {
        f64::INFINITY
    } else {
        f64::NEG_INFINITY
    };
    Ok(select_goal(
        threshold_score,
        params.hfovs_threshold,
        input.frontiers,
        assessment.scores.ds.as_ref(),
        history,
    ))
}
