use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::metrics::{classify_failure, goal_distance_cells, EpisodeResult, FailureEvidence};
use super::trace::{TickBranch, TickRecord, TraceRecord};
use super::{EpisodeConfig, HarnessError, OracleKind};
use crate::baselines::{best_cost_utility, geodesic_costs, greedy_assign, PlannerKind};
use crate::category::Category;
use crate::frontier::{detect_frontiers, frontier_clusters};
use crate::geometry::{Cell, CellRect, Pose};
use crate::local_policy::{
    is_stuck, keep_previous_goal, next_action, sample_explored_free, Gait, LocalPolicyError, PathCache,
};
use crate::mapping::{collision_delta, project, GlobalSemanticMap, Layer, MapFrame, SemanticMap};
use crate::oracle::{Oracle, OracleError, PromptBuilder, RemoteConfig, RemoteOracle, ScriptedConfig, ScriptedOracle};
use crate::planner::{assess, decide, Assessment, GoalKind, HistoryNodes, LongTermGoal, Selection, TickInput};
use crate::seed;
use crate::world::{check_success, sense, step, Action, Detection, HitKind, Kinematics, SceneGrid, SensorParams};

// Stream tags for seed derivation.
const TAG_GOAL: u64 = 1;
const TAG_START: u64 = 2;
const TAG_SENSE: u64 = 3;
const TAG_ORACLE: u64 = 4;
const TAG_RESAMPLE: u64 = 5;

/// Starts are at least this far from the goal along the ground truth, meters.
pub const MIN_START_DISTANCE_M: f64 = 1.0;
// Margin around the explored area searched by the distance field, cells.
const FIELD_MARGIN: i32 = 20;

/// Read-only snapshot handed to an observer after every step.
pub struct EpisodeView<'a> {
    pub t: u32,
    pub map: &'a SemanticMap,
    pub frame: MapFrame,
    /// Map-frame poses.
    pub poses: &'a [Pose],
    pub goals: &'a [Option<LongTermGoal>],
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeOutcome {
    pub result: EpisodeResult,
    /// Empty unless tracing was requested.
    pub trace: Vec<TraceRecord>,
}

/// Builds the configured oracle.
pub fn make_oracle(config: &EpisodeConfig) -> Result<Box<dyn Oracle>, HarnessError> {
    Ok(match config.oracle {
        OracleKind::Scripted => Box::new(ScriptedOracle::new(ScriptedConfig {
            seed: seed::derive(&[config.seed, TAG_ORACLE]),
            noise: config.params.oracle_noise,
            ..Default::default()
        })),
        OracleKind::Remote => Box::new(RemoteOracle::new(RemoteConfig::from_env(
            config.robots,
            config.params.decoding,
        )?)?),
    })
}

/// Loads the scene, builds the oracle and runs one episode.
pub fn run_episode(config: &EpisodeConfig, trace: bool) -> Result<EpisodeOutcome, HarnessError> {
    let scene = config.scene.load()?;
    let oracle = make_oracle(config)?;
    run_episode_with(config, &scene, oracle.as_ref(), trace, None)
}

/// Goal category: the configured one, else a seeded draw among the goal
/// categories present.
pub fn resolve_goal(config: &EpisodeConfig, scene: &SceneGrid) -> Result<Category, HarnessError> {
    let present = scene.categories_present();
    match config.goal {
        Some(g) if present.contains(&g) => Ok(g),
        Some(g) => Err(crate::world::WorldError::MissingCategory(g).into()),
        None => {
            let goals: Vec<Category> = Category::GOALS
                .iter()
                .copied()
                .filter(|g| present.contains(g))
                .collect();
            goals
                .choose(&mut seed::stream(&[config.seed, TAG_GOAL]))
                .copied()
                .ok_or_else(|| HarnessError::Config("scene holds no goal category".into()))
        }
    }
}

/// Configured start poses, else seeded ones: free, non-object cells at least
/// one cell from any wall, reachable and at least [`MIN_START_DISTANCE_M`]
/// from the goal, with distinct cells and headings on the turn grid.
pub fn start_poses(config: &EpisodeConfig, scene: &SceneGrid, goal_field: &[f64]) -> Result<Vec<Pose>, HarnessError> {
    if let Some(starts) = &config.starts {
        if let Some(p) = starts.iter().find(|p| !scene.is_free(p.cell())) {
            return Err(HarnessError::Config(format!("start {:?} is not free", p.cell())));
        }
        return Ok(starts.clone());
    }
    let min_cells = MIN_START_DISTANCE_M / scene.cell_size();
    let clear = |c: Cell| {
        (-1..=1).all(|dy| (-1..=1).all(|dx| scene.in_bounds(c.offset(dx, dy)) && !scene.is_wall(c.offset(dx, dy))))
    };
    let candidates: Vec<Cell> = scene
        .free_cells()
        .filter(|&c| scene.object_at(c).is_none() && clear(c))
        .filter(|c| {
            let d = goal_field[c.y as usize * scene.width() + c.x as usize];
            d.is_finite() && d >= min_cells
        })
        .collect();
    if candidates.len() < config.robots {
        return Err(HarnessError::Config("not enough start cells".into()));
    }
    let mut rng = seed::stream(&[config.seed, TAG_START]);
    let turns = (360.0 / config.params.turn_step_deg).round().max(1.0) as u32;
    let mut starts: Vec<Pose> = Vec::with_capacity(config.robots);
    while starts.len() < config.robots {
        let c = candidates[rng.gen_range(0..candidates.len())];
        if starts.iter().any(|p| p.cell().dist(c) < 2.0) {
            continue;
        }
        let heading = rng.gen_range(0..turns) as f64 * config.params.turn_step_deg;
        starts.push(Pose::at_cell(c, heading));
    }
    Ok(starts)
}

/// Frame placing the scene in the middle of the map.
pub fn scene_frame(scene: &SceneGrid, map_size: usize) -> Result<MapFrame, HarnessError> {
    if scene.width() > map_size || scene.height() > map_size {
        return Err(HarnessError::Config(format!(
            "scene {}x{} does not fit a {map_size}-cell map",
            scene.width(),
            scene.height()
        )));
    }
    Ok(MapFrame {
        offset_x: ((map_size - scene.width()) / 2) as i32,
        offset_y: ((map_size - scene.height()) / 2) as i32,
    })
}

struct RobotState {
    pose: Pose,
    start: Pose,
    path_m: f64,
    goal: Option<LongTermGoal>,
    cache: PathCache,
    last_tick_pose: Option<Pose>,
    replan: bool,
    /// A stuck resample is followed without goal-object override until this step.
    hold_until: u32,
    rng: ChaCha8Rng,
    detections: Vec<Detection>,
}

struct Episode<'a> {
    config: &'a EpisodeConfig,
    scene: &'a SceneGrid,
    oracle: &'a dyn Oracle,
    prompts: PromptBuilder,
    goal: Category,
    frame: MapFrame,
    global: GlobalSemanticMap,
    history: HistoryNodes,
    robots: Vec<RobotState>,
    /// Map cells labeled with the goal category at or above threshold.
    goal_cells: BTreeSet<Cell>,
    tick: u64,
    trace: Option<Vec<TraceRecord>>,
    detection_traps: u32,
    oracle_errors: u32,
    goal_seen: bool,
}

impl<'a> Episode<'a> {
    fn map(&self) -> &SemanticMap {
        self.global.map()
    }

    fn pose_in_map(&self, r: usize) -> Pose {
        self.frame.pose_to_map(&self.robots[r].pose)
    }

    fn region(&self) -> CellRect {
        let mut rect = self
            .global
            .explored_bbox()
            .unwrap_or_else(|| CellRect::point(self.pose_in_map(0).cell()));
        for r in 0..self.robots.len() {
            rect.include(self.pose_in_map(r).cell());
        }
        rect
    }

    fn is_true_goal(&self, map_cell: Cell) -> bool {
        self.scene
            .object_at(self.frame.to_scene(map_cell))
            .is_some_and(|o| o.category == self.goal)
    }

    fn sense_all(&mut self, t: u32) {
        let sensor = SensorParams::from_params(&self.config.params);
        let goal_channel = Layer::Category(self.goal).index();
        let threshold = self.config.params.goal_detection_threshold;
        for r in 0..self.robots.len() {
            let noise_seed = seed::derive(&[self.config.seed, TAG_SENSE, t as u64, r as u64]);
            let obs = sense(self.scene, &self.robots[r].pose, &sensor, noise_seed);
            for ray in &obs.rays {
                if let HitKind::Object { instance } = ray.hit {
                    if self
                        .scene
                        .objects()
                        .iter()
                        .any(|o| o.id == instance && o.category == self.goal)
                    {
                        self.goal_seen = true;
                    }
                }
            }
            let delta = project(&obs, &self.frame, self.global.current(r), self.scene.cell_size());
            for w in &delta.writes {
                if w.channel as usize == goal_channel && w.value >= threshold && self.map().in_bounds(w.cell) {
                    self.goal_cells.insert(w.cell);
                }
            }
            self.global.apply(r, &delta);
            self.robots[r].detections = obs.detections;
        }
        self.note_blocked();
    }

    fn note_blocked(&mut self) {
        let blocked = self.global.take_newly_blocked();
        if !blocked.is_empty() {
            for robot in &mut self.robots {
                robot.cache.note_blocked(&blocked);
            }
        }
    }

    fn resample(&mut self, r: usize, t: u32) -> Option<LongTermGoal> {
        let region = self.region();
        let cell = sample_explored_free(self.global.map(), region, &mut self.robots[r].rng)?;
        Some(LongTermGoal {
            kind: GoalKind::RandomResample,
            coord: cell,
            set_at: t as u64,
        })
    }

    fn set_goal(&mut self, r: usize, goal: Option<LongTermGoal>) {
        if goal.is_some() {
            self.robots[r].goal = goal;
        }
    }

    fn record_tick(&mut self, t: u32, r: usize, scores: Option<&Assessment>, branch: TickBranch) {
        if self.trace.is_none() {
            return;
        }
        let record = TickRecord {
            t,
            robot: r,
            es: scores.map(|a| a.scores.es),
            js: scores.and_then(|a| a.scores.js),
            hfovs: scores.map(|a| a.scores.hfovs),
            branch,
            ds: scores.and_then(|a| a.scores.ds.clone()),
            goal: self.robots[r].goal,
            hs_digest: self.history.digest(),
        };
        self.trace
            .as_mut()
            .expect("checked above")
            .push(TraceRecord::Tick(record));
    }

    fn plan(&mut self, t: u32, needing: &[usize], scheduled: bool) {
        let config = self.config;
        let params = &config.params;
        let mut active = Vec::new();
        for &r in needing {
            let stuck = scheduled
                && self.robots[r]
                    .last_tick_pose
                    .is_some_and(|p| is_stuck(self.robots[r].pose.dist_to(p.x, p.y), params));
            if stuck {
                let g = self.resample(r, t);
                self.set_goal(r, g);
                self.robots[r].hold_until = t + params.update_interval;
                self.robots[r].cache.invalidate();
                self.record_tick(t, r, None, TickBranch::Resample);
            } else {
                active.push(r);
            }
        }
        if scheduled {
            for robot in &mut self.robots {
                robot.last_tick_pose = Some(robot.pose);
            }
        }
        if active.is_empty() {
            return;
        }
        match self.config.planner {
            PlannerKind::Mcoconav => self.plan_mcoconav(t, &active),
            PlannerKind::Greedy => self.plan_greedy(t, &active),
            PlannerKind::CostUtility => self.plan_cost_utility(t, &active),
            PlannerKind::Random => {
                for r in active {
                    let g = self.resample(r, t);
                    self.set_goal(r, g);
                    self.record_tick(t, r, None, TickBranch::Baseline);
                }
            }
        }
    }

    fn plan_mcoconav(&mut self, t: u32, active: &[usize]) {
        let config = self.config;
        let params = &config.params;
        let region = self.region();
        let frontiers = detect_frontiers(
            self.global.map(),
            region.expanded(1),
            params.frontier_min_cluster,
            params.frontier_max_options,
        )
        .unwrap_or_default();
        let fresh = t == 0;
        let tick = self.tick;
        let inputs: Vec<TickInput<'_>> = active
            .iter()
            .map(|&r| TickInput {
                robot: r,
                tick,
                goal: self.goal,
                map: self.global.map(),
                region,
                pose: self.frame.pose_to_map(&self.robots[r].pose),
                detections: &self.robots[r].detections,
                frontiers: &frontiers,
                last_goal: self.robots[r].goal.map(|g| g.coord),
                fresh,
            })
            .collect();
        let nodes = self.history.nodes();
        let (oracle, prompts) = (self.oracle, &self.prompts);
        let assessed: Vec<(Result<Assessment, OracleError>, u32)> = inputs
            .par_iter()
            .map(|input| with_retry(|| assess(input, nodes, oracle, prompts, params)))
            .collect();

        // history writes happen in robot order once every assessment is in
        for (input, (a, _)) in inputs.iter().zip(&assessed) {
            if let Ok(a) = a {
                self.history
                    .update(input.pose.cell(), input.pose.heading, a.scores.hfovs, params.fhfov);
            }
        }

        let mut choices = Vec::with_capacity(inputs.len());
        for (input, (a, errors)) in inputs.iter().zip(assessed) {
            self.oracle_errors += errors;
            let r = input.robot;
            let Ok(mut a) = a else {
                choices.push((r, None, None));
                continue;
            };
            let prev = self.robots[r].goal.filter(|g| g.kind != GoalKind::GoalObject);
            if let Some(prev) = prev {
                let dist = input.pose.dist_to_cell(prev.coord);
                if !fresh && keep_previous_goal(dist, a.scores.hfovs, params) {
                    choices.push((r, Some(Choice::Keep), Some(a)));
                    continue;
                }
            }
            let (sel, errors) = with_retry(|| decide(input, &mut a, &self.history, oracle, prompts, params));
            self.oracle_errors += errors;
            choices.push((r, sel.ok().map(Choice::Select), Some(a)));
        }
        drop(inputs);

        for (r, choice, a) in choices {
            let branch = match choice {
                Some(Choice::Keep) => TickBranch::Keep,
                Some(Choice::Select(Selection::Frontier(i))) => {
                    self.set_goal(r, Some(goal_at(GoalKind::Frontier, frontiers[i].coord, t)));
                    TickBranch::Frontier
                }
                Some(Choice::Select(Selection::HistoryNode(i))) => {
                    let c = self.history.nodes()[i].coord;
                    self.set_goal(r, Some(goal_at(GoalKind::HistoryNode, c, t)));
                    TickBranch::History
                }
                Some(Choice::Select(Selection::Resample)) | None => {
                    let g = self.resample(r, t);
                    self.set_goal(r, g);
                    TickBranch::Resample
                }
            };
            self.record_tick(t, r, a.as_ref(), branch);
        }
    }

    fn all_clusters(&self) -> Vec<(Cell, usize)> {
        let region = self.region().expanded(1);
        frontier_clusters(self.global.map(), region, self.config.params.frontier_min_cluster)
            .into_iter()
            .map(|c| (c.representative, c.cells.len()))
            .collect()
    }

    // Frontiers not already targeted by a robot that is not re-planning.
    fn open_clusters(&self, active: &[usize]) -> Vec<(Cell, usize)> {
        let reach = self.config.params.goal_reached_distance;
        let claimed: Vec<Cell> = (0..self.robots.len())
            .filter(|r| !active.contains(r))
            .filter_map(|r| {
                self.robots[r]
                    .goal
                    .filter(|g| g.kind == GoalKind::Frontier)
                    .map(|g| g.coord)
            })
            .collect();
        let all = self.all_clusters();
        let open: Vec<(Cell, usize)> = all
            .iter()
            .copied()
            .filter(|(c, _)| claimed.iter().all(|g| g.dist(*c) >= reach))
            .collect();
        if open.is_empty() {
            all
        } else {
            open
        }
    }

    fn plan_greedy(&mut self, t: u32, active: &[usize]) {
        let clusters = self.open_clusters(active);
        let reps: Vec<Cell> = clusters.iter().map(|c| c.0).collect();
        let robots: Vec<Cell> = active.iter().map(|&r| self.pose_in_map(r).cell()).collect();
        let assignment = greedy_assign(&robots, &reps);
        for (k, &r) in active.iter().enumerate() {
            let g = match assignment[k] {
                Some(i) => Some(goal_at(GoalKind::Frontier, reps[i], t)),
                None => self.resample(r, t),
            };
            self.set_goal(r, g);
            self.record_tick(t, r, None, TickBranch::Baseline);
        }
    }

    fn plan_cost_utility(&mut self, t: u32, active: &[usize]) {
        let clusters = self.open_clusters(active);
        let reps: Vec<Cell> = clusters.iter().map(|c| c.0).collect();
        let region = self.region().expanded(FIELD_MARGIN);
        for &r in active {
            let robot = self.pose_in_map(r).cell();
            let costs = geodesic_costs(
                self.global.map(),
                region,
                self.config.params.inflation_radius,
                robot,
                &reps,
            );
            let options: Vec<(f64, f64)> = clusters
                .iter()
                .zip(&costs)
                .map(|(c, &cost)| (c.1 as f64, cost))
                .collect();
            let g = match best_cost_utility(&options, self.config.params.lambda_cu) {
                Some(i) => Some(goal_at(GoalKind::Frontier, reps[i], t)),
                None => self.resample(r, t),
            };
            self.set_goal(r, g);
            self.record_tick(t, r, None, TickBranch::Baseline);
        }
    }

    /// Points robots at the nearest mapped goal cell once one exists, unless a
    /// recent stuck resample is being followed.
    fn pursue_goal_objects(&mut self, t: u32) {
        if self.goal_cells.is_empty() {
            return;
        }
        for r in 0..self.robots.len() {
            let following = self.robots[r].goal.is_some_and(|g| g.kind == GoalKind::GoalObject);
            if following || t < self.robots[r].hold_until {
                continue;
            }
            let here = self.pose_in_map(r);
            let nearest = *self
                .goal_cells
                .iter()
                .min_by(|a, b| here.dist_to_cell(**a).total_cmp(&here.dist_to_cell(**b)))
                .expect("non-empty");
            if !self.is_true_goal(nearest) {
                self.detection_traps += 1;
            }
            self.robots[r].goal = Some(goal_at(GoalKind::GoalObject, nearest, t));
        }
    }

    fn field_action(&mut self, r: usize) -> Result<Action, LocalPolicyError> {
        let Some(goal) = self.robots[r].goal else {
            return Ok(Action::TurnLeft);
        };
        let config = self.config;
        let params = &config.params;
        let pose = self.pose_in_map(r);
        let robot = pose.cell();
        let reach = params.inflation_radius + 1;
        let mut always_free: Vec<Cell> = (-reach..=reach)
            .flat_map(|dy| (-reach..=reach).map(move |dx| robot.offset(dx, dy)))
            .filter(|&c| self.global.map().in_bounds(c) && !self.global.map().is_wall(c))
            .collect();
        let stop = if goal.kind == GoalKind::GoalObject {
            always_free.push(goal.coord);
            Some(params.success_distance_m / self.scene.cell_size())
        } else {
            None
        };
        let region = self.region().expanded(FIELD_MARGIN);
        let map = self.global.map();
        let field =
            self.robots[r]
                .cache
                .field_for(map, region, goal.coord, robot, params.inflation_radius, &always_free)?;
        let gait = Gait {
            stride_cells: params.move_step_m / self.scene.cell_size(),
            turn_deg: params.turn_step_deg,
        };
        next_action(field, &pose, &gait, stop)
    }

    fn choose_action(&mut self, r: usize, t: u32) -> Action {
        for _ in 0..2 {
            match self.field_action(r) {
                Ok(a) => return a,
                Err(_) => {
                    let g = self.resample(r, t);
                    self.set_goal(r, g);
                    self.robots[r].cache.invalidate();
                }
            }
        }
        Action::TurnLeft
    }
}

enum Choice {
    Keep,
    Select(Selection),
}

fn goal_at(kind: GoalKind, coord: Cell, t: u32) -> LongTermGoal {
    LongTermGoal {
        kind,
        coord,
        set_at: t as u64,
    }
}

// One retry after an oracle failure; returns the number of failures seen.
fn with_retry<T>(mut f: impl FnMut() -> Result<T, OracleError>) -> (Result<T, OracleError>, u32) {
    match f() {
        Ok(v) => (Ok(v), 0),
        Err(_) => match f() {
            Ok(v) => (Ok(v), 1),
            Err(e) => (Err(e), 2),
        },
    }
}

/// Runs one episode on a loaded scene. `observer` sees the state after every
/// step.
pub fn run_episode_with(
    config: &EpisodeConfig,
    scene: &SceneGrid,
    oracle: &dyn Oracle,
    trace: bool,
    mut observer: Option<&mut dyn FnMut(&EpisodeView<'_>)>,
) -> Result<EpisodeOutcome, HarnessError> {
    config.validate()?;
    let params = &config.params;
    let goal = resolve_goal(config, scene)?;
    let goal_field = goal_distance_cells(scene, goal);
    let starts = start_poses(config, scene, &goal_field)?;
    let frame = scene_frame(scene, params.map_size)?;
    let kin = Kinematics {
        move_step_m: params.move_step_m,
        turn_step_deg: params.turn_step_deg,
        robot_collisions: params.robot_collisions,
    };
    let move_cells = params.move_step_m / scene.cell_size();

    let mut ep = Episode {
        config,
        scene,
        oracle,
        prompts: PromptBuilder::default(),
        goal,
        frame,
        global: GlobalSemanticMap::new(params.map_size, config.robots),
        history: HistoryNodes::new(params.history_radius),
        robots: starts
            .iter()
            .enumerate()
            .map(|(r, &p)| RobotState {
                pose: p,
                start: p,
                path_m: 0.0,
                goal: None,
                cache: PathCache::new(),
                last_tick_pose: None,
                replan: false,
                hold_until: 0,
                rng: seed::stream(&[config.seed, TAG_RESAMPLE, r as u64]),
                detections: Vec::new(),
            })
            .collect(),
        goal_cells: BTreeSet::new(),
        tick: 0,
        trace: trace.then(Vec::new),
        detection_traps: 0,
        oracle_errors: 0,
        goal_seen: false,
    };
    if let Some(tr) = ep.trace.as_mut() {
        tr.push(TraceRecord::Header {
            config: Box::new(config.clone()),
            goal,
            scene_checksum: scene.checksum(),
            starts: starts.clone(),
        });
    }

    let mut stopper = None;
    let mut success = false;
    let mut steps = config.max_steps;
    'episode: for t in 0..config.max_steps {
        ep.sense_all(t);

        let scheduled = t % params.update_interval == 0;
        let needing: Vec<usize> = (0..ep.robots.len())
            .filter(|&r| scheduled || ep.robots[r].replan)
            .collect();
        if !needing.is_empty() {
            ep.plan(t, &needing, scheduled);
            ep.tick += 1;
            for &r in &needing {
                ep.robots[r].replan = false;
            }
        }
        ep.pursue_goal_objects(t);

        let actions: Vec<Action> = (0..ep.robots.len()).map(|r| ep.choose_action(r, t)).collect();
        for (r, &action) in actions.iter().enumerate() {
            let others: Vec<Pose> = (0..ep.robots.len())
                .filter(|&o| o != r)
                .map(|o| ep.robots[o].pose)
                .collect();
            let before = ep.robots[r].pose;
            let res = step(scene, before, action, &others, &kin);
            if res.collision {
                let pose_map = ep.frame.pose_to_map(&before);
                if let Some(delta) = collision_delta(ep.global.map(), &pose_map, move_cells) {
                    ep.global.apply(r, &delta);
                    ep.note_blocked();
                }
            }
            ep.robots[r].pose = res.pose;
            ep.robots[r].path_m += before.dist_to(res.pose.x, res.pose.y) * scene.cell_size();
            if let Some(tr) = ep.trace.as_mut() {
                tr.push(TraceRecord::Step {
                    t,
                    robot: r,
                    pose: res.pose,
                    action,
                    collision: res.collision,
                });
            }
            if action == Action::Stop {
                stopper = Some(r);
                success = check_success(&res.pose, scene, goal, params.success_distance_m)?;
                steps = t + 1;
                break 'episode;
            }
        }

        for r in 0..ep.robots.len() {
            if let Some(g) = ep.robots[r].goal {
                let near = ep.pose_in_map(r).dist_to_cell(g.coord) < params.goal_reached_distance;
                if near && matches!(g.kind, GoalKind::Frontier | GoalKind::RandomResample) {
                    ep.robots[r].replan = true;
                }
            }
        }

        if let Some(obs) = observer.as_deref_mut() {
            let poses: Vec<Pose> = (0..ep.robots.len()).map(|r| ep.pose_in_map(r)).collect();
            let goals: Vec<Option<LongTermGoal>> = ep.robots.iter().map(|r| r.goal).collect();
            obs(&EpisodeView {
                t,
                map: ep.global.map(),
                frame: ep.frame,
                poses: &poses,
                goals: &goals,
            });
        }
    }

    let goal_mapped = ep.goal_cells.iter().any(|&c| ep.is_true_goal(c));
    let evidence = FailureEvidence {
        success,
        wrong_stop: stopper.is_some() && !success,
        goal_seen: ep.goal_seen,
        goal_mapped,
    };
    let shortest_path_m = stopper.and_then(|r| {
        let c = ep.robots[r].start.cell();
        let d = goal_field[c.y as usize * scene.width() + c.x as usize];
        d.is_finite().then(|| d * scene.cell_size())
    });
    let result = EpisodeResult {
        goal,
        success,
        steps,
        path_lengths_m: ep.robots.iter().map(|r| r.path_m).collect(),
        stopper,
        shortest_path_m,
        failure: classify_failure(&evidence),
        detection_traps: ep.detection_traps,
        oracle_errors: ep.oracle_errors,
    };
    let mut records = ep.trace.take().unwrap_or_default();
    if trace {
        records.push(TraceRecord::End { result: result.clone() });
    }
    Ok(EpisodeOutcome { result, trace: records })
}
