use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::metrics::{compute_spl, compute_sr, EpisodeResult, FailureClass};
use super::trace::write_jsonl;
use super::{make_oracle, run_episode_with, EpisodeConfig, HarnessError, OracleKind, SceneSource, SplPath};
use crate::baselines::PlannerKind;
use crate::category::Category;
use crate::params::Params;
use crate::seed;
use crate::world::GenParams;

const TAG_EPISODE: u64 = 11;

/// A grid of planners x robot counts x noise levels, each run on the same
/// seeded episodes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    pub planners: Vec<PlannerKind>,
    pub robots: Vec<usize>,
    pub noise: Vec<f64>,
    pub episodes: usize,
    pub seed: u64,
    /// Scene generator template; each episode adds its goal as required.
    pub scene: GenParams,
    pub max_steps: u32,
    pub params: Params,
    pub oracle: OracleKind,
    pub spl_path: SplPath,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            planners: vec![PlannerKind::Mcoconav, PlannerKind::Random],
            robots: vec![2],
            noise: vec![0.0],
            episodes: 20,
            seed: 0,
            scene: GenParams {
                rooms: 12,
                ..GenParams::default()
            },
            max_steps: 500,
            params: Params::default(),
            oracle: OracleKind::Scripted,
            spl_path: SplPath::Own,
        }
    }
}

impl SuiteConfig {
    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::Io(path.display().to_string(), e))?;
        serde_json::from_str(&text).map_err(|e| HarnessError::Config(e.to_string()))
    }

    /// Configuration of episode `index` in one cell. The scene, goal and
    /// master seed depend only on the index, so every cell sees the same
    /// episodes.
    pub fn episode(&self, planner: PlannerKind, robots: usize, noise: f64, index: usize) -> EpisodeConfig {
        let episode_seed = seed::derive(&[self.seed, TAG_EPISODE, index as u64]);
        let goal = Category::GOALS[(episode_seed % Category::GOALS.len() as u64) as usize];
        let mut scene = self.scene.clone();
        if !scene.required.contains(&goal) {
            scene.required.push(goal);
        }
        let mut params = self.params.clone();
        params.detection_noise = noise;
        EpisodeConfig {
            scene: SceneSource::Generated {
                seed: episode_seed,
                params: scene,
            },
            goal: Some(goal),
            robots,
            max_steps: self.max_steps,
            planner,
            oracle: self.oracle,
            params,
            spl_path: self.spl_path,
            seed: episode_seed,
            starts: None,
        }
    }
}

/// One episode's outcome within a suite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpisodeRecord {
    pub planner: PlannerKind,
    pub robots: usize,
    pub noise: f64,
    pub index: usize,
    pub seed: u64,
    pub result: Option<EpisodeResult>,
    pub error: Option<String>,
}

/// Aggregates of one suite cell. Failure shares are percentages of the
/// failed episodes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub planner: PlannerKind,
    pub robots: usize,
    pub noise: f64,
    pub episodes: usize,
    pub sr: f64,
    pub spl: f64,
    pub avg_steps: f64,
    pub dt_events: u64,
    pub dt_episodes: usize,
    pub fail_detection_pct: f64,
    pub fail_planning_pct: f64,
    pub fail_exploration_pct: f64,
    pub errors: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub cells: Vec<CellSummary>,
    pub episodes: Vec<EpisodeRecord>,
    /// Mean wall time per episode for each cell, milliseconds.
    pub wall_ms: Vec<f64>,
}

fn run_one(suite: &SuiteConfig, planner: PlannerKind, robots: usize, noise: f64, index: usize) -> (EpisodeRecord, f64) {
    let start = Instant::now();
    let config = suite.episode(planner, robots, noise, index);
    let outcome = config.scene.load().and_then(|scene| {
        let oracle = make_oracle(&config)?;
        run_episode_with(&config, &scene, oracle.as_ref(), false, None)
    });
    let (result, error) = match outcome {
        Ok(o) => (Some(o.result), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let record = EpisodeRecord {
        planner,
        robots,
        noise,
        index,
        seed: config.seed,
        result,
        error,
    };
    (record, start.elapsed().as_secs_f64() * 1000.0)
}

/// Summarizes the episodes of one cell; failed runs count as unsuccessful.
pub fn summarize(records: &[EpisodeRecord], mode: SplPath) -> Option<CellSummary> {
    let first = records.first()?;
    let results: Vec<EpisodeResult> = records.iter().filter_map(|r| r.result.clone()).collect();
    let n = records.len();
    let errors = n - results.len();
    let scale = results.len() as f64 / n as f64;
    let failures: Vec<FailureClass> = results.iter().filter(|r| !r.success).map(|r| r.failure).collect();
    let share = |class: FailureClass| {
        if failures.is_empty() {
            0.0
        } else {
            100.0 * failures.iter().filter(|&&f| f == class).count() as f64 / failures.len() as f64
        }
    };
    Some(CellSummary {
        planner: first.planner,
        robots: first.robots,
        noise: first.noise,
        episodes: n,
        sr: compute_sr(&results) * scale,
        spl: compute_spl(&results, mode) * scale,
        avg_steps: if results.is_empty() {
            0.0
        } else {
            results.iter().map(|r| r.steps as f64).sum::<f64>() / results.len() as f64
        },
        dt_events: results.iter().map(|r| r.detection_traps as u64).sum(),
        dt_episodes: results.iter().filter(|r| r.detection_traps > 0).count(),
        fail_detection_pct: share(FailureClass::Detection),
        fail_planning_pct: share(FailureClass::Planning),
        fail_exploration_pct: share(FailureClass::Exploration),
        errors,
    })
}

/// Runs every cell of the suite, episodes in parallel. Results come back in
/// suite order regardless of scheduling.
pub fn run_benchmark(suite: &SuiteConfig) -> Result<BenchReport, HarnessError> {
    if suite.episodes == 0 || suite.planners.is_empty() || suite.robots.is_empty() || suite.noise.is_empty() {
        return Err(HarnessError::Config("suite has no episodes".into()));
    }
    let mut cells = Vec::new();
    for &planner in &suite.planners {
        for &robots in &suite.robots {
            for &noise in &suite.noise {
                cells.push((planner, robots, noise));
            }
        }
    }
    let jobs: Vec<(usize, usize)> = (0..cells.len())
        .flat_map(|c| (0..suite.episodes).map(move |i| (c, i)))
        .collect();
    let done: Vec<(EpisodeRecord, f64)> = jobs
        .par_iter()
        .map(|&(c, i)| {
            let (planner, robots, noise) = cells[c];
            run_one(suite, planner, robots, noise, i)
        })
        .collect();
    let mut summaries = Vec::with_capacity(cells.len());
    let mut wall_ms = Vec::with_capacity(cells.len());
    for chunk in done.chunks(suite.episodes) {
        let records: Vec<EpisodeRecord> = chunk.iter().map(|(r, _)| r.clone()).collect();
        summaries.push(summarize(&records, suite.spl_path).expect("non-empty chunk"));
        wall_ms.push(chunk.iter().map(|(_, ms)| ms).sum::<f64>() / chunk.len() as f64);
    }
    Ok(BenchReport {
        cells: summaries,
        episodes: done.into_iter().map(|(r, _)| r).collect(),
        wall_ms,
    })
}

pub const CSV_HEADER: &str = "planner,robots,noise,episodes,sr,spl,avg_steps,dt_events,dt_episodes,\
fail_detection_pct,fail_planning_pct,fail_exploration_pct,errors";

/// Deterministic CSV: fixed column order and decimal places.
pub fn results_csv(cells: &[CellSummary]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for c in cells {
        writeln!(
            out,
            "{},{},{:.3},{},{:.6},{:.6},{:.3},{},{},{:.3},{:.3},{:.3},{}",
            c.planner,
            c.robots,
            c.noise,
            c.episodes,
            c.sr,
            c.spl,
            c.avg_steps,
            c.dt_events,
            c.dt_episodes,
            c.fail_detection_pct,
            c.fail_planning_pct,
            c.fail_exploration_pct,
            c.errors
        )
        .expect("writing to a string");
    }
    out
}

fn timing_csv(cells: &[CellSummary], wall_ms: &[f64]) -> String {
    let mut out = String::from("planner,robots,noise,mean_wall_ms\n");
    for (c, ms) in cells.iter().zip(wall_ms) {
        writeln!(out, "{},{},{:.3},{:.1}", c.planner, c.robots, c.noise, ms).expect("writing to a string");
    }
    out
}

fn summary_md(cells: &[CellSummary]) -> String {
    let mut out = String::from(
        "# Benchmark summary\n\n\
| planner | robots | noise | episodes | SR | SPL | avg steps | DT events | DT episodes | detection % | planning % | exploration % |\n\
|---|---|---|---|---|---|---|---|---|---|---|---|\n",
    );
    for c in cells {
        writeln!(
            out,
            "| {} | {} | {:.2} | {} | {:.3} | {:.3} | {:.1} | {} | {} | {:.1} | {:.1} | {:.1} |",
            c.planner,
            c.robots,
            c.noise,
            c.episodes,
            c.sr,
            c.spl,
            c.avg_steps,
            c.dt_events,
            c.dt_episodes,
            c.fail_detection_pct,
            c.fail_planning_pct,
            c.fail_exploration_pct
        )
        .expect("writing to a string");
    }
    out
}

/// Stacked bars of failure-class shares, one bar per cell.
pub fn failures_svg(cells: &[CellSummary]) -> String {
    const BAR: f64 = 36.0;
    const GAP: f64 = 24.0;
    const PLOT_H: f64 = 240.0;
    const LEFT: f64 = 50.0;
    const TOP: f64 = 20.0;
    let width = LEFT + cells.len() as f64 * (BAR + GAP) + 160.0;
    let height = TOP + PLOT_H + 110.0;
    let classes = [
        ("detection", "#d62728"),
        ("planning", "#1f77b4"),
        ("exploration", "#2ca02c"),
    ];
    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" font-family="sans-serif" font-size="11">"#
    )
    .expect("writing to a string");
    writeln!(
        s,
        r#"<line x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{:.0}" stroke="black"/>"#,
        TOP + PLOT_H
    )
    .expect("writing to a string");
    for pct in [0, 25, 50, 75, 100] {
        let y = TOP + PLOT_H * (1.0 - pct as f64 / 100.0);
        writeln!(
            s,
            r#"<text x="{:.0}" y="{:.1}" text-anchor="end">{pct}%</text>"#,
            LEFT - 4.0,
            y + 4.0
        )
        .expect("writing to a string");
    }
    for (i, c) in cells.iter().enumerate() {
        let x = LEFT + GAP / 2.0 + i as f64 * (BAR + GAP);
        let mut y = TOP + PLOT_H;
        for ((_, color), pct) in classes
            .iter()
            .zip([c.fail_detection_pct, c.fail_planning_pct, c.fail_exploration_pct])
        {
            let h = PLOT_H * pct / 100.0;
            y -= h;
            writeln!(
                s,
                r#"<rect x="{x:.1}" y="{y:.2}" width="{BAR}" height="{h:.2}" fill="{color}"/>"#
            )
            .expect("writing to a string");
        }
        writeln!(
            s,
            r#"<text transform="translate({:.1},{:.0}) rotate(60)">{} x{} n={:.2}</text>"#,
            x + BAR / 2.0,
            TOP + PLOT_H + 12.0,
            c.planner,
            c.robots,
            c.noise
        )
        .expect("writing to a string");
    }
    let lx = LEFT + cells.len() as f64 * (BAR + GAP) + 20.0;
    for (k, (name, color)) in classes.iter().enumerate() {
        let ly = TOP + 10.0 + k as f64 * 18.0;
        writeln!(
            s,
            r#"<rect x="{lx:.0}" y="{ly:.0}" width="12" height="12" fill="{color}"/><text x="{:.0}" y="{:.0}">{name}</text>"#,
            lx + 18.0,
            ly + 10.0
        )
        .expect("writing to a string");
    }
    s.push_str("</svg>\n");
    s
}

/// Writes `results.csv`, `episodes.jsonl`, `summary.md`, `failures.svg` and
/// `timing.csv`. Only the timing file varies between identical runs.
pub fn write_report(report: &BenchReport, out_dir: &Path) -> Result<(), HarnessError> {
    let io = |p: &Path| {
        let p = p.display().to_string();
        move |e| HarnessError::Io(p, e)
    };
    std::fs::create_dir_all(out_dir).map_err(io(out_dir))?;
    let files = [
        ("results.csv", results_csv(&report.cells)),
        ("summary.md", summary_md(&report.cells)),
        ("failures.svg", failures_svg(&report.cells)),
        ("timing.csv", timing_csv(&report.cells, &report.wall_ms)),
    ];
    for (name, text) in files {
        let p = out_dir.join(name);
        std::fs::write(&p, text).map_err(io(&p))?;
    }
    write_jsonl(&out_dir.join("episodes.jsonl"), &report.episodes)
}
