use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use semnav_core::baselines::PlannerKind;
use semnav_core::category::Category;
use semnav_core::harness::{
    replay, run_benchmark, run_episode, write_jsonl, write_report, EpisodeConfig, FrameOptions, OracleKind,
    SceneSource, SuiteConfig,
};
use semnav_core::planner::HfovsMode;
use semnav_core::world::{generate_scene, GenParams};

#[derive(Parser)]
#[command(name = "semnav", about = "Multi-robot semantic navigation benchmark")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one episode and print its result.
    Run(RunArgs),
    /// Run a planner x robots x noise suite and write the report files.
    Bench(BenchArgs),
    /// Re-simulate a trace, verify it, and optionally render frames.
    Replay(ReplayArgs),
    /// Generate a house scene and save it as JSON.
    GenScene(GenSceneArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Episode configuration JSON; flags below override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Scene JSON file. Without it a house is generated from --seed.
    #[arg(long)]
    scene: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Rooms in a generated house.
    #[arg(long)]
    rooms: Option<usize>,
    #[arg(long)]
    goal: Option<Category>,
    #[arg(long)]
    robots: Option<usize>,
    #[arg(long)]
    planner: Option<PlannerKind>,
    #[arg(long)]
    oracle: Option<OracleKind>,
    #[arg(long)]
    hfovs_mode: Option<HfovsMode>,
    #[arg(long)]
    max_steps: Option<u32>,
    /// Detection noise rate.
    #[arg(long)]
    noise: Option<f64>,
    /// Writes `trace.jsonl` and `result.json` here.
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Suite configuration JSON; flags below override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    planners: Option<Vec<PlannerKind>>,
    #[arg(long, value_delimiter = ',')]
    robots: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    noise: Option<Vec<f64>>,
    #[arg(long)]
    episodes: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    rooms: Option<usize>,
    #[arg(long)]
    oracle: Option<OracleKind>,
    #[arg(long)]
    hfovs_mode: Option<HfovsMode>,
    #[arg(long)]
    max_steps: Option<u32>,
    #[arg(long, default_value = "bench_out")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct ReplayArgs {
    trace: PathBuf,
    /// Directory for PNG frames; no frames without it.
    #[arg(long)]
    frames: Option<PathBuf>,
    #[arg(long, default_value_t = 10)]
    every: u32,
    #[arg(long, default_value_t = 480)]
    size: u32,
}

#[derive(Args)]
struct GenSceneArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 4)]
    rooms: usize,
    /// Categories that must appear, comma separated.
    #[arg(long, value_delimiter = ',')]
    require: Vec<Category>,
    #[arg(long)]
    out: PathBuf,
}

fn run(args: RunArgs) -> Result<()> {
    let mut config = match &args.config {
        Some(p) => EpisodeConfig::load(p)?,
        None => EpisodeConfig::default(),
    };
    if let Some(path) = args.scene {
        config.scene = SceneSource::File { path };
    } else if args.seed.is_some() || args.rooms.is_some() {
        let (seed, mut params) = match config.scene {
            SceneSource::Generated { seed, params } => (seed, params),
            SceneSource::File { .. } => (0, GenParams::default()),
        };
        if let Some(rooms) = args.rooms {
            params.rooms = rooms;
        }
        let seed = args.seed.unwrap_or(seed);
        if let Some(goal) = args.goal.or(config.goal) {
            if !params.required.contains(&goal) {
                params.required.push(goal);
            }
        }
        config.scene = SceneSource::Generated { seed, params };
    }
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    config.goal = args.goal.or(config.goal);
    config.robots = args.robots.unwrap_or(config.robots);
    config.planner = args.planner.unwrap_or(config.planner);
    config.oracle = args.oracle.unwrap_or(config.oracle);
    config.max_steps = args.max_steps.unwrap_or(config.max_steps);
    if let Some(mode) = args.hfovs_mode {
        config.params.hfovs_mode = mode;
    }
    if let Some(noise) = args.noise {
        config.params.detection_noise = noise;
    }
    let outcome = run_episode(&config, args.out_dir.is_some())?;
    let json = serde_json::to_string_pretty(&outcome.result)?;
    if let Some(dir) = args.out_dir {
        std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
        write_jsonl(&dir.join("trace.jsonl"), &outcome.trace)?;
        std::fs::write(dir.join("result.json"), &json)?;
    }
    println!("{json}");
    Ok(())
}

fn bench(args: BenchArgs) -> Result<()> {
    let mut suite = match &args.config {
        Some(p) => SuiteConfig::load(p)?,
        None => SuiteConfig::default(),
    };
    suite.planners = args.planners.unwrap_or(suite.planners);
    suite.robots = args.robots.unwrap_or(suite.robots);
    suite.noise = args.noise.unwrap_or(suite.noise);
    suite.episodes = args.episodes.unwrap_or(suite.episodes);
    suite.seed = args.seed.unwrap_or(suite.seed);
    suite.scene.rooms = args.rooms.unwrap_or(suite.scene.rooms);
    suite.oracle = args.oracle.unwrap_or(suite.oracle);
    suite.max_steps = args.max_steps.unwrap_or(suite.max_steps);
    if let Some(mode) = args.hfovs_mode {
        suite.params.hfovs_mode = mode;
    }
    let report = run_benchmark(&suite)?;
    write_report(&report, &args.out_dir)?;
    print!("{}", std::fs::read_to_string(args.out_dir.join("summary.md"))?);
    Ok(())
}

fn replay_trace(args: ReplayArgs) -> Result<()> {
    let frames = args.frames.map(|dir| FrameOptions {
        dir,
        every: args.every,
        size: args.size,
    });
    let summary = replay(&args.trace, frames.as_ref())?;
    println!(
        "replayed {} records, trace verified, {} frames written",
        summary.records,
        summary.frames.len()
    );
    Ok(())
}

fn gen_scene(args: GenSceneArgs) -> Result<()> {
    let params = GenParams {
        rooms: args.rooms,
        required: args.require,
        ..GenParams::default()
    };
    let scene = generate_scene(args.seed, &params)?;
    scene.save(&args.out)?;
    println!("{} {}", args.out.display(), scene.checksum());
    Ok(())
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Run(a) => run(a),
        Command::Bench(a) => bench(a),
        Command::Replay(a) => replay_trace(a),
        Command::GenScene(a) => gen_scene(a),
    }
}
