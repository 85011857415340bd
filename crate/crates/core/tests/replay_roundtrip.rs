//! Traces replay exactly, and tampering is detected.

use semnav_core::baselines::PlannerKind;
use semnav_core::harness::{
    read_trace, replay, run_episode, write_jsonl, EpisodeConfig, FrameOptions, HarnessError, SceneSource, TraceRecord,
};
use semnav_core::world::GenParams;

fn config(planner: PlannerKind) -> EpisodeConfig {
    EpisodeConfig {
        scene: SceneSource::Generated {
            seed: 5,
            params: GenParams::default(),
        },
        robots: 2,
        max_steps: 120,
        planner,
        seed: 5,
        ..Default::default()
    }
}

#[test]
fn every_planner_replays_its_own_trace() {
    let dir = tempfile::tempdir().expect("temp dir");
    for planner in PlannerKind::ALL {
        let out = run_episode(&config(planner), true).expect("episode");
        let path = dir.path().join(format!("{planner}.jsonl"));
        write_jsonl(&path, &out.trace).expect("write trace");
        assert_eq!(read_trace(&path).expect("read trace"), out.trace);
        let summary = replay(&path, None).expect("replay");
        assert_eq!(summary.records, out.trace.len());
        let steps = out
            .trace
            .iter()
            .filter(|r| matches!(r, TraceRecord::Step { .. }))
            .count();
        assert_eq!(
            steps,
            out.result.steps as usize * 2 - usize::from(out.result.stopper == Some(0))
        );
    }
}

#[test]
fn replay_writes_frames() {
    let dir = tempfile::tempdir().expect("temp dir");
    let out = run_episode(&config(PlannerKind::Mcoconav), true).expect("episode");
    let path = dir.path().join("trace.jsonl");
    write_jsonl(&path, &out.trace).expect("write trace");
    let frames = FrameOptions {
        dir: dir.path().join("frames"),
        every: 40,
        size: 96,
    };
    let summary = replay(&path, Some(&frames)).expect("replay");
    let expected = (0..out.result.steps).filter(|t| t % 40 == 0).count();
    assert_eq!(summary.frames.len(), expected);
    let img = image::open(&summary.frames[0]).expect("png").to_rgb8();
    assert_eq!(img.dimensions(), (96, 96));
}

#[test]
fn tampered_trace_is_rejected() {
    let dir = tempfile::tempdir().expect("temp dir");
    let out = run_episode(&config(PlannerKind::Greedy), true).expect("episode");
    let mut records = out.trace.clone();
    let index = records
        .iter()
        .position(|r| matches!(r, TraceRecord::Step { .. }))
        .expect("a step");
    if let TraceRecord::Step { pose, .. } = &mut records[index] {
        pose.x += 1.0;
    }
    let path = dir.path().join("trace.jsonl");
    write_jsonl(&path, &records).expect("write trace");
    match replay(&path, None) {
        Err(HarnessError::ReplayMismatch { index: at, .. }) => assert_eq!(at, index),
        other => panic!("expected a mismatch, got {other:?}"),
    }
}
