//! Multi-robot semantic exploration: a decentralized planner over a shared
//! semantic map, a 2D grid-world simulator, and a benchmark harness.

pub mod baselines;
pub mod category;
pub mod frontier;
pub mod geometry;
pub mod harness;
pub mod local_policy;
pub mod mapping;
pub mod oracle;
pub mod params;
pub mod planner;
pub mod seed;
pub mod world;
