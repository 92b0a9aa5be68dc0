//! Multi-swarm UAV simulator for detecting and suppressing spreading forest
//! fires.
//!
//! The geometric, fire, vehicle, sensing and mitigation models are generic
//! over [`Scalar`] (`f32` or `f64`). Search, the engine and scenario
//! handling run in `f64`.
//!
//! ```
//! use swarmfire::{engine, ScenarioConfig};
//!
//! let mut cfg = ScenarioConfig::default();
//! cfg.engine.t_max = 60.0;
//! let result = engine::run(&cfg, 0);
//! assert_eq!(result.end_time, 60.0);
//! ```

pub mod engine;
pub mod firemodel;
pub mod geometry;
pub mod mitigation;
pub mod montecarlo;
pub mod num;
pub mod rng;
pub mod scenario;
pub mod search;
pub mod sensing;
pub mod vehicle;

pub use engine::{Event, RunResult, Simulation, StepRecord, WorldState};
pub use firemodel::{FireFront, FireState};
pub use geometry::{Point2, Rect};
pub use montecarlo::{monte_carlo, Aggregate, Summary};
pub use num::Scalar;
pub use scenario::{load_config, ScenarioConfig, Strategy};

pub type Point = Point2<f64>;
pub type Fire = FireFront<f64>;
pub type Uav = vehicle::UavState<f64>;
pub type Reading = sensing::SensorReading<f64>;
pub type MitigationRecord = mitigation::FireMitigationRecord<f64>;

pub type Point32 = Point2<f32>;
pub type Fire32 = FireFront<f32>;
pub type Uav32 = vehicle::UavState<f32>;
