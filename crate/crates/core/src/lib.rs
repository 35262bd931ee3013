//! Multi-vehicle navigation with dynamic velocity vector fields.
//!
//! Each vehicle follows a per-vehicle field of reference orientations and
//! speeds that attracts it to its target pose and repels it from nearby
//! agents. The field output is projected onto the set of states the bicycle
//! model can reach in one step and inverted to a pedal/steering command.
//!
//! ```
//! use dv2f::{rollout, GenSpec, Mode, ModelParams, generate, evaluate};
//!
//! let p = ModelParams::default();
//! let scene = generate(&GenSpec::new(4, 2, Mode::Collision, 7), &p).unwrap();
//! let r = rollout(&scene, &p).unwrap();
//! let m = evaluate(&r, &p).unwrap();
//! assert!(m.success_rate <= m.reach_rate.min(m.safe_rate));
//! ```

pub mod controller;
pub mod error;
pub mod field;
pub mod kinematics;
pub mod labels;
pub mod math;
pub mod metrics;
pub mod model;
pub mod plot;
pub mod scenario;
pub mod simulator;
pub mod trajectory;

pub use controller::{
    compute_scene_controls, compute_vehicle_control, neighbor_filter, ControlOutput,
};
pub use error::{Error, Result};
pub use field::Direction;
pub use kinematics::{invert_controls, reachable_set, step};
pub use metrics::{evaluate, MetricsReport};
pub use model::{AgentId, ControlCommand, ModelParams, ObstacleState, Scene, VehicleState};
pub use scenario::{generate, validate, GenSpec, Mode};
pub use simulator::{detect_collisions, is_parked, rollout, rollout_with, Rollout, RolloutOptions};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/overview.md")]
    pub struct Overview;
    #[doc = include_str!("../../../book/src/kinematics.md")]
    pub struct Kinematics;
    #[doc = include_str!("../../../book/src/field.md")]
    pub struct Field;
    #[doc = include_str!("../../../book/src/controller.md")]
    pub struct Controller;
    #[doc = include_str!("../../../book/src/simulation.md")]
    pub struct Simulation;
    #[doc = include_str!("../../../book/src/scenarios.md")]
    pub struct Scenarios;
    #[doc = include_str!("../../../book/src/labels.md")]
    pub struct Labels;
    #[doc = include_str!("../../../book/src/cli.md")]
    pub struct Cli;
}
