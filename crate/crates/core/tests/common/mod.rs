#![allow(dead_code)]

use std::f64::consts::PI;

use dv2f::{ModelParams, ObstacleState, Scene, VehicleState};
use proptest::prelude::*;

pub fn vehicle(extent: f64) -> impl Strategy<Value = VehicleState> {
    (
        (-extent..extent, -extent..extent, -PI..PI, -2.5f64..2.5),
        (-extent..extent, -extent..extent, -PI..PI),
    )
        .prop_map(|((x, y, th, v), (xt, yt, tht))| VehicleState::new(x, y, th, v, xt, yt, tht))
}

pub fn obstacle(extent: f64) -> impl Strategy<Value = ObstacleState> {
    (-extent..extent, -extent..extent, 1.0f64..3.0)
        .prop_map(|(x, y, r)| ObstacleState::new(x, y, r))
}

/// Small crowded scenes so avoidance terms are actually active.
pub fn scene(max_vehicles: usize, max_obstacles: usize) -> impl Strategy<Value = Scene> {
    (
        prop::collection::vec(vehicle(12.0), 1..=max_vehicles),
        prop::collection::vec(obstacle(12.0), 0..=max_obstacles),
    )
        .prop_map(|(v, o)| Scene::new(v, o))
}

pub fn params() -> ModelParams {
    ModelParams::default()
}
