//! Per-step control of every vehicle in a scene: neighbor filtering, field
//! evaluation, projection onto the reachable set, and control inversion.

use rayon::prelude::*;

use crate::field::{self, Direction, FieldDiagnostics, Snapshot};
use crate::kinematics::{clamp_to_reachable, invert_controls, reachable_set};
use crate::model::{AgentId, ControlCommand, ModelParams, Scene};
use crate::simulator::is_at_rest;

#[derive(Debug, Clone, PartialEq)]
pub struct VehicleControl {
    pub command: ControlCommand,
    pub diagnostics: FieldDiagnostics,
    pub next_dir: Direction,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ControlOutput {
    pub commands: Vec<ControlCommand>,
    pub diagnostics: Vec<FieldDiagnostics>,
    pub prev_dirs: Vec<Direction>,
}

/// Edge-distance threshold between vehicle `i` and another vehicle.
pub fn vehicle_edge_threshold(v_i: f64, v_j: f64, p: &ModelParams) -> f64 {
    2.0 * p.r_veh + v_i.abs() + v_j.abs() + 2.0 * p.r_c
}

/// Edge-distance threshold between a vehicle and an obstacle of radius `r_obs`.
pub fn obstacle_edge_threshold(v_i: f64, r_obs: f64, p: &ModelParams) -> f64 {
    r_obs + p.r_veh + v_i.abs() + 2.0 * p.r_c
}

/// Agents within the edge threshold of vehicle `i`, measured between current
/// positions. Obstacles come first, each group in index order.
pub fn neighbor_filter(scene: &Scene, i: usize, p: &ModelParams) -> Vec<AgentId> {
    let ego = &scene.vehicles[i];
    let pos = ego.position();
    let mut out = Vec::new();
    for (k, o) in scene.obstacles.iter().enumerate() {
        let d = obstacle_edge_threshold(ego.v, o.r, p);
        if (o.position() - pos).norm_squared() <= d * d {
            out.push(AgentId::Obstacle(k));
        }
    }
    for (j, other) in scene.vehicles.iter().enumerate() {
        if j == i {
            continue;
        }
        let d = vehicle_edge_threshold(ego.v, other.v, p);
        if (other.position() - pos).norm_squared() <= d * d {
            out.push(AgentId::Vehicle(j));
        }
    }
    out
}

/// Every other agent, in the same order `neighbor_filter` uses.
pub fn all_agents(scene: &Scene, i: usize) -> Vec<AgentId> {
    (0..scene.obstacles.len())
        .map(AgentId::Obstacle)
        .chain(
            (0..scene.vehicles.len())
                .filter(|&j| j != i)
                .map(AgentId::Vehicle),
        )
        .collect()
}

/// Agents the field of vehicle `i` sums over: the edge-filtered set, or
/// every agent when `p.filter_neighbors` is off.
pub fn neighbors_of(scene: &Scene, i: usize, p: &ModelParams) -> Vec<AgentId> {
    if p.filter_neighbors {
        neighbor_filter(scene, i, p)
    } else {
        all_agents(scene, i)
    }
}

/// Runs the whole pipeline for one vehicle.
pub fn compute_vehicle_control(
    scene: &Scene,
    i: usize,
    prev_dir: Direction,
    p: &ModelParams,
) -> VehicleControl {
    let snap = Snapshot::new(scene, p);
    control_with_snapshot(&snap, i, prev_dir, p)
}

fn control_with_snapshot(
    snap: &Snapshot<'_>,
    i: usize,
    prev_dir: Direction,
    p: &ModelParams,
) -> VehicleControl {
    let s = &snap.scene.vehicles[i];
    let neighbors = neighbors_of(snap.scene, i, p);

    let orientation = field::ideal_orientation(i, snap, &neighbors, p);
    let rs = reachable_set(s, p);
    // Orientation is resolved first; the speed stage reads the real heading.
    let (theta_real, _) = clamp_to_reachable(orientation.theta_hat, 0.0, &rs);

    let (forbid_forward, forbid_backward) =
        field::forbidden_flags(theta_real, i, snap, &neighbors, p);
    let v_tar = field::parking_speed(s, snap.next[i], theta_real, orientation.u_hat, prev_dir, p);
    let mut v_hat = field::ideal_speed(forbid_forward, forbid_backward, v_tar, p);
    // Within both tolerances and already slow: stop here. Without this the
    // dead band in the parking speed lets a vehicle creep through the
    // target and out of tolerance again.
    if is_at_rest(s, p) {
        v_hat = 0.0;
    }
    let (_, v_real) = clamp_to_reachable(theta_real, v_hat, &rs);

    let command = invert_controls(s, theta_real, v_real, p);

    VehicleControl {
        command,
        next_dir: Direction::of_speed(v_hat, prev_dir),
        diagnostics: FieldDiagnostics {
            u_tar: orientation.u_tar,
            u_coll: orientation.u_coll,
            u_hat: orientation.u_hat,
            theta_hat: orientation.theta_hat,
            theta_real,
            v_tar,
            v_hat,
            v_real,
            forbid_forward,
            forbid_backward,
            degenerate: orientation.degenerate,
            neighbors,
        },
    }
}

fn gather(results: Vec<VehicleControl>) -> ControlOutput {
    let mut out = ControlOutput {
        commands: Vec::with_capacity(results.len()),
        diagnostics: Vec::with_capacity(results.len()),
        prev_dirs: Vec::with_capacity(results.len()),
    };
    for r in results {
        out.commands.push(r.command);
        out.diagnostics.push(r.diagnostics);
        out.prev_dirs.push(r.next_dir);
    }
    out
}

/// Controls for every vehicle, evaluated in index order.
///
/// `prev_dirs` must hold one entry per vehicle.
pub fn compute_scene_controls(
    scene: &Scene,
    prev_dirs: &[Direction],
    p: &ModelParams,
) -> ControlOutput {
    assert_eq!(
        prev_dirs.len(),
        scene.vehicles.len(),
        "one direction per vehicle"
    );
    let snap = Snapshot::new(scene, p);
    gather(
        (0..scene.vehicles.len())
            .map(|i| control_with_snapshot(&snap, i, prev_dirs[i], p))
            .collect(),
    )
}

/// Same as [`compute_scene_controls`] with vehicles spread over the rayon
/// pool. Results are bitwise identical to the sequential version.
pub fn compute_scene_controls_par(
    scene: &Scene,
    prev_dirs: &[Direction],
    p: &ModelParams,
) -> ControlOutput {
    assert_eq!(
        prev_dirs.len(),
        scene.vehicles.len(),
        "one direction per vehicle"
    );
    let snap = Snapshot::new(scene, p);
    gather(
        (0..scene.vehicles.len())
            .into_par_iter()
            .map(|i| control_with_snapshot(&snap, i, prev_dirs[i], p))
            .collect(),
    )
}
