//! Closed-loop lockstep rollouts with collision bookkeeping.

use serde::{Deserialize, Serialize};

use crate::controller::{compute_scene_controls, compute_scene_controls_par, ControlOutput};
use crate::error::{Error, Result};
use crate::field::Direction;
use crate::kinematics::step;
use crate::math::angle_diff;
use crate::model::{AgentId, ModelParams, Scene, VehicleState};
use crate::scenario;

/// Speed below which a vehicle inside the target tolerances counts as stopped.
pub const PARKED_SPEED: f64 = 0.05;

/// One simulated step: the scene and the controls applied to it.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    pub scene: Scene,
    pub output: ControlOutput,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollisionEvent {
    pub t: usize,
    pub a: AgentId,
    pub b: AgentId,
}

impl CollisionEvent {
    pub fn involves(&self, id: AgentId) -> bool {
        self.a == id || self.b == id
    }
}

/// Record of a complete rollout.
///
/// `frames[t]` holds the scene at step `t` and the commands that produced
/// `frames[t + 1].scene` (or `final_scene` for the last frame).
#[derive(Debug, Clone, PartialEq)]
pub struct Rollout {
    pub frames: Vec<Frame>,
    pub final_scene: Scene,
    pub collision_events: Vec<CollisionEvent>,
    pub terminated_at: usize,
    pub params: ModelParams,
}

impl Rollout {
    /// Every recorded scene, including the final one.
    pub fn scenes(&self) -> impl Iterator<Item = &Scene> + '_ {
        self.frames
            .iter()
            .map(|f| &f.scene)
            .chain(std::iter::once(&self.final_scene))
    }

    pub fn n_vehicles(&self) -> usize {
        self.final_scene.vehicles.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RolloutOptions {
    /// Evaluate vehicles on the rayon pool inside each step.
    pub parallel: bool,
    /// Stop once every vehicle is parked and stopped.
    pub early_termination: bool,
}

impl Default for RolloutOptions {
    fn default() -> Self {
        Self {
            parallel: false,
            early_termination: true,
        }
    }
}

/// Within position and orientation tolerance of the target pose.
pub fn is_parked(s: &VehicleState, p: &ModelParams) -> bool {
    (s.target() - s.position()).norm() <= p.eps_p
        && angle_diff(s.theta, s.theta_tar).abs() <= p.eps_o
}

pub fn is_at_rest(s: &VehicleState, p: &ModelParams) -> bool {
    is_parked(s, p) && s.v.abs() < PARKED_SPEED
}

/// Overlapping pairs: vehicles closer than `2·r_veh`, vehicle–obstacle pairs
/// closer than `r_veh + r_obs`. Touching exactly is not a collision.
pub fn detect_collisions(scene: &Scene, p: &ModelParams) -> Vec<(AgentId, AgentId)> {
    let mut out = Vec::new();
    let min_vv = 2.0 * p.r_veh;
    for (i, a) in scene.vehicles.iter().enumerate() {
        let pa = a.position();
        for (j, b) in scene.vehicles.iter().enumerate().skip(i + 1) {
            if (b.position() - pa).norm_squared() < min_vv * min_vv {
                out.push((AgentId::Vehicle(i), AgentId::Vehicle(j)));
            }
        }
        for (k, o) in scene.obstacles.iter().enumerate() {
            let d = p.r_veh + o.r;
            if (o.position() - pa).norm_squared() < d * d {
                out.push((AgentId::Vehicle(i), AgentId::Obstacle(k)));
            }
        }
    }
    out
}

pub fn rollout(scene0: &Scene, p: &ModelParams) -> Result<Rollout> {
    rollout_with(scene0, p, RolloutOptions::default())
}

/// Runs the controller and kinematics in lockstep for up to `p.horizon`
/// steps. Collisions are recorded, never resolved physically.
pub fn rollout_with(scene0: &Scene, p: &ModelParams, opts: RolloutOptions) -> Result<Rollout> {
    p.validate()?;
    let violations = scenario::structural_violations(scene0);
    if !violations.is_empty() {
        return Err(Error::InvalidScene(violations));
    }

    let n = scene0.vehicles.len();
    let mut scene = Scene {
        t: 0,
        ..scene0.clone()
    };
    let mut dirs = vec![Direction::Forward; n];
    let mut frames = Vec::new();
    let mut events = Vec::new();
    let mut t = 0;
    loop {
        events.extend(
            detect_collisions(&scene, p)
                .into_iter()
                .map(|(a, b)| CollisionEvent { t, a, b }),
        );
        if t >= p.horizon
            || (opts.early_termination && scene.vehicles.iter().all(|s| is_at_rest(s, p)))
        {
            break;
        }
        let output = if opts.parallel {
            compute_scene_controls_par(&scene, &dirs, p)
        } else {
            compute_scene_controls(&scene, &dirs, p)
        };
        let vehicles = scene
            .vehicles
            .iter()
            .zip(&output.commands)
            .map(|(s, c)| step(s, c, p))
            .collect();
        let next = Scene {
            vehicles,
            obstacles: scene.obstacles.clone(),
            t: t + 1,
        };
        dirs.clone_from(&output.prev_dirs);
        frames.push(Frame { scene, output });
        scene = next;
        t += 1;
    }

    Ok(Rollout {
        frames,
        final_scene: scene,
        collision_events: events,
        terminated_at: t,
        params: *p,
    })
}
