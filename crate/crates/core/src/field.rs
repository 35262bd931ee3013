//! The dynamic velocity vector field of one ego vehicle: a reference
//! orientation built from a target-reaching term plus repulsive/tangential
//! avoidance terms, and a reference speed chosen once the reachable
//! orientation is known.
//!
//! Every relative vector is measured between *predicted next* positions
//! (see [`predicted_next_position`]).

use serde::{Deserialize, Serialize};

use crate::math::{angle_diff, angle_of, heading, heaviside, sign, unit, z_cross, Vec2};
use crate::model::{AgentId, ModelParams, ObstacleState, Scene, VehicleState};

/// Longitudinal driving direction carried between steps for the parking
/// hysteresis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    #[default]
    Forward,
    Reverse,
}

impl Direction {
    pub fn sign(self) -> f64 {
        match self {
            Direction::Forward => 1.0,
            Direction::Reverse => -1.0,
        }
    }

    /// Direction of a signed speed; zero keeps `prev`.
    pub fn of_speed(v: f64, prev: Direction) -> Direction {
        if v > 0.0 {
            Direction::Forward
        } else if v < 0.0 {
            Direction::Reverse
        } else {
            prev
        }
    }
}

/// Everything the field computed for one vehicle at one step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldDiagnostics {
    pub u_tar: Vec2,
    pub u_coll: Vec2,
    pub u_hat: Vec2,
    pub theta_hat: f64,
    pub theta_real: f64,
    pub v_tar: f64,
    pub v_hat: f64,
    pub v_real: f64,
    pub forbid_forward: bool,
    pub forbid_backward: bool,
    /// Set when a direction could not be formed (coincident agents, or
    /// target and avoidance terms cancelling exactly).
    pub degenerate: bool,
    /// Agents considered for avoidance this step, obstacles first.
    pub neighbors: Vec<AgentId>,
}

/// Coasting prediction: current speed and heading, no steering.
pub fn predicted_next_position(s: &VehicleState, p: &ModelParams) -> Vec2 {
    s.position() + s.heading() * (s.v * p.dt)
}

/// A scene together with every vehicle's predicted next position.
#[derive(Debug, Clone)]
pub struct Snapshot<'a> {
    pub scene: &'a Scene,
    pub next: Vec<Vec2>,
}

impl<'a> Snapshot<'a> {
    pub fn new(scene: &'a Scene, p: &ModelParams) -> Self {
        let next = scene
            .vehicles
            .iter()
            .map(|s| predicted_next_position(s, p))
            .collect();
        Self { scene, next }
    }
}

/// Target-reaching component `u_tar`.
///
/// Far from the target it points at the target; inside the marginal band it
/// may flip so an overshooting vehicle reverses instead of circling; inside
/// the parking radius it blends the target heading with the approach
/// direction.
pub fn target_component(s: &VehicleState, next: Vec2, p: &ModelParams) -> Vec2 {
    let x_tar = s.target() - next;
    let dist = x_tar.norm();
    if dist > p.r_p {
        let toward = unit(x_tar).unwrap_or_else(Vec2::zeros);
        let xi = if dist >= 0.5 * p.v_d * p.v_d + p.r_p {
            1.0
        } else {
            sign(x_tar.dot(&s.heading()))
        };
        toward * xi
    } else {
        let u_target = s.target_heading();
        let lambda = (dist / p.r_p + heaviside(dist - p.eps_p)) * sign(x_tar.dot(&u_target));
        let toward = unit(x_tar).unwrap_or_else(Vec2::zeros);
        unit(u_target + toward * lambda).unwrap_or(u_target)
    }
}

/// Clearance `α` to an obstacle: negative inside the avoidance margin.
pub fn obstacle_clearance(dist: f64, r_obs: f64, speed: f64, p: &ModelParams) -> f64 {
    dist - r_obs - p.r_veh - (p.r_c + speed.abs())
}

/// Clearance `α` to another vehicle; the dynamic margin uses both speeds.
pub fn vehicle_clearance(dist: f64, speed_i: f64, speed_j: f64, p: &ModelParams) -> f64 {
    dist - 2.0 * p.r_veh - (p.r_c + speed_i.abs() + speed_j.abs())
}

// Repulsion away from `x_rel` scaled by the (non-positive) clearance, plus a
// tangential term along Z × x_rel while the target lies beyond the agent.
// Returns the vector and whether the geometry was degenerate.
fn avoidance(x_rel: Vec2, alpha: f64, r_other: f64, x_tar: Vec2) -> (Vec2, bool) {
    if alpha > 0.0 {
        return (Vec2::zeros(), false);
    }
    let (away, degenerate) = match unit(x_rel) {
        Some(u) => (u, false),
        None => (Vec2::x(), true),
    };
    let beta = heaviside(x_tar.dot(&x_rel)) * (x_rel.norm() - r_other);
    (away * alpha + z_cross(away) * beta, degenerate)
}

fn obstacle_term(s: &VehicleState, next: Vec2, o: &ObstacleState, p: &ModelParams) -> (Vec2, bool) {
    let x_obs = o.position() - next;
    let alpha = obstacle_clearance(x_obs.norm(), o.r, s.v, p);
    avoidance(x_obs, alpha, o.r, s.target() - next)
}

fn vehicle_term(
    s_i: &VehicleState,
    next_i: Vec2,
    s_j: &VehicleState,
    next_j: Vec2,
    p: &ModelParams,
) -> (Vec2, bool) {
    let x_veh = next_j - next_i;
    let alpha = vehicle_clearance(x_veh.norm(), s_i.v, s_j.v, p);
    avoidance(x_veh, alpha, p.r_veh, s_i.target() - next_i)
}

/// Avoidance component `u_obs` for one static obstacle.
pub fn obstacle_component(
    s: &VehicleState,
    next: Vec2,
    o: &ObstacleState,
    p: &ModelParams,
) -> Vec2 {
    obstacle_term(s, next, o, p).0
}

/// Avoidance component `u_veh` of vehicle `i` with respect to vehicle `j`.
pub fn vehicle_component(
    s_i: &VehicleState,
    next_i: Vec2,
    s_j: &VehicleState,
    next_j: Vec2,
    p: &ModelParams,
) -> Vec2 {
    vehicle_term(s_i, next_i, s_j, next_j, p).0
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Orientation {
    pub u_tar: Vec2,
    pub u_coll: Vec2,
    pub u_hat: Vec2,
    pub theta_hat: f64,
    pub degenerate: bool,
}

/// Ideal reference orientation of vehicle `ego`: the normalized sum of the
/// target component and all avoidance components over `neighbors`.
///
/// When the sum vanishes the current heading is kept.
pub fn ideal_orientation(
    ego: usize,
    snap: &Snapshot<'_>,
    neighbors: &[AgentId],
    p: &ModelParams,
) -> Orientation {
    let s = &snap.scene.vehicles[ego];
    let next = snap.next[ego];
    let u_tar = target_component(s, next, p);
    let mut u_coll = Vec2::zeros();
    let mut degenerate = false;
    for &id in neighbors {
        let (u, d) = match id {
            AgentId::Obstacle(k) => obstacle_term(s, next, &snap.scene.obstacles[k], p),
            AgentId::Vehicle(j) => vehicle_term(s, next, &snap.scene.vehicles[j], snap.next[j], p),
        };
        u_coll += u;
        degenerate |= d;
    }
    let u_hat = match unit(u_tar + u_coll) {
        Some(u) => u,
        None => {
            degenerate = true;
            s.heading()
        }
    };
    Orientation {
        u_tar,
        u_coll,
        u_hat,
        theta_hat: angle_of(u_hat),
        degenerate,
    }
}

/// Forbidden-forward / forbidden-backward flags given the real (reachable)
/// orientation. A neighbor counts when its clearance is within `eps_c` of
/// the margin; a perpendicular approach (`γ = 0`) forbids neither direction.
pub fn forbidden_flags(
    theta_real: f64,
    ego: usize,
    snap: &Snapshot<'_>,
    neighbors: &[AgentId],
    p: &ModelParams,
) -> (bool, bool) {
    let s = &snap.scene.vehicles[ego];
    let next = snap.next[ego];
    let u_real = heading(theta_real);
    let mut forward = false;
    let mut backward = false;
    for &id in neighbors {
        let (x_rel, alpha) = match id {
            AgentId::Obstacle(k) => {
                let o = &snap.scene.obstacles[k];
                let x = o.position() - next;
                (x, obstacle_clearance(x.norm(), o.r, s.v, p))
            }
            AgentId::Vehicle(j) => {
                let x = snap.next[j] - next;
                (
                    x,
                    vehicle_clearance(x.norm(), s.v, snap.scene.vehicles[j].v, p),
                )
            }
        };
        if alpha + p.eps_c <= 0.0 {
            let gamma = u_real.dot(&x_rel);
            forward |= gamma > 0.0;
            backward |= gamma < 0.0;
        }
    }
    (forward, backward)
}

/// Target speed `v_tar`.
///
/// Outside the parking radius it is `±v_d`, signed by whether the real
/// orientation agrees with the ideal one, and reversed when the marginal
/// band has flipped the target direction. Inside, the speed shrinks with the
/// remaining distance and heading error; the direction follows the sign of
/// `u_real · X_tar` with a ±0.25 dead band in which `prev_dir` is kept.
pub fn parking_speed(
    s: &VehicleState,
    next: Vec2,
    theta_real: f64,
    u_hat: Vec2,
    prev_dir: Direction,
    p: &ModelParams,
) -> f64 {
    let x_tar = s.target() - next;
    let dist = x_tar.norm();
    let u_real = heading(theta_real);
    if dist > p.r_p {
        // A flipped target direction in the marginal band means "reverse
        // toward the target", so the flip carries into the speed sign.
        let xi_tar = if dist >= 0.5 * p.v_d * p.v_d + p.r_p {
            1.0
        } else {
            sign(x_tar.dot(&s.heading()))
        };
        return xi_tar * p.v_d * sign(u_real.dot(&u_hat));
    }
    let d_theta = angle_diff(s.theta_tar, theta_real).abs();
    let lambda_bar = (dist / p.r_p + d_theta / p.v_d).min(1.0);
    let lambda = if dist < p.eps_p && d_theta < p.eps_o {
        lambda_bar
    } else {
        lambda_bar.sqrt()
    };
    let along = u_real.dot(&x_tar);
    let xi = if along > 0.25 {
        1.0
    } else if along < -0.25 {
        -1.0
    } else {
        prev_dir.sign()
    };
    xi * lambda * p.v_d
}

/// Ideal reference speed from the forbidden-direction flags.
pub fn ideal_speed(
    forbid_forward: bool,
    forbid_backward: bool,
    v_tar: f64,
    p: &ModelParams,
) -> f64 {
    match (forbid_forward, forbid_backward) {
        (false, true) => p.v_d,
        (true, false) => -p.v_d,
        (true, true) => 0.0,
        (false, false) => v_tar,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn p() -> ModelParams {
        ModelParams::default()
    }

    fn veh(x: f64, y: f64, theta: f64, v: f64, tx: f64, ty: f64, tth: f64) -> VehicleState {
        VehicleState::new(x, y, theta, v, tx, ty, tth)
    }

    fn close(a: Vec2, b: Vec2) {
        assert!((a - b).norm() < 1e-12, "{a:?} != {b:?}");
    }

    #[test]
    fn predicted_position_examples() {
        let p = p();
        let s = veh(3.0, 4.0, 1.0, 0.0, 0.0, 0.0, 0.0);
        assert_eq!(predicted_next_position(&s, &p), Vec2::new(3.0, 4.0));
        close(
            predicted_next_position(&veh(0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0), &p),
            Vec2::new(0.2, 0.0),
        );
        close(
            predicted_next_position(&veh(0.0, 0.0, FRAC_PI_2, 2.0, 0.0, 0.0, 0.0), &p),
            Vec2::new(0.0, 0.4),
        );
    }

    #[test]
    fn target_component_regimes() {
        let p = p();
        let o = Vec2::zeros();
        // Far field: 10 > 5 + 3.125.
        close(
            target_component(&veh(0.0, 0.0, 0.0, 0.0, 10.0, 0.0, 0.0), o, &p),
            Vec2::new(1.0, 0.0),
        );
        // Marginal band with the vehicle facing away: flipped.
        close(
            target_component(&veh(0.0, 0.0, PI, 0.0, 6.5, 0.0, 0.0), o, &p),
            Vec2::new(-1.0, 0.0),
        );
        // Same band facing the target: not flipped.
        close(
            target_component(&veh(0.0, 0.0, 0.0, 0.0, 6.5, 0.0, 0.0), o, &p),
            Vec2::new(1.0, 0.0),
        );
        // Far field never flips, even facing away.
        close(
            target_component(&veh(0.0, 0.0, PI, 0.0, 9.0, 0.0, 0.0), o, &p),
            Vec2::new(1.0, 0.0),
        );
        // Parking: λ = (0.2 + 1)·1.
        close(
            target_component(&veh(0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0), o, &p),
            Vec2::new(1.0, 0.0),
        );
        // At the target the target heading is returned.
        close(
            target_component(
                &veh(2.0, 2.0, 0.0, 0.0, 2.0, 2.0, FRAC_PI_2),
                Vec2::new(2.0, 2.0),
                &p,
            ),
            Vec2::new(0.0, 1.0),
        );
    }

    #[test]
    fn parking_refinement_biases_toward_target() {
        // Vehicle abeam of the target, parallel to the target heading.
        let p = p();
        let s = veh(0.0, 2.0, 0.0, 0.0, 0.0, 0.0, 0.0);
        let u = target_component(&s, s.position(), &p);
        // λ = (0.4 + 1)·f_sgn(0) = 1.4 ⇒ unit((1,0) + 1.4·(0,-1))
        let expect = Vec2::new(1.0, -1.4) / (1.0f64 + 1.96).sqrt();
        close(u, expect);
        // Inside eps_p only the proportional term remains.
        let s = veh(0.0, 0.2, 0.0, 0.0, 0.0, 0.0, 0.0);
        let u = target_component(&s, s.position(), &p);
        let expect = Vec2::new(1.0, -0.04) / (1.0f64 + 0.0016).sqrt();
        close(u, expect);
    }

    #[test]
    fn obstacle_component_examples() {
        let p = p();
        let s = veh(0.0, 0.0, 0.0, 0.0, 20.0, 0.0, 0.0);
        assert_eq!(
            obstacle_component(&s, Vec2::zeros(), &ObstacleState::new(10.0, 0.0, 1.0), &p),
            Vec2::zeros()
        );

        let s = veh(0.0, 0.0, 0.0, 0.0, -5.0, 0.0, 0.0);
        close(
            obstacle_component(&s, Vec2::zeros(), &ObstacleState::new(3.0, 0.0, 1.0), &p),
            Vec2::new(-1.0, 0.0),
        );

        let s = veh(0.0, 0.0, 0.0, 0.0, 5.0, 0.0, 0.0);
        close(
            obstacle_component(&s, Vec2::zeros(), &ObstacleState::new(3.0, 0.0, 1.0), &p),
            Vec2::new(-1.0, 2.0),
        );
    }

    #[test]
    fn obstacle_activation_boundary_is_inclusive() {
        let p = p();
        let s = veh(0.0, 0.0, 0.0, 0.0, -5.0, 0.0, 0.0);
        // α = 5 - 1 - 1.5 - 1.5 = 1 > 0: inactive. At exactly 4, α = 0: active with zero magnitude.
        assert_eq!(
            obstacle_component(&s, Vec2::zeros(), &ObstacleState::new(5.0, 0.0, 1.0), &p),
            Vec2::zeros()
        );
        let u = obstacle_component(&s, Vec2::zeros(), &ObstacleState::new(4.0, 0.0, 1.0), &p);
        assert_eq!(u.norm(), 0.0);
    }

    #[test]
    fn coincident_obstacle_pushes_along_x() {
        let p = p();
        let s = veh(1.0, 1.0, 0.0, 0.0, -5.0, 0.0, 0.0);
        let (u, degenerate) =
            obstacle_term(&s, s.position(), &ObstacleState::new(1.0, 1.0, 2.0), &p);
        assert!(degenerate);
        // α = 0 - 2 - 3 = -5 along +x; β = 0 since X_tar · 0 = 0.
        close(u, Vec2::new(-5.0, 0.0));
    }

    #[test]
    fn vehicle_component_examples() {
        let p = p();
        let a = veh(0.0, 0.0, 0.0, 0.0, -5.0, 0.0, 0.0);
        let b = veh(10.0, 0.0, 0.0, 0.0, 20.0, 0.0, 0.0);
        assert_eq!(
            vehicle_component(&a, a.position(), &b, b.position(), &p),
            Vec2::zeros()
        );

        let b = veh(3.5, 0.0, 0.0, 0.0, 20.0, 0.0, 0.0);
        close(
            vehicle_component(&a, a.position(), &b, b.position(), &p),
            Vec2::new(-1.0, 0.0),
        );

        // Both moving at 1 m/s along +x: next positions keep the 3.5 m gap.
        let a = veh(0.0, 0.0, 0.0, 1.0, -5.0, 0.0, 0.0);
        let b = veh(3.5, 0.0, 0.0, 1.0, 20.0, 0.0, 0.0);
        let na = predicted_next_position(&a, &p);
        let nb = predicted_next_position(&b, &p);
        close(vehicle_component(&a, na, &b, nb, &p), Vec2::new(-3.0, 0.0));
    }

    fn scene(vehicles: Vec<VehicleState>, obstacles: Vec<ObstacleState>) -> Scene {
        Scene::new(vehicles, obstacles)
    }

    #[test]
    fn ideal_orientation_examples() {
        let p = p();
        let sc = scene(vec![veh(0.0, 0.0, 0.0, 0.0, 20.0, 0.0, 0.0)], vec![]);
        let snap = Snapshot::new(&sc, &p);
        let o = ideal_orientation(0, &snap, &[], &p);
        close(o.u_hat, Vec2::new(1.0, 0.0));
        assert_eq!(o.theta_hat, 0.0);

        // Obstacle on the far side from the target: β = 0, the push adds to u_tar.
        let sc = scene(
            vec![veh(0.0, 0.0, 0.3, 0.0, -20.0, 0.0, 0.0)],
            vec![ObstacleState::new(3.0, 0.0, 1.0)],
        );
        let snap = Snapshot::new(&sc, &p);
        let o = ideal_orientation(0, &snap, &[AgentId::Obstacle(0)], &p);
        close(o.u_tar, Vec2::new(-1.0, 0.0));
        close(o.u_coll, Vec2::new(-1.0, 0.0));
        close(o.u_hat, Vec2::new(-1.0, 0.0));

        // u_tar = (1,0), u_coll = (-1, 2) ⇒ (0, 1).
        let sc = scene(
            vec![veh(0.0, 0.0, 0.0, 0.0, 20.0, 0.0, 0.0)],
            vec![ObstacleState::new(3.0, 0.0, 1.0)],
        );
        let snap = Snapshot::new(&sc, &p);
        let o = ideal_orientation(0, &snap, &[AgentId::Obstacle(0)], &p);
        close(o.u_coll, Vec2::new(-1.0, 2.0));
        close(o.u_hat, Vec2::new(0.0, 1.0));
        assert_abs_diff_eq!(o.theta_hat, FRAC_PI_2, epsilon = 1e-12);
    }

    #[test]
    fn exact_cancellation_falls_back_to_heading() {
        let p = p();
        // Parked at a target facing -x, so u_tar = (-1, 0) and every β is 0.
        // Obstacle pushes: (2,0) → (-2,0); (-3,0) → (1,0); (-2,0) → (2,0). Sum (1,0).
        let ego = veh(0.0, 0.0, 0.25, 0.0, 0.0, 0.0, PI);
        let sc = scene(
            vec![ego],
            vec![
                ObstacleState::new(2.0, 0.0, 1.0),
                ObstacleState::new(-3.0, 0.0, 1.0),
                ObstacleState::new(-2.0, 0.0, 1.0),
            ],
        );
        let snap = Snapshot::new(&sc, &p);
        let ids = [
            AgentId::Obstacle(0),
            AgentId::Obstacle(1),
            AgentId::Obstacle(2),
        ];
        let o = ideal_orientation(0, &snap, &ids, &p);
        close(o.u_tar + o.u_coll, Vec2::zeros());
        assert!(o.degenerate);
        close(o.u_hat, heading(0.25));
    }

    #[test]
    fn forbidden_flag_examples() {
        let p = p();
        // Obstacle dead ahead: X_obs = (2,0), r = 1 ⇒ α = 2 - 1 - 3 = -2, α + ε_c ≤ 0.
        let sc = scene(
            vec![veh(0.0, 0.0, 0.0, 0.0, 20.0, 0.0, 0.0)],
            vec![ObstacleState::new(2.0, 0.0, 1.0)],
        );
        let snap = Snapshot::new(&sc, &p);
        let ids = [AgentId::Obstacle(0)];
        assert_eq!(forbidden_flags(0.0, 0, &snap, &ids, &p), (true, false));
        assert_eq!(forbidden_flags(PI, 0, &snap, &ids, &p), (false, true));
        assert_eq!(forbidden_flags(0.0, 0, &snap, &[], &p), (false, false));
        // Perpendicular approach: γ = 0 exactly.
        let sc = scene(
            vec![veh(0.0, 0.0, 0.0, 0.0, 20.0, 0.0, 0.0)],
            vec![ObstacleState::new(0.0, 2.0, 1.0)],
        );
        let snap = Snapshot::new(&sc, &p);
        assert_eq!(forbidden_flags(0.0, 0, &snap, &ids, &p), (false, false));
    }

    #[test]
    fn forbidden_flags_need_eps_c_slack() {
        let p = p();
        // α = -0.4: avoidance active but α + ε_c = 0.1 > 0, so no flag.
        let sc = scene(
            vec![veh(0.0, 0.0, 0.0, 0.0, 20.0, 0.0, 0.0)],
            vec![ObstacleState::new(4.6, 0.0, 1.0)],
        );
        let snap = Snapshot::new(&sc, &p);
        assert_eq!(
            forbidden_flags(0.0, 0, &snap, &[AgentId::Obstacle(0)], &p),
            (false, false)
        );
    }

    #[test]
    fn forbidden_flags_from_both_sides() {
        let p = p();
        let sc = scene(
            vec![
                veh(0.0, 0.0, 0.0, 0.0, 20.0, 0.0, 0.0),
                veh(3.0, 0.0, 0.0, 0.0, 40.0, 0.0, 0.0),
                veh(-3.0, 0.0, 0.0, 0.0, -40.0, 0.0, 0.0),
            ],
            vec![],
        );
        let snap = Snapshot::new(&sc, &p);
        let flags = forbidden_flags(
            0.0,
            0,
            &snap,
            &[AgentId::Vehicle(1), AgentId::Vehicle(2)],
            &p,
        );
        assert_eq!(flags, (true, true));
        assert_eq!(ideal_speed(flags.0, flags.1, 2.5, &p), 0.0);
    }

    #[test]
    fn parking_speed_examples() {
        let p = p();
        let s = veh(3.0, 3.0, 0.0, 0.0, 3.0, 3.0, 0.0);
        assert_eq!(
            parking_speed(&s, s.position(), 0.0, Vec2::x(), Direction::Forward, &p),
            0.0
        );

        let s = veh(0.0, 0.0, 0.0, 0.0, 2.5, 0.0, 0.0);
        let v = parking_speed(&s, s.position(), 0.0, Vec2::x(), Direction::Forward, &p);
        assert_abs_diff_eq!(v, 0.5f64.sqrt() * 2.5, epsilon = 1e-12);
        assert_abs_diff_eq!(v, 1.767_766_952_966_368_8, epsilon = 1e-12);

        let s = veh(0.0, 0.0, 0.0, 0.0, 20.0, 0.0, 0.0);
        let v = parking_speed(
            &s,
            s.position(),
            0.0,
            Vec2::new(-1.0, 0.0),
            Direction::Forward,
            &p,
        );
        assert_eq!(v, -2.5);
        let v = parking_speed(
            &s,
            s.position(),
            0.0,
            Vec2::new(0.0, 1.0),
            Direction::Forward,
            &p,
        );
        assert_eq!(v, 2.5);
    }

    #[test]
    fn parking_speed_linear_inside_tolerance() {
        let p = p();
        // 0.2 m away, aligned: λ̄ = 0.04, within tolerance so no square root.
        let s = veh(0.0, 0.0, 0.0, 0.0, 0.2, 0.0, 0.0);
        let v = parking_speed(&s, s.position(), 0.0, Vec2::x(), Direction::Forward, &p);
        assert_abs_diff_eq!(v, 0.04 * 2.5, epsilon = 1e-12);
    }

    #[test]
    fn parking_hysteresis_keeps_direction() {
        let p = p();
        // Target abeam: u_real · X_tar = 0 inside the dead band.
        let s = veh(0.0, 0.0, 0.0, 0.0, 0.0, 2.0, 0.0);
        let fwd = parking_speed(&s, s.position(), 0.0, Vec2::x(), Direction::Forward, &p);
        let rev = parking_speed(&s, s.position(), 0.0, Vec2::x(), Direction::Reverse, &p);
        assert!(fwd > 0.0);
        assert_eq!(rev, -fwd);
        // Just outside the band the sign is forced.
        let s = veh(0.0, 0.0, 0.0, 0.0, -0.3, 2.0, 0.0);
        assert!(parking_speed(&s, s.position(), 0.0, Vec2::x(), Direction::Forward, &p) < 0.0);
    }

    #[test]
    fn ideal_speed_table() {
        let p = p();
        assert_eq!(ideal_speed(true, true, 2.5, &p), 0.0);
        assert_eq!(ideal_speed(true, false, 2.5, &p), -2.5);
        assert_eq!(ideal_speed(false, true, -1.0, &p), 2.5);
        assert_eq!(ideal_speed(false, false, 1.7678, &p), 1.7678);
    }

    #[test]
    fn tangential_term_circulates_clockwise() {
        let p = p();
        let o = ObstacleState::new(0.0, 0.0, 2.0);
        for k in 0..64 {
            let a = k as f64 / 64.0 * 2.0 * PI;
            for r in [3.6, 4.5, 4.9] {
                let pos = Vec2::new(r * a.cos(), r * a.sin());
                // Target far on the opposite side so X_tar · X_obs > 0.
                let tgt = -pos * 20.0;
                let s = veh(pos.x, pos.y, 0.0, 0.0, tgt.x, tgt.y, 0.0);
                let u = obstacle_component(&s, pos, &o, &p);
                let rel = pos - o.position();
                assert!(crate::math::cross(rel, u) < 0.0);
            }
        }
    }

    #[test]
    fn collinear_obstacle_does_not_trap() {
        let p = p();
        for d in [2.6, 3.0, 3.5, 4.0] {
            let sc = scene(
                vec![veh(0.0, 0.0, 0.0, 0.0, 30.0, 0.0, 0.0)],
                vec![ObstacleState::new(d, 0.0, 1.0)],
            );
            let snap = Snapshot::new(&sc, &p);
            let o = ideal_orientation(0, &snap, &[AgentId::Obstacle(0)], &p);
            // Not (anti)parallel to the line of centres.
            assert!(crate::math::cross(o.u_hat, Vec2::x()).abs() > 1e-3);
        }
    }
}
