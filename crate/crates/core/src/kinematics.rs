//! Bicycle-model propagation, the set of orientations and speeds reachable in
//! one step, and the closed-form inversion from a reachable target back to a
//! control command.

use crate::math::{angle_diff, wrap_angle};
use crate::model::{ControlCommand, ModelParams, VehicleState};

/// Advances one vehicle by one time step.
///
/// All right-hand sides use the pre-update heading and speed; targets are
/// copied through unchanged.
pub fn step(s: &VehicleState, c: &ControlCommand, p: &ModelParams) -> VehicleState {
    let (sin, cos) = s.theta.sin_cos();
    VehicleState {
        x: s.x + s.v * cos * p.dt,
        y: s.y + s.v * sin * p.dt,
        theta: wrap_angle(s.theta + s.v * c.steer.tan() * p.gamma * p.dt),
        v: p.beta * s.v + c.pedal * p.dt,
        ..*s
    }
}

/// Orientations and speeds attainable at the next step.
///
/// The orientation range is an arc `[theta_lo, theta_hi]` centred on the
/// current heading; the bounds are not wrapped so the arc is unambiguous.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReachableSet {
    pub theta_lo: f64,
    pub theta_hi: f64,
    pub v_lo: f64,
    pub v_hi: f64,
}

impl ReachableSet {
    pub fn center(&self) -> f64 {
        0.5 * (self.theta_lo + self.theta_hi)
    }

    pub fn half_width(&self) -> f64 {
        0.5 * (self.theta_hi - self.theta_lo)
    }

    pub fn contains(&self, theta: f64, v: f64, tol: f64) -> bool {
        angle_diff(theta, self.center()).abs() <= self.half_width() + tol
            && v >= self.v_lo - tol
            && v <= self.v_hi + tol
    }
}

pub fn reachable_set(s: &VehicleState, p: &ModelParams) -> ReachableSet {
    // Below eps_v steering is forced to zero, so the heading cannot change.
    let w = if s.v.abs() < p.eps_v {
        0.0
    } else {
        s.v.abs() * p.steer_max.tan() * p.gamma * p.dt
    };
    let v_mid = p.beta * s.v;
    ReachableSet {
        theta_lo: s.theta - w,
        theta_hi: s.theta + w,
        v_lo: v_mid - p.pedal_max * p.dt,
        v_hi: v_mid + p.pedal_max * p.dt,
    }
}

/// Projects an ideal orientation and speed onto the reachable set.
///
/// The orientation moves to the nearest point of the arc, measured along the
/// circle; an ideal heading exactly opposite the centre goes to the
/// counterclockwise edge. Returns `(theta_real, v_real)`.
pub fn clamp_to_reachable(theta_hat: f64, v_hat: f64, rs: &ReachableSet) -> (f64, f64) {
    let c = rs.center();
    let w = rs.half_width();
    let d = angle_diff(theta_hat, c);
    let theta_real = if d.abs() <= w {
        wrap_angle(theta_hat)
    } else {
        wrap_angle(c + d.clamp(-w, w))
    };
    (theta_real, v_hat.clamp(rs.v_lo, rs.v_hi))
}

/// Inverts the bicycle model: the command that takes `s` to heading
/// `theta_real` and speed `v_real` in one step.
///
/// Steering uses the single-argument arctangent of the required heading-rate
/// ratio. Both outputs are clamped to their bounds.
pub fn invert_controls(
    s: &VehicleState,
    theta_real: f64,
    v_real: f64,
    p: &ModelParams,
) -> ControlCommand {
    let steer = if s.v.abs() < p.eps_v {
        0.0
    } else {
        let d_theta = angle_diff(theta_real, s.theta);
        (d_theta / (s.v * p.gamma * p.dt)).atan()
    };
    let pedal = (v_real - p.beta * s.v) / p.dt;
    ControlCommand::clamped(pedal, steer, p)
}
