//! Planar vector and angle helpers shared by every other module.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};

pub type Vec2 = nalgebra::Vector2<f64>;

/// Norm below which a vector has no usable direction.
pub const DEGENERATE_NORM: f64 = 1e-12;

/// Reduces an angle to `(-π, π]`.
///
/// Values already inside the interval are returned bit-for-bit unchanged, so
/// the function is exactly idempotent. Non-finite input yields NaN; use
/// [`try_wrap_angle`] where the caller needs an error instead.
pub fn wrap_angle(a: f64) -> f64 {
    if a > -PI && a <= PI {
        return a;
    }
    let r = a.rem_euclid(TAU);
    let r = if r > PI { r - TAU } else { r };
    if r <= -PI {
        r + TAU
    } else {
        r
    }
}

pub fn try_wrap_angle(a: f64) -> Result<f64> {
    if !a.is_finite() {
        return Err(Error::NonFinite("angle"));
    }
    Ok(wrap_angle(a))
}

/// Signed angular difference `a - b`, wrapped.
pub fn angle_diff(a: f64, b: f64) -> f64 {
    wrap_angle(a - b)
}

/// Unit vector along `v`, or `None` when `v` is too short to have a direction.
pub fn unit(v: Vec2) -> Option<Vec2> {
    let n = v.norm();
    if n < DEGENERATE_NORM {
        None
    } else {
        Some(v / n)
    }
}

/// `+1` for non-negative input, `-1` otherwise.
pub fn sign(a: f64) -> f64 {
    if a >= 0.0 {
        1.0
    } else {
        -1.0
    }
}

/// `1` for strictly positive input, `0` otherwise.
pub fn heaviside(a: f64) -> f64 {
    if a > 0.0 {
        1.0
    } else {
        0.0
    }
}

pub fn heading(theta: f64) -> Vec2 {
    let (s, c) = theta.sin_cos();
    Vec2::new(c, s)
}

pub fn angle_of(v: Vec2) -> f64 {
    v.y.atan2(v.x)
}

/// `Z × v` with `v` lifted into the plane `z = 0`: a quarter turn counterclockwise.
pub fn z_cross(v: Vec2) -> Vec2 {
    Vec2::new(-v.y, v.x)
}

/// z-component of the planar cross product `a × b`.
pub fn cross(a: Vec2, b: Vec2) -> f64 {
    a.x * b.y - a.y * b.x
}
