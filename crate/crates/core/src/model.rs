//! Domain types: vehicle and obstacle states, control commands, the
//! parameter set, and scene snapshots.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::math::{heading, wrap_angle, Vec2};

/// Pose, speed and target pose of one vehicle.
///
/// Angles are kept in `(-π, π]`; the constructor and deserializer wrap them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VehicleState {
    pub x: f64,
    pub y: f64,
    pub theta: f64,
    pub v: f64,
    pub x_tar: f64,
    pub y_tar: f64,
    pub theta_tar: f64,
}

impl VehicleState {
    pub fn new(x: f64, y: f64, theta: f64, v: f64, x_tar: f64, y_tar: f64, theta_tar: f64) -> Self {
        Self {
            x,
            y,
            theta: wrap_angle(theta),
            v,
            x_tar,
            y_tar,
            theta_tar: wrap_angle(theta_tar),
        }
    }

    pub fn position(&self) -> Vec2 {
        Vec2::new(self.x, self.y)
    }

    pub fn target(&self) -> Vec2 {
        Vec2::new(self.x_tar, self.y_tar)
    }

    /// Unit vector of the current heading.
    pub fn heading(&self) -> Vec2 {
        heading(self.theta)
    }

    pub fn target_heading(&self) -> Vec2 {
        heading(self.theta_tar)
    }

    pub fn is_finite(&self) -> bool {
        [
            self.x,
            self.y,
            self.theta,
            self.v,
            self.x_tar,
            self.y_tar,
            self.theta_tar,
        ]
        .iter()
        .all(|f| f.is_finite())
    }
}

#[derive(Deserialize)]
struct RawVehicleState {
    x: f64,
    y: f64,
    theta: f64,
    #[serde(default)]
    v: f64,
    x_tar: f64,
    y_tar: f64,
    theta_tar: f64,
}

impl<'de> Deserialize<'de> for VehicleState {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = RawVehicleState::deserialize(d)?;
        Ok(VehicleState::new(
            r.x,
            r.y,
            r.theta,
            r.v,
            r.x_tar,
            r.y_tar,
            r.theta_tar,
        ))
    }
}

/// A static circular obstacle; `r` circumscribes the obstacle body.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObstacleState {
    pub x: f64,
    pub y: f64,
    pub r: f64,
}

impl ObstacleState {
    pub fn new(x: f64, y: f64, r: f64) -> Self {
        Self { x, y, r }
    }

    pub fn position(&self) -> Vec2 {
        Vec2::new(self.x, self.y)
    }
}

/// Pedal acceleration (m/s²) and steering angle (rad).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ControlCommand {
    pub pedal: f64,
    pub steer: f64,
}

impl ControlCommand {
    /// Builds a command clamped to `[-P, P] × [-Φ, Φ]`.
    pub fn clamped(pedal: f64, steer: f64, p: &ModelParams) -> Self {
        Self {
            pedal: pedal.clamp(-p.pedal_max, p.pedal_max),
            steer: steer.clamp(-p.steer_max, p.steer_max),
        }
    }

    pub fn within(&self, p: &ModelParams) -> bool {
        self.pedal.abs() <= p.pedal_max && self.steer.abs() <= p.steer_max
    }
}

/// Kinematic and field hyperparameters.
///
/// Serializes as a flat JSON object; omitted fields take the defaults.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelParams {
    /// Time step (s).
    pub dt: f64,
    /// Speed retention per step, in `(0, 1]`.
    pub beta: f64,
    /// Inverse wheelbase (1/m).
    pub gamma: f64,
    /// Pedal bound P (m/s²).
    pub pedal_max: f64,
    /// Steering bound Φ (rad).
    pub steer_max: f64,
    /// Default reference speed (m/s).
    pub v_d: f64,
    /// Parking radius around the target (m).
    pub r_p: f64,
    /// Radius of the circle enclosing a vehicle (m).
    pub r_veh: f64,
    /// Static part of the collision avoidance margin (m).
    pub r_c: f64,
    /// Position tolerance (m).
    pub eps_p: f64,
    /// Orientation tolerance (rad).
    pub eps_o: f64,
    /// Extra tolerance on the forbidden-direction test (m).
    pub eps_c: f64,
    /// Below this speed the steering angle has no effect and is set to zero (m/s).
    pub eps_v: f64,
    /// Maximum number of simulation steps.
    pub horizon: usize,
    /// Restrict avoidance terms to agents passing the edge-distance filter.
    pub filter_neighbors: bool,
}

impl Default for ModelParams {
    fn default() -> Self {
        Self {
            dt: 0.2,
            beta: 0.99,
            gamma: 0.5,
            pedal_max: 1.0,
            steer_max: 0.8,
            v_d: 2.5,
            r_p: 5.0,
            r_veh: 1.5,
            r_c: 1.5,
            eps_p: 0.25,
            eps_o: 0.2,
            eps_c: 0.5,
            eps_v: 1e-3,
            horizon: 500,
            filter_neighbors: true,
        }
    }
}

impl ModelParams {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("dt", self.dt),
            ("gamma", self.gamma),
            ("pedal_max", self.pedal_max),
            ("steer_max", self.steer_max),
            ("v_d", self.v_d),
            ("r_p", self.r_p),
            ("r_veh", self.r_veh),
            ("eps_p", self.eps_p),
            ("eps_o", self.eps_o),
            ("eps_v", self.eps_v),
        ];
        for (name, value) in positive {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidParam {
                    name,
                    reason: format!("must be positive, got {value}"),
                });
            }
        }
        // r_c = 0 and eps_c = 0 are meaningful settings (margin sweeps).
        for (name, value) in [("r_c", self.r_c), ("eps_c", self.eps_c)] {
            if !(value.is_finite() && value >= 0.0) {
                return Err(Error::InvalidParam {
                    name,
                    reason: format!("must be non-negative, got {value}"),
                });
            }
        }
        if !(self.beta > 0.0 && self.beta <= 1.0) {
            return Err(Error::InvalidParam {
                name: "beta",
                reason: format!("must lie in (0, 1], got {}", self.beta),
            });
        }
        if self.steer_max >= std::f64::consts::FRAC_PI_2 {
            return Err(Error::InvalidParam {
                name: "steer_max",
                reason: "must be below π/2".into(),
            });
        }
        if self.horizon == 0 {
            return Err(Error::InvalidParam {
                name: "horizon",
                reason: "must be at least 1".into(),
            });
        }
        Ok(())
    }

    /// Returns a copy with one field replaced, parsing `value` as JSON
    /// (`r_c=0.75`, `horizon=200`, `filter_neighbors=false`).
    pub fn with_override(&self, name: &str, value: &str) -> Result<Self> {
        let mut obj = match serde_json::to_value(self)? {
            serde_json::Value::Object(m) => m,
            _ => unreachable!("params serialize to an object"),
        };
        if !obj.contains_key(name) {
            return Err(Error::UnknownParam(name.to_string()));
        }
        let parsed: serde_json::Value =
            serde_json::from_str(value.trim()).map_err(|e| Error::Parse {
                path: name.to_string(),
                message: e.to_string(),
            })?;
        obj.insert(name.to_string(), parsed);
        let out: ModelParams =
            serde_json::from_value(serde_json::Value::Object(obj)).map_err(|e| Error::Parse {
                path: name.to_string(),
                message: e.to_string(),
            })?;
        out.validate()?;
        Ok(out)
    }
}

/// Identifies a vehicle or obstacle by its index within a [`Scene`].
///
/// Serialized as `"v3"` / `"o1"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AgentId {
    Vehicle(usize),
    Obstacle(usize),
}

impl fmt::Display for AgentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AgentId::Vehicle(i) => write!(f, "v{i}"),
            AgentId::Obstacle(k) => write!(f, "o{k}"),
        }
    }
}

impl FromStr for AgentId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let (kind, idx) = s.split_at(s.len().min(1));
        let idx: usize = idx.parse().map_err(|_| format!("bad agent id `{s}`"))?;
        match kind {
            "v" => Ok(AgentId::Vehicle(idx)),
            "o" => Ok(AgentId::Obstacle(idx)),
            _ => Err(format!("bad agent id `{s}`")),
        }
    }
}

impl Serialize for AgentId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for AgentId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Snapshot of all agents at one step. Vehicle `i` keeps index `i` for the
/// lifetime of a rollout.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Scene {
    pub vehicles: Vec<VehicleState>,
    #[serde(default)]
    pub obstacles: Vec<ObstacleState>,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub t: usize,
}

fn is_zero(t: &usize) -> bool {
    *t == 0
}

impl Scene {
    pub fn new(vehicles: Vec<VehicleState>, obstacles: Vec<ObstacleState>) -> Self {
        Self {
            vehicles,
            obstacles,
            t: 0,
        }
    }

    pub fn position_of(&self, id: AgentId) -> Vec2 {
        match id {
            AgentId::Vehicle(i) => self.vehicles[i].position(),
            AgentId::Obstacle(k) => self.obstacles[k].position(),
        }
    }
}
