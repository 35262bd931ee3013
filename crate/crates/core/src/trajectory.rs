//! JSON-lines trajectory files.
//!
//! The first line is a header with the parameters, obstacles and vehicle
//! targets. Each following line is one step: per-vehicle state, the command
//! applied at that step with its field diagnostics, and the collisions seen
//! at that step. The last step carries state only. Step values are rounded
//! to 9 significant digits and written in shortest round-trip form, so equal
//! rollouts always produce byte-identical files.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{AgentId, ModelParams, ObstacleState, Scene, VehicleState};
use crate::simulator::{CollisionEvent, Rollout};

pub const FORMAT: &str = "dv2f-trajectory/1";

/// Rounds to 9 significant decimal digits.
pub fn round9(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.8e}").parse().expect("formatted float parses")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Header {
    pub format: String,
    pub params: ModelParams,
    pub n_vehicles: usize,
    pub obstacles: Vec<ObstacleState>,
    /// `[x_tar, y_tar, theta_tar]` per vehicle.
    pub targets: Vec<[f64; 3]>,
    pub terminated_at: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VehicleRecord {
    pub x: f64,
    pub y: f64,
    pub theta: f64,
    pub v: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pedal: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steer: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v_hat: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta_hat: Option<f64>,
    #[serde(rename = "F", default, skip_serializing_if = "Option::is_none")]
    pub forbid_forward: Option<bool>,
    #[serde(rename = "B", default, skip_serializing_if = "Option::is_none")]
    pub forbid_backward: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub t: usize,
    pub vehicles: Vec<VehicleRecord>,
    #[serde(default)]
    pub collisions: Vec<(AgentId, AgentId)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub header: Header,
    pub steps: Vec<StepRecord>,
}

fn state_record(s: &VehicleState) -> VehicleRecord {
    VehicleRecord {
        x: round9(s.x),
        y: round9(s.y),
        theta: round9(s.theta),
        v: round9(s.v),
        pedal: None,
        steer: None,
        v_hat: None,
        theta_hat: None,
        forbid_forward: None,
        forbid_backward: None,
    }
}

impl Trajectory {
    pub fn from_rollout(r: &Rollout) -> Self {
        let scene0 = r.frames.first().map_or(&r.final_scene, |f| &f.scene);
        let header = Header {
            format: FORMAT.to_string(),
            params: r.params,
            n_vehicles: scene0.vehicles.len(),
            obstacles: scene0.obstacles.clone(),
            targets: scene0
                .vehicles
                .iter()
                .map(|s| [s.x_tar, s.y_tar, s.theta_tar])
                .collect(),
            terminated_at: r.terminated_at,
        };

        let mut collisions = vec![Vec::new(); r.terminated_at + 1];
        for e in &r.collision_events {
            collisions[e.t].push((e.a, e.b));
        }
        let mut steps = Vec::with_capacity(r.frames.len() + 1);
        for (t, f) in r.frames.iter().enumerate() {
            let vehicles = f
                .scene
                .vehicles
                .iter()
                .zip(&f.output.commands)
                .zip(&f.output.diagnostics)
                .map(|((s, c), d)| VehicleRecord {
                    pedal: Some(round9(c.pedal)),
                    steer: Some(round9(c.steer)),
                    v_hat: Some(round9(d.v_hat)),
                    theta_hat: Some(round9(d.theta_hat)),
                    forbid_forward: Some(d.forbid_forward),
                    forbid_backward: Some(d.forbid_backward),
                    ..state_record(s)
                })
                .collect();
            steps.push(StepRecord {
                t,
                vehicles,
                collisions: std::mem::take(&mut collisions[t]),
            });
        }
        let t = r.terminated_at;
        steps.push(StepRecord {
            t,
            vehicles: r.final_scene.vehicles.iter().map(state_record).collect(),
            collisions: std::mem::take(&mut collisions[t]),
        });
        Self { header, steps }
    }

    pub fn write<W: Write>(&self, mut w: W) -> Result<()> {
        serde_json::to_writer(&mut w, &self.header)?;
        w.write_all(b"\n")?;
        for s in &self.steps {
            serde_json::to_writer(&mut w, s)?;
            w.write_all(b"\n")?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        self.write(&mut out).expect("writing to a Vec cannot fail");
        out
    }

    pub fn read<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r
            .lines()
            .enumerate()
            .filter(|(_, l)| l.as_ref().map_or(true, |l| !l.trim().is_empty()));
        let Some((_, first)) = lines.next() else {
            return Err(Error::Trajectory(
                "empty file, expected a header line".into(),
            ));
        };
        let header: Header = parse_line(&first?, 1)?;
        if header.format != FORMAT {
            return Err(Error::Trajectory(format!(
                "unsupported format `{}`",
                header.format
            )));
        }
        if header.targets.len() != header.n_vehicles {
            return Err(Error::Trajectory(
                "header target count differs from n_vehicles".into(),
            ));
        }
        let mut steps: Vec<StepRecord> = Vec::new();
        for (n, line) in lines {
            let s: StepRecord = parse_line(&line?, n + 1)?;
            if s.t != steps.len() {
                return Err(Error::Trajectory(format!(
                    "line {}: expected step {}, found {}",
                    n + 1,
                    steps.len(),
                    s.t
                )));
            }
            if s.vehicles.len() != header.n_vehicles {
                return Err(Error::Trajectory(format!(
                    "line {}: {} vehicles, header declares {}",
                    n + 1,
                    s.vehicles.len(),
                    header.n_vehicles
                )));
            }
            steps.push(s);
        }
        if steps.len() != header.terminated_at + 1 {
            return Err(Error::Trajectory(format!(
                "{} steps recorded, header declares termination at {}",
                steps.len(),
                header.terminated_at
            )));
        }
        Ok(Self { header, steps })
    }

    pub fn read_file(path: &std::path::Path) -> Result<Self> {
        Self::read(std::io::BufReader::new(std::fs::File::open(path)?))
    }

    /// Scene at every recorded step.
    pub fn scenes(&self) -> Vec<Scene> {
        self.steps
            .iter()
            .map(|st| {
                let vehicles = st
                    .vehicles
                    .iter()
                    .zip(&self.header.targets)
                    .map(|(r, tg)| VehicleState::new(r.x, r.y, r.theta, r.v, tg[0], tg[1], tg[2]))
                    .collect();
                Scene {
                    vehicles,
                    obstacles: self.header.obstacles.clone(),
                    t: st.t,
                }
            })
            .collect()
    }

    pub fn collision_events(&self) -> Vec<CollisionEvent> {
        self.steps
            .iter()
            .flat_map(|st| {
                st.collisions
                    .iter()
                    .map(move |&(a, b)| CollisionEvent { t: st.t, a, b })
            })
            .collect()
    }
}

fn parse_line<T: serde::de::DeserializeOwned>(line: &str, n: usize) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(line);
    serde_path_to_error::deserialize(de)
        .map_err(|e| Error::Trajectory(format!("line {n}, at `{}`: {}", e.path(), e.inner())))
}
