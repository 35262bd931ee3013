//! Training signals derived from rollouts: per-step reference-control
//! labels, the two-step vehicle state cost, the steering/pedal loss terms
//! and the decaying perturbation schedule.

use std::io::Write;

use flate2::write::GzEncoder;
use flate2::Compression;
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::controller::neighbor_filter;
use crate::error::Result;
use crate::kinematics::step;
use crate::math::{heaviside, wrap_angle};
use crate::model::{AgentId, ControlCommand, ModelParams, Scene, VehicleState};
use crate::simulator::Rollout;

/// Default perturbation standard deviations for `(x, y, theta, v)`.
pub const SIGMA0: [f64; 4] = [0.25, 0.25, 0.1, 0.1];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelRecord {
    pub scenario_id: String,
    pub t: usize,
    pub vehicle_id: usize,
    pub state: VehicleState,
    pub neighbor_ids: Vec<AgentId>,
    pub ref_pedal: f64,
    pub ref_steer: f64,
    pub ref_v_next: f64,
    pub ref_theta_next: f64,
}

impl LabelRecord {
    pub fn command(&self) -> ControlCommand {
        ControlCommand {
            pedal: self.ref_pedal,
            steer: self.ref_steer,
        }
    }
}

/// Applies `c` once, then advances the position a second step with the
/// updated heading and speed. Returns `(x_{t+2}, y_{t+2}, θ_{t+1}, v_{t+1})`.
pub fn lookahead(s: &VehicleState, c: &ControlCommand, p: &ModelParams) -> VehicleState {
    let n = step(s, c, p);
    let (sin, cos) = n.theta.sin_cos();
    VehicleState {
        x: n.x + n.v * cos * p.dt,
        y: n.y + n.v * sin * p.dt,
        ..n
    }
}

fn penalty(alpha: f64) -> f64 {
    let a = (-alpha).max(0.0);
    a * a + a
}

/// State cost of vehicle `ego` placed at the lookahead state `look`.
///
/// Neighbours stay at their positions in `scene`. The safety margins use the
/// ego's speed `speed_t` at the current step.
pub fn state_cost(
    ego: usize,
    look: &VehicleState,
    speed_t: f64,
    scene: &Scene,
    p: &ModelParams,
) -> f64 {
    let pos = look.position();
    let margin = p.r_c + speed_t.abs();
    let mut c = (look.target() - pos).norm();
    for o in &scene.obstacles {
        c += penalty((o.position() - pos).norm() - o.r - p.r_veh - margin);
    }
    for (j, s) in scene.vehicles.iter().enumerate() {
        if j != ego {
            c += penalty((s.position() - pos).norm() - 2.0 * p.r_veh - margin);
        }
    }
    c
}

/// Cost of applying `c` to vehicle `ego` of `scene`.
pub fn command_cost(scene: &Scene, ego: usize, c: &ControlCommand, p: &ModelParams) -> f64 {
    let s = &scene.vehicles[ego];
    state_cost(ego, &lookahead(s, c, p), s.v, scene, p)
}

/// Quantities shared by both loss terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossAux {
    pub ref_v_next: f64,
    pub pred_v_next: f64,
    /// Current distance to the target.
    pub x_tar_norm: f64,
}

/// Whether the pedal loss is judged by state cost: far from the parking
/// region and held back only by the default speed limit.
pub fn cost_gate(aux: &LossAux, p: &ModelParams) -> bool {
    let far = aux.x_tar_norm - aux.pred_v_next.abs() - p.r_p > 0.0;
    let limited = aux.pred_v_next.abs() > p.v_d
        && (aux.ref_v_next.abs() - p.v_d).abs() <= 1e-9
        && aux.pred_v_next * aux.ref_v_next > 0.0;
    far && limited
}

/// `ΔC + H(ΔC)·ΔC²`: negative when the prediction beats the reference.
pub fn cost_loss(delta_c: f64) -> f64 {
    delta_c + heaviside(delta_c) * delta_c * delta_c
}

/// Returns `(L_steer, L_pedal)`. Both cost evaluations use the reference
/// steering angle.
pub fn training_loss(
    pred: &ControlCommand,
    reference: &ControlCommand,
    aux: &LossAux,
    scene: &Scene,
    ego: usize,
    p: &ModelParams,
) -> (f64, f64) {
    let l_steer = (reference.steer - pred.steer).powi(2);
    let l_pedal = if cost_gate(aux, p) {
        let mixed = ControlCommand {
            pedal: pred.pedal,
            steer: reference.steer,
        };
        let dc = command_cost(scene, ego, &mixed, p) - command_cost(scene, ego, reference, p);
        cost_loss(dc)
    } else {
        (reference.pedal - pred.pedal).powi(2)
    };
    (l_steer, l_pedal)
}

/// Adds zero-mean Gaussian noise to `(x, y, theta, v)` with standard
/// deviations `sigma0 · (T − t)/T`. Targets are left alone.
pub fn perturb<R: Rng + ?Sized>(
    s: &VehicleState,
    t: usize,
    horizon: usize,
    sigma0: [f64; 4],
    rng: &mut R,
) -> VehicleState {
    let scale = if horizon == 0 {
        0.0
    } else {
        horizon.saturating_sub(t) as f64 / horizon as f64
    };
    let mut noise = [0.0; 4];
    for (n, sd) in noise.iter_mut().zip(sigma0) {
        let sd = sd * scale;
        if sd > 0.0 {
            *n = Normal::new(0.0, sd)
                .expect("finite positive deviation")
                .sample(rng);
        }
    }
    VehicleState {
        x: s.x + noise[0],
        y: s.y + noise[1],
        theta: wrap_angle(s.theta + noise[2]),
        v: s.v + noise[3],
        ..*s
    }
}

/// One record per (step, vehicle), in step-major order.
pub fn export_labels(r: &Rollout, scenario_id: &str) -> Vec<LabelRecord> {
    let p = &r.params;
    let mut out = Vec::with_capacity(r.frames.len() * r.n_vehicles());
    for f in &r.frames {
        for (i, s) in f.scene.vehicles.iter().enumerate() {
            let c = f.output.commands[i];
            let d = &f.output.diagnostics[i];
            out.push(LabelRecord {
                scenario_id: scenario_id.to_string(),
                t: f.scene.t,
                vehicle_id: i,
                state: *s,
                neighbor_ids: neighbor_filter(&f.scene, i, p),
                ref_pedal: c.pedal,
                ref_steer: c.steer,
                ref_v_next: d.v_real,
                ref_theta_next: d.theta_real,
            });
        }
    }
    out
}

/// Writes records as JSON lines, optionally gzip-compressed.
pub fn write_labels<W: Write>(records: &[LabelRecord], w: W, gzip: bool) -> Result<()> {
    if gzip {
        let mut enc = GzEncoder::new(w, Compression::default());
        write_lines(records, &mut enc)?;
        enc.finish()?;
    } else {
        let mut w = w;
        write_lines(records, &mut w)?;
    }
    Ok(())
}

fn write_lines<W: Write>(records: &[LabelRecord], w: &mut W) -> Result<()> {
    for r in records {
        serde_json::to_writer(&mut *w, r)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

/// Reads plain or gzip-compressed label lines.
pub fn read_labels(bytes: &[u8]) -> Result<Vec<LabelRecord>> {
    let text = if bytes.starts_with(&[0x1f, 0x8b]) {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut flate2::read::GzDecoder::new(bytes), &mut s)?;
        s
    } else {
        String::from_utf8_lossy(bytes).into_owned()
    };
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| Ok(serde_json::from_str(l)?))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ObstacleState;
    use crate::simulator::rollout;
    use rand::SeedableRng;
    use rand_xoshiro::Xoshiro256PlusPlus;

    fn at(x: f64, y: f64) -> VehicleState {
        VehicleState::new(x, y, 0.0, 0.0, 0.0, 0.0, 0.0)
    }

    #[test]
    fn cost_examples() {
        let p = ModelParams::default();
        let sc = Scene::new(vec![at(0.0, 0.0)], vec![]);
        assert_eq!(state_cost(0, &sc.vehicles[0], 0.0, &sc, &p), 0.0);

        let s = at(10.0, 0.0);
        assert_eq!(
            state_cost(0, &s, 0.0, &Scene::new(vec![s], vec![]), &p),
            10.0
        );

        // alpha = 5 - 2 - 1.5 - 1.5 - 1 = -1
        let s = at(0.0, 0.0);
        let sc = Scene::new(vec![s], vec![ObstacleState::new(5.0, 0.0, 2.0)]);
        assert_eq!(state_cost(0, &s, 1.0, &sc, &p), 2.0);
    }

    #[test]
    fn lookahead_order() {
        let p = ModelParams::default();
        let s = VehicleState::new(0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0);
        let c = ControlCommand {
            pedal: 1.0,
            steer: 0.5,
        };
        let n = step(&s, &c, &p);
        let l = lookahead(&s, &c, &p);
        assert_eq!((l.theta, l.v), (n.theta, n.v));
        assert!((l.x - (0.2 + 1.19 * n.theta.cos() * 0.2)).abs() < 1e-12);
        assert!((l.y - 1.19 * n.theta.sin() * 0.2).abs() < 1e-12);
    }

    #[test]
    fn loss_examples() {
        let p = ModelParams::default();
        let sc = Scene::new(
            vec![VehicleState::new(0.0, 0.0, 0.0, 2.5, 50.0, 0.0, 0.0)],
            vec![],
        );
        let r = ControlCommand {
            pedal: 0.3,
            steer: 0.1,
        };
        let closed = LossAux {
            ref_v_next: 2.5,
            pred_v_next: 2.5,
            x_tar_norm: 50.0,
        };
        assert_eq!(training_loss(&r, &r, &closed, &sc, 0, &p), (0.0, 0.0));

        let pred = ControlCommand { pedal: 0.8, ..r };
        assert_eq!(training_loss(&pred, &r, &closed, &sc, 0, &p).1, 0.25);

        assert_eq!(cost_loss(-0.3), -0.3);
        assert!((cost_loss(0.5) - 0.75).abs() < 1e-15);
    }

    #[test]
    fn gate_opens_when_far_and_limited() {
        let p = ModelParams::default();
        let sc = Scene::new(
            vec![VehicleState::new(0.0, 0.0, 0.0, 2.5, 50.0, 0.0, 0.0)],
            vec![],
        );
        let reference = ControlCommand {
            pedal: 0.125,
            steer: 0.0,
        };
        let pred = ControlCommand {
            pedal: 1.0,
            steer: 0.0,
        };
        let aux = LossAux {
            ref_v_next: 2.5,
            pred_v_next: 2.675,
            x_tar_norm: 50.0,
        };
        assert!(cost_gate(&aux, &p));
        // Faster toward a distant target lowers the cost.
        let (_, l) = training_loss(&pred, &reference, &aux, &sc, 0, &p);
        assert!(l < 0.0);
        assert!(!cost_gate(
            &LossAux {
                x_tar_norm: 6.0,
                ..aux
            },
            &p
        ));
        assert!(!cost_gate(
            &LossAux {
                pred_v_next: -2.7,
                ..aux
            },
            &p
        ));
    }

    #[test]
    fn perturb_schedule_endpoints() {
        let s = VehicleState::new(1.0, 2.0, 0.5, 1.0, 3.0, 4.0, 0.1);
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(1);
        assert_eq!(perturb(&s, 200, 200, SIGMA0, &mut rng), s);
        let a = perturb(
            &s,
            0,
            200,
            SIGMA0,
            &mut Xoshiro256PlusPlus::seed_from_u64(9),
        );
        let b = perturb(
            &s,
            0,
            200,
            SIGMA0,
            &mut Xoshiro256PlusPlus::seed_from_u64(9),
        );
        assert_eq!(a, b);
        assert_ne!(a, s);
        assert_eq!((a.x_tar, a.y_tar, a.theta_tar), (3.0, 4.0, 0.1));
    }

    #[test]
    fn perturb_variance_decays_linearly() {
        let s = VehicleState::new(0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(5);
        let n = 20_000;
        for t in [0usize, 50, 100, 150] {
            let var = (0..n)
                .map(|_| perturb(&s, t, 200, SIGMA0, &mut rng).x.powi(2))
                .sum::<f64>()
                / n as f64;
            let sd = 0.25 * (200 - t) as f64 / 200.0;
            assert!(
                (var.sqrt() / sd - 1.0).abs() < 0.03,
                "t={t}: {} vs {sd}",
                var.sqrt()
            );
        }
    }

    #[test]
    fn export_cardinality_and_replay() {
        let p = ModelParams {
            horizon: 100,
            ..ModelParams::default()
        };
        let sc = Scene::new(
            vec![
                VehicleState::new(0.0, 0.0, 0.0, 0.0, 200.0, 0.0, 0.0),
                VehicleState::new(0.0, 20.0, 0.0, 0.0, 200.0, 20.0, 0.0),
            ],
            vec![],
        );
        let r = rollout(&sc, &p).unwrap();
        assert_eq!(r.frames.len(), 100);
        let labels = export_labels(&r, "case-0");
        assert_eq!(labels.len(), 200);
        let scenes: Vec<&Scene> = r.scenes().collect();
        for l in &labels {
            let n = step(&l.state, &l.command(), &p);
            assert_eq!(n, scenes[l.t + 1].vehicles[l.vehicle_id]);
        }
    }

    #[test]
    fn label_io_round_trip() {
        let p = ModelParams::default();
        let sc = Scene::new(
            vec![VehicleState::new(0.0, 0.0, 0.0, 0.0, 8.0, 0.0, 0.0)],
            vec![],
        );
        let labels = export_labels(&rollout(&sc, &p).unwrap(), "x");
        for gz in [false, true] {
            let mut buf = Vec::new();
            write_labels(&labels, &mut buf, gz).unwrap();
            assert_eq!(read_labels(&buf).unwrap(), labels);
        }
    }
}
