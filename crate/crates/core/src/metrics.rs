//! Success, reach and safe rates.
//!
//! A vehicle is *safe* if no collision event involves it at any step (both
//! participants count), *reached* if it is parked at the final step, and
//! successful if both hold. Rates are fractions of vehicles.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{AgentId, ModelParams, Scene};
use crate::simulator::{is_parked, CollisionEvent, Rollout};
use crate::trajectory::Trajectory;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VehicleOutcome {
    pub reached: bool,
    pub safe: bool,
    /// Within position tolerance at the final step, heading ignored.
    pub position_reached: bool,
}

impl VehicleOutcome {
    pub fn success(&self) -> bool {
        self.reached && self.safe
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub success_rate: f64,
    pub reach_rate: f64,
    pub safe_rate: f64,
    pub position_only_success: f64,
    pub per_vehicle_outcomes: Vec<VehicleOutcome>,
    pub success_time_series: Vec<f64>,
}

pub fn evaluate(r: &Rollout, p: &ModelParams) -> Result<MetricsReport> {
    let scenes: Vec<&Scene> = r.scenes().collect();
    evaluate_parts(&scenes, &r.collision_events, p)
}

/// Same metrics computed from a trajectory file.
pub fn evaluate_trajectory(tr: &Trajectory) -> Result<MetricsReport> {
    let scenes = tr.scenes();
    let refs: Vec<&Scene> = scenes.iter().collect();
    evaluate_parts(&refs, &tr.collision_events(), &tr.header.params)
}

fn evaluate_parts(
    scenes: &[&Scene],
    events: &[CollisionEvent],
    p: &ModelParams,
) -> Result<MetricsReport> {
    let last = scenes.last().ok_or(Error::EmptyRollout)?;
    let n = last.vehicles.len();
    if n == 0 {
        return Err(Error::EmptyRollout);
    }
    let first_hit = first_collision_steps(n, events);
    let outcomes: Vec<VehicleOutcome> = last
        .vehicles
        .iter()
        .zip(&first_hit)
        .map(|(s, hit)| VehicleOutcome {
            reached: is_parked(s, p),
            safe: hit.is_none(),
            position_reached: (s.target() - s.position()).norm() <= p.eps_p,
        })
        .collect();
    let rate = |f: &dyn Fn(&VehicleOutcome) -> bool| {
        outcomes.iter().filter(|o| f(o)).count() as f64 / n as f64
    };
    Ok(MetricsReport {
        success_rate: rate(&|o| o.success()),
        reach_rate: rate(&|o| o.reached),
        safe_rate: rate(&|o| o.safe),
        position_only_success: rate(&|o| o.safe && o.position_reached),
        success_time_series: series(scenes, &first_hit, p),
        per_vehicle_outcomes: outcomes,
    })
}

fn first_collision_steps(n: usize, events: &[CollisionEvent]) -> Vec<Option<usize>> {
    let mut first = vec![None; n];
    for e in events {
        for id in [e.a, e.b] {
            if let AgentId::Vehicle(i) = id {
                let f: &mut Option<usize> = &mut first[i];
                *f = Some(f.map_or(e.t, |t| t.min(e.t)));
            }
        }
    }
    first
}

fn series(scenes: &[&Scene], first_hit: &[Option<usize>], p: &ModelParams) -> Vec<f64> {
    scenes
        .iter()
        .enumerate()
        .map(|(t, sc)| {
            let n = sc.vehicles.len();
            if n == 0 {
                return 0.0;
            }
            let ok = sc
                .vehicles
                .iter()
                .zip(first_hit)
                .filter(|(s, hit)| hit.is_none_or(|h| h > t) && is_parked(s, p))
                .count();
            ok as f64 / n as f64
        })
        .collect()
}

/// Fraction of vehicles parked at `t` and collision-free on `[0, t]`.
pub fn success_time_series(r: &Rollout, p: &ModelParams) -> Vec<f64> {
    let scenes: Vec<&Scene> = r.scenes().collect();
    let first = first_collision_steps(r.n_vehicles(), &r.collision_events);
    series(&scenes, &first, p)
}

/// One row of a batch summary table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchSummary {
    pub n_vehicles: usize,
    pub n_obstacles: usize,
    pub cases: usize,
    pub success: f64,
    pub reach: f64,
    pub safe: f64,
    pub position_only: f64,
    pub wall_time_s: f64,
}

pub const CSV_HEADER: &str =
    "n_vehicles,n_obstacles,cases,success,reach,safe,position_only,wall_time_s";

impl BatchSummary {
    /// Means over cases. Every report counts once regardless of its
    /// vehicle count.
    pub fn from_reports(
        n_vehicles: usize,
        n_obstacles: usize,
        reports: &[MetricsReport],
        wall_time_s: f64,
    ) -> Self {
        let k = reports.len().max(1) as f64;
        // Empty f64 sums are -0.0; start from +0.0 so an empty batch reads 0.
        let mean = |f: fn(&MetricsReport) -> f64| reports.iter().map(f).fold(0.0, |a, x| a + x) / k;
        Self {
            n_vehicles,
            n_obstacles,
            cases: reports.len(),
            success: mean(|r| r.success_rate),
            reach: mean(|r| r.reach_rate),
            safe: mean(|r| r.safe_rate),
            position_only: mean(|r| r.position_only_success),
            wall_time_s,
        }
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{:.6},{:.6},{:.6},{:.6},{:.6}",
            self.n_vehicles,
            self.n_obstacles,
            self.cases,
            self.success,
            self.reach,
            self.safe,
            self.position_only,
            self.wall_time_s
        )
    }
}

pub fn summary_csv(rows: &[BatchSummary]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(out, "{}", r.csv_row());
    }
    out
}
