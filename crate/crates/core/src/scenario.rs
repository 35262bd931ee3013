//! Seeded scenario generation, placement validation and scene files.
//!
//! Randomness comes from xoshiro256++ seeded through splitmix64, and uniform
//! floats are drawn as `(next_u64 >> 11) · 2⁻⁵³`, so a scene is fully
//! determined by its [`GenSpec`] and the parameters used for validation.

use std::f64::consts::PI;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math::{heading, Vec2};
use crate::model::{AgentId, ModelParams, ObstacleState, Scene, VehicleState};

/// Rejected draws allowed while building one scene.
pub const RETRY_BUDGET: usize = 1000;

/// Collision-mode start and target radius around the collision center.
pub const COLLISION_RADIUS: (f64, f64) = (8.0, 15.0);
/// Collision-mode angular jitter of the target, radians.
pub const COLLISION_JITTER: f64 = 15.0 * PI / 180.0;
/// Straight paths in one collision group must cross this close to the center.
pub const CROSSING_TOLERANCE: f64 = 2.0;
/// Parking-mode maximum start-to-target distance.
pub const PARKING_RADIUS: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Collision,
    Parking,
    Normal,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Collision => "collision",
            Mode::Parking => "parking",
            Mode::Normal => "normal",
        })
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "collision" => Ok(Mode::Collision),
            "parking" => Ok(Mode::Parking),
            "normal" => Ok(Mode::Normal),
            _ => Err(format!(
                "unknown mode `{s}` (expected collision, parking or normal)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    pub n_vehicles: usize,
    pub n_obstacles: usize,
    pub mode: Mode,
    /// Half-width of the square map, meters.
    pub map_extent: f64,
    pub obstacle_radius_range: (f64, f64),
    pub seed: u64,
}

impl GenSpec {
    /// Default extent `max(50, 12·√n_vehicles)` and obstacle radii in `[1, 3]`.
    pub fn new(n_vehicles: usize, n_obstacles: usize, mode: Mode, seed: u64) -> Self {
        Self {
            n_vehicles,
            n_obstacles,
            mode,
            map_extent: default_extent(n_vehicles),
            obstacle_radius_range: (1.0, 3.0),
            seed,
        }
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        Self { seed, ..*self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.map_extent.is_finite() && self.map_extent > 0.0) {
            return Err(Error::InvalidParam {
                name: "map_extent",
                reason: "must be positive".into(),
            });
        }
        let (lo, hi) = self.obstacle_radius_range;
        if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && lo <= hi) {
            return Err(Error::InvalidParam {
                name: "obstacle_radius_range",
                reason: format!("need 0 < lo <= hi, got [{lo}, {hi}]"),
            });
        }
        Ok(())
    }

    /// Output file name for a batch generated from this spec.
    pub fn batch_file_name(&self) -> String {
        format!(
            "scenes_{}v_{}o_{}_{}.json",
            self.n_vehicles, self.n_obstacles, self.mode, self.seed
        )
    }
}

pub fn default_extent(n_vehicles: usize) -> f64 {
    (12.0 * (n_vehicles as f64).sqrt()).max(50.0)
}

/// Seed of case `i` in a batch.
pub fn case_seed(seed: u64, i: usize) -> u64 {
    seed.wrapping_add((i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    NonFinite,
    BadRadius,
    StartOverlap,
    TargetOverlap,
    StartInObstacle,
    TargetInObstacle,
    TargetInInfluence,
}

/// One failed placement rule. `distance` and `min` are NaN for
/// non-geometric violations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub a: AgentId,
    pub b: Option<AgentId>,
    pub distance: f64,
    pub min: f64,
}

impl Violation {
    fn single(kind: ViolationKind, a: AgentId) -> Self {
        Self {
            kind,
            a,
            b: None,
            distance: f64::NAN,
            min: f64::NAN,
        }
    }

    fn pair(kind: ViolationKind, a: AgentId, b: AgentId, distance: f64, min: f64) -> Self {
        Self {
            kind,
            a,
            b: Some(b),
            distance,
            min,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.kind {
            ViolationKind::NonFinite => "non-finite field",
            ViolationKind::BadRadius => "obstacle radius must be positive",
            ViolationKind::StartOverlap => "start positions overlap",
            ViolationKind::TargetOverlap => "target positions overlap",
            ViolationKind::StartInObstacle => "start overlaps obstacle",
            ViolationKind::TargetInObstacle => "target overlaps obstacle",
            ViolationKind::TargetInInfluence => "target inside obstacle influence circle",
        };
        match self.b {
            Some(b) => write!(
                f,
                "{} and {}: {what} ({:.4} < {:.4})",
                self.a, b, self.distance, self.min
            ),
            None => write!(f, "{}: {what}", self.a),
        }
    }
}

/// Checks that hold for any scene a rollout can start from: finite values
/// and positive obstacle radii.
pub fn structural_violations(scene: &Scene) -> Vec<Violation> {
    let mut out = Vec::new();
    for (i, s) in scene.vehicles.iter().enumerate() {
        if !s.is_finite() {
            out.push(Violation::single(
                ViolationKind::NonFinite,
                AgentId::Vehicle(i),
            ));
        }
    }
    for (k, o) in scene.obstacles.iter().enumerate() {
        if !(o.x.is_finite() && o.y.is_finite() && o.r.is_finite()) {
            out.push(Violation::single(
                ViolationKind::NonFinite,
                AgentId::Obstacle(k),
            ));
        } else if o.r <= 0.0 {
            out.push(Violation::single(
                ViolationKind::BadRadius,
                AgentId::Obstacle(k),
            ));
        }
    }
    out
}

/// Placement rules. Starts may lie inside an obstacle's influence circle;
/// targets may not. An empty result means the scene is valid.
pub fn validate(scene: &Scene, p: &ModelParams) -> Vec<Violation> {
    let mut out = structural_violations(scene);
    if !out.is_empty() {
        return out;
    }
    let vs = &scene.vehicles;
    for i in 0..vs.len() {
        for j in i + 1..vs.len() {
            check_vehicle_pair(&vs[i], i, &vs[j], j, p, &mut out);
        }
        for (k, o) in scene.obstacles.iter().enumerate() {
            check_vehicle_obstacle(&vs[i], i, o, k, p, &mut out);
        }
    }
    out
}

fn check_vehicle_pair(
    a: &VehicleState,
    i: usize,
    b: &VehicleState,
    j: usize,
    p: &ModelParams,
    out: &mut Vec<Violation>,
) {
    let min = 2.0 * p.r_veh;
    let (ia, ib) = (AgentId::Vehicle(i), AgentId::Vehicle(j));
    let d = (a.position() - b.position()).norm();
    if d < min {
        out.push(Violation::pair(ViolationKind::StartOverlap, ia, ib, d, min));
    }
    let d = (a.target() - b.target()).norm();
    if d < min {
        out.push(Violation::pair(
            ViolationKind::TargetOverlap,
            ia,
            ib,
            d,
            min,
        ));
    }
}

fn check_vehicle_obstacle(
    s: &VehicleState,
    i: usize,
    o: &ObstacleState,
    k: usize,
    p: &ModelParams,
    out: &mut Vec<Violation>,
) {
    let (iv, io) = (AgentId::Vehicle(i), AgentId::Obstacle(k));
    let body = o.r + p.r_veh;
    let influence = body + p.r_c;
    let d = (s.position() - o.position()).norm();
    if d < body {
        out.push(Violation::pair(
            ViolationKind::StartInObstacle,
            iv,
            io,
            d,
            body,
        ));
    }
    let d = (s.target() - o.position()).norm();
    if d < body {
        out.push(Violation::pair(
            ViolationKind::TargetInObstacle,
            iv,
            io,
            d,
            body,
        ));
    } else if d < influence {
        out.push(Violation::pair(
            ViolationKind::TargetInInfluence,
            iv,
            io,
            d,
            influence,
        ));
    }
}

struct Sampler {
    rng: Xoshiro256PlusPlus,
}

impl Sampler {
    fn new(seed: u64) -> Self {
        Self {
            rng: Xoshiro256PlusPlus::seed_from_u64(seed),
        }
    }

    fn unit(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }

    fn below(&mut self, n: usize) -> usize {
        ((self.unit() * n as f64) as usize).min(n - 1)
    }

    fn angle(&mut self) -> f64 {
        crate::math::wrap_angle(self.uniform(-PI, PI))
    }

    fn point(&mut self, extent: f64) -> Vec2 {
        Vec2::new(self.uniform(-extent, extent), self.uniform(-extent, extent))
    }
}

/// Generated targets keep this far apart, stricter than [`validate`]: a
/// parked vehicle repels like an obstacle, so a target inside its
/// zero-speed avoidance radius can never settle.
pub fn target_spacing(p: &ModelParams) -> f64 {
    2.0 * p.r_veh + p.r_c
}

struct Builder<'a> {
    spec: &'a GenSpec,
    p: &'a ModelParams,
    rng: Sampler,
    vehicles: Vec<VehicleState>,
    obstacles: Vec<ObstacleState>,
    rejected: usize,
}

impl Builder<'_> {
    fn reject(&mut self, what: &str) -> Result<()> {
        self.rejected += 1;
        if self.rejected > RETRY_BUDGET {
            return Err(Error::Generation(format!(
                "retry budget of {RETRY_BUDGET} exhausted placing {what} ({} of {} vehicles, {} of {} obstacles placed; extent {} m)",
                self.vehicles.len(),
                self.spec.n_vehicles,
                self.obstacles.len(),
                self.spec.n_obstacles,
                self.spec.map_extent,
            )));
        }
        Ok(())
    }

    fn fits(&self, cand: &[VehicleState]) -> bool {
        let mut v = Vec::new();
        let base = self.vehicles.len();
        let spacing = target_spacing(self.p);
        for (n, c) in cand.iter().enumerate() {
            for (i, s) in self.vehicles.iter().chain(&cand[..n]).enumerate() {
                check_vehicle_pair(s, i, c, base + n, self.p, &mut v);
                if (s.target() - c.target()).norm() < spacing {
                    return false;
                }
            }
        }
        v.is_empty()
    }

    fn place_vehicles(&mut self) -> Result<()> {
        let n = self.spec.n_vehicles;
        while self.vehicles.len() < n {
            let remaining = n - self.vehicles.len();
            let group = match self.spec.mode {
                Mode::Collision => {
                    let m = (2 + self.rng.below(2)).min(remaining);
                    if remaining - m == 1 {
                        m + 1
                    } else {
                        m
                    }
                }
                _ => 1,
            };
            loop {
                let cand = match self.spec.mode {
                    Mode::Collision => self.collision_group(group).0,
                    Mode::Parking => vec![self.parking_vehicle()],
                    Mode::Normal => vec![self.normal_vehicle()],
                };
                if cand.iter().all(|s| s.is_finite()) && self.fits(&cand) {
                    self.vehicles.extend(cand);
                    break;
                }
                self.reject("vehicles")?;
            }
        }
        Ok(())
    }

    /// `m` vehicles whose start and target sit on opposite sides of a common
    /// center, with directions spread over the half circle.
    fn collision_group(&mut self, m: usize) -> (Vec<VehicleState>, Vec2) {
        let (r_lo, r_hi) = COLLISION_RADIUS;
        let e = (self.spec.map_extent - r_hi).max(0.0);
        loop {
            let c = self.rng.point(e);
            let psi0 = self.rng.uniform(0.0, 2.0 * PI);
            let mut group = Vec::with_capacity(m);
            for k in 0..m {
                let flip = if self.rng.unit() < 0.5 { PI } else { 0.0 };
                let psi = psi0 + k as f64 * PI / m as f64 + flip;
                let start = c + self.rng.uniform(r_lo, r_hi) * heading(psi);
                let jitter = self.rng.uniform(-COLLISION_JITTER, COLLISION_JITTER);
                let target = c + self.rng.uniform(r_lo, r_hi) * heading(psi + PI + jitter);
                let (th, th_tar) = (self.rng.angle(), self.rng.angle());
                group.push(VehicleState::new(
                    start.x, start.y, th, 0.0, target.x, target.y, th_tar,
                ));
            }
            if paths_cross_near(&group, c, CROSSING_TOLERANCE) {
                return (group, c);
            }
        }
    }

    fn parking_vehicle(&mut self) -> VehicleState {
        let start = self.rng.point(self.spec.map_extent);
        let r = PARKING_RADIUS * self.rng.unit().sqrt();
        let target = start + r * heading(self.rng.uniform(0.0, 2.0 * PI));
        VehicleState::new(
            start.x,
            start.y,
            self.rng.angle(),
            0.0,
            target.x,
            target.y,
            self.rng.angle(),
        )
    }

    fn normal_vehicle(&mut self) -> VehicleState {
        let e = self.spec.map_extent;
        let (start, target) = (self.rng.point(e), self.rng.point(e));
        VehicleState::new(
            start.x,
            start.y,
            self.rng.angle(),
            0.0,
            target.x,
            target.y,
            self.rng.angle(),
        )
    }

    fn place_obstacles(&mut self) -> Result<()> {
        let (lo, hi) = self.spec.obstacle_radius_range;
        while self.obstacles.len() < self.spec.n_obstacles {
            let c = self.rng.point(self.spec.map_extent);
            let o = ObstacleState::new(c.x, c.y, self.rng.uniform(lo, hi));
            let k = self.obstacles.len();
            let mut v = Vec::new();
            for (i, s) in self.vehicles.iter().enumerate() {
                check_vehicle_obstacle(s, i, &o, k, self.p, &mut v);
            }
            if v.is_empty() {
                self.obstacles.push(o);
            } else {
                self.reject("obstacles")?;
            }
        }
        Ok(())
    }
}

/// True when every pair of straight start→target segments intersects
/// within `tol` of `center`.
pub fn paths_cross_near(group: &[VehicleState], center: Vec2, tol: f64) -> bool {
    for i in 0..group.len() {
        for j in i + 1..group.len() {
            match segment_intersection(
                group[i].position(),
                group[i].target(),
                group[j].position(),
                group[j].target(),
            ) {
                Some(q) if (q - center).norm() <= tol => {}
                _ => return false,
            }
        }
    }
    true
}

/// Intersection point of segments `a0a1` and `b0b1`, if any.
pub fn segment_intersection(a0: Vec2, a1: Vec2, b0: Vec2, b1: Vec2) -> Option<Vec2> {
    let (da, db) = (a1 - a0, b1 - b0);
    let den = crate::math::cross(da, db);
    if den.abs() < 1e-12 {
        return None;
    }
    let w = b0 - a0;
    let s = crate::math::cross(w, db) / den;
    let u = crate::math::cross(w, da) / den;
    ((0.0..=1.0).contains(&s) && (0.0..=1.0).contains(&u)).then(|| a0 + s * da)
}

/// Generates one scene. Every returned scene passes [`validate`] under `p`.
pub fn generate(spec: &GenSpec, p: &ModelParams) -> Result<Scene> {
    spec.validate()?;
    p.validate()?;
    let mut b = Builder {
        spec,
        p,
        rng: Sampler::new(spec.seed),
        vehicles: Vec::with_capacity(spec.n_vehicles),
        obstacles: Vec::with_capacity(spec.n_obstacles),
        rejected: 0,
    };
    b.place_vehicles()?;
    b.place_obstacles()?;
    let scene = Scene::new(b.vehicles, b.obstacles);
    debug_assert!(validate(&scene, p).is_empty());
    Ok(scene)
}

/// `cases` scenes, case `i` generated from `case_seed(spec.seed, i)`.
pub fn generate_batch(spec: &GenSpec, cases: usize, p: &ModelParams) -> Result<Vec<Scene>> {
    (0..cases)
        .into_par_iter()
        .map(|i| generate(&spec.with_seed(case_seed(spec.seed, i)), p))
        .collect()
}

pub fn save(scene: &Scene) -> Vec<u8> {
    serde_json::to_vec_pretty(scene).expect("scene serialization is infallible")
}

pub fn load(bytes: &[u8]) -> Result<Scene> {
    parse(bytes)
}

pub fn save_batch(scenes: &[Scene]) -> Vec<u8> {
    serde_json::to_vec_pretty(scenes).expect("scene serialization is infallible")
}

/// Loads a batch file. A single scene object is accepted as a batch of one.
pub fn load_batch(bytes: &[u8]) -> Result<Vec<Scene>> {
    let first = bytes.iter().find(|b| !b.is_ascii_whitespace());
    if first == Some(&b'{') {
        Ok(vec![parse(bytes)?])
    } else {
        parse(bytes)
    }
}

pub fn load_batch_file(path: &Path) -> Result<Vec<Scene>> {
    load_batch(&std::fs::read(path)?)
}

fn parse<T: serde::de::DeserializeOwned>(bytes: &[u8]) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_slice(bytes);
    serde_path_to_error::deserialize(de).map_err(|e| Error::Parse {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn veh(x: f64, y: f64, tx: f64, ty: f64) -> VehicleState {
        VehicleState::new(x, y, 0.0, 0.0, tx, ty, 0.0)
    }

    #[test]
    fn validate_examples() {
        let p = ModelParams::default();
        assert!(validate(&Scene::default(), &p).is_empty());

        let sc = Scene::new(
            vec![veh(0.0, 0.0, 0.0, 20.0), veh(2.9, 0.0, 10.0, 20.0)],
            vec![],
        );
        let v = validate(&sc, &p);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].kind, ViolationKind::StartOverlap);
        assert_eq!(v[0].min, 3.0);

        let sc = Scene::new(
            vec![veh(20.0, 0.0, 4.9, 0.0)],
            vec![ObstacleState::new(0.0, 0.0, 2.0)],
        );
        let v = validate(&sc, &p);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].kind, ViolationKind::TargetInInfluence);
        assert_eq!(v[0].min, 5.0);

        // Starts inside the influence circle are allowed.
        let sc = Scene::new(
            vec![veh(4.0, 0.0, 20.0, 0.0)],
            vec![ObstacleState::new(0.0, 0.0, 2.0)],
        );
        assert!(validate(&sc, &p).is_empty());
        let sc = Scene::new(
            vec![veh(3.4, 0.0, 20.0, 0.0)],
            vec![ObstacleState::new(0.0, 0.0, 2.0)],
        );
        assert_eq!(validate(&sc, &p)[0].kind, ViolationKind::StartInObstacle);
    }

    #[test]
    fn parking_target_within_ten_meters() {
        let p = ModelParams::default();
        for seed in 0..50 {
            let sc = generate(&GenSpec::new(1, 0, Mode::Parking, seed), &p).unwrap();
            let s = &sc.vehicles[0];
            assert!((s.target() - s.position()).norm() <= 10.0);
        }
    }

    #[test]
    fn two_vehicle_collision_paths_cross_near_center() {
        let p = ModelParams::default();
        for seed in 0..200 {
            let spec = GenSpec::new(2, 0, Mode::Collision, seed);
            let mut b = Builder {
                spec: &spec,
                p: &p,
                rng: Sampler::new(seed),
                vehicles: vec![],
                obstacles: vec![],
                rejected: 0,
            };
            let (g, c) = b.collision_group(2);
            let q = segment_intersection(
                g[0].position(),
                g[0].target(),
                g[1].position(),
                g[1].target(),
            )
            .expect("paths cross");
            assert!((q - c).norm() <= 2.0);
            for s in &g {
                let r0 = (s.position() - c).norm();
                let r1 = (s.target() - c).norm();
                assert!((8.0..=15.0).contains(&r0) && (8.0..=15.0).contains(&r1));
            }
        }
    }

    #[test]
    fn generation_is_deterministic_and_valid() {
        let p = ModelParams::default();
        for mode in [Mode::Collision, Mode::Parking, Mode::Normal] {
            let spec = GenSpec::new(20, 10, mode, 99);
            let a = generate(&spec, &p).unwrap();
            assert_eq!(a, generate(&spec, &p).unwrap());
            assert!(validate(&a, &p).is_empty());
            assert_eq!((a.vehicles.len(), a.obstacles.len()), (20, 10));
            for o in &a.obstacles {
                assert!((1.0..=3.0).contains(&o.r));
            }
        }
    }

    #[test]
    fn zero_vehicles() {
        let p = ModelParams::default();
        let sc = generate(&GenSpec::new(0, 3, Mode::Collision, 1), &p).unwrap();
        assert!(sc.vehicles.is_empty());
        assert_eq!(sc.obstacles.len(), 3);
    }

    #[test]
    fn impossible_spec_exhausts_budget() {
        let p = ModelParams::default();
        let spec = GenSpec {
            map_extent: 2.0,
            ..GenSpec::new(30, 0, Mode::Normal, 3)
        };
        assert!(matches!(generate(&spec, &p), Err(Error::Generation(_))));
    }

    #[test]
    fn save_load_round_trip() {
        let p = ModelParams::default();
        let sc = generate(&GenSpec::new(7, 4, Mode::Normal, 5), &p).unwrap();
        let back = load(&save(&sc)).unwrap();
        assert_eq!(back, sc);
        for (a, b) in back.vehicles.iter().zip(&sc.vehicles) {
            assert_eq!(a.x.to_bits(), b.x.to_bits());
            assert_eq!(a.theta.to_bits(), b.theta.to_bits());
        }
        let batch = vec![sc.clone(), Scene::default()];
        assert_eq!(load_batch(&save_batch(&batch)).unwrap(), batch);
        assert_eq!(load_batch(&save(&sc)).unwrap(), vec![sc]);
    }

    #[test]
    fn missing_field_is_named() {
        let err =
            load(br#"{"vehicles":[{"x":0,"y":0,"theta":0,"x_tar":1,"y_tar":1}]}"#).unwrap_err();
        match err {
            Error::Parse { path, message } => {
                assert!(message.contains("theta_tar"), "{message}");
                assert!(path.contains("vehicles[0]"), "{path}");
            }
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn omitted_speed_defaults_to_zero() {
        let sc = load(br#"{"vehicles":[{"x":0,"y":0,"theta":0,"x_tar":1,"y_tar":1,"theta_tar":0}],"obstacles":[]}"#).unwrap();
        assert_eq!(sc.vehicles[0].v, 0.0);
    }

    #[test]
    fn generated_targets_keep_avoidance_spacing() {
        let p = ModelParams::default();
        for mode in [Mode::Collision, Mode::Parking, Mode::Normal] {
            for seed in 0..5 {
                let sc = generate(&GenSpec::new(30, 10, mode, seed), &p).unwrap();
                for (i, a) in sc.vehicles.iter().enumerate() {
                    for b in &sc.vehicles[i + 1..] {
                        assert!((a.target() - b.target()).norm() >= target_spacing(&p));
                    }
                }
            }
        }
    }

    #[test]
    fn batch_file_name_format() {
        assert_eq!(
            GenSpec::new(10, 0, Mode::Collision, 1).batch_file_name(),
            "scenes_10v_0o_collision_1.json"
        );
    }

    #[test]
    fn mode_parses() {
        assert_eq!("parking".parse::<Mode>().unwrap(), Mode::Parking);
        assert!("drift".parse::<Mode>().is_err());
    }
}
