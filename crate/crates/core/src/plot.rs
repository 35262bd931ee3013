//! SVG rendering of trajectories, with an optional arrow map of one
//! vehicle's reference orientation field.

use std::fmt::Write as _;

use crate::controller::neighbors_of;
use crate::error::{Error, Result};
use crate::field::{ideal_orientation, Snapshot};
use crate::math::Vec2;
use crate::model::{ModelParams, Scene};
use crate::trajectory::Trajectory;

/// Plot scale: 1 px = 0.1 m.
pub const PX_PER_M: f64 = 10.0;
const MARGIN_M: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSample {
    pub point: Vec2,
    /// Unit reference orientation at `point`.
    pub u: Vec2,
}

/// Reference orientation of vehicle `ego` evaluated on a grid over
/// `[lo, hi]`: the vehicle is moved to each grid point with its heading,
/// speed and target unchanged while every other agent stays put. Points
/// inside an obstacle are skipped.
pub fn sample_field(
    scene: &Scene,
    ego: usize,
    p: &ModelParams,
    lo: Vec2,
    hi: Vec2,
    spacing: f64,
) -> Vec<FieldSample> {
    assert!(spacing > 0.0, "grid spacing must be positive");
    let mut out = Vec::new();
    let nx = ((hi.x - lo.x) / spacing).floor() as usize;
    let ny = ((hi.y - lo.y) / spacing).floor() as usize;
    let mut probe = scene.clone();
    for iy in 0..=ny {
        for ix in 0..=nx {
            let point = Vec2::new(lo.x + ix as f64 * spacing, lo.y + iy as f64 * spacing);
            if scene
                .obstacles
                .iter()
                .any(|o| (o.position() - point).norm() < o.r)
            {
                continue;
            }
            probe.vehicles[ego].x = point.x;
            probe.vehicles[ego].y = point.y;
            let snap = Snapshot::new(&probe, p);
            let neighbors = neighbors_of(&probe, ego, p);
            out.push(FieldSample {
                point,
                u: ideal_orientation(ego, &snap, &neighbors, p).u_hat,
            });
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldOptions {
    pub vehicle: usize,
    pub step: usize,
    /// Grid spacing in meters.
    pub spacing: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PlotOptions {
    pub field: Option<FieldOptions>,
}

struct Canvas {
    lo: Vec2,
    hi: Vec2,
}

impl Canvas {
    fn px(&self, q: Vec2) -> (f64, f64) {
        ((q.x - self.lo.x) * PX_PER_M, (self.hi.y - q.y) * PX_PER_M)
    }

    fn size(&self) -> (f64, f64) {
        (
            (self.hi.x - self.lo.x) * PX_PER_M,
            (self.hi.y - self.lo.y) * PX_PER_M,
        )
    }
}

fn color(i: usize) -> String {
    format!("hsl({},70%,42%)", (i * 137) % 360)
}

fn bounds(tr: &Trajectory, scenes: &[Scene]) -> Canvas {
    let mut lo = Vec2::new(f64::INFINITY, f64::INFINITY);
    let mut hi = -lo;
    let mut grow = |q: Vec2, r: f64| {
        lo = lo.inf(&(q - Vec2::new(r, r)));
        hi = hi.sup(&(q + Vec2::new(r, r)));
    };
    for sc in scenes {
        for s in &sc.vehicles {
            grow(s.position(), 0.0);
        }
    }
    for t in &tr.header.targets {
        grow(Vec2::new(t[0], t[1]), 0.0);
    }
    for o in &tr.header.obstacles {
        grow(o.position(), o.r);
    }
    if !lo.x.is_finite() {
        return Canvas {
            lo: Vec2::new(-MARGIN_M, -MARGIN_M),
            hi: Vec2::new(MARGIN_M, MARGIN_M),
        };
    }
    let m = Vec2::new(MARGIN_M, MARGIN_M);
    Canvas {
        lo: lo - m,
        hi: hi + m,
    }
}

/// Renders paths, start and target markers, obstacles and optionally a
/// field arrow map.
pub fn render_svg(tr: &Trajectory, opts: &PlotOptions) -> Result<String> {
    let p = &tr.header.params;
    let scenes = tr.scenes();
    let canvas = bounds(tr, &scenes);
    let (w, h) = canvas.size();
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.1}" height="{h:.1}" viewBox="0 0 {w:.1} {h:.1}">"#
    );
    s.push_str(
        r##"<defs><marker id="head" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="5" markerHeight="5" orient="auto"><path d="M0,0 L10,5 L0,10 z" fill="#555"/></marker></defs>
<rect width="100%" height="100%" fill="white"/>
"##,
    );

    if let Some(f) = opts.field {
        if f.vehicle >= tr.header.n_vehicles {
            return Err(Error::InvalidParam {
                name: "field vehicle",
                reason: format!(
                    "{} out of range (n_vehicles = {})",
                    f.vehicle, tr.header.n_vehicles
                ),
            });
        }
        if !(f.spacing.is_finite() && f.spacing > 0.0) {
            return Err(Error::InvalidParam {
                name: "field spacing",
                reason: "must be positive".into(),
            });
        }
        let Some(scene) = scenes.get(f.step) else {
            return Err(Error::InvalidParam {
                name: "field step",
                reason: format!(
                    "{} out of range (last step {})",
                    f.step,
                    scenes.len().saturating_sub(1)
                ),
            });
        };
        s.push_str(
            "<g class=\"field\" stroke=\"#555\" stroke-width=\"1\" marker-end=\"url(#head)\">\n",
        );
        let len = 0.8 * f.spacing;
        for a in sample_field(scene, f.vehicle, p, canvas.lo, canvas.hi, f.spacing) {
            let (x0, y0) = canvas.px(a.point - 0.5 * len * a.u);
            let (x1, y1) = canvas.px(a.point + 0.5 * len * a.u);
            let _ = writeln!(
                s,
                r#"<line x1="{x0:.2}" y1="{y0:.2}" x2="{x1:.2}" y2="{y1:.2}"/>"#
            );
        }
        s.push_str("</g>\n");
    }

    s.push_str("<g class=\"obstacles\" fill=\"#999\" stroke=\"#333\">\n");
    for o in &tr.header.obstacles {
        let (cx, cy) = canvas.px(o.position());
        let _ = writeln!(
            s,
            r#"<circle cx="{cx:.2}" cy="{cy:.2}" r="{:.2}"/>"#,
            o.r * PX_PER_M
        );
    }
    s.push_str("</g>\n");

    for i in 0..tr.header.n_vehicles {
        let c = color(i);
        let pts: Vec<String> = scenes
            .iter()
            .map(|sc| {
                let (x, y) = canvas.px(sc.vehicles[i].position());
                format!("{x:.2},{y:.2}")
            })
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline class="path" fill="none" stroke="{c}" stroke-width="2" points="{}"/>"#,
            pts.join(" ")
        );
        let r_px = p.r_veh * PX_PER_M;
        if let Some(first) = scenes.first() {
            let v = &first.vehicles[i];
            let (x, y) = canvas.px(v.position());
            let (hx, hy) = canvas.px(v.position() + p.r_veh * v.heading());
            let _ = writeln!(
                s,
                r#"<circle class="start" cx="{x:.2}" cy="{y:.2}" r="{r_px:.2}" fill="{c}" fill-opacity="0.3" stroke="{c}"/><line x1="{x:.2}" y1="{y:.2}" x2="{hx:.2}" y2="{hy:.2}" stroke="{c}" stroke-width="2"/>"#
            );
        }
        let t = tr.header.targets[i];
        let tq = Vec2::new(t[0], t[1]);
        let (x, y) = canvas.px(tq);
        let (hx, hy) = canvas.px(tq + p.r_veh * crate::math::heading(t[2]));
        let _ = writeln!(
            s,
            r#"<circle class="target" cx="{x:.2}" cy="{y:.2}" r="{r_px:.2}" fill="none" stroke="{c}" stroke-dasharray="4 3"/><line x1="{x:.2}" y1="{y:.2}" x2="{hx:.2}" y2="{hy:.2}" stroke="{c}" stroke-width="2"/>"#
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}
