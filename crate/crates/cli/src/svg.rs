//! Static SVG 1.1 pictures: the unit circle, arrows of the velocity
//! field `-f` on a polar grid, and trajectory polylines.

use std::fmt::Write;

use holosemi::flow::{self, FlowParams};
use holosemi::{Error, Expr, PolarGrid};
use num_complex::Complex64;

const SIZE: f64 = 480.0;
const MAX_ARROW: f64 = 0.08;
const MIN_ARROW: f64 = 0.015;

pub struct PlotOptions {
    pub arrow_grid: PolarGrid,
    pub t_end: f64,
    /// Samples per trajectory.
    pub steps: usize,
}

pub struct Plot {
    pub svg: String,
    pub arrows: usize,
    pub trajectories: usize,
    /// Trajectories that hit a numerical failure.
    pub skipped: usize,
}

/// Page coordinates; the disk is centred with the imaginary axis upwards.
fn xy(z: Complex64) -> (f64, f64) {
    let s = SIZE / 2.2;
    (SIZE / 2.0 + s * z.re, SIZE / 2.0 - s * z.im)
}

pub fn render(f: &Expr, starts: &[Complex64], opts: &PlotOptions) -> Result<Plot, Error> {
    let mut body = String::new();
    let (cx, cy) = xy(Complex64::new(0.0, 0.0));
    let r = SIZE / 2.2;
    let _ = writeln!(body, r#"<circle cx="{cx:.3}" cy="{cy:.3}" r="{r:.3}" fill="none" stroke="black" stroke-width="1.5"/>"#);

    let points = opts.arrow_grid.points();
    let mut field = Vec::with_capacity(points.len());
    for z in points {
        field.push((z, -f.eval(z)?));
    }
    let vmax = field.iter().map(|p| p.1.norm()).fold(0.0, f64::max);
    let _ = writeln!(body, r##"<g stroke="#555" stroke-width="1" marker-end="url(#head)">"##);
    let mut arrows = 0;
    for (z, v) in &field {
        if vmax == 0.0 || v.norm() == 0.0 {
            continue;
        }
        let len = (MAX_ARROW * v.norm() / vmax).max(MIN_ARROW);
        let tip = z + v / v.norm() * len;
        let ((x1, y1), (x2, y2)) = (xy(*z), xy(tip));
        let _ = writeln!(body, r#"<line x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}"/>"#);
        arrows += 1;
    }
    body.push_str("</g>\n");

    let params = FlowParams::default();
    let times: Vec<f64> = (0..=opts.steps).map(|k| opts.t_end * k as f64 / opts.steps.max(1) as f64).collect();
    let (mut drawn, mut skipped) = (0, 0);
    let _ = writeln!(body, r##"<g fill="none" stroke="#c0392b" stroke-width="1.2">"##);
    for &z0 in starts {
        let tr = match flow::trajectory(f, z0, &times, &params) {
            Ok(tr) => tr,
            Err(Error::DiskExit { .. } | Error::StepUnderflow { .. } | Error::Eval(_)) => {
                skipped += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        let pts: Vec<String> = tr
            .points
            .iter()
            .map(|&(_, z)| {
                let (x, y) = xy(z);
                format!("{x:.3},{y:.3}")
            })
            .collect();
        let _ = writeln!(body, r#"<polyline points="{}"/>"#, pts.join(" "));
        let (x, y) = xy(z0);
        let _ = writeln!(body, r##"<circle cx="{x:.3}" cy="{y:.3}" r="2.5" fill="#c0392b"/>"##);
        drawn += 1;
    }
    body.push_str("</g>\n");

    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(
        svg,
        r##"<defs><marker id="head" markerWidth="6" markerHeight="6" refX="5" refY="3" orient="auto"><path d="M0,0 L6,3 L0,6 z" fill="#555"/></marker></defs>"##
    );
    let _ = writeln!(svg, r#"<rect width="{SIZE}" height="{SIZE}" fill="white"/>"#);
    svg.push_str(&body);
    svg.push_str("</svg>\n");
    Ok(Plot { svg, arrows, trajectories: drawn, skipped })
}
