//! Deterministic SVG rendering of coverings and separation reports.
//!
//! Disks drawn under the disk metric are converted to their Euclidean
//! counterparts (a metric disk of radius `r` at `c` is the Euclidean disk
//! with center `c (1 - r^2) / (1 - r^2 |c|^2)` and radius
//! `r (1 - |c|^2) / (1 - r^2 |c|^2)`). Output is plain text with fixed
//! 6-digit coordinates, so renders diff cleanly.

use std::fmt::Write as _;
use std::path::Path;

use crate::covering::Covering;
use crate::error::Result;
use crate::geometry::{Metric, PartedSet, Point, PointSet};
use crate::separation::{SeparationParams, SeparationReport};
use crate::weight::Weight;

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];
const CANVAS: f64 = 720.0;

struct Frame {
    min_x: f64,
    min_y: f64,
    scale: f64,
}

impl Frame {
    fn around(points: &[(f64, f64, f64)]) -> Frame {
        let mut min_x = f64::INFINITY;
        let mut min_y = f64::INFINITY;
        let mut max_x = f64::NEG_INFINITY;
        let mut max_y = f64::NEG_INFINITY;
        for &(x, y, r) in points {
            min_x = min_x.min(x - r);
            min_y = min_y.min(y - r);
            max_x = max_x.max(x + r);
            max_y = max_y.max(y + r);
        }
        if !min_x.is_finite() {
            (min_x, min_y, max_x, max_y) = (-1.0, -1.0, 1.0, 1.0);
        }
        let span = (max_x - min_x).max(max_y - min_y).max(1e-9);
        let margin = 0.08 * span;
        Frame {
            min_x: min_x - margin,
            min_y: min_y - margin,
            scale: CANVAS / (span + 2.0 * margin),
        }
    }

    fn x(&self, x: f64) -> f64 {
        (x - self.min_x) * self.scale
    }

    /// SVG y grows downward.
    fn y(&self, y: f64) -> f64 {
        CANVAS - (y - self.min_y) * self.scale
    }

    fn r(&self, r: f64) -> f64 {
        r * self.scale
    }
}

/// Euclidean center/radius of a metric disk.
fn euclidean_disk(metric: Metric, center: Point, radius: f64) -> (f64, f64, f64) {
    match metric {
        Metric::Plane => (center.re, center.im, radius),
        Metric::Disk => {
            let a = center.abs();
            let denom = 1.0 - radius * radius * a * a;
            let scale = (1.0 - radius * radius) / denom;
            let r = radius * (1.0 - a * a) / denom;
            (center.re * scale, center.im * scale, r)
        }
    }
}

fn header(out: &mut String) {
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {CANVAS} {}\" \
         font-family=\"monospace\" font-size=\"12\">\n",
        CANVAS + 60.0
    ));
    out.push_str(&format!(
        "<rect x=\"0\" y=\"0\" width=\"{CANVAS}\" height=\"{}\" fill=\"white\"/>\n",
        CANVAS + 60.0
    ));
}

fn draw_unit_circle(out: &mut String, frame: &Frame) {
    let _ = writeln!(
        out,
        "<circle cx=\"{:.6}\" cy=\"{:.6}\" r=\"{:.6}\" fill=\"none\" stroke=\"#bbbbbb\" stroke-dasharray=\"4 4\"/>",
        frame.x(0.0),
        frame.y(0.0),
        frame.r(1.0)
    );
}

fn draw_points(out: &mut String, frame: &Frame, set: &PointSet, part_of: impl Fn(usize) -> usize) {
    for (i, p) in set.points().iter().enumerate() {
        let color = PALETTE[part_of(i) % PALETTE.len()];
        let _ = writeln!(
            out,
            "<circle cx=\"{:.6}\" cy=\"{:.6}\" r=\"2.5\" fill=\"{}\"/>",
            frame.x(p.re),
            frame.y(p.im),
            color
        );
    }
}

/// Renders a covering: disks to scale, points colored per part, legend with
/// the covering constants.
pub fn render_covering(parted: &PartedSet, cov: &Covering) -> String {
    let set = parted.set();
    let metric = set.metric();
    let mut shapes: Vec<(f64, f64, f64)> = set
        .points()
        .iter()
        .map(|p| (p.re, p.im, 0.0))
        .collect();
    let disks: Vec<(f64, f64, f64)> = cov
        .centers
        .iter()
        .zip(&cov.radii)
        .map(|(&c, &r)| euclidean_disk(metric, set.point(c), r))
        .collect();
    shapes.extend_from_slice(&disks);
    if metric == Metric::Disk {
        shapes.push((0.0, 0.0, 1.0));
    }
    let frame = Frame::around(&shapes);

    let mut out = String::new();
    header(&mut out);
    if metric == Metric::Disk {
        draw_unit_circle(&mut out, &frame);
    }
    for (x, y, r) in &disks {
        let _ = writeln!(
            out,
            "<circle cx=\"{:.6}\" cy=\"{:.6}\" r=\"{:.6}\" fill=\"none\" stroke=\"#444444\"/>",
            frame.x(*x),
            frame.y(*y),
            frame.r(*r)
        );
    }
    draw_points(&mut out, &frame, set, |i| parted.part_of(i));
    let k = &cov.constants;
    let _ = writeln!(
        out,
        "<text x=\"8\" y=\"{:.1}\">a={:.6e} b={:.6e} B1={:.6e} B2={:.6e} eps={:.6e}</text>",
        CANVAS + 22.0,
        k.a,
        k.b,
        k.b1,
        k.b2,
        k.eps
    );
    let _ = writeln!(
        out,
        "<text x=\"8\" y=\"{:.1}\">{} centers covering {} points in {} parts</text>",
        CANVAS + 42.0,
        cov.centers.len(),
        set.len(),
        parted.n_parts()
    );
    out.push_str("</svg>\n");
    out
}

/// Renders a separation check: each point with its `eps e^{-C p}` disk, the
/// violating pair (if any) highlighted.
pub fn render_separation(
    set: &PointSet,
    w: &Weight,
    params: &SeparationParams,
    report: &SeparationReport,
) -> Result<String> {
    let metric = set.metric();
    let p = w.eval_many(set.points())?;
    let disks: Vec<(f64, f64, f64)> = set
        .points()
        .iter()
        .zip(&p)
        .map(|(pt, &pv)| euclidean_disk(metric, *pt, params.radius(pv)))
        .collect();
    let mut shapes = disks.clone();
    if metric == Metric::Disk {
        shapes.push((0.0, 0.0, 1.0));
    }
    let frame = Frame::around(&shapes);

    let mut out = String::new();
    header(&mut out);
    if metric == Metric::Disk {
        draw_unit_circle(&mut out, &frame);
    }
    let bad = report.witness;
    for (i, (x, y, r)) in disks.iter().enumerate() {
        let stroke = match bad {
            Some((a, b)) if i == a || i == b => "#d62728",
            _ => "#1f77b4",
        };
        let _ = writeln!(
            out,
            "<circle cx=\"{:.6}\" cy=\"{:.6}\" r=\"{:.6}\" fill=\"none\" stroke=\"{}\"/>",
            frame.x(*x),
            frame.y(*y),
            frame.r(*r),
            stroke
        );
    }
    draw_points(&mut out, &frame, set, |_| 0);
    let verdict = if report.separated { "separated" } else { "NOT separated" };
    let _ = writeln!(
        out,
        "<text x=\"8\" y=\"{:.1}\">eps={:.6e} C={:.6e}: {} (min margin {:.6e})</text>",
        CANVAS + 22.0,
        params.eps,
        params.c,
        verdict,
        report.min_margin
    );
    out.push_str("</svg>\n");
    Ok(out)
}

pub fn write_svg(path: &Path, content: &str) -> Result<()> {
    std::fs::write(path, content)?;
    Ok(())
}
