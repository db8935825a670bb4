//! Illustrative SVG drawing for planar point sets. No verdict depends on it.

use std::fmt::Write as _;

use tverberg_core::partitions::TverbergWitness;
use tverberg_core::{IndexSet, PointSet, Rat, Vector};

use crate::input::InputDocument;

const SIZE: f64 = 480.0;
const MARGIN: f64 = 40.0;
const COLORS: [&str; 6] = ["#1f77b4", "#ff7f0e", "#2ca02c", "#9467bd", "#8c564b", "#e377c2"];

/// Counter-clockwise hull vertices of the indexed points, computed exactly.
fn hull_polygon(s: &PointSet, part: IndexSet) -> Vec<Vector> {
    let mut pts: Vec<Vector> = part.iter().map(|i| s.point(i).to_vec()).collect();
    pts.sort();
    if pts.len() < 3 {
        return pts;
    }
    let cross =
        |o: &Vector, a: &Vector, b: &Vector| (&a[0] - &o[0]) * (&b[1] - &o[1]) - (&a[1] - &o[1]) * (&b[0] - &o[0]);
    let mut hull: Vec<Vector> = Vec::new();
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Vector>> =
            if pass == 0 { Box::new(pts.iter()) } else { Box::new(pts.iter().rev()) };
        for p in iter {
            while hull.len() >= start + 2 && !cross(&hull[hull.len() - 2], &hull[hull.len() - 1], p).is_positive() {
                hull.pop();
            }
            hull.push(p.clone());
        }
        hull.pop();
    }
    hull
}

struct Frame {
    min: (f64, f64),
    scale: f64,
}

impl Frame {
    fn new(s: &PointSet) -> Self {
        let xs: Vec<(f64, f64)> = s.points().iter().map(|p| (p[0].to_f64(), p[1].to_f64())).collect();
        let lo = xs.iter().fold((f64::MAX, f64::MAX), |a, p| (a.0.min(p.0), a.1.min(p.1)));
        let hi = xs.iter().fold((f64::MIN, f64::MIN), |a, p| (a.0.max(p.0), a.1.max(p.1)));
        let span = (hi.0 - lo.0).max(hi.1 - lo.1).max(1e-9);
        Frame { min: lo, scale: (SIZE - 2.0 * MARGIN) / span }
    }

    fn map(&self, p: &[Rat]) -> (f64, f64) {
        let x = MARGIN + (p[0].to_f64() - self.min.0) * self.scale;
        let y = SIZE - MARGIN - (p[1].to_f64() - self.min.1) * self.scale;
        (x, y)
    }
}

pub fn render(
    doc: &InputDocument,
    s: &PointSet,
    r: usize,
    witness: Option<&TverbergWitness>,
    cells: &[Vector],
) -> String {
    let f = Frame::new(s);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    if let Some(w) = witness {
        for (k, &part) in w.partition.parts.iter().enumerate() {
            let color = COLORS[k % COLORS.len()];
            let pts: Vec<String> = hull_polygon(s, part)
                .iter()
                .map(|p| {
                    let (x, y) = f.map(p);
                    format!("{x:.2},{y:.2}")
                })
                .collect();
            let _ = writeln!(
                out,
                r#"<polygon points="{}" fill="{color}" fill-opacity="0.15" stroke="{color}" stroke-width="2"/>"#,
                pts.join(" ")
            );
        }
    }
    for p in cells {
        let (x, y) = f.map(p);
        let _ = writeln!(out, r##"<rect x="{:.2}" y="{:.2}" width="6" height="6" fill="#d62728"/>"##, x - 3.0, y - 3.0);
    }
    if let Some(w) = witness {
        let (x, y) = f.map(&w.point);
        let _ = writeln!(out, r#"<circle cx="{x:.2}" cy="{y:.2}" r="6" fill="none" stroke="black" stroke-width="2"/>"#);
    }
    for (i, p) in s.points().iter().enumerate() {
        let (x, y) = f.map(p);
        let color = witness
            .and_then(|w| w.partition.parts.iter().position(|part| part.contains(i)))
            .map_or("black", |k| COLORS[k % COLORS.len()]);
        let _ = writeln!(out, r#"<circle cx="{x:.2}" cy="{y:.2}" r="4" fill="{color}"/>"#);
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-size="12">{}</text>"#,
            x + 6.0,
            y - 6.0,
            escape(&doc.label(i))
        );
    }
    if cells.is_empty() {
        let _ = writeln!(out, r#"<text x="10" y="20" font-size="14">T_{r} is empty</text>"#);
    } else {
        let _ = writeln!(out, r#"<text x="10" y="20" font-size="14">T_{r}: {} cell points</text>"#, cells.len());
    }
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
