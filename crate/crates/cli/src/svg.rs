//! Ternary plots of three-state subdivisions. Barycentric coordinates are
//! projected onto an equilateral triangle; this is the only place where
//! rationals become floats.

use std::fmt::Write;

use num_traits::ToPrimitive;
use voi::{Belief, Subdivision};

const SIDE: f64 = 400.0;
const MARGIN: f64 = 40.0;

const PALETTE: [&str; 8] = [
    "#e41a1c", "#377eb8", "#4daf4a", "#984ea3", "#ff7f00", "#ffff33", "#a65628", "#f781bf",
];

/// Triangle corners for states 1, 2 and 3: bottom left, bottom right, top.
pub fn corners() -> [(f64, f64); 3] {
    let h = SIDE * 3f64.sqrt() / 2.0;
    [
        (MARGIN, MARGIN + h),
        (MARGIN + SIDE, MARGIN + h),
        (MARGIN + SIDE / 2.0, MARGIN),
    ]
}

pub fn project(x: &Belief) -> (f64, f64) {
    let c = corners();
    x.coords()
        .iter()
        .zip(c)
        .fold((0.0, 0.0), |(px, py), (w, (cx, cy))| {
            let w = w.to_f64().unwrap_or(0.0);
            (px + w * cx, py + w * cy)
        })
}

/// Kinds of overlay marker, mirroring the usual figure conventions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Marker {
    /// Support of the spread distribution.
    Support,
    /// Atom a collapse moves mass to, or the atom being split.
    Target,
    /// Residual atom shared by both sides.
    Residual,
}

impl Marker {
    fn class(self) -> &'static str {
        match self {
            Marker::Support => "support",
            Marker::Target => "target",
            Marker::Residual => "residual",
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Overlay {
    pub title: String,
    pub markers: Vec<(Marker, Belief)>,
    /// Segments drawn dashed, e.g. from a split atom to its two halves.
    pub segments: Vec<(Belief, Belief)>,
}

fn polygon_points(points: &[(f64, f64)]) -> String {
    points
        .iter()
        .map(|(x, y)| format!("{x:.3},{y:.3}"))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Projected vertices in counterclockwise order around their centroid.
fn ordered_outline(vertices: &[Belief]) -> Vec<(f64, f64)> {
    let mut pts: Vec<(f64, f64)> = vertices.iter().map(project).collect();
    let n = pts.len() as f64;
    let cx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let cy = pts.iter().map(|p| p.1).sum::<f64>() / n;
    pts.sort_by(|a, b| {
        let ta = (a.1 - cy).atan2(a.0 - cx);
        let tb = (b.1 - cy).atan2(b.0 - cx);
        ta.total_cmp(&tb)
    });
    pts
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

pub fn render(
    states: &[String],
    actions: &[String],
    sub: &Subdivision,
    prior: Option<&Belief>,
    overlay: Option<&Overlay>,
) -> String {
    let c = corners();
    let width = SIDE + 2.0 * MARGIN;
    let height = SIDE * 3f64.sqrt() / 2.0 + 2.0 * MARGIN;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.3} {height:.3}">"#
    );
    let _ = writeln!(
        out,
        r#"  <g id="cells" stroke="black" stroke-width="1" fill-opacity="0.45">"#
    );
    for (i, cell) in sub.cells().iter().enumerate() {
        let outline = ordered_outline(cell.geometry.vertices());
        let _ = writeln!(
            out,
            r#"    <polygon class="cell" data-cell="{i}" data-action="{}" fill="{}" points="{}"/>"#,
            escape(&actions[cell.action]),
            PALETTE[i % PALETTE.len()],
            polygon_points(&outline)
        );
    }
    let _ = writeln!(out, "  </g>");
    let _ = writeln!(
        out,
        r#"  <polygon id="simplex" fill="none" stroke="black" stroke-width="2" points="{}"/>"#,
        polygon_points(&c)
    );
    let _ = writeln!(
        out,
        r#"  <g id="labels" font-family="sans-serif" font-size="14">"#
    );
    let offsets = [(-24.0, 18.0), (8.0, 18.0), (-8.0, -10.0)];
    for ((label, (x, y)), (dx, dy)) in states.iter().zip(c).zip(offsets) {
        let _ = writeln!(
            out,
            r#"    <text x="{:.3}" y="{:.3}">{}</text>"#,
            x + dx,
            y + dy,
            escape(label)
        );
    }
    for (i, cell) in sub.cells().iter().enumerate() {
        let (x, y) = ordered_outline(cell.geometry.vertices())
            .iter()
            .fold((0.0, 0.0), |(a, b), p| (a + p.0, b + p.1));
        let k = cell.geometry.vertices().len() as f64;
        let _ = writeln!(
            out,
            r#"    <text class="cell-label" data-cell="{i}" x="{:.3}" y="{:.3}" text-anchor="middle">{}</text>"#,
            x / k,
            y / k,
            escape(&actions[cell.action])
        );
    }
    let _ = writeln!(out, "  </g>");
    if let Some(ov) = overlay {
        let _ = writeln!(
            out,
            r#"  <g id="overlay" data-title="{}">"#,
            escape(&ov.title)
        );
        for (a, b) in &ov.segments {
            let (x1, y1) = project(a);
            let (x2, y2) = project(b);
            let _ = writeln!(
                out,
                r#"    <line class="split" x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}" stroke="black" stroke-dasharray="4 3"/>"#
            );
        }
        for (kind, x) in &ov.markers {
            let (cx, cy) = project(x);
            let style = match kind {
                Marker::Support => r#"r="4" fill="black""#,
                Marker::Target => r#"r="5" fill="white" stroke="black" stroke-width="2""#,
                Marker::Residual => r#"r="4" fill="gray" stroke="black""#,
            };
            let _ = writeln!(
                out,
                r#"    <circle class="{}" cx="{cx:.3}" cy="{cy:.3}" {style}/>"#,
                kind.class()
            );
        }
        let _ = writeln!(out, "  </g>");
    }
    if let Some(mu) = prior {
        let (cx, cy) = project(mu);
        let _ = writeln!(
            out,
            r#"  <circle id="prior" cx="{cx:.3}" cy="{cy:.3}" r="6" fill="none" stroke="black" stroke-width="2"/>"#
        );
    }
    out.push_str("</svg>\n");
    out
}
