//! Deterministic SVG 1.1 drawings of the face arrangement and curve.

use std::fmt::Write as _;

use tropical_core::curve::{curve_graph_of, VertexKind};
use tropical_core::{build_arrangement, Exponent, RPoint, Result, TropicalSeries};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum FillMode {
    #[default]
    None,
    /// Color every face by a hash of its exponent.
    Exponent,
    /// Shade only faces whose closure avoids the boundary.
    Interior,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RenderSpec {
    /// Side of the square canvas in pixels; at least 64.
    pub canvas: u32,
    pub stroke: f64,
    pub fill: FillMode,
    pub marker_radius: f64,
}

impl Default for RenderSpec {
    fn default() -> Self {
        RenderSpec {
            canvas: 512,
            stroke: 2.0,
            fill: FillMode::None,
            marker_radius: 4.0,
        }
    }
}

struct Frame {
    pad: f64,
    side: f64,
}

impl Frame {
    fn map(&self, p: &RPoint) -> (String, String) {
        let (x, y) = p.to_f64();
        (
            fmt_coord(self.pad + x * self.side),
            fmt_coord(self.pad + (1.0 - y) * self.side),
        )
    }
}

fn fmt_coord(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}

fn exponent_color(e: &Exponent) -> String {
    let h = (e.i.wrapping_mul(73_856_093) ^ e.j.wrapping_mul(19_349_663)) as u64;
    let h = h.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    let channel = |shift: u32| 128 + ((h >> shift) & 0x7F) as u8;
    format!("#{:02x}{:02x}{:02x}", channel(8), channel(24), channel(40))
}

/// Draws the square, optional face fills, the curve (split at those points
/// of `points` lying on it) and markers at `points`.
pub fn render_svg(f: &TropicalSeries, points: &[RPoint], spec: &RenderSpec) -> Result<String> {
    let canvas = spec.canvas.max(64);
    let arr = build_arrangement(f)?;
    let on_curve: Vec<RPoint> = points
        .iter()
        .filter(|p| p.in_omega() && f.is_on_curve(p).unwrap_or(false))
        .cloned()
        .collect();
    let graph = curve_graph_of(&arr, f, &on_curve)?;

    let pad = (canvas as f64 * 0.05).round();
    let frame = Frame { pad, side: canvas as f64 - 2.0 * pad };
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{canvas}" height="{canvas}" viewBox="0 0 {canvas} {canvas}">"#
    );
    let _ = writeln!(svg, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##);

    if spec.fill != FillMode::None {
        for face in &arr.faces {
            let color = match spec.fill {
                FillMode::Exponent => exponent_color(&face.exponent),
                FillMode::Interior if !face.touches_boundary() => "#f4d58d".into(),
                _ => continue,
            };
            let pts: Vec<String> = face
                .polygon
                .iter()
                .map(|p| {
                    let (x, y) = frame.map(p);
                    format!("{x},{y}")
                })
                .collect();
            let _ = writeln!(
                svg,
                r#"<polygon class="face" data-exponent="{},{}" points="{}" fill="{color}"/>"#,
                face.exponent.i,
                face.exponent.j,
                pts.join(" ")
            );
        }
    }

    let _ = writeln!(
        svg,
        r##"<rect class="domain" x="{p}" y="{p}" width="{s}" height="{s}" fill="none" stroke="#000000" stroke-width="1"/>"##,
        p = fmt_coord(frame.pad),
        s = fmt_coord(frame.side)
    );

    let stroke = fmt_coord(spec.stroke);
    for &(a, b) in &graph.edges {
        let (va, vb) = (&graph.vertices[a], &graph.vertices[b]);
        let leg = va.kind == VertexKind::Boundary || vb.kind == VertexKind::Boundary;
        let (x1, y1) = frame.map(&va.point);
        let (x2, y2) = frame.map(&vb.point);
        let _ = writeln!(
            svg,
            r##"<line class="{}" x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="#1f3a93" stroke-width="{stroke}"/>"##,
            if leg { "edge leg" } else { "edge" }
        );
    }

    let r = fmt_coord(spec.marker_radius);
    for p in points {
        let (cx, cy) = frame.map(p);
        let _ = writeln!(svg, r##"<circle class="point" cx="{cx}" cy="{cy}" r="{r}" fill="#c0392b"/>"##);
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use tropical_core::Rational;

    fn count(svg: &str, needle: &str) -> usize {
        svg.matches(needle).count()
    }

    #[test]
    fn plateau_has_eight_segments_four_legs() {
        let f = TropicalSeries::plateau(Rational::new(1, 3));
        let svg = render_svg(&f, &[], &RenderSpec::default()).unwrap();
        assert_eq!(count(&svg, "<line "), 8);
        assert_eq!(count(&svg, r#"class="edge leg""#), 4);
        assert!(svg.starts_with("<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\""));
    }

    #[test]
    fn zero_series_is_outline_only() {
        let svg = render_svg(&TropicalSeries::zero(), &[], &RenderSpec::default()).unwrap();
        assert_eq!(count(&svg, "<line "), 0);
        assert_eq!(count(&svg, r#"class="domain""#), 1);
    }

    #[test]
    fn fills_and_markers() {
        let f = TropicalSeries::plateau(Rational::new(1, 3));
        let p = RPoint::new(Rational::new(1, 3), Rational::new(1, 2));
        let spec = RenderSpec { fill: FillMode::Interior, ..RenderSpec::default() };
        let svg = render_svg(&f, std::slice::from_ref(&p), &spec).unwrap();
        assert_eq!(count(&svg, "<polygon "), 1);
        assert_eq!(count(&svg, "<circle "), 1);
        // The marked point splits one side of the central square.
        assert_eq!(count(&svg, "<line "), 9);
        let spec = RenderSpec { fill: FillMode::Exponent, ..RenderSpec::default() };
        assert_eq!(count(&render_svg(&f, &[p], &spec).unwrap(), "<polygon "), 5);
    }

    #[test]
    fn coordinates_are_stable() {
        assert_eq!(fmt_coord(25.6), "25.6");
        assert_eq!(fmt_coord(12.0), "12");
        assert_eq!(fmt_coord(-0.0001), "0");
    }
}
