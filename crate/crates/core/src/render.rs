//! SVG drawings of shadow complexes.

use std::fmt::Write;

use crate::arrangement::OneComplex;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RenderSpec {
    /// Stroke width in drawing units (one unit = one coordinate unit).
    pub stroke_scale: Rational,
    /// Blank border around the drawing, in coordinate units.
    pub margin: Rational,
    /// Annotate every vertex with its exact coordinates.
    pub labels: bool,
    /// Pixels per coordinate unit.
    pub unit_px: u32,
}

impl Default for RenderSpec {
    fn default() -> Self {
        RenderSpec {
            stroke_scale: Rational::new(1, 20),
            margin: Rational::new(1, 2),
            labels: false,
            unit_px: 80,
        }
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum RenderError {
    #[error("stroke scale and margin must be positive")]
    NonPositive,
    #[error("only planar complexes can be drawn, got dimension {0}")]
    NotPlanar(usize),
}

fn fmt(x: f64) -> String {
    let s = format!("{x:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

/// Draws `cx` with `y` pointing up. Output depends only on the inputs.
pub fn render_shadow(cx: &OneComplex, spec: &RenderSpec) -> Result<String, RenderError> {
    if spec.stroke_scale.signum() <= 0 || spec.margin.signum() <= 0 || spec.unit_px == 0 {
        return Err(RenderError::NonPositive);
    }
    let all: Vec<_> = cx.vertices.iter().chain(&cx.isolated).collect();
    if let Some(p) = all.iter().find(|p| p.dim() != 2) {
        return Err(RenderError::NotPlanar(p.dim()));
    }
    let px = f64::from(spec.unit_px);
    let margin = spec.margin.to_f64();
    let (mut lo, mut hi) = ([0.0f64; 2], [0.0f64; 2]);
    if let Some(first) = all.first() {
        lo = [first.coords()[0].to_f64(), first.coords()[1].to_f64()];
        hi = lo;
        for p in &all {
            for k in 0..2 {
                let c = p.coords()[k].to_f64();
                lo[k] = lo[k].min(c);
                hi[k] = hi[k].max(c);
            }
        }
    }
    let w = (hi[0] - lo[0] + 2.0 * margin) * px;
    let h = (hi[1] - lo[1] + 2.0 * margin) * px;
    let map = |p: &crate::curve::Point| {
        let x = (p.coords()[0].to_f64() - lo[0] + margin) * px;
        let y = (hi[1] - p.coords()[1].to_f64() + margin) * px;
        (fmt(x), fmt(y))
    };
    let stroke = fmt(spec.stroke_scale.to_f64() * px);
    let radius = fmt(spec.stroke_scale.to_f64() * px * 2.5);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = fmt(w),
        h = fmt(h)
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<g stroke="black" stroke-width="{stroke}" stroke-linecap="round">"#);
    for &(a, b) in &cx.edges {
        let (x1, y1) = map(&cx.vertices[a]);
        let (x2, y2) = map(&cx.vertices[b]);
        let _ = writeln!(s, r#"<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"/>"#);
    }
    s.push_str("</g>\n");

    let mut degree = vec![0usize; cx.vertices.len()];
    for &(a, b) in &cx.edges {
        degree[a] += 1;
        degree[b] += 1;
    }
    for (p, _) in cx.vertices.iter().zip(&degree).filter(|(_, &d)| d >= 3) {
        let (x, y) = map(p);
        let _ = writeln!(s, r#"<circle class="branch" cx="{x}" cy="{y}" r="{radius}" fill="red"/>"#);
    }
    for p in &cx.isolated {
        let (x, y) = map(p);
        let _ = writeln!(s, r#"<circle class="point" cx="{x}" cy="{y}" r="{radius}" fill="black"/>"#);
    }
    if spec.labels {
        let size = fmt(px / 5.0);
        for p in all {
            let (x, y) = map(p);
            let c = p.coords();
            let _ = writeln!(
                s,
                r#"<text x="{x}" y="{y}" font-size="{size}" dx="4" dy="-4">({}, {})</text>"#,
                c[0], c[1]
            );
        }
    }
    s.push_str("</svg>\n");
    Ok(s)
}
