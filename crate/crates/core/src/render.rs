//! Deterministic SVG figures of maps and overlays.

use std::collections::BTreeSet;
use std::fmt::Write;

use thiserror::Error;

use crate::curves::TriColoredCurve;
use crate::geom::{to_f64, Point};
use crate::planemap::{ColorId, PlanarMap};
use crate::scanner::Violation;

/// Fill colours for colours 1..=7; larger colours wrap around.
pub const PALETTE: [&str; 7] = ["crimson", "darkorange", "gold", "forestgreen", "royalblue", "darkviolet", "saddlebrown"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Layer {
    Regions,
    Vertices,
    UnitCircles,
    AnnulusCurves,
    Violations,
}

impl Layer {
    pub const ALL: [Layer; 5] =
        [Layer::Regions, Layer::Vertices, Layer::UnitCircles, Layer::AnnulusCurves, Layer::Violations];

    pub fn name(&self) -> &'static str {
        match self {
            Layer::Regions => "regions",
            Layer::Vertices => "vertices",
            Layer::UnitCircles => "unit-circles",
            Layer::AnnulusCurves => "annulus-curves",
            Layer::Violations => "violations",
        }
    }

    pub fn parse(s: &str) -> Option<Layer> {
        Layer::ALL.into_iter().find(|l| l.name() == s)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RenderError {
    #[error("scale must be positive, got {0}")]
    NonPositiveScale(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RenderSpec {
    pub layers: BTreeSet<Layer>,
    /// Pixels per unit.
    pub scale: f64,
    pub unit_circles: Vec<Point>,
    pub curves: Vec<TriColoredCurve>,
    pub violations: Vec<Violation>,
}

impl RenderSpec {
    pub fn new(layers: impl IntoIterator<Item = Layer>, scale: f64) -> Result<Self, RenderError> {
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(RenderError::NonPositiveScale(scale));
        }
        Ok(RenderSpec {
            layers: layers.into_iter().collect(),
            scale,
            unit_circles: vec![],
            curves: vec![],
            violations: vec![],
        })
    }

    pub fn all(scale: f64) -> Result<Self, RenderError> {
        RenderSpec::new(Layer::ALL, scale)
    }
}

pub fn fill(c: ColorId) -> &'static str {
    PALETTE[(c.max(1) as usize - 1) % PALETTE.len()]
}

const MARGIN: f64 = 10.0;

struct Frame {
    x0: f64,
    y1: f64,
    scale: f64,
    width: f64,
    height: f64,
}

impl Frame {
    fn x(&self, x: f64) -> String {
        num(MARGIN + (x - self.x0) * self.scale)
    }

    fn y(&self, y: f64) -> String {
        num(MARGIN + (self.y1 - y) * self.scale)
    }

    fn pt(&self, p: [f64; 2]) -> String {
        format!("{},{}", self.x(p[0]), self.y(p[1]))
    }
}

/// Fixed-precision number with trailing zeros removed.
fn num(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".to_string() } else { s.to_string() }
}

fn frame(map: &PlanarMap, spec: &RenderSpec) -> Frame {
    let b = map.window().bbox().to_f64();
    let (mut x0, mut y0, mut x1, mut y1) = (b[0], b[1], b[2], b[3]);
    let mut grow = |p: [f64; 2], r: f64| {
        x0 = x0.min(p[0] - r);
        y0 = y0.min(p[1] - r);
        x1 = x1.max(p[0] + r);
        y1 = y1.max(p[1] + r);
    };
    if spec.layers.contains(&Layer::UnitCircles) {
        for c in &spec.unit_circles {
            grow(c.to_f64(), 1.0);
        }
    }
    if spec.layers.contains(&Layer::AnnulusCurves) {
        for c in &spec.curves {
            for p in &c.points {
                grow(*p, 0.0);
            }
        }
    }
    Frame {
        x0,
        y1,
        scale: spec.scale,
        width: 2.0 * MARGIN + (x1 - x0) * spec.scale,
        height: 2.0 * MARGIN + (y1 - y0) * spec.scale,
    }
}

fn path_d(f: &Frame, pts: &[[f64; 2]], closed: bool) -> String {
    let mut d = String::new();
    for (i, p) in pts.iter().enumerate() {
        let _ = write!(d, "{}{}", if i == 0 { "M" } else { " L" }, f.pt(*p));
    }
    if closed {
        d.push_str(" Z");
    }
    d
}

/// SVG document for `map` with the layers selected in `spec`.
pub fn render(map: &PlanarMap, spec: &RenderSpec) -> String {
    let f = frame(map, spec);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = num(f.width),
        h = num(f.height)
    );
    let _ = writeln!(
        s,
        r#"<rect class="frame" x="0" y="0" width="{}" height="{}" fill="white" stroke="black"/>"#,
        num(f.width),
        num(f.height)
    );
    let on = |l: Layer| spec.layers.contains(&l);
    if on(Layer::Regions) {
        s.push_str("<g class=\"regions\" stroke=\"black\" stroke-width=\"0.5\">\n");
        for (i, r) in map.regions().iter().enumerate() {
            let _ = writeln!(
                s,
                r#"<path id="r{i}" d="{}" fill="{}"/>"#,
                path_d(&f, &r.poly.to_f64(), true),
                fill(r.color)
            );
        }
        s.push_str("</g>\n");
    }
    if on(Layer::Vertices) {
        s.push_str("<g class=\"vertices\" fill=\"black\">\n");
        for v in map.vertices() {
            let p = v.location.to_f64();
            let _ = writeln!(
                s,
                r#"<circle cx="{}" cy="{}" r="{}"/>"#,
                f.x(p[0]),
                f.y(p[1]),
                num(1.0 + v.chromaticity as f64)
            );
        }
        s.push_str("</g>\n");
    }
    if on(Layer::UnitCircles) {
        s.push_str("<g class=\"unit-circles\" fill=\"none\" stroke=\"black\" stroke-dasharray=\"4 2\">\n");
        for c in &spec.unit_circles {
            let p = c.to_f64();
            let _ = writeln!(s, r#"<circle cx="{}" cy="{}" r="{}"/>"#, f.x(p[0]), f.y(p[1]), num(f.scale));
        }
        s.push_str("</g>\n");
    }
    if on(Layer::AnnulusCurves) {
        s.push_str("<g class=\"annulus-curves\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\">\n");
        for c in &spec.curves {
            let _ = writeln!(s, r#"<path d="{}"/>"#, path_d(&f, &c.points, c.closed));
        }
        s.push_str("</g>\n");
    }
    if on(Layer::Violations) {
        s.push_str("<g class=\"violations\" stroke=\"magenta\" fill=\"magenta\">\n");
        for v in &spec.violations {
            let _ = writeln!(s, r#"<g class="{}">"#, v.kind.short());
            for p in &v.points {
                let p = p.to_f64();
                let _ = writeln!(s, r#"<circle cx="{}" cy="{}" r="5" fill-opacity="0.5"/>"#, f.x(p[0]), f.y(p[1]));
            }
            for (a, b) in &v.segments {
                let _ = writeln!(s, r#"<path d="{}" stroke-width="3"/>"#, path_d(&f, &[a.to_f64(), b.to_f64()], false));
            }
            if let ([a, b], Some(d)) = (v.points.as_slice(), &v.dist_sq) {
                let (a, b) = (a.to_f64(), b.to_f64());
                let _ = writeln!(s, r#"<path d="{}" stroke-width="1.5"/>"#, path_d(&f, &[a, b], false));
                let mid = [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0];
                let _ = writeln!(
                    s,
                    r#"<text x="{}" y="{}" font-size="12" stroke="none">{}</text>"#,
                    f.x(mid[0]),
                    f.y(mid[1]),
                    num(to_f64(d).sqrt())
                );
            }
            s.push_str("</g>\n");
        }
        s.push_str("</g>\n");
    }
    s.push_str("</svg>\n");
    s
}
