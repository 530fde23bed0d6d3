//! Deterministic SVG figures of planar bodies, cones and hidden sets.
//!
//! Coordinates are rounded to three decimals for display only.

use std::fmt::Write;

use convhide_core::body::BodyKind;
use convhide_core::numeric::{from_f64, to_f64};
use convhide_core::plane::clip;
use convhide_core::{ConvexBodyOracle, ConvexSet, Error, PolyhedralCone, QVector, Result};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const CURVE_SAMPLES: usize = 240;

/// What to draw: a planar body, optionally its cone, witness points and
/// certificate chords with their crossing points.
#[derive(Debug, Clone)]
pub struct Scene {
    pub body: ConvexSet,
    pub cone: Option<PolyhedralCone>,
    pub points: Vec<QVector>,
    pub chords: Vec<(QVector, QVector)>,
    pub crossings: Vec<QVector>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Viewport {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Viewport {
    /// A window around the apex region, widened to contain every point.
    pub fn fit(points: &[QVector]) -> Viewport {
        let (mut x0, mut x1, mut y0, mut y1) = (-3.0f64, 3.0f64, -1.0f64, 5.0f64);
        for p in points {
            let (x, y) = (to_f64(&p[0]), to_f64(&p[1]));
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        let (dx, dy) = ((x1 - x0) * 0.1, (y1 - y0) * 0.1);
        Viewport { x0: x0 - dx, x1: x1 + dx, y0: y0 - dy, y1: y1 + dy }
    }

    fn map(&self, x: f64, y: f64) -> (f64, f64) {
        ((x - self.x0) / (self.x1 - self.x0) * WIDTH, (self.y1 - y) / (self.y1 - self.y0) * HEIGHT)
    }

    fn corners(&self) -> Vec<QVector> {
        let (x0, x1, y0, y1) = (from_f64(self.x0), from_f64(self.x1), from_f64(self.y0), from_f64(self.y1));
        vec![
            QVector::new(vec![x0.clone(), y0.clone()]),
            QVector::new(vec![x1.clone(), y0]),
            QVector::new(vec![x1, y1.clone()]),
            QVector::new(vec![x0, y1]),
        ]
    }
}

fn num(v: f64) -> String {
    let s = format!("{v:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

fn check_planar(dim: usize) -> Result<()> {
    if dim == 2 {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension(dim))
    }
}

fn clipped(view: &Viewport, rows: &[(QVector, convhide_core::Rational)]) -> Vec<(f64, f64)> {
    let mut poly = view.corners();
    for (a, b) in rows {
        poly = clip(&poly, a, b);
    }
    poly.iter().map(|p| (to_f64(&p[0]), to_f64(&p[1]))).collect()
}

fn epigraph_region(view: &Viewport, kind: BodyKind, lift: f64) -> Vec<(f64, f64)> {
    let f = |x: f64| match kind {
        BodyKind::Parabola => x * x,
        BodyKind::Hyperbola => (x * x + 1.0).sqrt(),
    } + lift;
    let mut out: Vec<(f64, f64)> = (0..=CURVE_SAMPLES)
        .map(|i| {
            let x = view.x0 + (view.x1 - view.x0) * i as f64 / CURVE_SAMPLES as f64;
            (x, f(x).clamp(view.y0, view.y1))
        })
        .collect();
    out.push((view.x1, view.y1));
    out.push((view.x0, view.y1));
    out
}

fn polygon(out: &mut String, view: &Viewport, pts: &[(f64, f64)], class: &str) {
    if pts.len() < 3 {
        return;
    }
    let coords: Vec<String> = pts
        .iter()
        .map(|&(x, y)| {
            let (u, v) = view.map(x, y);
            format!("{},{}", num(u), num(v))
        })
        .collect();
    writeln!(out, r#"  <polygon class="{class}" points="{}"/>"#, coords.join(" ")).expect("string write");
}

pub fn render_svg(scene: &Scene, view: &Viewport) -> Result<String> {
    check_planar(scene.body.dim())?;
    if let Some(cone) = &scene.cone {
        check_planar(cone.dim())?;
    }
    for p in scene.points.iter().chain(&scene.crossings).chain(scene.chords.iter().flat_map(|(a, b)| [a, b])) {
        check_planar(p.dim())?;
    }
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    )
    .expect("string write");
    out.push_str(concat!(
        "  <style>\n",
        "    .cone { fill: #dde8f4; stroke: #7a9cc6; stroke-width: 1; }\n",
        "    .body { fill: #f4e3c4; fill-opacity: 0.85; stroke: #a0522d; stroke-width: 2; }\n",
        "    .chord { stroke: #333; stroke-width: 1; stroke-dasharray: 4 3; }\n",
        "    .point { fill: #b22222; }\n",
        "    .crossing { fill: #2e8b57; }\n",
        "  </style>\n",
    ));
    if let Some(cone) = &scene.cone {
        let rows: Vec<_> = cone.normals().into_iter().map(|n| (n, convhide_core::Rational::from_integer(0.into()))).collect();
        polygon(&mut out, view, &clipped(view, &rows), "cone");
    }
    let region = match &scene.body {
        ConvexSet::Body(ConvexBodyOracle::Epigraph { kind, lift }) => epigraph_region(view, *kind, to_f64(lift)),
        ConvexSet::Body(ConvexBodyOracle::Polyhedral(h)) => clipped(view, h.rows()),
        ConvexSet::Polyhedron(_) => clipped(view, scene.body.hpolyhedron()?.rows()),
    };
    polygon(&mut out, view, &region, "body");
    for (a, b) in &scene.chords {
        let (u0, v0) = view.map(to_f64(&a[0]), to_f64(&a[1]));
        let (u1, v1) = view.map(to_f64(&b[0]), to_f64(&b[1]));
        writeln!(out, r#"  <line class="chord" x1="{}" y1="{}" x2="{}" y2="{}"/>"#, num(u0), num(v0), num(u1), num(v1))
            .expect("string write");
    }
    for (set, class, r) in [(&scene.points, "point", 4.0), (&scene.crossings, "crossing", 3.0)] {
        for p in set {
            let (u, v) = view.map(to_f64(&p[0]), to_f64(&p[1]));
            writeln!(out, r#"  <circle class="{class}" cx="{}" cy="{}" r="{r}"/>"#, num(u), num(v)).expect("string write");
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}
