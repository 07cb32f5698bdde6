//! SVG rendering of planar complexes. Coordinates are converted to `f64`
//! here and nowhere else.

use std::fmt::Write;

use crate::complex::ImageComplex;
use crate::scalar::Scalar;

const SIZE: f64 = 400.0;
const MARGIN: f64 = 20.0;

/// Splits the edges into maximal chains whose interior vertices have degree
/// 2. Closed chains repeat their first vertex at the end.
pub fn chains<S: Scalar>(complex: &ImageComplex<S>) -> Vec<Vec<usize>> {
    let mut used = vec![false; complex.edges().len()];
    let mut out = Vec::new();
    let walk = |start: usize, first: usize, used: &mut Vec<bool>| {
        let mut chain = vec![start];
        let (mut v, mut e) = (start, first);
        loop {
            used[e] = true;
            v = complex.other_end(e, v);
            chain.push(v);
            if complex.degree(v) != 2 || v == start {
                break;
            }
            match complex.incidence(v).iter().find(|&&f| !used[f]) {
                Some(&f) => e = f,
                None => break,
            }
        }
        chain
    };
    for v in 0..complex.vertices().len() {
        if complex.degree(v) == 2 {
            continue;
        }
        for &e in complex.incidence(v) {
            if !used[e] {
                out.push(walk(v, e, &mut used));
            }
        }
    }
    for e in 0..used.len() {
        if !used[e] {
            out.push(walk(complex.edges()[e].0, e, &mut used));
        }
    }
    out
}

/// Draws a planar complex: one polyline per chain, degree-1 vertices as
/// `endpoint` markers and vertices of degree at least 3 as `branch` markers.
///
/// Panics if the complex is not planar.
pub fn render_complex<S: Scalar>(complex: &ImageComplex<S>, title: &str) -> String {
    let pts: Vec<(f64, f64)> = complex
        .vertices()
        .iter()
        .map(|p| {
            assert_eq!(p.dim(), 2, "only planar complexes can be drawn");
            (p.coord(0).as_f64(), p.coord(1).as_f64())
        })
        .collect();
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in &pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if pts.is_empty() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    let span = (x1 - x0).max(y1 - y0).max(f64::EPSILON);
    let scale = (SIZE - 2.0 * MARGIN) / span;
    let map = |(x, y): (f64, f64)| (MARGIN + (x - x0) * scale, SIZE - MARGIN - (y - y0) * scale);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(s, "<title>{}</title>", escape(title));
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for chain in chains(complex) {
        let points: Vec<String> = chain
            .iter()
            .map(|&v| {
                let (x, y) = map(pts[v]);
                format!("{x:.3},{y:.3}")
            })
            .collect();
        let _ = writeln!(s, r#"<polyline points="{}" fill="none" stroke="black" stroke-width="2"/>"#, points.join(" "));
    }
    for (v, &p) in pts.iter().enumerate() {
        let (class, colour) = match complex.degree(v) {
            1 => ("endpoint", "#1f77b4"),
            d if d >= 3 => ("branch", "#d62728"),
            _ => continue,
        };
        let (x, y) = map(p);
        let _ = writeln!(s, r#"<circle class="{class}" cx="{x:.3}" cy="{y:.3}" r="5" fill="{colour}"/>"#);
    }
    s.push_str("</svg>\n");
    s
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
