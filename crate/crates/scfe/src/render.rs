//! Deterministic SVG pictures: drawings as labeled dots on a circle with
//! solid friend chords and dashed enemy chords; arc models as concentric
//! annular arcs. No timestamps, no randomness — identical inputs give
//! byte-identical output.

use crate::arcs::ArcModel;
use crate::drawing::Drawing;
use crate::graph::{SignedGraph, Vertex};
use std::f64::consts::TAU;
use std::fmt::Write as _;

const SIZE: f64 = 240.0;
const CENTER: f64 = SIZE / 2.0;

fn point(turns: f64, radius: f64) -> (f64, f64) {
    let theta = turns * TAU;
    // Flip y so counterclockwise in angle space reads counterclockwise on
    // screen.
    (CENTER + radius * theta.cos(), CENTER - radius * theta.sin())
}

fn header(out: &mut String) {
    writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {SIZE:.0} {SIZE:.0}\" \
         font-family=\"monospace\" font-size=\"10\">"
    )
    .expect("string write");
}

pub fn render_drawing_svg(g: &SignedGraph, d: &Drawing) -> String {
    let mut out = String::new();
    header(&mut out);
    writeln!(
        out,
        "  <circle cx=\"{CENTER:.4}\" cy=\"{CENTER:.4}\" r=\"100\" fill=\"none\" \
         stroke=\"#cccccc\"/>"
    )
    .expect("string write");
    let spot = |v: Vertex, radius: f64| point(d.position(v).to_turns_f64(), radius);
    let mut chord = |u: Vertex, v: Vertex, style: &str| {
        let (x1, y1) = spot(u, 100.0);
        let (x2, y2) = spot(v, 100.0);
        writeln!(
            out,
            "  <line x1=\"{x1:.4}\" y1=\"{y1:.4}\" x2=\"{x2:.4}\" y2=\"{y2:.4}\" {style}/>"
        )
        .expect("string write");
    };
    for pair in g.negative_edges() {
        chord(pair.u(), pair.v(), "stroke=\"#bb3333\" stroke-dasharray=\"6 4\"");
    }
    for pair in g.positive_edges() {
        chord(pair.u(), pair.v(), "stroke=\"#222222\"");
    }
    for v in 1..=d.n() {
        let (cx, cy) = spot(v, 100.0);
        let (lx, ly) = spot(v, 112.0);
        writeln!(out, "  <circle cx=\"{cx:.4}\" cy=\"{cy:.4}\" r=\"3\" fill=\"#222222\"/>")
            .expect("string write");
        writeln!(
            out,
            "  <text x=\"{lx:.4}\" y=\"{ly:.4}\" text-anchor=\"middle\" \
             dominant-baseline=\"middle\">{v}</text>"
        )
        .expect("string write");
    }
    out.push_str("</svg>\n");
    out
}

pub fn render_model_svg(m: &ArcModel) -> String {
    let mut out = String::new();
    header(&mut out);
    writeln!(
        out,
        "  <circle cx=\"{CENTER:.4}\" cy=\"{CENTER:.4}\" r=\"100\" fill=\"none\" \
         stroke=\"#eeeeee\"/>"
    )
    .expect("string write");
    let n = m.n().max(1);
    for v in 1..=m.n() {
        let arc = m.arc(v);
        let radius = 40.0 + 60.0 * (v as f64 - 1.0) / n as f64;
        let start = arc.start().to_turns_f64();
        let len = num_traits::ToPrimitive::to_f64(arc.length()).unwrap_or(0.0);
        let (x1, y1) = point(start, radius);
        let (x2, y2) = point(start + len, radius);
        let large = if len > 0.5 { 1 } else { 0 };
        // Sweep 0 walks counterclockwise in our flipped-y frame.
        writeln!(
            out,
            "  <path d=\"M {x1:.4} {y1:.4} A {radius:.4} {radius:.4} 0 {large} 0 {x2:.4} \
             {y2:.4}\" fill=\"none\" stroke=\"#2255aa\" stroke-width=\"2.5\"/>"
        )
        .expect("string write");
        let (lx, ly) = point(start, radius - 7.0);
        writeln!(
            out,
            "  <text x=\"{lx:.4}\" y=\"{ly:.4}\" text-anchor=\"middle\" \
             dominant-baseline=\"middle\">{v}</text>"
        )
        .expect("string write");
    }
    out.push_str("</svg>\n");
    out
}
