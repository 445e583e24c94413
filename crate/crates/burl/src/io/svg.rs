use std::fmt::Write as _;

use crate::construction::Scene;
use crate::geom::{Rat, Rect};

const CANVAS: f64 = 1000.0;
const MARGIN: f64 = 20.0;
/// Degenerate rectangles (frame edges have zero thickness) are widened to
/// this many canvas units so they stay visible.
const MIN_SIZE: f64 = 3.0;

const PALETTE: [&str; 8] = [
    "#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#b07aa1", "#76b7b2", "#edc948", "#9c755f",
];

struct Mapper {
    left: f64,
    top: f64,
    scale: f64,
}

impl Mapper {
    fn new(bbox: &Rect) -> Mapper {
        Mapper {
            left: bbox.left().to_f64(),
            top: bbox.top().to_f64(),
            scale: (CANVAS - 2.0 * MARGIN) / bbox.width().to_f64(),
        }
    }

    fn x(&self, v: &Rat) -> f64 {
        MARGIN + (v.to_f64() - self.left) * self.scale
    }

    /// Scene y grows upward; SVG y grows downward.
    fn y(&self, v: &Rat) -> f64 {
        MARGIN + (self.top - v.to_f64()) * self.scale
    }

    /// Canvas-space `(x, y, w, h)` of a rect, padded to visibility.
    fn rect(&self, r: &Rect) -> (f64, f64, f64, f64) {
        let x0 = self.x(r.left());
        let y0 = self.y(r.top());
        let mut w = self.x(r.right()) - x0;
        let mut h = self.y(r.bottom()) - y0;
        let (mut x, mut y) = (x0, y0);
        if w < MIN_SIZE {
            x -= (MIN_SIZE - w) / 2.0;
            w = MIN_SIZE;
        }
        if h < MIN_SIZE {
            y -= (MIN_SIZE - h) / 2.0;
            h = MIN_SIZE;
        }
        (x, y, w, h)
    }
}

fn push_rect(out: &mut String, m: &Mapper, r: &Rect, attrs: &str) {
    let (x, y, w, h) = m.rect(r);
    writeln!(
        out,
        "    <rect x=\"{x:.3}\" y=\"{y:.3}\" width=\"{w:.3}\" height=\"{h:.3}\" {attrs}/>",
    )
    .expect("writing to a String cannot fail");
}

/// Renders a scene to a standalone SVG string: a 1000-unit-wide canvas with
/// the aspect ratio of the family's bounding box, shapes as solid fills in
/// a cycling palette, probs as dashed outlines, and (when `territories` is
/// set) every member's territory hatched. Output depends only on the scene.
pub fn scene_svg(scene: &Scene, territories: bool) -> String {
    let bbox = scene.family().bbox();
    let m = Mapper::new(&bbox);
    let height = 2.0 * MARGIN + bbox.height().to_f64() * m.scale;

    let mut out = String::new();
    writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {CANVAS} {height:.3}\" \
         width=\"{CANVAS}\" height=\"{height:.3}\">"
    )
    .expect("writing to a String cannot fail");
    writeln!(
        out,
        "  <rect x=\"0\" y=\"0\" width=\"{CANVAS}\" height=\"{height:.3}\" fill=\"#ffffff\"/>"
    )
    .expect("writing to a String cannot fail");
    if territories {
        out.push_str(
            "  <defs>\n    <pattern id=\"hatch\" width=\"7\" height=\"7\" \
             patternUnits=\"userSpaceOnUse\" patternTransform=\"rotate(45)\">\n      \
             <line x1=\"0\" y1=\"0\" x2=\"0\" y2=\"7\" stroke=\"#555555\" stroke-width=\"1.2\"/>\n    \
             </pattern>\n  </defs>\n",
        );
    }

    for (i, shape) in scene.family().shapes().iter().enumerate() {
        let fill = PALETTE[i % PALETTE.len()];
        writeln!(out, "  <g>\n    <title>{}</title>", shape.id())
            .expect("writing to a String cannot fail");
        for r in shape.region().rects() {
            push_rect(&mut out, &m, r, &format!("fill=\"{fill}\""));
        }
        out.push_str("  </g>\n");
    }

    if territories {
        for shape in scene.family().shapes() {
            let patches = shape.territory_patches();
            if patches.is_empty() {
                continue;
            }
            writeln!(out, "  <g>\n    <title>territory of {}</title>", shape.id())
                .expect("writing to a String cannot fail");
            for patch in &patches {
                push_rect(&mut out, &m, &patch.rect, "fill=\"url(#hatch)\"");
            }
            out.push_str("  </g>\n");
        }
    }

    for prob in scene.probs() {
        writeln!(out, "  <g>\n    <title>{}</title>", prob.id)
            .expect("writing to a String cannot fail");
        push_rect(
            &mut out,
            &m,
            &prob.rect,
            "fill=\"none\" stroke=\"#202020\" stroke-width=\"2\" stroke-dasharray=\"7 4\"",
        );
        out.push_str("  </g>\n");
    }

    out.push_str("</svg>\n");
    out
}
