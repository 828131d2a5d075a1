//! SVG 1.1 rendering of a single frame.

use std::fmt::Write as _;

use evotree_core::{EvolvingTree, LabelSpec, LayoutState, Point2, Rect2};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvgOptions {
    pub labels: bool,
    pub node_radius: f64,
    /// Fraction of the drawing's width and height added on every side.
    pub margin: f64,
}

impl Default for SvgOptions {
    fn default() -> Self {
        SvgOptions { labels: true, node_radius: 3.0, margin: 0.05 }
    }
}

pub fn escape_xml(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

/// Label boxes of real nodes, bend points and node circles, united.
fn bounds(tree: &EvolvingTree, frame: &LayoutState, spec: &LabelSpec, r: f64) -> Option<Rect2> {
    let mut acc: Option<Rect2> = None;
    let mut add = |lo_x: f64, lo_y: f64, hi_x: f64, hi_y: f64| {
        let b = acc.get_or_insert(Rect2::from_corners(Point2::new(lo_x, lo_y), Point2::new(hi_x, hi_y)));
        b.min.x = b.min.x.min(lo_x);
        b.min.y = b.min.y.min(lo_y);
        b.max.x = b.max.x.max(hi_x);
        b.max.y = b.max.y.max(hi_y);
    };
    for (rec, p) in tree.nodes().iter().zip(&frame.positions) {
        let (hw, hh) = if rec.is_real() {
            ((spec.width(rec.label_chars()) / 2.0).max(r), (spec.line_height / 2.0).max(r))
        } else {
            (0.0, 0.0)
        };
        add(p.x - hw, p.y - hh, p.x + hw, p.y + hh);
    }
    acc
}

fn num(x: f64) -> String {
    let s = format!("{x:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

/// Edges as polylines through their bends, real nodes as circles and,
/// optionally, truncated labels centred on the nodes.
pub fn render_svg(tree: &EvolvingTree, frame: &LayoutState, spec: &LabelSpec, options: &SvgOptions) -> String {
    let n = frame.positions.len();
    let b = bounds(tree, frame, spec, options.node_radius)
        .unwrap_or_else(|| Rect2::from_corners(Point2::new(-1.0, -1.0), Point2::new(1.0, 1.0)));
    let (w, h) = (b.max.x - b.min.x, b.max.y - b.min.y);
    // real nodes carry label boxes, so w and h are positive
    let (mx, my) = (w * options.margin, h * options.margin);
    let (vx, vy, vw, vh) = (b.min.x - mx, b.min.y - my, w + 2.0 * mx, h + 2.0 * my);

    let mut s = String::new();
    let mut out = |line: String| {
        s.push_str(&line);
        s.push('\n');
    };
    out(r#"<?xml version="1.0" encoding="UTF-8"?>"#.into());
    out(format!(
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="{} {} {} {}" width="{}" height="{}">"#,
        num(vx),
        num(vy),
        num(vw),
        num(vh),
        num(vw),
        num(vh)
    ));
    out(r##"<g fill="none" stroke="#555555" stroke-width="1">"##.into());
    for e in tree.edges().iter().filter(|e| e.child.0 < n) {
        let mut pts = String::new();
        for (k, v) in e.path().enumerate() {
            let p = frame.positions[v.0];
            if k > 0 {
                pts.push(' ');
            }
            write!(pts, "{},{}", num(p.x), num(p.y)).expect("writing to a String");
        }
        out(format!(r#"<polyline points="{pts}"/>"#));
    }
    out("</g>".into());
    out(r##"<g fill="#1f77b4">"##.into());
    for (_, p) in tree.nodes().iter().zip(&frame.positions).filter(|(r, _)| r.is_real()) {
        out(format!(r#"<circle cx="{}" cy="{}" r="{}"/>"#, num(p.x), num(p.y), num(options.node_radius)));
    }
    out("</g>".into());
    if options.labels {
        out(format!(
            r#"<g font-family="monospace" font-size="{}" text-anchor="middle" dominant-baseline="central">"#,
            num(spec.line_height * 0.75)
        ));
        for (rec, p) in tree.nodes().iter().zip(&frame.positions).filter(|(r, _)| r.is_real()) {
            out(format!(
                r#"<text x="{}" y="{}">{}</text>"#,
                num(p.x),
                num(p.y),
                escape_xml(&rec.display_label())
            ));
        }
        out("</g>".into());
    }
    out("</svg>".into());
    s
}
