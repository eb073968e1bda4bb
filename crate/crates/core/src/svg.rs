//! Deterministic SVG rendering of an instance and, optionally, its spanner.
//!
//! Polygon edges of the spanner are drawn along their geodesics. Removed
//! vertices are crossed out and their edges are dashed.

use std::fmt::Write;

use crate::geodesic::GeodesicEngine;
use crate::geometry::Point2;
use crate::io::Instance;
use crate::metric::SpannerGraph;

const SIZE: f64 = 800.0;
const MARGIN: f64 = 20.0;

struct View {
    lo: Point2,
    scale: f64,
}

impl View {
    fn fit(points: impl Iterator<Item = Point2>) -> Self {
        let (mut lo, mut hi) = (
            Point2::new(f64::INFINITY, f64::INFINITY),
            Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
        );
        for p in points {
            lo = Point2::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point2::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        if !lo.x.is_finite() {
            return View {
                lo: Point2::new(0.0, 0.0),
                scale: 1.0,
            };
        }
        let span = (hi.x - lo.x).max(hi.y - lo.y);
        let scale = if span > 0.0 {
            (SIZE - 2.0 * MARGIN) / span
        } else {
            1.0
        };
        View { lo, scale }
    }

    /// Screen coordinates, y pointing down.
    fn map(&self, p: Point2) -> (f64, f64) {
        (
            MARGIN + (p.x - self.lo.x) * self.scale,
            SIZE - MARGIN - (p.y - self.lo.y) * self.scale,
        )
    }
}

fn planar(coords: &[f64]) -> Point2 {
    Point2::new(
        coords.first().copied().unwrap_or(0.0),
        coords.get(1).copied().unwrap_or(0.0),
    )
}

fn path_data(view: &View, ring: &[Point2]) -> String {
    let mut d = String::new();
    for (i, &p) in ring.iter().enumerate() {
        let (x, y) = view.map(p);
        let _ = write!(d, "{}{x:.3},{y:.3} ", if i == 0 { "M" } else { "L" });
    }
    d.push('Z');
    d
}

/// Renders `instance` with optional spanner edges; vertices in `removed` are
/// crossed out. Only the first two coordinates of R^d points are drawn.
pub fn render_svg(instance: &Instance, graph: Option<&SpannerGraph>, removed: &[usize]) -> String {
    let pos: Vec<Point2> = instance.points.iter().map(|p| planar(&p.coords)).collect();
    let ring_points = instance
        .domain
        .iter()
        .flat_map(|d| d.outer().vertices().iter().copied());
    let view = View::fit(pos.iter().copied().chain(ring_points));
    let engine = instance
        .domain
        .as_ref()
        .and_then(|d| GeodesicEngine::new(d.clone()).ok());

    let mut out = String::new();
    let _ = writeln!(out, "<?xml version=\"1.0\" encoding=\"UTF-8\"?>");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\">"
    );
    let _ = writeln!(
        out,
        "<rect x=\"0\" y=\"0\" width=\"{SIZE}\" height=\"{SIZE}\" fill=\"#ffffff\"/>"
    );
    if let Some(dom) = &instance.domain {
        let _ = writeln!(
            out,
            "<path d=\"{}\" fill=\"#eef3f8\" stroke=\"#334455\" stroke-width=\"1.5\"/>",
            path_data(&view, dom.outer().vertices())
        );
        for hole in dom.holes() {
            let _ = writeln!(
                out,
                "<path d=\"{}\" fill=\"#8a8f96\" stroke=\"#334455\" stroke-width=\"1.5\"/>",
                path_data(&view, hole.vertices())
            );
        }
    }

    let mut gone = vec![false; pos.len()];
    for &v in removed {
        if v < gone.len() {
            gone[v] = true;
        }
    }
    if let Some(g) = graph {
        for (u, v, _) in g.edges() {
            if u >= pos.len() || v >= pos.len() {
                continue;
            }
            let waypoints = engine
                .as_ref()
                .and_then(|e| e.shortest_path(pos[u], pos[v]).ok())
                .map(|p| p.waypoints)
                .unwrap_or_else(|| vec![pos[u], pos[v]]);
            let pts: Vec<String> = waypoints
                .iter()
                .map(|&p| {
                    let (x, y) = view.map(p);
                    format!("{x:.3},{y:.3}")
                })
                .collect();
            let style = if gone[u] || gone[v] {
                "stroke=\"#c8c8c8\" stroke-dasharray=\"4 3\""
            } else {
                "stroke=\"#3a6ea5\""
            };
            let _ = writeln!(
                out,
                "<polyline points=\"{}\" fill=\"none\" {style} stroke-width=\"1\"/>",
                pts.join(" ")
            );
        }
    }

    let max_w = instance.points.iter().map(|p| p.weight).fold(0.0, f64::max);
    for (i, p) in instance.points.iter().enumerate() {
        let (x, y) = view.map(pos[i]);
        let r = 2.5
            + if max_w > 0.0 {
                6.0 * p.weight / max_w
            } else {
                0.0
            };
        let _ = writeln!(
            out,
            "<circle cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"{r:.3}\" fill=\"{}\" stroke=\"#111111\" stroke-width=\"0.8\"><title>{i} w={}</title></circle>",
            if gone[i] { "#ffffff" } else { "#f2a541" },
            p.weight
        );
        if gone[i] {
            let s = r + 2.0;
            let _ = writeln!(
                out,
                "<path d=\"M{:.3},{:.3} L{:.3},{:.3} M{:.3},{:.3} L{:.3},{:.3}\" stroke=\"#cc2222\" stroke-width=\"2\"/>",
                x - s,
                y - s,
                x + s,
                y + s,
                x - s,
                y + s,
                x + s,
                y - s
            );
        }
    }
    out.push_str("</svg>\n");
    out
}
