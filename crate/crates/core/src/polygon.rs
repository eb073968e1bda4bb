//! Simple polygons, polygonal domains with holes, and splitting segments.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::geometry::{
    orient, ring_contains, ring_contains_closed, ring_distance, ring_is_simple, segments_intersect,
    signed_area, Point2, GEOM_EPS,
};

/// Simple polygon with counterclockwise vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplePolygon {
    vertices: Vec<Point2>,
}

impl SimplePolygon {
    /// Validates simplicity; clockwise input is reversed.
    pub fn new(mut vertices: Vec<Point2>) -> Result<Self> {
        if vertices.len() < 3 {
            return invalid(format!(
                "polygon needs at least 3 vertices, got {}",
                vertices.len()
            ));
        }
        if vertices.iter().any(|p| !p.is_finite()) {
            return invalid("polygon has a non-finite vertex");
        }
        if !ring_is_simple(&vertices) {
            return invalid("polygon is not simple (edges cross, touch, or repeat a vertex)");
        }
        let area = signed_area(&vertices);
        if area.abs() <= GEOM_EPS {
            return invalid("polygon has zero area");
        }
        if area < 0.0 {
            vertices.reverse();
        }
        Ok(SimplePolygon { vertices })
    }

    /// Skips validation; callers guarantee a simple counterclockwise ring.
    pub(crate) fn from_ccw_unchecked(vertices: Vec<Point2>) -> Self {
        SimplePolygon { vertices }
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    pub fn edges(&self) -> impl Iterator<Item = (Point2, Point2)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    /// Closed containment with boundary snapping.
    pub fn contains(&self, p: Point2) -> bool {
        ring_contains_closed(&self.vertices, p)
    }

    /// Interior containment: inside and farther than the snap tolerance from
    /// the boundary.
    pub fn contains_strictly(&self, p: Point2) -> bool {
        ring_contains(&self.vertices, p) && ring_distance(&self.vertices, p) > GEOM_EPS
    }

    pub fn boundary_distance(&self, p: Point2) -> f64 {
        ring_distance(&self.vertices, p)
    }

    /// Interior angle at vertex `i` exceeds pi.
    pub fn is_reflex(&self, i: usize) -> bool {
        let n = self.vertices.len();
        orient(
            self.vertices[(i + n - 1) % n],
            self.vertices[i],
            self.vertices[(i + 1) % n],
        ) < 0.0
    }

    pub fn is_convex(&self) -> bool {
        (0..self.len()).all(|i| !self.is_reflex(i))
    }

    pub fn bbox(&self) -> (Point2, Point2) {
        bbox(&self.vertices)
    }
}

pub(crate) fn bbox(pts: &[Point2]) -> (Point2, Point2) {
    let mut lo = Point2::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in pts {
        lo.x = lo.x.min(p.x);
        lo.y = lo.y.min(p.y);
        hi.x = hi.x.max(p.x);
        hi.y = hi.y.max(p.y);
    }
    (lo, hi)
}

/// An outer simple polygon with pairwise disjoint simple holes strictly inside
/// it. The free space is the closed outer region minus the open holes.
#[derive(Debug, Clone, PartialEq)]
pub struct PolygonalDomain {
    outer: SimplePolygon,
    holes: Vec<SimplePolygon>,
}

impl PolygonalDomain {
    pub fn new(outer: SimplePolygon, holes: Vec<SimplePolygon>) -> Result<Self> {
        for (hi, h) in holes.iter().enumerate() {
            if !h.vertices().iter().all(|&v| outer.contains_strictly(v)) {
                return invalid(format!(
                    "hole {hi} is not strictly inside the outer polygon"
                ));
            }
            for (a, b) in h.edges() {
                if outer.edges().any(|(c, d)| segments_intersect(a, b, c, d)) {
                    return invalid(format!("hole {hi} touches the outer boundary"));
                }
            }
            for (hj, g) in holes.iter().enumerate().take(hi) {
                let touching = h
                    .edges()
                    .any(|(a, b)| g.edges().any(|(c, d)| segments_intersect(a, b, c, d)));
                if touching || g.contains(h.vertices()[0]) || h.contains(g.vertices()[0]) {
                    return invalid(format!("holes {hj} and {hi} overlap"));
                }
            }
        }
        Ok(PolygonalDomain { outer, holes })
    }

    pub fn simple(outer: SimplePolygon) -> Self {
        PolygonalDomain {
            outer,
            holes: Vec::new(),
        }
    }

    pub fn outer(&self) -> &SimplePolygon {
        &self.outer
    }

    /// Holes as counterclockwise polygons; as part of the free-space boundary
    /// they are traversed clockwise (see [`Self::boundary_rings`]).
    pub fn holes(&self) -> &[SimplePolygon] {
        &self.holes
    }

    pub fn hole_count(&self) -> usize {
        self.holes.len()
    }

    /// Boundary rings oriented with the free space on their left: the outer
    /// ring counterclockwise, then each hole clockwise.
    pub fn boundary_rings(&self) -> Vec<Vec<Point2>> {
        let mut rings = vec![self.outer.vertices().to_vec()];
        for h in &self.holes {
            let mut r = h.vertices().to_vec();
            r.reverse();
            rings.push(r);
        }
        rings
    }

    pub fn boundary_edges(&self) -> Vec<(Point2, Point2)> {
        let mut out: Vec<(Point2, Point2)> = self.outer.edges().collect();
        for h in &self.holes {
            out.extend(h.edges());
        }
        out
    }

    /// All polygon vertices with a flag telling whether the free space has a
    /// reflex angle there.
    pub fn vertices_with_reflex_flag(&self) -> Vec<(Point2, bool)> {
        let mut out: Vec<(Point2, bool)> = (0..self.outer.len())
            .map(|i| (self.outer.vertices()[i], self.outer.is_reflex(i)))
            .collect();
        for h in &self.holes {
            for i in 0..h.len() {
                // a convex corner of a hole is a reflex corner of the free space
                out.push((h.vertices()[i], !h.is_reflex(i)));
            }
        }
        out
    }

    pub fn contains(&self, p: Point2) -> bool {
        self.outer.contains(p) && self.holes.iter().all(|h| !h.contains_strictly(p))
    }

    /// Strictly interior to the free space (off every boundary).
    pub fn contains_strictly(&self, p: Point2) -> bool {
        self.outer.contains_strictly(p) && self.holes.iter().all(|h| !h.contains(p))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SegmentKind {
    PolygonChord,
    DecompositionSegment,
}

/// A segment in the free space onto which points are projected.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplittingSegment {
    pub a: Point2,
    pub b: Point2,
    pub kind: SegmentKind,
}

impl SplittingSegment {
    pub fn new(a: Point2, b: Point2, kind: SegmentKind) -> Self {
        SplittingSegment { a, b, kind }
    }

    pub fn length(&self) -> f64 {
        self.a.dist(self.b)
    }

    pub fn at(&self, t: f64) -> Point2 {
        self.a.lerp(self.b, t)
    }
}
