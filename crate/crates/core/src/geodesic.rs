//! Geodesic shortest paths and projections in polygonal domains.
//!
//! Simple polygons are answered with a triangulation and the funnel
//! algorithm. Domains with holes use a visibility graph over the reflex
//! vertices of the free space, with all-pairs distances computed once at
//! construction. Projections onto a segment are exact: the geodesic distance
//! from `p` to a point `x` of the segment is the minimum, over sources `s`
//! (either `p` or a reflex vertex) visible from `x`, of `d(p, s) + |s x|`, and
//! each such term is convex on every interval of the segment that `s` sees.
//!
//! [`visibility_oracle_distance`] is an independent slow path used only for
//! cross-checking.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{invalid, Result, SpannerError};
use crate::geometry::{
    line_intersection_param, on_segment, orient_sign, segment_param, segments_cross_properly,
    Point2, GEOM_EPS,
};
use crate::polygon::{PolygonalDomain, SimplePolygon, SplittingSegment};
use crate::triangulate::{triangulate, Triangulation};

#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicPath {
    pub waypoints: Vec<Point2>,
    pub length: f64,
}

impl GeodesicPath {
    fn from_waypoints(mut waypoints: Vec<Point2>) -> Self {
        waypoints.dedup();
        // drop waypoints where the path does not turn
        let mut i = 1;
        while i + 1 < waypoints.len() {
            if orient_sign(waypoints[i - 1], waypoints[i], waypoints[i + 1]) == 0
                && (waypoints[i] - waypoints[i - 1]).dot(waypoints[i + 1] - waypoints[i]) >= 0.0
            {
                waypoints.remove(i);
            } else {
                i += 1;
            }
        }
        let length = waypoints.windows(2).map(|w| w[0].dist(w[1])).sum();
        GeodesicPath { waypoints, length }
    }
}

/// One convex piece of the distance function along a segment: on parameters
/// `[t0, t1]` the point `source` is visible and contributes `g + |source x|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectionPiece {
    pub source: Point2,
    pub g: f64,
    pub t0: f64,
    pub t1: f64,
}

/// Distance from a fixed point to every point of a segment.
#[derive(Debug, Clone)]
pub struct SegmentDistanceField {
    pub segment: SplittingSegment,
    pub pieces: Vec<ProjectionPiece>,
}

impl SegmentDistanceField {
    fn point_at(&self, t: f64) -> Point2 {
        self.segment.at(t)
    }

    /// Geodesic distance to the point at parameter `t`.
    pub fn distance_at(&self, t: f64) -> f64 {
        let x = self.point_at(t);
        self.pieces
            .iter()
            .filter(|pc| pc.t0 - 1e-12 <= t && t <= pc.t1 + 1e-12)
            .map(|pc| pc.g + pc.source.dist(x))
            .fold(f64::INFINITY, f64::min)
    }

    /// Minimizer over parameters `[lo, hi]`, smallest parameter on ties.
    /// Returns `(t, distance)`.
    pub fn minimize(&self, lo: f64, hi: f64) -> Option<(f64, f64)> {
        let (a, b) = (self.segment.a, self.segment.b);
        let mut best: Option<(f64, f64)> = None;
        for pc in &self.pieces {
            let l = pc.t0.max(lo);
            let h = pc.t1.min(hi);
            if l > h {
                continue;
            }
            let foot = unclamped_param(a, b, pc.source);
            let t = foot.clamp(l, h);
            let d = pc.g + pc.source.dist(self.point_at(t));
            let better = match best {
                None => true,
                Some((bt, bd)) => d < bd - 1e-12 || (d <= bd + 1e-12 && t < bt),
            };
            if better {
                best = Some((t, d));
            }
        }
        best
    }
}

fn unclamped_param(a: Point2, b: Point2, p: Point2) -> f64 {
    let d = b - a;
    let len2 = d.dot(d);
    if len2 == 0.0 {
        0.0
    } else {
        (p - a).dot(d) / len2
    }
}

/// Precomputed geodesic structures for one domain. Immutable and shareable.
#[derive(Debug, Clone)]
pub struct GeodesicEngine {
    domain: PolygonalDomain,
    edges: Vec<(Point2, Point2)>,
    vertices: Vec<Point2>,
    reflex: Vec<Point2>,
    reflex_dist: Vec<Vec<f64>>,
    reflex_next: Vec<Vec<usize>>,
    triangulation: Option<Triangulation>,
}

impl GeodesicEngine {
    pub fn new(domain: PolygonalDomain) -> Result<Self> {
        let edges = domain.boundary_edges();
        let flagged = domain.vertices_with_reflex_flag();
        let vertices: Vec<Point2> = flagged.iter().map(|v| v.0).collect();
        let reflex: Vec<Point2> = flagged.iter().filter(|v| v.1).map(|v| v.0).collect();
        let triangulation = if domain.hole_count() == 0 {
            Some(triangulate(domain.outer().vertices())?)
        } else {
            None
        };
        let mut engine = GeodesicEngine {
            domain,
            edges,
            vertices,
            reflex,
            reflex_dist: Vec::new(),
            reflex_next: Vec::new(),
            triangulation,
        };
        engine.build_reflex_graph();
        Ok(engine)
    }

    pub fn for_polygon(poly: SimplePolygon) -> Result<Self> {
        Self::new(PolygonalDomain::simple(poly))
    }

    pub fn domain(&self) -> &PolygonalDomain {
        &self.domain
    }

    pub fn reflex_vertices(&self) -> &[Point2] {
        &self.reflex
    }

    fn build_reflex_graph(&mut self) {
        let r = self.reflex.len();
        let mut dist = vec![vec![f64::INFINITY; r]; r];
        let mut next = vec![vec![usize::MAX; r]; r];
        for i in 0..r {
            dist[i][i] = 0.0;
            next[i][i] = i;
            for j in i + 1..r {
                if self.visible(self.reflex[i], self.reflex[j]) {
                    let d = self.reflex[i].dist(self.reflex[j]);
                    dist[i][j] = d;
                    dist[j][i] = d;
                    next[i][j] = j;
                    next[j][i] = i;
                }
            }
        }
        for m in 0..r {
            for i in 0..r {
                if !dist[i][m].is_finite() {
                    continue;
                }
                for j in 0..r {
                    let via = dist[i][m] + dist[m][j];
                    if via < dist[i][j] {
                        dist[i][j] = via;
                        next[i][j] = next[i][m];
                    }
                }
            }
        }
        self.reflex_dist = dist;
        self.reflex_next = next;
    }

    pub fn contains(&self, p: Point2) -> bool {
        self.domain.contains(p)
    }

    /// Whether the closed segment `ab` lies in the free space.
    pub fn visible(&self, a: Point2, b: Point2) -> bool {
        segment_in_free_space(&self.domain, &self.edges, a, b)
    }

    fn check_inside(&self, p: Point2, what: &str) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            invalid(format!(
                "{what} ({}, {}) is outside the free space",
                p.x, p.y
            ))
        }
    }

    /// Shortest free-space path from `a` to `b`.
    pub fn shortest_path(&self, a: Point2, b: Point2) -> Result<GeodesicPath> {
        self.check_inside(a, "source")?;
        self.check_inside(b, "target")?;
        if a == b {
            return Ok(GeodesicPath {
                waypoints: vec![a, b],
                length: 0.0,
            });
        }
        match &self.triangulation {
            Some(tri) => funnel_path(tri, a, b),
            None => self.reflex_path(a, b),
        }
    }

    /// Geodesic distance without containment checks, for hot loops over
    /// points already validated.
    pub fn distance(&self, a: Point2, b: Point2) -> f64 {
        if a == b {
            return 0.0;
        }
        match &self.triangulation {
            Some(tri) => funnel_path(tri, a, b)
                .map(|p| p.length)
                .unwrap_or(f64::INFINITY),
            None => self
                .reflex_path(a, b)
                .map(|p| p.length)
                .unwrap_or(f64::INFINITY),
        }
    }

    /// Geodesic distances from `p` to every reflex vertex.
    fn reflex_costs_from(&self, p: Point2) -> Vec<f64> {
        let r = self.reflex.len();
        let direct: Vec<f64> = self
            .reflex
            .iter()
            .map(|&v| {
                if self.visible(p, v) {
                    p.dist(v)
                } else {
                    f64::INFINITY
                }
            })
            .collect();
        (0..r)
            .map(|j| {
                (0..r)
                    .filter(|&i| direct[i].is_finite())
                    .map(|i| direct[i] + self.reflex_dist[i][j])
                    .fold(f64::INFINITY, f64::min)
            })
            .collect()
    }

    fn reflex_path(&self, a: Point2, b: Point2) -> Result<GeodesicPath> {
        if self.visible(a, b) {
            return Ok(GeodesicPath::from_waypoints(vec![a, b]));
        }
        let r = self.reflex.len();
        let from_a: Vec<f64> = self
            .reflex
            .iter()
            .map(|&v| {
                if self.visible(a, v) {
                    a.dist(v)
                } else {
                    f64::INFINITY
                }
            })
            .collect();
        let to_b: Vec<f64> = self
            .reflex
            .iter()
            .map(|&v| {
                if self.visible(v, b) {
                    v.dist(b)
                } else {
                    f64::INFINITY
                }
            })
            .collect();
        let mut best = (f64::INFINITY, 0, 0);
        for i in (0..r).filter(|&i| from_a[i].is_finite()) {
            for j in (0..r).filter(|&j| to_b[j].is_finite()) {
                let c = from_a[i] + self.reflex_dist[i][j] + to_b[j];
                if c < best.0 {
                    best = (c, i, j);
                }
            }
        }
        if !best.0.is_finite() {
            return Err(SpannerError::Degenerate(
                "no free-space path between the points".into(),
            ));
        }
        let (_, mut i, j) = best;
        let mut waypoints = vec![a, self.reflex[i]];
        while i != j {
            i = self.reflex_next[i][j];
            waypoints.push(self.reflex[i]);
        }
        waypoints.push(b);
        Ok(GeodesicPath::from_waypoints(waypoints))
    }

    /// Distance field from `p` along `seg`: the list of convex pieces.
    pub fn segment_field(&self, p: Point2, seg: &SplittingSegment) -> SegmentDistanceField {
        let mut sources = vec![(p, 0.0)];
        for (v, g) in self.reflex.iter().zip(self.reflex_costs_from(p)) {
            if g.is_finite() && *v != p {
                sources.push((*v, g));
            }
        }
        let mut pieces = Vec::new();
        for (s, g) in sources {
            for (t0, t1) in self.visible_intervals(s, seg) {
                pieces.push(ProjectionPiece {
                    source: s,
                    g,
                    t0,
                    t1,
                });
            }
        }
        SegmentDistanceField {
            segment: *seg,
            pieces,
        }
    }

    /// Parameter intervals of `seg` visible from `s`.
    fn visible_intervals(&self, s: Point2, seg: &SplittingSegment) -> Vec<(f64, f64)> {
        let (a, b) = (seg.a, seg.b);
        let mut ts = vec![0.0, 1.0];
        for &v in &self.vertices {
            if v == s {
                continue;
            }
            if let Some(t) = line_intersection_param(a, b, s, v) {
                if t > 0.0 && t < 1.0 {
                    ts.push(t);
                }
            }
        }
        ts.sort_by(f64::total_cmp);
        ts.dedup_by(|x, y| (*x - *y).abs() <= 1e-14);
        let mut out: Vec<(f64, f64)> = Vec::new();
        let len = seg.length();
        if len == 0.0 {
            if self.visible(s, a) {
                out.push((0.0, 1.0));
            }
            return out;
        }
        for w in ts.windows(2) {
            let (t0, t1) = (w[0], w[1]);
            if (t1 - t0) * len <= GEOM_EPS {
                continue;
            }
            if self.visible(s, seg.at(0.5 * (t0 + t1))) {
                // bridge slivers too thin to test, e.g. where `s` lies on the segment
                match out.last_mut() {
                    Some(last) if (t0 - last.1) * len <= GEOM_EPS => last.1 = t1,
                    _ => out.push((t0, t1)),
                }
            }
        }
        out
    }

    /// Geodesic projection of `p` onto `seg`: the nearest point (smallest
    /// parameter on ties) and its distance.
    pub fn project(&self, p: Point2, seg: &SplittingSegment) -> Result<(Point2, f64)> {
        self.check_inside(p, "point")?;
        self.check_inside(seg.a, "segment endpoint")?;
        self.check_inside(seg.b, "segment endpoint")?;
        let field = self.segment_field(p, seg);
        let (t, d) = field
            .minimize(0.0, 1.0)
            .ok_or_else(|| SpannerError::Degenerate("segment not reachable from point".into()))?;
        Ok((seg.at(t), d))
    }
}

/// Closed segment `ab` contained in the closed free space.
fn segment_in_free_space(
    domain: &PolygonalDomain,
    edges: &[(Point2, Point2)],
    a: Point2,
    b: Point2,
) -> bool {
    if a == b {
        return domain.contains(a);
    }
    let mut ts = vec![0.0, 1.0];
    for &(c, d) in edges {
        if segments_cross_properly(a, b, c, d) {
            return false;
        }
        for e in [c, d] {
            if on_segment(a, b, e) {
                ts.push(segment_param(a, b, e));
            }
        }
    }
    ts.sort_by(f64::total_cmp);
    let len = a.dist(b);
    for w in ts.windows(2) {
        if (w[1] - w[0]) * len <= GEOM_EPS {
            continue;
        }
        if !domain.contains(a.lerp(b, 0.5 * (w[0] + w[1]))) {
            return false;
        }
    }
    domain.contains(a) && domain.contains(b)
}

/// Funnel (string pulling) through the dual-tree sleeve between `a` and `b`.
fn funnel_path(tri: &Triangulation, a: Point2, b: Point2) -> Result<GeodesicPath> {
    let ta = tri
        .locate(a)
        .ok_or_else(|| SpannerError::InvalidInput("source outside the polygon".into()))?;
    let tb = tri
        .locate(b)
        .ok_or_else(|| SpannerError::InvalidInput("target outside the polygon".into()))?;
    let sleeve = tri.dual_path(ta, tb);
    let mut portals: Vec<(Point2, Point2)> = vec![(a, a)];
    for w in sleeve.windows(2) {
        let t = tri.triangles[w[0]];
        let e = (0..3)
            .find(|&e| tri.adjacent[w[0]][e] == Some(w[1]))
            .expect("sleeve triangles are adjacent");
        // the current triangle lies left of (t[e] -> t[e+1]); walking across
        // it, t[e+1] is on the left hand
        portals.push((tri.points[t[(e + 1) % 3]], tri.points[t[e]]));
    }
    portals.push((b, b));
    Ok(GeodesicPath::from_waypoints(string_pull(&portals)))
}

fn cross3(a: Point2, b: Point2, c: Point2) -> f64 {
    (b - a).cross(c - a)
}

fn string_pull(portals: &[(Point2, Point2)]) -> Vec<Point2> {
    let start = portals[0].0;
    let end = portals[portals.len() - 1].0;
    let mut path = vec![start];
    let (mut apex, mut left, mut right) = (start, start, start);
    let (mut left_i, mut right_i) = (0usize, 0usize);
    let mut i = 1;
    while i < portals.len() {
        let (l, r) = portals[i];
        // tighten the right leg
        if cross3(apex, right, r) >= 0.0 {
            if apex == right || cross3(apex, left, r) < 0.0 {
                right = r;
                right_i = i;
            } else {
                path.push(left);
                apex = left;
                right = apex;
                right_i = left_i;
                i = left_i + 1;
                continue;
            }
        }
        // tighten the left leg
        if cross3(apex, left, l) <= 0.0 {
            if apex == left || cross3(apex, right, l) > 0.0 {
                left = l;
                left_i = i;
            } else {
                path.push(right);
                apex = right;
                left = apex;
                left_i = right_i;
                i = right_i + 1;
                continue;
            }
        }
        i += 1;
    }
    if path.last() != Some(&end) {
        path.push(end);
    }
    path
}

/// Shortest path `a`-`b` in `dom`: funnel for simple polygons, reflex-vertex
/// visibility graph otherwise.
pub fn geodesic_distance(dom: &PolygonalDomain, a: Point2, b: Point2) -> Result<GeodesicPath> {
    GeodesicEngine::new(dom.clone())?.shortest_path(a, b)
}

pub fn geodesic_project(
    dom: &PolygonalDomain,
    p: Point2,
    seg: &SplittingSegment,
) -> Result<(Point2, f64)> {
    GeodesicEngine::new(dom.clone())?.project(p, seg)
}

#[derive(Copy, Clone, PartialEq)]
struct QueueItem(f64, usize);

impl Eq for QueueItem {}

impl Ord for QueueItem {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then(other.1.cmp(&self.1))
    }
}

impl PartialOrd for QueueItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Slow reference: Dijkstra over the full visibility graph on every domain
/// vertex plus `a` and `b`, rebuilt on each call.
pub fn visibility_oracle_distance(dom: &PolygonalDomain, a: Point2, b: Point2) -> Result<f64> {
    if !dom.contains(a) || !dom.contains(b) {
        return invalid("query point outside the free space");
    }
    let edges = dom.boundary_edges();
    let mut nodes = vec![a, b];
    nodes.extend(dom.vertices_with_reflex_flag().into_iter().map(|v| v.0));
    let n = nodes.len();
    let mut adj = vec![Vec::new(); n];
    for i in 0..n {
        for j in i + 1..n {
            if segment_in_free_space(dom, &edges, nodes[i], nodes[j]) {
                let d = nodes[i].dist(nodes[j]);
                adj[i].push((j, d));
                adj[j].push((i, d));
            }
        }
    }
    let mut dist = vec![f64::INFINITY; n];
    dist[0] = 0.0;
    let mut heap = BinaryHeap::from([QueueItem(0.0, 0)]);
    while let Some(QueueItem(d, u)) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        for &(v, w) in &adj[u] {
            if d + w < dist[v] {
                dist[v] = d + w;
                heap.push(QueueItem(d + w, v));
            }
        }
    }
    if dist[1].is_finite() {
        Ok(dist[1])
    } else {
        Err(SpannerError::Degenerate(
            "points are not connected in the free space".into(),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polygon::SegmentKind;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn poly(pts: &[(f64, f64)]) -> SimplePolygon {
        SimplePolygon::new(pts.iter().map(|&(x, y)| Point2::new(x, y)).collect()).unwrap()
    }

    fn square_with_hole() -> PolygonalDomain {
        PolygonalDomain::new(
            poly(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]),
            vec![poly(&[
                (0.25, 0.25),
                (0.75, 0.25),
                (0.75, 0.75),
                (0.25, 0.75),
            ])],
        )
        .unwrap()
    }

    fn l_shape() -> SimplePolygon {
        poly(&[
            (0.0, 0.0),
            (1.0, 0.0),
            (1.0, 0.5),
            (0.5, 0.5),
            (0.5, 1.0),
            (0.0, 1.0),
        ])
    }

    fn sample_inside(dom: &PolygonalDomain, rng: &mut ChaCha8Rng) -> Point2 {
        loop {
            let p = Point2::new(rng.gen(), rng.gen());
            if dom.contains_strictly(p) {
                return p;
            }
        }
    }

    #[test]
    fn convex_polygon_is_straight() {
        let dom = PolygonalDomain::simple(poly(&[(0.0, 0.0), (1.0, 0.0), (1.2, 0.8), (0.3, 1.0)]));
        let a = Point2::new(0.1, 0.1);
        let b = Point2::new(0.9, 0.7);
        let path = geodesic_distance(&dom, a, b).unwrap();
        assert_eq!(path.waypoints, vec![a, b]);
        assert!((path.length - a.dist(b)).abs() < 1e-15);
        assert!((visibility_oracle_distance(&dom, a, b).unwrap() - a.dist(b)).abs() < 1e-12);
    }

    #[test]
    fn zero_length_path() {
        let dom = square_with_hole();
        let a = Point2::new(0.1, 0.9);
        assert_eq!(geodesic_distance(&dom, a, a).unwrap().length, 0.0);
        assert_eq!(visibility_oracle_distance(&dom, a, a).unwrap(), 0.0);
    }

    #[test]
    fn diagonal_bends_around_one_hole_corner() {
        let dom = square_with_hole();
        let a = Point2::new(0.0, 0.0);
        let b = Point2::new(1.0, 1.0);
        let path = geodesic_distance(&dom, a, b).unwrap();
        let oracle = visibility_oracle_distance(&dom, a, b).unwrap();
        // |(0,0)-(0.75,0.25)| + |(0.75,0.25)-(1,1)| = 2 sqrt(0.625)
        assert!((oracle - 2.0 * 0.625f64.sqrt()).abs() < 1e-12);
        assert!((path.length - oracle).abs() < 1e-9);
        assert_eq!(path.waypoints.len(), 3);
    }

    #[test]
    fn outside_points_rejected() {
        let dom = square_with_hole();
        assert!(geodesic_distance(&dom, Point2::new(0.5, 0.5), Point2::new(0.1, 0.1)).is_err());
        assert!(
            visibility_oracle_distance(&dom, Point2::new(2.0, 0.5), Point2::new(0.1, 0.1)).is_err()
        );
    }

    #[test]
    fn funnel_matches_oracle_in_l_shape() {
        let dom = PolygonalDomain::simple(l_shape());
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let a = sample_inside(&dom, &mut rng);
            let b = sample_inside(&dom, &mut rng);
            let f = geodesic_distance(&dom, a, b).unwrap().length;
            let o = visibility_oracle_distance(&dom, a, b).unwrap();
            assert!((f - o).abs() <= 1e-9 * (1.0 + o), "{a:?} {b:?}: {f} vs {o}");
        }
    }

    #[test]
    fn interior_waypoints_are_reflex() {
        let dom = square_with_hole();
        let engine = GeodesicEngine::new(dom.clone()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..100 {
            let a = sample_inside(&dom, &mut rng);
            let b = sample_inside(&dom, &mut rng);
            let path = engine.shortest_path(a, b).unwrap();
            for w in &path.waypoints[1..path.waypoints.len() - 1] {
                assert!(engine.reflex_vertices().contains(w));
            }
            for w in path.waypoints.windows(2) {
                assert!(engine.visible(w[0], w[1]));
            }
            let sum: f64 = path.waypoints.windows(2).map(|w| w[0].dist(w[1])).sum();
            assert!((sum - path.length).abs() < 1e-9);
        }
    }

    #[test]
    fn projection_of_visible_point_is_the_foot() {
        let dom = PolygonalDomain::simple(l_shape());
        let seg = SplittingSegment::new(
            Point2::new(0.0, 0.2),
            Point2::new(1.0, 0.2),
            SegmentKind::PolygonChord,
        );
        let (x, d) = geodesic_project(&dom, Point2::new(0.3, 0.7), &seg).unwrap();
        assert!((x.x - 0.3).abs() < 1e-12 && (x.y - 0.2).abs() < 1e-12);
        assert!((d - 0.5).abs() < 1e-12);
        let on = Point2::new(0.6, 0.2);
        let (x, d) = geodesic_project(&dom, on, &seg).unwrap();
        assert!(x.dist(on) < 1e-12 && d.abs() < 1e-12);
    }

    #[test]
    fn projection_around_reflex_corner_matches_dense_sampling() {
        let dom = PolygonalDomain::simple(l_shape());
        let engine = GeodesicEngine::new(dom.clone()).unwrap();
        // the reflex corner (0.5, 0.5) hides the right part of this segment
        let seg = SplittingSegment::new(
            Point2::new(0.55, 0.05),
            Point2::new(0.95, 0.45),
            SegmentKind::PolygonChord,
        );
        let p = Point2::new(0.1, 0.95);
        let (x, d) = engine.project(p, &seg).unwrap();
        let mut best = (f64::INFINITY, Point2::default());
        for i in 0..4096 {
            let t = i as f64 / 4095.0;
            let q = seg.at(t);
            let dq = geodesic_distance(&dom, p, q).unwrap().length;
            if dq < best.0 {
                best = (dq, q);
            }
        }
        assert!((d - best.0).abs() < 1e-6, "{d} vs {}", best.0);
        assert!(x.dist(best.1) < 1e-3);
        assert!((engine.distance(p, x) - d).abs() < 1e-9);
    }

    #[test]
    fn projection_in_domain_beats_samples() {
        let dom = square_with_hole();
        let engine = GeodesicEngine::new(dom.clone()).unwrap();
        let seg = SplittingSegment::new(
            Point2::new(0.25, 0.75),
            Point2::new(0.25, 1.0),
            SegmentKind::DecompositionSegment,
        );
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..30 {
            let p = sample_inside(&dom, &mut rng);
            let (x, d) = engine.project(p, &seg).unwrap();
            assert!((engine.distance(p, x) - d).abs() < 1e-9);
            for i in 0..64 {
                let q = seg.at(i as f64 / 63.0);
                assert!(d <= engine.distance(p, q) + 1e-6);
            }
        }
    }
}
