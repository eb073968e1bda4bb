//! Fault-tolerant spanners for weighted points in simple polygons and
//! polygonal domains.
//!
//! Points are projected geodesically onto splitting segments. The weighted
//! projections are collinear, so the R^d construction runs on their arclength
//! coordinates, and every edge between projections of two different points
//! becomes an edge between the points themselves. Simple regions are split by
//! balanced chords; domains are decomposed into simple faces and split with a
//! separator of the face graph.

use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;

use crate::cluster::{build_vftswp_rd_detailed, RdOptions};
use crate::decomposition::{decompose_domain, DomainDecomposition};
use crate::error::{invalid, Result, SpannerError};
use crate::geodesic::GeodesicEngine;
use crate::geometry::{on_segment, orient_sign, Point2, GEOM_EPS};
use crate::metric::{validate_points, SpannerGraph, WeightedPoint};
use crate::polygon::{PolygonalDomain, SegmentKind, SimplePolygon, SplittingSegment};
use crate::separator::{planar_separator, WeightedGraph};
use crate::triangulate::triangulate;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolygonSpannerParams {
    pub k: usize,
    pub eps: f64,
    pub refine: bool,
    /// Pieces per refinement window; `ceil(1 / eps^2)` when unset.
    pub pieces: Option<usize>,
    pub rd: RdOptions,
}

impl PolygonSpannerParams {
    pub fn new(k: usize, eps: f64, refine: bool) -> Self {
        PolygonSpannerParams {
            k,
            eps,
            refine,
            pieces: None,
            rd: RdOptions::default(),
        }
    }

    pub fn piece_count(&self) -> usize {
        self.pieces
            .unwrap_or_else(|| (1.0 / (self.eps * self.eps)).ceil() as usize)
            .max(1)
    }

    fn validate(&self) -> Result<()> {
        if !(self.eps > 0.0) || !self.eps.is_finite() {
            return invalid(format!("eps must be finite and > 0, got {}", self.eps));
        }
        if self.pieces == Some(0) {
            return invalid("refinement needs at least one piece");
        }
        Ok(())
    }
}

/// A weighted point on a splitting segment standing in for `source`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectionPoint {
    pub source: usize,
    /// Parameter along the segment, in `[0, 1]`.
    pub t: f64,
    pub point: Point2,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionSet {
    pub segment: SplittingSegment,
    /// Grouped by source in increasing source id.
    pub points: Vec<ProjectionPoint>,
}

impl ProjectionSet {
    pub fn of_source(&self, source: usize) -> impl Iterator<Item = &ProjectionPoint> {
        self.points.iter().filter(move |p| p.source == source)
    }

    pub fn sources(&self) -> BTreeSet<usize> {
        self.points.iter().map(|p| p.source).collect()
    }
}

/// One balanced split of a simple region.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitRecord {
    pub depth: usize,
    pub segment: SplittingSegment,
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

impl SplitRecord {
    pub fn is_balanced(&self) -> bool {
        let m = self.left.len() + self.right.len();
        let cap = (2 * m).div_ceil(3);
        self.left.len() <= cap && self.right.len() <= cap
    }
}

/// One separator round of the domain recursion, in face-graph terms.
#[derive(Debug, Clone, PartialEq)]
pub struct SeparatorRecord {
    pub faces: usize,
    pub r: Vec<usize>,
    pub total_weight: f64,
    pub left_weight: f64,
    pub right_weight: f64,
    /// Point ids on either side, for completeness checks.
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

impl SeparatorRecord {
    pub fn is_balanced(&self) -> bool {
        let limit = 2.0 * self.total_weight / 3.0 + 1e-9;
        self.left_weight <= limit && self.right_weight <= limit
    }

    pub fn is_small(&self) -> bool {
        self.r.len() as f64 <= 4.0 * (self.faces as f64).sqrt()
    }
}

#[derive(Debug, Clone)]
pub struct PolygonSpanner {
    pub graph: SpannerGraph,
    pub decomposition: DomainDecomposition,
    pub splits: Vec<SplitRecord>,
    pub separators: Vec<SeparatorRecord>,
    pub projections: Vec<ProjectionSet>,
    pub max_depth: usize,
}

/// Projection points of `p` on `seg`: the geodesic projection alone, or with
/// refinement one nearest point per piece of the window around it.
fn projections_of(
    engine: &GeodesicEngine,
    p: &WeightedPoint,
    seg: &SplittingSegment,
    refine: Option<(f64, usize)>,
) -> Result<Vec<ProjectionPoint>> {
    let field = engine.segment_field(p.xy(), seg);
    let (t_star, dist) = field
        .minimize(0.0, 1.0)
        .ok_or_else(|| SpannerError::Degenerate("segment not reachable from point".into()))?;
    let single = |t: f64, d: f64| ProjectionPoint {
        source: p.id,
        t,
        point: seg.at(t),
        weight: p.weight + d,
    };
    let Some((eps, pieces)) = refine else {
        return Ok(vec![single(t_star, dist)]);
    };
    if dist <= GEOM_EPS {
        return Ok(vec![single(t_star, dist)]);
    }
    let half = (1.0 + 2.0 * eps) * dist / seg.length();
    let (lo, hi) = ((t_star - half).max(0.0), (t_star + half).min(1.0));
    let mut out: Vec<ProjectionPoint> = Vec::with_capacity(pieces);
    for j in 0..pieces {
        let a = lo + (hi - lo) * j as f64 / pieces as f64;
        let b = lo + (hi - lo) * (j + 1) as f64 / pieces as f64;
        if let Some((t, d)) = field.minimize(a, b) {
            if out.last().is_none_or(|q| q.t != t) {
                out.push(single(t, d));
            }
        }
    }
    Ok(out)
}

/// Refined projection set `S(p, seg)`.
pub fn refine_projection_set(
    engine: &GeodesicEngine,
    p: &WeightedPoint,
    seg: &SplittingSegment,
    eps: f64,
    pieces: Option<usize>,
) -> Result<Vec<ProjectionPoint>> {
    let params = PolygonSpannerParams {
        pieces,
        ..PolygonSpannerParams::new(0, eps, true)
    };
    params.validate()?;
    projections_of(engine, p, seg, Some((eps, params.piece_count())))
}

/// Shared state of one construction.
struct Builder<'a> {
    engine: &'a GeodesicEngine,
    points: &'a [WeightedPoint],
    params: PolygonSpannerParams,
    graph: SpannerGraph,
    lengths: HashMap<(usize, usize), f64>,
    splits: Vec<SplitRecord>,
    separators: Vec<SeparatorRecord>,
    projections: Vec<ProjectionSet>,
    max_depth: usize,
}

impl<'a> Builder<'a> {
    fn new(
        engine: &'a GeodesicEngine,
        points: &'a [WeightedPoint],
        params: PolygonSpannerParams,
    ) -> Self {
        Builder {
            engine,
            points,
            params,
            graph: SpannerGraph::new(points.len()),
            lengths: HashMap::new(),
            splits: Vec::new(),
            separators: Vec::new(),
            projections: Vec::new(),
            max_depth: 0,
        }
    }

    fn project(&mut self, ids: &[usize], seg: &SplittingSegment) -> Result<()> {
        let refine = self
            .params
            .refine
            .then(|| (self.params.eps, self.params.piece_count()));
        let per_point: Vec<Vec<ProjectionPoint>> = ids
            .par_iter()
            .map(|&p| projections_of(self.engine, &self.points[p], seg, refine))
            .collect::<Result<_>>()?;
        let set = ProjectionSet {
            segment: *seg,
            points: per_point.into_iter().flatten().collect(),
        };
        if set.points.len() >= 2 {
            let len = seg.length();
            let line: Vec<WeightedPoint> = set
                .points
                .iter()
                .enumerate()
                .map(|(i, pp)| WeightedPoint::new(i, vec![pp.t * len], pp.weight))
                .collect();
            let rd =
                build_vftswp_rd_detailed(&line, self.params.k, self.params.eps, &self.params.rd)?;
            for (r, s, _) in rd.graph.edges() {
                let (p, q) = (set.points[r].source, set.points[s].source);
                if p != q {
                    self.link(p, q);
                }
            }
        }
        self.projections.push(set);
        Ok(())
    }

    fn link(&mut self, p: usize, q: usize) {
        let key = (p.min(q), p.max(q));
        let engine = self.engine;
        let points = self.points;
        let len = *self
            .lengths
            .entry(key)
            .or_insert_with(|| engine.distance(points[key.0].xy(), points[key.1].xy()));
        self.graph.add_edge(key.0, key.1, len);
    }

    /// Recursive balanced splitting of a simple region.
    fn split_simple(
        &mut self,
        region: &SimplePolygon,
        ids: Vec<usize>,
        depth: usize,
    ) -> Result<()> {
        self.max_depth = self.max_depth.max(depth);
        if ids.len() <= 1 {
            return Ok(());
        }
        let located: Vec<(usize, Point2)> = ids.iter().map(|&i| (i, self.points[i].xy())).collect();
        let Some(chord) = best_chord(region, &located) else {
            return Err(SpannerError::Degenerate("no splitting chord found".into()));
        };
        self.project(&ids, &chord.segment)?;
        let m = ids.len();
        let progress = chord.left_ids.len() < m && chord.right_ids.len() < m;
        self.splits.push(SplitRecord {
            depth,
            segment: chord.segment,
            left: chord.left_ids.clone(),
            right: chord.right_ids.clone(),
        });
        if progress {
            self.split_simple(&chord.left, chord.left_ids, depth + 1)?;
            self.split_simple(&chord.right, chord.right_ids, depth + 1)?;
        }
        Ok(())
    }

    fn split_domain(
        &mut self,
        decomp: &DomainDecomposition,
        assignment: &[usize],
        faces: &[usize],
        ids: Vec<usize>,
        depth: usize,
    ) -> Result<()> {
        self.max_depth = self.max_depth.max(depth);
        if ids.len() <= 1 {
            return Ok(());
        }
        let local: HashMap<usize, usize> = faces.iter().enumerate().map(|(i, &f)| (f, i)).collect();
        let mut weights = vec![0.0; faces.len()];
        for &p in &ids {
            weights[local[&assignment[p]]] += 1.0;
        }
        let edges: Vec<(usize, usize)> = decomp
            .dual_edges
            .iter()
            .filter_map(|(a, b)| Some((*local.get(a)?, *local.get(b)?)))
            .collect();
        let sub = WeightedGraph::new(weights, &edges);
        for comp in sub.components(&vec![false; faces.len()]) {
            let comp_faces: Vec<usize> = comp.iter().map(|&i| faces[i]).collect();
            let comp_ids: Vec<usize> = ids
                .iter()
                .copied()
                .filter(|p| comp_faces.contains(&assignment[*p]))
                .collect();
            if comp_ids.len() <= 1 {
                continue;
            }
            if comp_faces.len() == 1 {
                let region = decomp.faces[comp_faces[0]].polygon.clone();
                self.split_simple(&region, comp_ids, depth)?;
                continue;
            }
            let comp_local: HashMap<usize, usize> = comp_faces
                .iter()
                .enumerate()
                .map(|(i, &f)| (f, i))
                .collect();
            let graph = WeightedGraph::new(
                comp.iter().map(|&i| sub.weights[i]).collect(),
                &decomp
                    .dual_edges
                    .iter()
                    .filter_map(|(a, b)| Some((*comp_local.get(a)?, *comp_local.get(b)?)))
                    .collect::<Vec<_>>(),
            );
            let sep = planar_separator(&graph)?;
            let to_faces = |s: &[usize]| s.iter().map(|&i| comp_faces[i]).collect::<Vec<usize>>();
            let (r, left, right) = (to_faces(&sep.r), to_faces(&sep.left), to_faces(&sep.right));
            let side_ids = |fs: &[usize]| -> Vec<usize> {
                comp_ids
                    .iter()
                    .copied()
                    .filter(|p| fs.contains(&assignment[*p]))
                    .collect()
            };
            let (left_ids, right_ids) = (side_ids(&left), side_ids(&right));
            let (wl, wr) = sep.side_weights(&graph);
            self.separators.push(SeparatorRecord {
                faces: comp_faces.len(),
                r: r.clone(),
                total_weight: graph.total_weight(),
                left_weight: wl,
                right_weight: wr,
                left: left_ids.clone(),
                right: right_ids.clone(),
            });
            let segs: BTreeSet<usize> = r
                .iter()
                .flat_map(|&f| decomp.faces[f].segments.iter().copied())
                .collect();
            for s in segs {
                self.project(&comp_ids, &decomp.segments[s])?;
            }
            // pairs inside one separator face never cross its segments
            for &f in &r {
                let inside = side_ids(&[f]);
                self.split_simple(&decomp.faces[f].polygon.clone(), inside, depth + 1)?;
            }
            self.split_domain(decomp, assignment, &left, left_ids, depth + 1)?;
            self.split_domain(decomp, assignment, &right, right_ids, depth + 1)?;
        }
        Ok(())
    }
}

/// Candidate chord with the resulting pieces and point sides.
struct Chord {
    segment: SplittingSegment,
    left: SimplePolygon,
    right: SimplePolygon,
    left_ids: Vec<usize>,
    right_ids: Vec<usize>,
}

/// Inserts `p` into a ring if it is not a vertex; returns its index.
fn insert_on_ring(ring: &mut Vec<Point2>, p: Point2) -> Option<usize> {
    if let Some(i) = ring.iter().position(|&v| v.dist(p) <= GEOM_EPS) {
        return Some(i);
    }
    let n = ring.len();
    let e = (0..n).find(|&i| on_segment(ring[i], ring[(i + 1) % n], p))?;
    ring.insert(e + 1, p);
    Some(e + 1)
}

fn cyclic_slice(ring: &[Point2], from: usize, to: usize) -> Vec<Point2> {
    let n = ring.len();
    let mut out = vec![ring[from]];
    let mut i = from;
    while i != to {
        i = (i + 1) % n;
        out.push(ring[i]);
    }
    out
}

/// Pieces left and right of the directed chord `a -> b` whose endpoints lie on
/// the boundary.
fn cut(region: &SimplePolygon, a: Point2, b: Point2) -> Option<(SimplePolygon, SimplePolygon)> {
    let mut ring = region.vertices().to_vec();
    insert_on_ring(&mut ring, a)?;
    insert_on_ring(&mut ring, b)?;
    let ia = ring.iter().position(|&v| v.dist(a) <= GEOM_EPS)?;
    let ib = ring.iter().position(|&v| v.dist(b) <= GEOM_EPS)?;
    if ia == ib {
        return None;
    }
    let left = cyclic_slice(&ring, ib, ia);
    let right = cyclic_slice(&ring, ia, ib);
    if left.len() < 3 || right.len() < 3 {
        return None;
    }
    let (l, r) = (
        SimplePolygon::from_ccw_unchecked(left),
        SimplePolygon::from_ccw_unchecked(right),
    );
    (l.area() > GEOM_EPS && r.area() > GEOM_EPS).then_some((l, r))
}

/// First boundary contact of the ray `o + s d`, `s > 0`, as a parameter.
fn first_hit(region: &SimplePolygon, o: Point2, d: Point2) -> Option<f64> {
    let tiny = 1e-12;
    let mut best = f64::INFINITY;
    let far = o + d;
    for (c, e) in region.edges() {
        let s_dir = e - c;
        let denom = d.cross(s_dir);
        if denom.abs() <= 1e-15 * d.norm() * s_dir.norm() {
            if orient_sign(o, far, c) == 0 && orient_sign(o, far, e) == 0 {
                for v in [c, e] {
                    let s = (v - o).dot(d) / d.dot(d);
                    if s > tiny {
                        best = best.min(s);
                    }
                }
            }
            continue;
        }
        let s = (c - o).cross(s_dir) / denom;
        let u = (c - o).cross(d) / denom;
        if s > tiny && (-1e-12..=1.0 + 1e-12).contains(&u) {
            best = best.min(s);
        }
    }
    best.is_finite().then_some(best)
}

/// Chords from each vertex through each target, extended to the first
/// boundary contact.
fn rays_through(region: &SimplePolygon, targets: &[Point2], out: &mut Vec<(Point2, Point2)>) {
    let verts = region.vertices();
    for &v in verts {
        for &x in targets {
            if x.dist(v) <= GEOM_EPS {
                continue;
            }
            let d = x - v;
            let Some(s) = first_hit(region, v, d) else {
                continue;
            };
            if s < 1.0 - 1e-9 {
                continue; // x is hidden from v
            }
            let mut hit = v + d * s;
            if let Some(&w) = verts.iter().find(|w| w.dist(hit) <= 1e-9) {
                hit = w;
            }
            out.push((v, hit));
        }
    }
}

/// Scores one chord; `None` if it does not cut the region in two.
fn evaluate(
    region: &SimplePolygon,
    pts: &[(usize, Point2)],
    a: Point2,
    b: Point2,
) -> Option<Chord> {
    if a.dist(b) <= 1e-9 || !region.contains_strictly(a.lerp(b, 0.5)) {
        return None;
    }
    let (left, right) = cut(region, a, b)?;
    let (mut left_ids, mut right_ids) = (Vec::new(), Vec::new());
    for &(id, x) in pts {
        if on_segment(a, b, x) || left.contains(x) {
            left_ids.push(id);
        } else {
            right_ids.push(id);
        }
    }
    let segment = SplittingSegment::new(a, b, SegmentKind::PolygonChord);
    Some(Chord {
        segment,
        left,
        right,
        left_ids,
        right_ids,
    })
}

/// Chord minimizing the larger side; points on the chord count left.
/// Diagonals and rays through the points are tried first; rays through
/// midpoints of point pairs and through triangle centroids only when those
/// miss the two-thirds bound.
fn best_chord(region: &SimplePolygon, pts: &[(usize, Point2)]) -> Option<Chord> {
    let verts = region.vertices();
    let tri = triangulate(verts).ok();
    let cap = (2 * pts.len()).div_ceil(3);
    let mut best: Option<(usize, Chord)> = None;
    for phase in 0..2 {
        let mut cands = Vec::new();
        if phase == 0 {
            if let Some(t) = &tri {
                cands.extend(t.diagonals().into_iter().map(|(i, j)| (verts[i], verts[j])));
            }
            let targets: Vec<Point2> = pts.iter().map(|p| p.1).collect();
            rays_through(region, &targets, &mut cands);
        } else {
            let mut targets: Vec<Point2> = Vec::new();
            for (i, p) in pts.iter().enumerate() {
                targets.extend(pts[i + 1..].iter().map(|q| p.1.lerp(q.1, 0.5)));
            }
            if let Some(t) = &tri {
                targets.extend((0..t.triangles.len()).map(|i| {
                    let [a, b, c] = t.corners(i);
                    Point2::new((a.x + b.x + c.x) / 3.0, (a.y + b.y + c.y) / 3.0)
                }));
            }
            rays_through(region, &targets, &mut cands);
        }
        for (a, b) in cands {
            let Some(chord) = evaluate(region, pts, a, b) else {
                continue;
            };
            let score = chord.left_ids.len().max(chord.right_ids.len());
            if best.as_ref().is_none_or(|(s, _)| score < *s) {
                best = Some((score, chord));
            }
        }
        if best.as_ref().is_some_and(|(s, _)| *s <= cap) {
            break;
        }
    }
    best.map(|b| b.1)
}

/// A chord of `poly` leaving at most `ceil(2m/3)` of the `m` points on each
/// side when one exists; otherwise the most balanced chord found.
pub fn splitting_segment_simple(poly: &SimplePolygon, pts: &[Point2]) -> Result<SplittingSegment> {
    if pts.is_empty() {
        return invalid("splitting segment needs at least one point");
    }
    if let Some(i) = pts.iter().position(|&p| !poly.contains(p)) {
        return Err(SpannerError::OutsideFreeSpace { index: i });
    }
    let located: Vec<(usize, Point2)> = pts.iter().copied().enumerate().collect();
    best_chord(poly, &located)
        .map(|c| c.segment)
        .ok_or_else(|| SpannerError::Degenerate("no chord found".into()))
}

/// Sides of `pts` with respect to a chord: `(left, right)` point indices.
pub fn chord_sides(
    poly: &SimplePolygon,
    seg: &SplittingSegment,
    pts: &[Point2],
) -> Option<(Vec<usize>, Vec<usize>)> {
    let (left, _) = cut(poly, seg.a, seg.b)?;
    let mut sides = (Vec::new(), Vec::new());
    for (i, &x) in pts.iter().enumerate() {
        if on_segment(seg.a, seg.b, x) || left.contains(x) {
            sides.0.push(i);
        } else {
            sides.1.push(i);
        }
    }
    Some(sides)
}

/// Projects `ids` onto `seg` and adds an edge `{p, q}` (with geodesic base
/// length) for every spanner edge between projections of different points.
pub fn edges_from_projection(
    engine: &GeodesicEngine,
    points: &[WeightedPoint],
    ids: &[usize],
    seg: &SplittingSegment,
    params: &PolygonSpannerParams,
    graph: &mut SpannerGraph,
) -> Result<ProjectionSet> {
    params.validate()?;
    let mut b = Builder::new(engine, points, *params);
    b.graph = std::mem::replace(graph, SpannerGraph::new(0));
    let res = b.project(ids, seg);
    *graph = b.graph;
    res?;
    Ok(b.projections.pop().expect("projection recorded"))
}

fn check_points(engine: &GeodesicEngine, points: &[WeightedPoint]) -> Result<()> {
    validate_points(points)?;
    for (i, p) in points.iter().enumerate() {
        if p.dim() != 2 {
            return invalid(format!("point {i} has {} coordinates, expected 2", p.dim()));
        }
        if !engine.contains(p.xy()) {
            return Err(SpannerError::OutsideFreeSpace { index: i });
        }
    }
    Ok(())
}

/// Full construction with statistics and intermediate artifacts.
pub fn build_polygon_spanner_detailed(
    dom: &PolygonalDomain,
    points: &[WeightedPoint],
    params: &PolygonSpannerParams,
) -> Result<PolygonSpanner> {
    let engine = GeodesicEngine::new(dom.clone())?;
    build_with_engine(&engine, points, params)
}

/// Same as [`build_polygon_spanner_detailed`] with a prebuilt engine.
pub fn build_with_engine(
    engine: &GeodesicEngine,
    points: &[WeightedPoint],
    params: &PolygonSpannerParams,
) -> Result<PolygonSpanner> {
    params.validate()?;
    check_points(engine, points)?;
    let decomposition = decompose_domain(engine.domain())?;
    let xy: Vec<Point2> = points.iter().map(|p| p.xy()).collect();
    let assignment = decomposition.assign_points(&xy)?;
    let mut b = Builder::new(engine, points, *params);
    let faces: Vec<usize> = (0..decomposition.faces.len()).collect();
    b.split_domain(
        &decomposition,
        &assignment,
        &faces,
        (0..points.len()).collect(),
        0,
    )?;
    Ok(PolygonSpanner {
        graph: b.graph,
        decomposition,
        splits: b.splits,
        separators: b.separators,
        projections: b.projections,
        max_depth: b.max_depth,
    })
}

pub fn build_vftswp_simple_polygon(
    poly: &SimplePolygon,
    points: &[WeightedPoint],
    k: usize,
    eps: f64,
    refine: bool,
) -> Result<SpannerGraph> {
    build_vftswp_domain(
        &PolygonalDomain::simple(poly.clone()),
        points,
        k,
        eps,
        refine,
    )
}

pub fn build_vftswp_domain(
    dom: &PolygonalDomain,
    points: &[WeightedPoint],
    k: usize,
    eps: f64,
    refine: bool,
) -> Result<SpannerGraph> {
    Ok(
        build_polygon_spanner_detailed(dom, points, &PolygonSpannerParams::new(k, eps, refine))?
            .graph,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rect(x0: f64, y0: f64, x1: f64, y1: f64) -> SimplePolygon {
        SimplePolygon::new(vec![
            Point2::new(x0, y0),
            Point2::new(x1, y0),
            Point2::new(x1, y1),
            Point2::new(x0, y1),
        ])
        .unwrap()
    }

    fn inside(dom: &PolygonalDomain, n: usize, seed: u64) -> Vec<WeightedPoint> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::new();
        while out.len() < n {
            let p = Point2::new(rng.gen(), rng.gen());
            if dom.contains_strictly(p) {
                out.push(WeightedPoint::planar(out.len(), p, rng.gen()));
            }
        }
        out
    }

    #[test]
    fn corner_cluster_is_split() {
        let sq = rect(0.0, 0.0, 1.0, 1.0);
        let pts = [
            Point2::new(0.05, 0.05),
            Point2::new(0.1, 0.07),
            Point2::new(0.06, 0.12),
        ];
        let seg = splitting_segment_simple(&sq, &pts).unwrap();
        let (l, r) = chord_sides(&sq, &seg, &pts).unwrap();
        assert!(l.len() <= 2 && r.len() <= 2);
        let one = splitting_segment_simple(&sq, &pts[..1]).unwrap();
        let (l, r) = chord_sides(&sq, &one, &pts[..1]).unwrap();
        assert!(l.len() <= 1 && r.len() <= 1);
        assert!(splitting_segment_simple(&sq, &[]).is_err());
    }

    #[test]
    fn two_points_give_one_geodesic_edge() {
        let dom = PolygonalDomain::simple(rect(0.0, 0.0, 1.0, 1.0));
        let pts = inside(&dom, 2, 1);
        let g = build_vftswp_domain(&dom, &pts, 1, 0.5, false).unwrap();
        let e: Vec<_> = g.edges().collect();
        assert_eq!(e.len(), 1);
        assert!((e[0].2 - pts[0].euclidean(&pts[1])).abs() < 1e-12);
    }

    #[test]
    fn visible_pair_across_a_segment() {
        let dom = PolygonalDomain::simple(rect(0.0, 0.0, 1.0, 1.0));
        let engine = GeodesicEngine::new(dom).unwrap();
        let pts = vec![
            WeightedPoint::planar(0, Point2::new(0.2, 0.5), 0.1),
            WeightedPoint::planar(1, Point2::new(0.8, 0.4), 0.3),
        ];
        let seg = SplittingSegment::new(
            Point2::new(0.5, 0.0),
            Point2::new(0.5, 1.0),
            SegmentKind::PolygonChord,
        );
        let mut g = SpannerGraph::new(2);
        let set = edges_from_projection(
            &engine,
            &pts,
            &[0, 1],
            &seg,
            &PolygonSpannerParams::new(1, 0.5, false),
            &mut g,
        )
        .unwrap();
        assert_eq!(set.points.len(), 2);
        assert_eq!(g.base_length(0, 1), Some(pts[0].euclidean(&pts[1])));
        let mut g1 = SpannerGraph::new(2);
        edges_from_projection(
            &engine,
            &pts,
            &[0],
            &seg,
            &PolygonSpannerParams::new(1, 0.5, false),
            &mut g1,
        )
        .unwrap();
        assert_eq!(g1.edge_count(), 0);
    }

    #[test]
    fn refinement_cases() {
        let dom = PolygonalDomain::simple(rect(0.0, 0.0, 1.0, 1.0));
        let engine = GeodesicEngine::new(dom).unwrap();
        let seg = SplittingSegment::new(
            Point2::new(0.5, 0.0),
            Point2::new(0.5, 1.0),
            SegmentKind::PolygonChord,
        );
        let on = WeightedPoint::planar(0, Point2::new(0.5, 0.3), 0.2);
        let s = refine_projection_set(&engine, &on, &seg, 0.5, None).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!((s[0].point, s[0].weight), (on.xy(), 0.2));
        let p = WeightedPoint::planar(1, Point2::new(0.2, 0.4), 0.1);
        let s = refine_projection_set(&engine, &p, &seg, 1.0, None).unwrap();
        assert_eq!(s.len(), 1);
        assert!(s[0].point.dist(Point2::new(0.5, 0.4)) < 1e-12);
        let s = refine_projection_set(&engine, &p, &seg, 0.5, None).unwrap();
        assert!(s.len() <= 4 && s.len() >= 2);
        for q in &s {
            assert!(q.weight >= p.weight + 0.3 - 1e-12);
        }
    }

    #[test]
    fn single_polygon_matches_domain_entry_point() {
        let poly = rect(0.0, 0.0, 1.0, 1.0);
        let dom = PolygonalDomain::simple(poly.clone());
        let pts = inside(&dom, 12, 3);
        let a = build_vftswp_simple_polygon(&poly, &pts, 1, 0.5, true).unwrap();
        let b = build_vftswp_domain(&dom, &pts, 1, 0.5, true).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn splits_are_balanced_and_depth_is_logarithmic() {
        let dom =
            PolygonalDomain::new(rect(0.0, 0.0, 1.0, 1.0), vec![rect(0.3, 0.3, 0.6, 0.7)]).unwrap();
        let pts = inside(&dom, 30, 4);
        let out =
            build_polygon_spanner_detailed(&dom, &pts, &PolygonSpannerParams::new(1, 0.5, false))
                .unwrap();
        assert!(out.splits.iter().all(|s| s.is_balanced()));
        assert!(out
            .separators
            .iter()
            .all(|s| s.is_balanced() && s.is_small()));
        let bound =
            (30f64.ln() / 1.5f64.ln()).ceil() as usize + 1 + 2 * out.decomposition.faces.len();
        assert!(out.max_depth <= bound);
    }

    #[test]
    fn points_outside_are_rejected() {
        let dom =
            PolygonalDomain::new(rect(0.0, 0.0, 1.0, 1.0), vec![rect(0.3, 0.3, 0.6, 0.7)]).unwrap();
        let pts = vec![
            WeightedPoint::planar(0, Point2::new(0.1, 0.1), 0.0),
            WeightedPoint::planar(1, Point2::new(0.4, 0.4), 0.0),
        ];
        assert_eq!(
            build_vftswp_domain(&dom, &pts, 1, 0.5, false),
            Err(SpannerError::OutsideFreeSpace { index: 1 })
        );
    }
}
