//! Decomposition of a polygonal domain into simple faces.
//!
//! From the leftmost and rightmost vertex of every hole a vertical segment is
//! extended up and down to the first boundary hit. The faces of the resulting
//! arrangement are simple polygons; any face with more than three
//! decomposition segments on its boundary is cut further along a diagonal of
//! its triangulation.

use std::collections::HashMap;

use crate::error::{Result, SpannerError};
use crate::geometry::{on_segment, segment_param, Point2, GEOM_EPS};
use crate::polygon::{PolygonalDomain, SegmentKind, SimplePolygon, SplittingSegment};
use crate::separator::WeightedGraph;
use crate::triangulate::triangulate;

/// Distance below which a ray hit snaps to a boundary vertex.
const SNAP: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Face {
    pub polygon: SimplePolygon,
    /// Indices into [`DomainDecomposition::segments`].
    pub segments: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DomainDecomposition {
    pub faces: Vec<Face>,
    pub segments: Vec<SplittingSegment>,
    /// Pairs of faces sharing a segment, `(lo, hi)`, sorted.
    pub dual_edges: Vec<(usize, usize)>,
}

impl DomainDecomposition {
    /// Lowest-index face containing each point.
    pub fn assign_points(&self, points: &[Point2]) -> Result<Vec<usize>> {
        points
            .iter()
            .enumerate()
            .map(|(i, &p)| {
                if let Some(f) = self.faces.iter().position(|f| f.polygon.contains(p)) {
                    return Ok(f);
                }
                self.faces
                    .iter()
                    .enumerate()
                    .map(|(f, face)| (face.polygon.boundary_distance(p), f))
                    .min_by(|a, b| a.0.total_cmp(&b.0))
                    .filter(|(d, _)| *d <= SNAP)
                    .map(|(_, f)| f)
                    .ok_or(SpannerError::OutsideFreeSpace { index: i })
            })
            .collect()
    }

    /// Dual graph with node weight equal to the number of assigned points.
    pub fn dual_graph(&self, assignment: &[usize]) -> WeightedGraph {
        let mut weights = vec![0.0; self.faces.len()];
        for &f in assignment {
            weights[f] += 1.0;
        }
        WeightedGraph::new(weights, &self.dual_edges)
    }
}

struct Ray {
    from: Point2,
    to: Point2,
}

fn shoot(dom: &PolygonalDomain, edges: &[(Point2, Point2)], o: Point2, sign: f64) -> Result<Ray> {
    let mut best = f64::INFINITY;
    for &(c, d) in edges {
        let (lo, hi) = (c.x.min(d.x), c.x.max(d.x));
        if o.x < lo || o.x > hi {
            continue;
        }
        let ys: Vec<f64> = if c.x == d.x {
            vec![c.y, d.y]
        } else {
            vec![c.y + (o.x - c.x) * (d.y - c.y) / (d.x - c.x)]
        };
        for y in ys {
            let t = (y - o.y) * sign;
            if t > GEOM_EPS && t < best {
                best = t;
            }
        }
    }
    if !best.is_finite() {
        return Err(SpannerError::Degenerate(
            "vertical ray escaped the domain".into(),
        ));
    }
    let mut hit = Point2::new(o.x, o.y + sign * best);
    for (v, _) in dom.vertices_with_reflex_flag() {
        if v.dist(hit) <= SNAP {
            hit = v;
            break;
        }
    }
    Ok(Ray { from: o, to: hit })
}

/// Vertical segments from the extreme vertices of each hole.
fn vertical_segments(dom: &PolygonalDomain) -> Result<Vec<(Point2, Point2)>> {
    let edges = dom.boundary_edges();
    let mut out: Vec<(Point2, Point2)> = Vec::new();
    for hole in dom.holes() {
        let vs = hole.vertices();
        let min_x = vs.iter().map(|v| v.x).fold(f64::INFINITY, f64::min);
        let max_x = vs.iter().map(|v| v.x).fold(f64::NEG_INFINITY, f64::max);
        for x in [min_x, max_x] {
            let column: Vec<Point2> = vs.iter().copied().filter(|v| v.x == x).collect();
            let top = column
                .iter()
                .copied()
                .max_by(|a, b| a.y.total_cmp(&b.y))
                .unwrap();
            let bottom = column
                .iter()
                .copied()
                .min_by(|a, b| a.y.total_cmp(&b.y))
                .unwrap();
            for (origin, sign) in [(top, 1.0), (bottom, -1.0)] {
                let ray = shoot(dom, &edges, origin, sign)?;
                let key = if ray.from.y <= ray.to.y {
                    (ray.from, ray.to)
                } else {
                    (ray.to, ray.from)
                };
                if !out.contains(&key) {
                    out.push(key);
                }
            }
        }
    }
    Ok(out)
}

fn point_key(p: Point2) -> (u64, u64) {
    (p.x.to_bits(), p.y.to_bits())
}

/// Planar arrangement of the boundary and the vertical segments.
struct Arrangement {
    points: Vec<Point2>,
    /// Outgoing neighbours per vertex, sorted counterclockwise by angle.
    around: Vec<Vec<usize>>,
    /// Half-edges with free space on their left.
    traced: Vec<(usize, usize)>,
    segment_edges: Vec<(usize, usize)>,
}

impl Arrangement {
    fn build(dom: &PolygonalDomain, segments: &[(Point2, Point2)]) -> Self {
        let mut ids: HashMap<(u64, u64), usize> = HashMap::new();
        let mut points = Vec::new();
        let mut id = |p: Point2, points: &mut Vec<Point2>| {
            *ids.entry(point_key(p)).or_insert_with(|| {
                points.push(p);
                points.len() - 1
            })
        };
        let endpoints: Vec<Point2> = segments.iter().flat_map(|s| [s.0, s.1]).collect();
        let mut traced = Vec::new();
        for ring in dom.boundary_rings() {
            let n = ring.len();
            for i in 0..n {
                let (a, b) = (ring[i], ring[(i + 1) % n]);
                let mut inner: Vec<Point2> = endpoints
                    .iter()
                    .copied()
                    .filter(|&e| e != a && e != b && on_segment(a, b, e))
                    .collect();
                inner.sort_by(|p, q| segment_param(a, b, *p).total_cmp(&segment_param(a, b, *q)));
                inner.dedup();
                let mut chain = vec![a];
                chain.extend(inner);
                chain.push(b);
                for w in chain.windows(2) {
                    let (u, v) = (id(w[0], &mut points), id(w[1], &mut points));
                    traced.push((u, v));
                }
            }
        }
        let mut segment_edges = Vec::new();
        for &(a, b) in segments {
            let (u, v) = (id(a, &mut points), id(b, &mut points));
            segment_edges.push((u, v));
            traced.push((u, v));
            traced.push((v, u));
        }
        let mut around = vec![Vec::new(); points.len()];
        for &(u, v) in &traced {
            if !around[u].contains(&v) {
                around[u].push(v);
            }
            if !around[v].contains(&u) {
                around[v].push(u);
            }
        }
        for (u, nbrs) in around.iter_mut().enumerate() {
            let o = points[u];
            nbrs.sort_by(|&a, &b| {
                let (da, db) = (points[a] - o, points[b] - o);
                da.y.atan2(da.x).total_cmp(&db.y.atan2(db.x))
            });
        }
        Arrangement {
            points,
            around,
            traced,
            segment_edges,
        }
    }

    /// Next half-edge of the face left of `u -> v`: the first edge clockwise
    /// from `v -> u` around `v`.
    fn next(&self, u: usize, v: usize) -> usize {
        let nbrs = &self.around[v];
        let i = nbrs
            .iter()
            .position(|&x| x == u)
            .expect("twin half-edge exists");
        nbrs[(i + nbrs.len() - 1) % nbrs.len()]
    }

    /// Faces as vertex-id cycles.
    fn faces(&self) -> Vec<Vec<usize>> {
        let mut used: HashMap<(usize, usize), bool> =
            self.traced.iter().map(|&e| (e, false)).collect();
        let mut out = Vec::new();
        for &start in &self.traced {
            if used[&start] {
                continue;
            }
            let mut cycle = Vec::new();
            let (mut u, mut v) = start;
            loop {
                used.insert((u, v), true);
                cycle.push(u);
                let w = self.next(u, v);
                (u, v) = (v, w);
                if (u, v) == start || cycle.len() > self.traced.len() {
                    break;
                }
            }
            out.push(cycle);
        }
        out
    }
}

/// A face during refinement: its ring and whether each ring edge is a
/// decomposition segment.
#[derive(Debug, Clone)]
struct RawFace {
    ring: Vec<Point2>,
    is_segment: Vec<bool>,
}

impl RawFace {
    fn segment_count(&self) -> usize {
        self.is_segment.iter().filter(|&&s| s).count()
    }

    /// Cuts along the triangulation diagonal that best balances the segment
    /// counts of the two pieces.
    fn split(&self) -> Result<(RawFace, RawFace)> {
        let tri = triangulate(&self.ring)?;
        let s = self.segment_count();
        let mut best: Option<(usize, (usize, usize))> = None;
        for (i, j) in tri.diagonals() {
            let a = self.is_segment[i..j].iter().filter(|&&x| x).count();
            let balance = a.min(s - a);
            if best.is_none_or(|(b, _)| balance > b) {
                best = Some((balance, (i, j)));
            }
        }
        let (balance, (i, j)) =
            best.ok_or_else(|| SpannerError::Degenerate("face has no diagonal".into()))?;
        if balance < 2 {
            return Err(SpannerError::Degenerate(
                "no diagonal reduces the segment count".into(),
            ));
        }
        let n = self.ring.len();
        let first = RawFace {
            ring: self.ring[i..=j].to_vec(),
            is_segment: self.is_segment[i..j]
                .iter()
                .copied()
                .chain([true])
                .collect(),
        };
        let mut ring: Vec<Point2> = self.ring[j..].to_vec();
        ring.extend_from_slice(&self.ring[..=i]);
        let mut flags: Vec<bool> = self.is_segment[j..n].to_vec();
        flags.extend_from_slice(&self.is_segment[..i]);
        flags.push(true);
        Ok((
            first,
            RawFace {
                ring,
                is_segment: flags,
            },
        ))
    }
}

fn segment_key(a: Point2, b: Point2) -> ((u64, u64), (u64, u64)) {
    let (ka, kb) = (point_key(a), point_key(b));
    if ka <= kb {
        (ka, kb)
    } else {
        (kb, ka)
    }
}

/// Splits the domain into simple faces, each bounded by at most three
/// decomposition segments.
pub fn decompose_domain(dom: &PolygonalDomain) -> Result<DomainDecomposition> {
    let vertical = vertical_segments(dom)?;
    let arr = Arrangement::build(dom, &vertical);
    let segment_set: std::collections::HashSet<(usize, usize)> = arr
        .segment_edges
        .iter()
        .flat_map(|&(u, v)| [(u, v), (v, u)])
        .collect();
    let mut pending: Vec<RawFace> = arr
        .faces()
        .into_iter()
        .map(|cycle| {
            let n = cycle.len();
            RawFace {
                ring: cycle.iter().map(|&v| arr.points[v]).collect(),
                is_segment: (0..n)
                    .map(|i| segment_set.contains(&(cycle[i], cycle[(i + 1) % n])))
                    .collect(),
            }
        })
        .collect();
    let mut done = Vec::new();
    while let Some(face) = pending.pop() {
        if face.segment_count() > 3 {
            let (a, b) = face.split()?;
            pending.push(b);
            pending.push(a);
        } else {
            done.push(face);
        }
    }
    done.reverse();

    let mut segments: Vec<SplittingSegment> = Vec::new();
    let mut seg_index: HashMap<_, usize> = HashMap::new();
    let mut faces = Vec::new();
    let mut owners: Vec<Vec<usize>> = Vec::new();
    for (fi, raw) in done.iter().enumerate() {
        let polygon = SimplePolygon::new(raw.ring.clone()).map_err(|_| {
            SpannerError::Degenerate(format!("decomposition face {fi} is not a simple polygon"))
        })?;
        if polygon.vertices() != raw.ring.as_slice() {
            return Err(SpannerError::Degenerate(format!(
                "decomposition face {fi} is clockwise"
            )));
        }
        let n = raw.ring.len();
        let mut segs = Vec::new();
        for e in (0..n).filter(|&e| raw.is_segment[e]) {
            let (a, b) = (raw.ring[e], raw.ring[(e + 1) % n]);
            let idx = *seg_index.entry(segment_key(a, b)).or_insert_with(|| {
                let (a, b) = if point_key(a) <= point_key(b) {
                    (a, b)
                } else {
                    (b, a)
                };
                segments.push(SplittingSegment::new(
                    a,
                    b,
                    SegmentKind::DecompositionSegment,
                ));
                owners.push(Vec::new());
                segments.len() - 1
            });
            owners[idx].push(fi);
            segs.push(idx);
        }
        segs.sort_unstable();
        faces.push(Face {
            polygon,
            segments: segs,
        });
    }
    let mut dual_edges: Vec<(usize, usize)> = owners
        .iter()
        .filter(|o| o.len() == 2)
        .map(|o| (o[0].min(o[1]), o[0].max(o[1])))
        .collect();
    dual_edges.sort_unstable();
    dual_edges.dedup();
    if faces.len() > 8 * (dom.hole_count() + 1) {
        return Err(SpannerError::Degenerate(format!(
            "decomposition produced {} faces for {} holes",
            faces.len(),
            dom.hole_count()
        )));
    }
    Ok(DomainDecomposition {
        faces,
        segments,
        dual_edges,
    })
}
