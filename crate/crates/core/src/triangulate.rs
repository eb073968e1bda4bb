//! Ear-clipping triangulation of simple polygons, with the dual tree.

use std::collections::{HashMap, VecDeque};

use crate::error::{Result, SpannerError};
use crate::geometry::{orient, orient_sign, Point2, GEOM_EPS};

/// Triangles index into the polygon's vertex list and are counterclockwise.
/// Vertices where the boundary runs straight are never triangle corners.
#[derive(Debug, Clone)]
pub struct Triangulation {
    pub points: Vec<Point2>,
    pub triangles: Vec<[usize; 3]>,
    /// `adjacent[t][e]` is the triangle across edge `(tri[e], tri[(e+1)%3])`.
    pub adjacent: Vec<[Option<usize>; 3]>,
}

fn in_closed_triangle(a: Point2, b: Point2, c: Point2, p: Point2) -> bool {
    orient_sign(a, b, p) >= 0 && orient_sign(b, c, p) >= 0 && orient_sign(c, a, p) >= 0
}

/// Triangulates a counterclockwise simple polygon.
pub fn triangulate(points: &[Point2]) -> Result<Triangulation> {
    let n = points.len();
    let mut ring: Vec<usize> = (0..n)
        .filter(|&i| orient_sign(points[(i + n - 1) % n], points[i], points[(i + 1) % n]) != 0)
        .collect();
    let mut triangles = Vec::with_capacity(n.saturating_sub(2));
    while ring.len() > 3 {
        let m = ring.len();
        let mut clipped = None;
        for j in 0..m {
            let (ia, ib, ic) = (ring[(j + m - 1) % m], ring[j], ring[(j + 1) % m]);
            let (a, b, c) = (points[ia], points[ib], points[ic]);
            if orient_sign(a, b, c) <= 0 {
                continue;
            }
            let blocked = ring.iter().any(|&o| {
                o != ia
                    && o != ib
                    && o != ic
                    && points[o].dist(a) > GEOM_EPS
                    && points[o].dist(c) > GEOM_EPS
                    && in_closed_triangle(a, b, c, points[o])
            });
            if !blocked {
                clipped = Some(j);
                break;
            }
        }
        let j = clipped
            .ok_or_else(|| SpannerError::Degenerate("no ear found while triangulating".into()))?;
        let m = ring.len();
        triangles.push([ring[(j + m - 1) % m], ring[j], ring[(j + 1) % m]]);
        ring.remove(j);
    }
    if ring.len() == 3 {
        let t = [ring[0], ring[1], ring[2]];
        if orient(points[t[0]], points[t[1]], points[t[2]]) > 0.0 {
            triangles.push(t);
        }
    }
    if triangles.is_empty() {
        return Err(SpannerError::Degenerate(
            "polygon has no non-degenerate triangle".into(),
        ));
    }
    let mut by_edge: HashMap<(usize, usize), (usize, usize)> = HashMap::new();
    let mut adjacent = vec![[None; 3]; triangles.len()];
    for (ti, t) in triangles.iter().enumerate() {
        for e in 0..3 {
            let (u, v) = (t[e], t[(e + 1) % 3]);
            let key = (u.min(v), u.max(v));
            if let Some(&(oj, oe)) = by_edge.get(&key) {
                adjacent[ti][e] = Some(oj);
                adjacent[oj][oe] = Some(ti);
            } else {
                by_edge.insert(key, (ti, e));
            }
        }
    }
    Ok(Triangulation {
        points: points.to_vec(),
        triangles,
        adjacent,
    })
}

impl Triangulation {
    pub fn corners(&self, t: usize) -> [Point2; 3] {
        let [a, b, c] = self.triangles[t];
        [self.points[a], self.points[b], self.points[c]]
    }

    /// First triangle containing `p` (closed), falling back to the nearest
    /// one for points within rounding distance of the polygon.
    pub fn locate(&self, p: Point2) -> Option<usize> {
        let mut best = (f64::INFINITY, None);
        for t in 0..self.triangles.len() {
            let [a, b, c] = self.corners(t);
            if in_closed_triangle(a, b, c, p) {
                return Some(t);
            }
            let d = crate::geometry::point_segment_distance(a, b, p)
                .min(crate::geometry::point_segment_distance(b, c, p))
                .min(crate::geometry::point_segment_distance(c, a, p));
            if d < best.0 {
                best = (d, Some(t));
            }
        }
        if best.0 <= 1e-9 {
            best.1
        } else {
            None
        }
    }

    /// Triangle sequence from `from` to `to` in the dual tree.
    pub fn dual_path(&self, from: usize, to: usize) -> Vec<usize> {
        let mut prev = vec![usize::MAX; self.triangles.len()];
        prev[from] = from;
        let mut queue = VecDeque::from([from]);
        while let Some(t) = queue.pop_front() {
            if t == to {
                break;
            }
            for nb in self.adjacent[t].iter().flatten() {
                if prev[*nb] == usize::MAX {
                    prev[*nb] = t;
                    queue.push_back(*nb);
                }
            }
        }
        let mut path = vec![to];
        let mut cur = to;
        while cur != from {
            cur = prev[cur];
            path.push(cur);
        }
        path.reverse();
        path
    }

    /// Diagonals as vertex-index pairs `(min, max)`.
    pub fn diagonals(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (ti, t) in self.triangles.iter().enumerate() {
            for e in 0..3 {
                if let Some(o) = self.adjacent[ti][e] {
                    if o > ti {
                        let (u, v) = (t[e], t[(e + 1) % 3]);
                        out.push((u.min(v), u.max(v)));
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }
}
