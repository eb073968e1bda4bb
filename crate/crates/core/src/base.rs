//! Fault-tolerant Yao-style cone spanner for unweighted points.
//!
//! Every point connects to its `k + 1` nearest neighbours inside each cone of
//! a fixed direction cover. When `v` lies in a cone of `u` and at most `k`
//! vertices fail, one of those `k + 1` neighbours survives, is no farther from
//! `u` than `v`, and strictly shrinks the remaining distance, which yields
//! stretch `1 / (1 - 2 sin(theta / 2))` for cones of angular diameter `theta`.
//!
//! Collinear inputs use the line rule instead: connect each point to its
//! `k + 1` predecessors and successors along the line, giving stretch 1.

use std::collections::HashMap;
use std::f64::consts::PI;

use crate::error::{invalid, Result};
use crate::metric::{euclidean, SpannerGraph};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaseSpannerParams {
    pub k: usize,
    pub t_b: f64,
}

impl BaseSpannerParams {
    pub fn new(k: usize, t_b: f64) -> Result<Self> {
        if !(t_b > 1.0) || !t_b.is_finite() {
            return invalid(format!("base stretch must be finite and > 1, got {t_b}"));
        }
        Ok(BaseSpannerParams { k, t_b })
    }

    /// The default used on cluster centers: `t_B = 2 + eps`.
    pub fn for_clusters(k: usize, eps: f64) -> Result<Self> {
        Self::new(k, 2.0 + eps)
    }

    pub fn cone_count(&self, dim: usize) -> Result<usize> {
        Ok(ConeCover::for_stretch(dim, self.t_b)?.count())
    }
}

/// Stretch guaranteed by cones whose angular diameter is `theta`.
pub fn cone_stretch(theta: f64) -> f64 {
    let s = 1.0 - 2.0 * (theta / 2.0).sin();
    if s <= 0.0 {
        f64::INFINITY
    } else {
        1.0 / s
    }
}

/// A partition of the direction sphere into convex cones.
#[derive(Debug, Clone, PartialEq)]
pub enum ConeCover {
    /// Equal angular sectors in the plane.
    Planar { sectors: usize },
    /// Each facet of the cube `[-1, 1]^d` split into a grid of `cells^(d-1)`
    /// boxes; a direction belongs to the box its central projection hits.
    Cube { dim: usize, cells: usize },
}

impl ConeCover {
    pub fn for_stretch(dim: usize, t: f64) -> Result<Self> {
        match dim {
            0 | 1 => invalid("cone covers need dimension >= 2"),
            2 => {
                let mut c = 4;
                while cone_stretch(2.0 * PI / c as f64) > t {
                    c += 1;
                }
                Ok(ConeCover::Planar { sectors: c })
            }
            d if d <= 6 => {
                let mut m = 1;
                while cone_stretch(cube_cell_diameter(d, m)) > t {
                    m += 1;
                    if m > 64 {
                        return invalid(format!(
                            "stretch {t} needs too many cones in dimension {d}"
                        ));
                    }
                }
                Ok(ConeCover::Cube { dim: d, cells: m })
            }
            d => invalid(format!("dimension {d} is not supported (max 6)")),
        }
    }

    pub fn count(&self) -> usize {
        match *self {
            ConeCover::Planar { sectors } => sectors,
            ConeCover::Cube { dim, cells } => 2 * dim * cells.pow(dim as u32 - 1),
        }
    }

    /// Largest angle between two directions of the same cone.
    pub fn diameter(&self) -> f64 {
        match *self {
            ConeCover::Planar { sectors } => 2.0 * PI / sectors as f64,
            ConeCover::Cube { dim, cells } => cube_cell_diameter(dim, cells),
        }
    }

    pub fn cone_of(&self, v: &[f64]) -> usize {
        match *self {
            ConeCover::Planar { sectors } => {
                let mut a = v[1].atan2(v[0]);
                if a < 0.0 {
                    a += 2.0 * PI;
                }
                ((a / (2.0 * PI) * sectors as f64) as usize).min(sectors - 1)
            }
            ConeCover::Cube { dim, cells } => {
                let mut axis = 0;
                for i in 1..dim {
                    if v[i].abs() > v[axis].abs() {
                        axis = i;
                    }
                }
                let scale = v[axis].abs();
                let facet = 2 * axis + usize::from(v[axis] < 0.0);
                let mut idx = facet;
                for (j, &c) in v.iter().enumerate().take(dim) {
                    if j == axis {
                        continue;
                    }
                    let y = c / scale;
                    let cell = (((y + 1.0) / 2.0 * cells as f64) as usize).min(cells - 1);
                    idx = idx * cells + cell;
                }
                idx
            }
        }
    }
}

fn angle_between(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    (dot / (na * nb)).clamp(-1.0, 1.0).acos()
}

/// Maximum angular diameter over the grid cells of one cube facet. Cones over
/// boxes are convex, so the diameter is attained between two corner rays.
fn cube_cell_diameter(dim: usize, cells: usize) -> f64 {
    let free = dim - 1;
    let step = 2.0 / cells as f64;
    let mut worst: f64 = 0.0;
    let total = cells.pow(free as u32);
    for cell in 0..total {
        let mut rem = cell;
        let mut lo = vec![0.0; free];
        for l in lo.iter_mut() {
            *l = -1.0 + (rem % cells) as f64 * step;
            rem /= cells;
        }
        let corners: Vec<Vec<f64>> = (0..1usize << free)
            .map(|mask| {
                let mut c = vec![1.0];
                for (j, &l) in lo.iter().enumerate() {
                    c.push(if mask >> j & 1 == 1 { l + step } else { l });
                }
                c
            })
            .collect();
        for i in 0..corners.len() {
            for j in i + 1..corners.len() {
                worst = worst.max(angle_between(&corners[i], &corners[j]));
            }
        }
    }
    worst
}

/// Returns `Some(direction, origin)` when every point lies on one line.
fn common_line(points: &[Vec<f64>]) -> Option<(Vec<f64>, Vec<f64>)> {
    let origin = points[0].clone();
    let far = points
        .iter()
        .max_by(|a, b| euclidean(a, &origin).total_cmp(&euclidean(b, &origin)))?;
    let len = euclidean(far, &origin);
    let dim = origin.len();
    if len == 0.0 {
        let mut dir = vec![0.0; dim];
        dir[0] = 1.0;
        return Some((dir, origin));
    }
    let dir: Vec<f64> = far
        .iter()
        .zip(&origin)
        .map(|(f, o)| (f - o) / len)
        .collect();
    let tol = 1e-12 * len.max(1.0);
    for p in points {
        let rel: Vec<f64> = p.iter().zip(&origin).map(|(a, o)| a - o).collect();
        let t: f64 = rel.iter().zip(&dir).map(|(r, d)| r * d).sum();
        let off: f64 = rel
            .iter()
            .zip(&dir)
            .map(|(r, d)| (r - t * d) * (r - t * d))
            .sum::<f64>()
            .sqrt();
        if off > tol {
            return None;
        }
    }
    Some((dir, origin))
}

fn line_spanner(points: &[Vec<f64>], dir: &[f64], origin: &[f64], k: usize) -> SpannerGraph {
    let n = points.len();
    let mut order: Vec<(f64, usize)> = points
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let t: f64 = p
                .iter()
                .zip(origin)
                .zip(dir)
                .map(|((a, o), d)| (a - o) * d)
                .sum();
            (t, i)
        })
        .collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut g = SpannerGraph::new(n);
    for i in 0..n {
        for j in i + 1..(i + k + 2).min(n) {
            let (u, v) = (order[i].1, order[j].1);
            g.add_edge(u, v, euclidean(&points[u], &points[v]));
        }
    }
    g
}

/// Builds a `(k, t_B)` vertex-fault-tolerant spanner (Euclidean edge lengths).
///
/// Points of dimension >= 2 must be pairwise distinct unless they are all
/// collinear; on a line, coincident points are ordered by index.
pub fn build_base_vfts(points: &[Vec<f64>], params: &BaseSpannerParams) -> Result<SpannerGraph> {
    let n = points.len();
    let mut g = SpannerGraph::new(n);
    if n < 2 {
        return Ok(g);
    }
    let dim = points[0].len();
    if dim == 0 || points.iter().any(|p| p.len() != dim) {
        return invalid("points must share a positive dimension");
    }
    if dim == 1 {
        return Ok(line_spanner(points, &[1.0], &[0.0], params.k));
    }
    if let Some((dir, origin)) = common_line(points) {
        return Ok(line_spanner(points, &dir, &origin, params.k));
    }
    let mut seen: HashMap<Vec<u64>, usize> = HashMap::new();
    for (i, p) in points.iter().enumerate() {
        let key: Vec<u64> = p.iter().map(|c| (c + 0.0).to_bits()).collect();
        if let Some(j) = seen.insert(key, i) {
            return invalid(format!(
                "points {j} and {i} coincide; perturb duplicates before building"
            ));
        }
    }
    let cover = ConeCover::for_stretch(dim, params.t_b)?;
    let keep = params.k + 1;
    for u in 0..n {
        let mut by_cone: HashMap<usize, Vec<(f64, usize)>> = HashMap::new();
        for v in 0..n {
            if v == u {
                continue;
            }
            let dirv: Vec<f64> = points[v]
                .iter()
                .zip(&points[u])
                .map(|(a, b)| a - b)
                .collect();
            let cone = cover.cone_of(&dirv);
            by_cone
                .entry(cone)
                .or_default()
                .push((euclidean(&points[u], &points[v]), v));
        }
        let mut cones: Vec<_> = by_cone.into_iter().collect();
        cones.sort_by_key(|(c, _)| *c);
        for (_, mut cands) in cones {
            cands.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            for &(d, v) in cands.iter().take(keep) {
                g.add_edge(u, v, d);
            }
        }
    }
    Ok(g)
}

/// The `k` neighbours of `v` with the smallest stored edge length, ties broken
/// by smaller index.
pub fn k_nearest_neighbors_in_graph(g: &SpannerGraph, v: usize, k: usize) -> Result<Vec<usize>> {
    if v >= g.n() {
        return invalid(format!("vertex {v} out of range for n = {}", g.n()));
    }
    let mut nb: Vec<(f64, usize)> = g
        .neighbors(v)
        .into_iter()
        .map(|u| (g.base_length(u, v).unwrap_or(f64::INFINITY), u))
        .collect();
    nb.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    Ok(nb.into_iter().take(k).map(|(_, u)| u).collect())
}
