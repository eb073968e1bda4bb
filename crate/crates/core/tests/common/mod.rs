//! Independent reference implementations used to check the library. Nothing
//! here calls into the library's geometry or shortest-path code.

#![allow(dead_code)]

use wvfts::geometry::Point2;
use wvfts::metric::WeightedPoint;
use wvfts::polygon::PolygonalDomain;

pub const TOL: f64 = 1e-9;

/// `w(p) + d + w(q)`, or 0 for the same point.
pub fn weighted(p: &WeightedPoint, q: &WeightedPoint, d: f64) -> f64 {
    if p.id == q.id {
        0.0
    } else {
        p.weight + d + q.weight
    }
}

pub fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Array-based Dijkstra over `w(u) + len + w(v)` edge costs, skipping removed
/// vertices. `None` means unreachable.
pub fn path_cost(
    points: &[WeightedPoint],
    edges: &[(usize, usize, f64)],
    removed: &[usize],
    src: usize,
) -> Vec<Option<f64>> {
    let n = points.len();
    let mut cost = vec![vec![f64::INFINITY; n]; n];
    for &(u, v, l) in edges {
        let c = points[u].weight + l + points[v].weight;
        cost[u][v] = cost[u][v].min(c);
        cost[v][u] = cost[v][u].min(c);
    }
    let mut dist = vec![f64::INFINITY; n];
    let mut done = vec![false; n];
    for &r in removed {
        done[r] = true;
    }
    dist[src] = 0.0;
    loop {
        let next = (0..n)
            .filter(|&v| !done[v] && dist[v].is_finite())
            .min_by(|&a, &b| dist[a].total_cmp(&dist[b]));
        let Some(u) = next else { break };
        done[u] = true;
        for v in 0..n {
            if !done[v] && dist[u] + cost[u][v] < dist[v] {
                dist[v] = dist[u] + cost[u][v];
            }
        }
    }
    (0..n)
        .map(|v| {
            if removed.contains(&v) || !dist[v].is_finite() {
                None
            } else {
                Some(dist[v])
            }
        })
        .collect()
}

/// Worst stretch over every removal set of size at most `k`, and the smallest
/// ratio seen, by brute force.
pub fn brute_stretch(
    points: &[WeightedPoint],
    edges: &[(usize, usize, f64)],
    base: impl Fn(usize, usize) -> f64,
    k: usize,
) -> (f64, f64) {
    let n = points.len();
    let mut sets: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..k {
        let mut grown = Vec::new();
        for s in &sets {
            let start = s.last().map_or(0, |&x| x + 1);
            for v in start..n {
                let mut t = s.clone();
                t.push(v);
                grown.push(t);
            }
        }
        sets.extend(grown.into_iter().filter(|s| s.len() <= k));
        sets.sort();
        sets.dedup();
    }
    let (mut worst, mut least) = (1.0f64, f64::INFINITY);
    for s in &sets {
        for p in 0..n {
            if s.contains(&p) {
                continue;
            }
            let dist = path_cost(points, edges, s, p);
            for q in p + 1..n {
                if s.contains(&q) {
                    continue;
                }
                let dw = weighted(&points[p], &points[q], base(p, q));
                let ratio = match dist[q] {
                    None => f64::INFINITY,
                    Some(d) if dw == 0.0 => {
                        if d == 0.0 {
                            1.0
                        } else {
                            f64::INFINITY
                        }
                    }
                    Some(d) => d / dw,
                };
                worst = worst.max(ratio);
                least = least.min(ratio);
            }
        }
    }
    (worst, least)
}

fn orient(a: Point2, b: Point2, c: Point2) -> f64 {
    (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
}

fn seg_dist(a: Point2, b: Point2, p: Point2) -> f64 {
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((p.x - a.x) * dx + (p.y - a.y) * dy) / len2).clamp(0.0, 1.0)
    };
    (a.x + t * dx - p.x).hypot(a.y + t * dy - p.y)
}

fn rings(dom: &PolygonalDomain) -> Vec<Vec<Point2>> {
    std::iter::once(dom.outer().vertices().to_vec())
        .chain(dom.holes().iter().map(|h| h.vertices().to_vec()))
        .collect()
}

fn ring_edges(ring: &[Point2]) -> impl Iterator<Item = (Point2, Point2)> + '_ {
    (0..ring.len()).map(move |i| (ring[i], ring[(i + 1) % ring.len()]))
}

/// Even-odd ray casting.
fn in_ring(ring: &[Point2], p: Point2) -> bool {
    let mut inside = false;
    for (a, b) in ring_edges(ring) {
        if (a.y > p.y) != (b.y > p.y) && p.x < a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y) {
            inside = !inside;
        }
    }
    inside
}

fn on_ring(ring: &[Point2], p: Point2) -> bool {
    ring_edges(ring).any(|(a, b)| seg_dist(a, b, p) <= 1e-12)
}

/// Closed free-space membership.
pub fn in_free_space(dom: &PolygonalDomain, p: Point2) -> bool {
    let rs = rings(dom);
    if !(in_ring(&rs[0], p) || on_ring(&rs[0], p)) {
        return false;
    }
    rs[1..].iter().all(|h| on_ring(h, p) || !in_ring(h, p))
}

fn visible(dom: &PolygonalDomain, a: Point2, b: Point2) -> bool {
    let rs = rings(dom);
    let mut cuts = vec![0.0, 1.0];
    let len2 = (b.x - a.x).powi(2) + (b.y - a.y).powi(2);
    for r in &rs {
        for (c, d) in ring_edges(r) {
            let (o1, o2) = (orient(a, b, c), orient(a, b, d));
            let (o3, o4) = (orient(c, d, a), orient(c, d, b));
            if o1 * o2 < 0.0 && o3 * o4 < 0.0 {
                return false;
            }
            if len2 > 0.0 && seg_dist(a, b, c) <= 1e-12 {
                cuts.push(((c.x - a.x) * (b.x - a.x) + (c.y - a.y) * (b.y - a.y)) / len2);
            }
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.windows(2).all(|w| {
        let t = 0.5 * (w[0] + w[1]);
        in_free_space(
            dom,
            Point2::new(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)),
        )
    })
}

/// Shortest path length through the visibility graph on every boundary
/// vertex plus the two query points.
pub fn geodesic(dom: &PolygonalDomain, a: Point2, b: Point2) -> f64 {
    let mut nodes = vec![a, b];
    for r in rings(dom) {
        nodes.extend(r);
    }
    let n = nodes.len();
    let mut dist = vec![f64::INFINITY; n];
    let mut done = vec![false; n];
    dist[0] = 0.0;
    while let Some(u) = (0..n)
        .filter(|&v| !done[v] && dist[v].is_finite())
        .min_by(|&x, &y| dist[x].total_cmp(&dist[y]))
    {
        if u == 1 {
            break;
        }
        done[u] = true;
        for v in 0..n {
            if !done[v] && visible(dom, nodes[u], nodes[v]) {
                let d = dist[u] + nodes[u].dist(nodes[v]);
                if d < dist[v] {
                    dist[v] = d;
                }
            }
        }
    }
    dist[1]
}

pub fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * (1.0 + a.abs().max(b.abs()))
}
