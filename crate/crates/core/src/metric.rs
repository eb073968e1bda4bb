//! Weighted points, the additive weighted distance, and path costs in spanner
//! graphs.
//!
//! Traversing an edge `{u, v}` costs `w(u) + len(u, v) + w(v)`, so a vertex in
//! the middle of a path contributes its weight once for each incident hop.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BinaryHeap};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::geometry::Point2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedPoint {
    pub id: usize,
    pub coords: Vec<f64>,
    pub weight: f64,
}

impl WeightedPoint {
    pub fn new(id: usize, coords: Vec<f64>, weight: f64) -> Self {
        WeightedPoint { id, coords, weight }
    }

    pub fn planar(id: usize, p: Point2, weight: f64) -> Self {
        WeightedPoint::new(id, vec![p.x, p.y], weight)
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// First two coordinates as a planar point.
    pub fn xy(&self) -> Point2 {
        Point2::new(self.coords[0], self.coords.get(1).copied().unwrap_or(0.0))
    }

    pub fn euclidean(&self, other: &WeightedPoint) -> f64 {
        euclidean(&self.coords, &other.coords)
    }
}

pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Checks the point-set invariants: contiguous ids, non-negative finite
/// weights, a common dimension and finite coordinates.
pub fn validate_points(points: &[WeightedPoint]) -> Result<()> {
    let dim = points.first().map_or(0, WeightedPoint::dim);
    for (i, p) in points.iter().enumerate() {
        if p.id != i {
            return invalid(format!(
                "point at position {i} has id {}; ids must be 0..n in order",
                p.id
            ));
        }
        if !(p.weight.is_finite() && p.weight >= 0.0) {
            return invalid(format!(
                "point {i} has weight {}; weights must be finite and >= 0",
                p.weight
            ));
        }
        if p.dim() != dim || dim == 0 {
            return invalid(format!(
                "point {i} has dimension {}, expected {dim}",
                p.dim()
            ));
        }
        if p.coords.iter().any(|c| !c.is_finite()) {
            return invalid(format!("point {i} has a non-finite coordinate"));
        }
    }
    Ok(())
}

/// `w(p) + pi_len + w(q)` for distinct points, zero for the same point.
pub fn weighted_distance(p: &WeightedPoint, q: &WeightedPoint, pi_len: f64) -> Result<f64> {
    if !(pi_len >= 0.0) {
        return invalid(format!("base distance {pi_len} is negative or NaN"));
    }
    if !(p.weight >= 0.0) || !(q.weight >= 0.0) {
        return invalid("weights must be non-negative");
    }
    if p.id == q.id {
        return Ok(0.0);
    }
    Ok((p.weight + q.weight) + pi_len)
}

/// Undirected graph over point indices. Each edge stores its base length (the
/// Euclidean or geodesic distance between its endpoints).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SpannerGraph {
    n: usize,
    edges: BTreeMap<(usize, usize), f64>,
}

impl SpannerGraph {
    pub fn new(n: usize) -> Self {
        SpannerGraph {
            n,
            edges: BTreeMap::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Inserts `{u, v}`; a repeated pair keeps its first length. Returns
    /// whether the edge was new.
    pub fn add_edge(&mut self, u: usize, v: usize, base_length: f64) -> bool {
        assert!(
            u < self.n && v < self.n,
            "edge ({u}, {v}) out of range for n = {}",
            self.n
        );
        assert!(u != v, "self-loop at {u}");
        let key = if u < v { (u, v) } else { (v, u) };
        if self.edges.contains_key(&key) {
            return false;
        }
        self.edges.insert(key, base_length);
        true
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        let key = if u < v { (u, v) } else { (v, u) };
        self.edges.contains_key(&key)
    }

    pub fn base_length(&self, u: usize, v: usize) -> Option<f64> {
        let key = if u < v { (u, v) } else { (v, u) };
        self.edges.get(&key).copied()
    }

    /// Edges as `(u, v, base_length)` with `u < v`, sorted lexicographically.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.edges.iter().map(|(&(u, v), &l)| (u, v, l))
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        self.edges
            .keys()
            .filter_map(|&(a, b)| match (a == v, b == v) {
                (true, _) => Some(b),
                (_, true) => Some(a),
                _ => None,
            })
            .collect()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &(u, v) in self.edges.keys() {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    pub fn merge(&mut self, other: &SpannerGraph) {
        for (u, v, l) in other.edges() {
            self.add_edge(u, v, l);
        }
    }

    /// Adjacency lists carrying full traversal costs `w(u) + len + w(v)`.
    pub fn weighted_adjacency(&self, weights: &[f64]) -> Vec<Vec<(usize, f64)>> {
        let mut adj = vec![Vec::new(); self.n];
        for (&(u, v), &l) in &self.edges {
            let c = (weights[u] + weights[v]) + l;
            adj[u].push((v, c));
            adj[v].push((u, c));
        }
        adj
    }
}

#[derive(Copy, Clone, PartialEq)]
struct HeapItem {
    cost: f64,
    node: usize,
}

impl Eq for HeapItem {}

impl Ord for HeapItem {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .cost
            .total_cmp(&self.cost)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Dijkstra from `src` over an adjacency list, skipping vertices flagged in
/// `removed`. Unreached vertices get `f64::INFINITY`.
pub fn shortest_costs(adj: &[Vec<(usize, f64)>], src: usize, removed: &[bool]) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; adj.len()];
    if removed[src] {
        return dist;
    }
    dist[src] = 0.0;
    let mut heap = BinaryHeap::new();
    heap.push(HeapItem {
        cost: 0.0,
        node: src,
    });
    while let Some(HeapItem { cost, node }) = heap.pop() {
        if cost > dist[node] {
            continue;
        }
        for &(next, c) in &adj[node] {
            if removed[next] {
                continue;
            }
            let nc = cost + c;
            if nc < dist[next] {
                dist[next] = nc;
                heap.push(HeapItem {
                    cost: nc,
                    node: next,
                });
            }
        }
    }
    dist
}

/// Cost of a cheapest `src`-`dst` path in `graph` minus the `removed`
/// vertices; `None` when `dst` is unreachable.
pub fn graph_distance(
    graph: &SpannerGraph,
    points: &[WeightedPoint],
    src: usize,
    dst: usize,
    removed: &[usize],
) -> Result<Option<f64>> {
    let n = graph.n();
    if points.len() != n {
        return invalid(format!(
            "graph has {n} vertices but {} points were given",
            points.len()
        ));
    }
    if src >= n || dst >= n {
        return invalid(format!(
            "endpoint out of range (src {src}, dst {dst}, n {n})"
        ));
    }
    let mut mask = vec![false; n];
    for &r in removed {
        if r >= n {
            return invalid(format!("removed vertex {r} out of range"));
        }
        mask[r] = true;
    }
    if mask[src] || mask[dst] {
        return invalid("source or target is in the removed set");
    }
    if src == dst {
        return Ok(Some(0.0));
    }
    let weights: Vec<f64> = points.iter().map(|p| p.weight).collect();
    let adj = graph.weighted_adjacency(&weights);
    let d = shortest_costs(&adj, src, &mask)[dst];
    Ok(d.is_finite().then_some(d))
}
