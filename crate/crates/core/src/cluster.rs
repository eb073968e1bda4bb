//! Weight-ordered clustering and the fault-tolerant spanner for weighted points
//! in R^d.

use crate::base::{build_base_vfts, k_nearest_neighbors_in_graph, BaseSpannerParams};
use crate::error::{invalid, Result};
use crate::metric::{validate_points, SpannerGraph, WeightedPoint};

#[derive(Debug, Clone, PartialEq)]
pub struct Clustering {
    /// Point ids of the centers, in creation order.
    pub centers: Vec<usize>,
    /// Cluster index of every point.
    pub assignment: Vec<usize>,
    /// Members of each cluster in insertion (weight) order; the center first.
    pub members: Vec<Vec<usize>>,
}

impl Clustering {
    pub fn cluster_count(&self) -> usize {
        self.centers.len()
    }

    pub fn is_center(&self, id: usize) -> bool {
        self.centers[self.assignment[id]] == id
    }

    /// The `min(k + 1, |C|)` least-weight members of a cluster.
    pub fn light_members(&self, cluster: usize, k: usize) -> &[usize] {
        let m = &self.members[cluster];
        &m[..m.len().min(k + 1)]
    }
}

/// Ids sorted by non-decreasing weight, ties by id.
pub fn weight_order(points: &[WeightedPoint]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| {
        points[a]
            .weight
            .total_cmp(&points[b].weight)
            .then(a.cmp(&b))
    });
    order
}

pub fn cluster(points: &[WeightedPoint], k: usize, eps: f64) -> Result<Clustering> {
    if !(eps > 0.0) || !eps.is_finite() {
        return invalid(format!("eps must be finite and > 0, got {eps}"));
    }
    if points.is_empty() {
        return invalid("cannot cluster an empty point set");
    }
    validate_points(points)?;
    let n = points.len();
    let mut clustering = Clustering {
        centers: Vec::new(),
        assignment: vec![usize::MAX; n],
        members: Vec::new(),
    };
    for (rank, &p) in weight_order(points).iter().enumerate() {
        let nearest = if rank <= k {
            None
        } else {
            clustering
                .centers
                .iter()
                .enumerate()
                .map(|(ci, &c)| (points[p].euclidean(&points[c]), c, ci))
                .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
        };
        match nearest {
            Some((d, _, ci)) if d <= eps * points[p].weight => {
                clustering.assignment[p] = ci;
                clustering.members[ci].push(p);
            }
            _ => {
                clustering.assignment[p] = clustering.centers.len();
                clustering.centers.push(p);
                clustering.members.push(vec![p]);
            }
        }
    }
    Ok(clustering)
}

/// Which base-spanner neighbours `B_i` of a center every member links to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NeighborRule {
    /// Every neighbour of the center in the base spanner. The fault-tolerance
    /// argument for two removed centers routes through an arbitrary neighbour,
    /// so this is the default.
    #[default]
    AllAdjacent,
    /// Only the `k` nearest neighbours. Smaller, but can exceed the stretch
    /// bound when a center and its nearest neighbours fail together.
    KNearest,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RdOptions {
    /// Base spanner stretch; `2 + eps` when unset.
    pub t_b: Option<f64>,
    pub neighbors: NeighborRule,
}

/// Everything produced by one run of the R^d construction.
#[derive(Debug, Clone)]
pub struct RdSpanner {
    pub graph: SpannerGraph,
    pub clustering: Clustering,
    /// Base spanner over the centers, indexed by position in `clustering.centers`.
    pub base: SpannerGraph,
}

/// `(k, 4 + 5 eps)` fault-tolerant spanner for weighted points in R^d, with the
/// base spanner stretch fixed at `2 + eps`.
pub fn build_vftswp_rd(points: &[WeightedPoint], k: usize, eps: f64) -> Result<SpannerGraph> {
    Ok(build_vftswp_rd_detailed(points, k, eps, &RdOptions::default())?.graph)
}

/// Same construction with explicit options, exposing the clustering and base
/// spanner.
pub fn build_vftswp_rd_detailed(
    points: &[WeightedPoint],
    k: usize,
    eps: f64,
    options: &RdOptions,
) -> Result<RdSpanner> {
    let n = points.len();
    if n == 0 {
        return invalid("empty point set");
    }
    let clustering = cluster(points, k, eps)?;
    let params = match options.t_b {
        Some(t) => BaseSpannerParams::new(k, t)?,
        None => BaseSpannerParams::for_clusters(k, eps)?,
    };
    let center_coords: Vec<Vec<f64>> = clustering
        .centers
        .iter()
        .map(|&c| points[c].coords.clone())
        .collect();
    let base = build_base_vfts(&center_coords, &params)?;

    let mut graph = SpannerGraph::new(n);
    for (a, b, len) in base.edges() {
        graph.add_edge(clustering.centers[a], clustering.centers[b], len);
    }
    let neighbor_sets: Vec<Vec<usize>> = (0..clustering.cluster_count())
        .map(|ci| {
            match options.neighbors {
                NeighborRule::AllAdjacent => Ok(base.neighbors(ci)),
                NeighborRule::KNearest => k_nearest_neighbors_in_graph(&base, ci, k),
            }
            .map(|nb| nb.into_iter().map(|j| clustering.centers[j]).collect())
        })
        .collect::<Result<_>>()?;
    for p in 0..n {
        if clustering.is_center(p) {
            continue;
        }
        let ci = clustering.assignment[p];
        let targets = clustering
            .light_members(ci, k)
            .iter()
            .chain(&neighbor_sets[ci]);
        for &v in targets {
            if v != p {
                graph.add_edge(p, v, points[p].euclidean(&points[v]));
            }
        }
    }
    Ok(RdSpanner {
        graph,
        clustering,
        base,
    })
}
