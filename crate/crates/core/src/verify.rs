//! Brute-force certification of fault-tolerant stretch, size statistics, and
//! structural invariant checks.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result, SpannerError};
use crate::geodesic::GeodesicEngine;
use crate::metric::{shortest_costs, weighted_distance, SpannerGraph, WeightedPoint};

pub use crate::invariants::{invariant_suite, Artifact, Violation};

/// Upper limit on (removal set, pair) checks in exhaustive mode.
pub const EXHAUSTIVE_BUDGET: u128 = 1_000_000;
pub const DEFAULT_TRIALS: usize = 2000;
/// Slack used for every stretch and lower-bound comparison.
pub const TOLERANCE: f64 = 1e-9;

/// How base distances `d_pi` between points are measured.
#[derive(Debug, Clone, Copy)]
pub enum Metric<'a> {
    Euclidean,
    Geodesic(&'a GeodesicEngine),
}

impl Metric<'_> {
    pub fn base_distance(&self, p: &WeightedPoint, q: &WeightedPoint) -> f64 {
        match self {
            Metric::Euclidean => p.euclidean(q),
            Metric::Geodesic(engine) => engine.distance(p.xy(), q.xy()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CheckMode {
    Exhaustive,
    Sampled { seed: u64, trials: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub removed: Vec<usize>,
    pub p: usize,
    pub q: usize,
    /// `None` when `q` is unreachable from `p`.
    pub graph_distance: Option<f64>,
    pub weighted_distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FaultReport {
    pub mode: CheckMode,
    pub k: usize,
    pub t_bound: f64,
    /// Worst observed ratio; infinite if some surviving pair was disconnected.
    pub max_stretch: f64,
    pub witness: Option<Witness>,
    /// Smallest observed ratio; below one only if the graph shortcuts the metric.
    pub min_ratio: f64,
    pub lower_bound_violations: usize,
    pub unreachable_pairs: usize,
    pub removal_sets: usize,
    pub pairs_checked: u64,
    pub pass: bool,
}

/// Per-removal-set partial result, merged in set order.
#[derive(Debug, Clone)]
struct Partial {
    max: f64,
    witness: Option<(usize, usize, Option<f64>, f64)>,
    min: f64,
    lower_violations: usize,
    unreachable: usize,
    pairs: u64,
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Every subset of `0..n` with at most `k` elements, by size then
/// lexicographically.
pub fn removal_sets_up_to(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for size in 1..=k.min(n) {
        let mut comb: Vec<usize> = (0..size).collect();
        loop {
            out.push(comb.clone());
            let mut i = size;
            while i > 0 && comb[i - 1] == n - size + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            comb[i - 1] += 1;
            for j in i..size {
                comb[j] = comb[j - 1] + 1;
            }
        }
    }
    out
}

/// Matrix of weighted distances `d_w` between all input points.
pub fn weighted_distance_matrix(
    points: &[WeightedPoint],
    metric: Metric<'_>,
) -> Result<Vec<Vec<f64>>> {
    let n = points.len();
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (0..n)
                .map(|j| {
                    if j <= i {
                        0.0
                    } else {
                        metric.base_distance(&points[i], &points[j])
                    }
                })
                .collect()
        })
        .collect();
    let mut m = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let d = weighted_distance(&points[i], &points[j], rows[i][j])?;
            m[i][j] = d;
            m[j][i] = d;
        }
    }
    Ok(m)
}

fn check_removal_set(adj: &[Vec<(usize, f64)>], dw: &[Vec<f64>], removed: &[usize]) -> Partial {
    let n = adj.len();
    let mut mask = vec![false; n];
    for &r in removed {
        mask[r] = true;
    }
    let mut part = Partial {
        max: 0.0,
        witness: None,
        min: f64::INFINITY,
        lower_violations: 0,
        unreachable: 0,
        pairs: 0,
    };
    for p in (0..n).filter(|&p| !mask[p]) {
        let dist = shortest_costs(adj, p, &mask);
        for q in (p + 1..n).filter(|&q| !mask[q]) {
            let d = dw[p][q];
            if d == 0.0 {
                continue;
            }
            part.pairs += 1;
            let g = dist[q];
            let ratio = if g.is_finite() { g / d } else { f64::INFINITY };
            if !g.is_finite() {
                part.unreachable += 1;
            } else if g < d - TOLERANCE {
                part.lower_violations += 1;
            }
            part.min = part.min.min(ratio);
            if ratio > part.max || (part.witness.is_none() && ratio >= part.max) {
                part.max = ratio;
                part.witness = Some((p, q, g.is_finite().then_some(g), d));
            }
        }
    }
    part
}

/// Checks that `graph` minus every tested removal set of at most `k` vertices
/// is a `t_bound`-spanner of the weighted metric, and that no path is ever
/// shorter than the metric distance.
pub fn fault_stretch_check(
    graph: &SpannerGraph,
    points: &[WeightedPoint],
    metric: Metric<'_>,
    k: usize,
    t_bound: f64,
    mode: CheckMode,
) -> Result<FaultReport> {
    let n = points.len();
    if graph.n() != n {
        return invalid(format!(
            "graph has {} vertices but {n} points were given",
            graph.n()
        ));
    }
    if !(t_bound > 1.0) {
        return invalid(format!("t_bound must exceed 1, got {t_bound}"));
    }
    let pairs = binomial(n, 2).max(1);
    let sets: Vec<Vec<usize>> = match mode {
        CheckMode::Exhaustive => {
            let count: u128 = (0..=k.min(n)).map(|i| binomial(n, i)).sum();
            let required = count.saturating_mul(pairs);
            if required > EXHAUSTIVE_BUDGET {
                return Err(SpannerError::OverBudget {
                    required,
                    budget: EXHAUSTIVE_BUDGET,
                    hint_trials: ((EXHAUSTIVE_BUDGET / pairs) as usize).clamp(1, DEFAULT_TRIALS),
                });
            }
            removal_sets_up_to(n, k)
        }
        CheckMode::Sampled { seed, trials } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let size = k.min(n);
            (0..trials)
                .map(|_| {
                    let mut s = sample(&mut rng, n, size).into_vec();
                    s.sort_unstable();
                    s
                })
                .collect()
        }
    };
    let dw = weighted_distance_matrix(points, metric)?;
    let weights: Vec<f64> = points.iter().map(|p| p.weight).collect();
    let adj = graph.weighted_adjacency(&weights);
    let partials: Vec<Partial> = sets
        .par_iter()
        .map(|s| check_removal_set(&adj, &dw, s))
        .collect();

    let mut report = FaultReport {
        mode,
        k,
        t_bound,
        max_stretch: 0.0,
        witness: None,
        min_ratio: f64::INFINITY,
        lower_bound_violations: 0,
        unreachable_pairs: 0,
        removal_sets: sets.len(),
        pairs_checked: 0,
        pass: false,
    };
    for (set, part) in sets.iter().zip(partials) {
        report.pairs_checked += part.pairs;
        report.lower_bound_violations += part.lower_violations;
        report.unreachable_pairs += part.unreachable;
        report.min_ratio = report.min_ratio.min(part.min);
        if let Some((p, q, g, d)) = part.witness {
            if part.max > report.max_stretch || report.witness.is_none() {
                report.max_stretch = part.max;
                report.witness = Some(Witness {
                    removed: set.clone(),
                    p,
                    q,
                    graph_distance: g,
                    weighted_distance: d,
                });
            }
        }
    }
    if !report.min_ratio.is_finite() {
        report.min_ratio = 1.0;
    }
    report.pass = report.max_stretch <= t_bound + TOLERANCE && report.unreachable_pairs == 0;
    Ok(report)
}

/// All-pairs path costs by Floyd-Warshall on a dense matrix. Deliberately
/// independent of the Dijkstra used everywhere else.
pub fn floyd_warshall_costs(
    graph: &SpannerGraph,
    points: &[WeightedPoint],
    removed: &[usize],
) -> Vec<Vec<f64>> {
    let n = points.len();
    let gone: Vec<bool> = (0..n).map(|v| removed.contains(&v)).collect();
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for v in 0..n {
        d[v][v] = 0.0;
    }
    for (u, v, len) in graph.edges() {
        if gone[u] || gone[v] {
            continue;
        }
        let c = points[u].weight + len + points[v].weight;
        if c < d[u][v] {
            d[u][v] = c;
            d[v][u] = c;
        }
    }
    for m in (0..n).filter(|&m| !gone[m]) {
        for i in 0..n {
            let dim = d[i][m];
            if !dim.is_finite() {
                continue;
            }
            for j in 0..n {
                let alt = dim + d[m][j];
                if alt < d[i][j] {
                    d[i][j] = alt;
                }
            }
        }
    }
    d
}

/// Largest relative disagreement between the Dijkstra and Floyd-Warshall path
/// costs over the given removal sets. Disagreement on reachability counts as
/// infinite.
pub fn cross_check_shortest_paths(
    graph: &SpannerGraph,
    points: &[WeightedPoint],
    removal_sets: &[Vec<usize>],
) -> f64 {
    let n = points.len();
    let weights: Vec<f64> = points.iter().map(|p| p.weight).collect();
    let adj = graph.weighted_adjacency(&weights);
    let mut worst: f64 = 0.0;
    for removed in removal_sets {
        let fw = floyd_warshall_costs(graph, points, removed);
        let mut mask = vec![false; n];
        for &r in removed {
            mask[r] = true;
        }
        for p in (0..n).filter(|&p| !mask[p]) {
            let dj = shortest_costs(&adj, p, &mask);
            for q in (0..n).filter(|&q| !mask[q]) {
                let (a, b) = (dj[q], fw[p][q]);
                let diff = match (a.is_finite(), b.is_finite()) {
                    (true, true) => (a - b).abs() / (1.0 + b),
                    (false, false) => 0.0,
                    _ => f64::INFINITY,
                };
                worst = worst.max(diff);
            }
        }
    }
    worst
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SizeReport {
    pub n: usize,
    pub k: usize,
    pub edges: usize,
    pub max_degree: usize,
    /// `|E| / (k n)`.
    pub per_kn: f64,
    /// `|E| eps^2 / (k n sqrt(h + 1) lg(n + 1))`.
    pub normalized: f64,
}

pub fn size_report(graph: &SpannerGraph, k: usize, n: usize, eps: f64, h: usize) -> SizeReport {
    let edges = graph.edge_count();
    let max_degree = graph.degrees().into_iter().max().unwrap_or(0);
    let kn = (k.max(1) * n) as f64;
    let (per_kn, normalized) = if n == 0 || edges == 0 {
        (0.0, 0.0)
    } else {
        let lg = ((n + 1) as f64).log2();
        (
            edges as f64 / kn,
            edges as f64 * eps * eps / (kn * ((h + 1) as f64).sqrt() * lg),
        )
    };
    SizeReport {
        n,
        k,
        edges,
        max_degree,
        per_kn,
        normalized,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cluster::build_vftswp_rd;
    use rand::Rng;

    fn random_points(n: usize, seed: u64) -> Vec<WeightedPoint> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|i| WeightedPoint::new(i, vec![rng.gen(), rng.gen()], rng.gen()))
            .collect()
    }

    #[test]
    fn enumerates_removal_sets() {
        let sets = removal_sets_up_to(5, 2);
        assert_eq!(sets.len(), 1 + 5 + 10);
        assert_eq!(sets[6], vec![0, 1]);
        assert_eq!(sets.last().unwrap(), &vec![3, 4]);
        assert_eq!(removal_sets_up_to(2, 5).len(), 4);
    }

    #[test]
    fn complete_graph_has_stretch_one() {
        let pts = random_points(7, 1);
        let mut g = SpannerGraph::new(7);
        for u in 0..7 {
            for v in u + 1..7 {
                g.add_edge(u, v, pts[u].euclidean(&pts[v]));
            }
        }
        let r = fault_stretch_check(
            &g,
            &pts,
            Metric::Euclidean,
            2,
            1.0 + 1e-9,
            CheckMode::Exhaustive,
        )
        .unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(r.lower_bound_violations, 0);
    }

    #[test]
    fn path_graph_fails_on_the_middle_vertex() {
        let pts = vec![
            WeightedPoint::new(0, vec![0.0, 0.0], 0.0),
            WeightedPoint::new(1, vec![1.0, 0.0], 0.0),
            WeightedPoint::new(2, vec![2.0, 0.0], 0.0),
        ];
        let mut g = SpannerGraph::new(3);
        g.add_edge(0, 1, 1.0);
        g.add_edge(1, 2, 1.0);
        let r = fault_stretch_check(&g, &pts, Metric::Euclidean, 1, 2.0, CheckMode::Exhaustive)
            .unwrap();
        assert!(!r.pass);
        let w = r.witness.unwrap();
        assert_eq!(
            (w.removed, w.p, w.q, w.graph_distance),
            (vec![1], 0, 2, None)
        );
    }

    #[test]
    fn over_budget_is_refused_with_a_hint() {
        let pts = random_points(60, 2);
        let g = SpannerGraph::new(60);
        match fault_stretch_check(&g, &pts, Metric::Euclidean, 3, 2.0, CheckMode::Exhaustive) {
            Err(SpannerError::OverBudget {
                hint_trials,
                required,
                ..
            }) => {
                assert!(hint_trials >= 1);
                assert!(required > EXHAUSTIVE_BUDGET);
            }
            other => panic!("expected refusal, got {other:?}"),
        }
    }

    #[test]
    fn cluster_spanner_certified_and_cross_checked() {
        for seed in 0..3 {
            let pts = random_points(12, 100 + seed);
            let g = build_vftswp_rd(&pts, 2, 0.5).unwrap();
            let r = fault_stretch_check(&g, &pts, Metric::Euclidean, 2, 6.5, CheckMode::Exhaustive)
                .unwrap();
            assert!(r.pass, "seed {seed}: {r:?}");
            assert_eq!(r.lower_bound_violations, 0);
            let sets = removal_sets_up_to(12, 2);
            assert!(cross_check_shortest_paths(&g, &pts, &sets) < 1e-12);
        }
    }

    #[test]
    fn sampled_mode_is_reproducible() {
        let pts = random_points(15, 4);
        let g = build_vftswp_rd(&pts, 1, 0.5).unwrap();
        let mode = CheckMode::Sampled {
            seed: 9,
            trials: 50,
        };
        let a = fault_stretch_check(&g, &pts, Metric::Euclidean, 1, 6.5, mode).unwrap();
        let b = fault_stretch_check(&g, &pts, Metric::Euclidean, 1, 6.5, mode).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.removal_sets, 50);
    }

    #[test]
    fn stretch_is_monotone_in_k() {
        let pts = random_points(10, 5);
        let g = build_vftswp_rd(&pts, 2, 0.5).unwrap();
        let mut last = 0.0;
        for k in 0..=3 {
            let r =
                fault_stretch_check(&g, &pts, Metric::Euclidean, k, 100.0, CheckMode::Exhaustive)
                    .unwrap();
            assert!(r.max_stretch >= last);
            last = r.max_stretch;
        }
    }

    #[test]
    fn size_report_cases() {
        let empty = size_report(&SpannerGraph::new(0), 1, 0, 0.5, 0);
        assert_eq!(
            (
                empty.edges,
                empty.max_degree,
                empty.per_kn,
                empty.normalized
            ),
            (0, 0, 0.0, 0.0)
        );
        let mut g = SpannerGraph::new(2);
        g.add_edge(0, 1, 1.0);
        assert_eq!(size_report(&g, 1, 2, 0.5, 0).per_kn, 0.5);
    }
}
