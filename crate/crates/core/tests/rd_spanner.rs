mod common;

use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use wvfts::base::{build_base_vfts, BaseSpannerParams};
use wvfts::cluster::{build_vftswp_rd, build_vftswp_rd_detailed, cluster, RdOptions};
use wvfts::generate::points_in_box;
use wvfts::metric::{graph_distance, weighted_distance, SpannerGraph, WeightedPoint};
use wvfts::verify::{
    cross_check_shortest_paths, fault_stretch_check, invariant_suite, removal_sets_up_to,
    size_report, Artifact, CheckMode, Metric,
};

fn wp(id: usize, x: f64, y: f64, w: f64) -> WeightedPoint {
    WeightedPoint::new(id, vec![x, y], w)
}

fn edge_set(g: &SpannerGraph) -> BTreeSet<(usize, usize)> {
    g.edges().map(|(u, v, _)| (u, v)).collect()
}

#[test]
fn weighted_distance_examples() {
    let p = wp(0, 0.0, 0.0, 1.0);
    let q = wp(1, 3.0, 4.0, 2.0);
    assert_eq!(weighted_distance(&p, &q, 5.0).unwrap(), 8.0);
    assert_eq!(weighted_distance(&p, &p, 5.0).unwrap(), 0.0);
    let (a, b) = (wp(0, 0.0, 0.0, 0.0), wp(1, 1.0, 0.0, 0.0));
    assert_eq!(weighted_distance(&a, &b, 0.7).unwrap(), 0.7);
    assert!(weighted_distance(&p, &q, -1.0).is_err());
}

#[test]
fn graph_distance_examples() {
    let pts = vec![
        wp(0, 0.0, 0.0, 0.0),
        wp(1, 1.0, 0.0, 2.0),
        wp(2, 2.0, 0.0, 0.0),
    ];
    let mut g = SpannerGraph::new(3);
    g.add_edge(0, 1, 1.0);
    g.add_edge(1, 2, 1.0);
    assert_eq!(graph_distance(&g, &pts, 0, 2, &[]).unwrap(), Some(6.0));
    assert_eq!(graph_distance(&g, &pts, 0, 0, &[]).unwrap(), Some(0.0));
    assert_eq!(graph_distance(&g, &pts, 0, 2, &[1]).unwrap(), None);
    assert!(graph_distance(&g, &pts, 1, 2, &[1]).is_err());
}

#[test]
fn clustering_on_a_line() {
    let pts = vec![
        WeightedPoint::new(0, vec![0.0], 1.0),
        WeightedPoint::new(1, vec![1.0], 10.0),
        WeightedPoint::new(2, vec![2.0], 10.0),
    ];
    let c = cluster(&pts, 0, 0.5).unwrap();
    assert_eq!(c.centers, vec![0]);
    assert_eq!(c.members, vec![vec![0, 1, 2]]);
    let zero: Vec<WeightedPoint> = (0..5).map(|i| wp(i, i as f64, 0.0, 0.0)).collect();
    assert_eq!(cluster(&zero, 0, 0.5).unwrap().centers.len(), 5);
    assert_eq!(cluster(&zero[..3], 2, 0.5).unwrap().centers.len(), 3);
    assert!(cluster(&zero, 0, 0.0).is_err());
}

/// Re-runs the clustering loop from its definition and compares.
#[test]
fn clustering_matches_reexecution() {
    for seed in 0..10 {
        let pts = points_in_box(40, 2, (0.0, 2.0), &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let (k, eps) = (seed as usize % 3, 0.5);
        let mut order: Vec<usize> = (0..pts.len()).collect();
        order.sort_by(|&a, &b| pts[a].weight.total_cmp(&pts[b].weight).then(a.cmp(&b)));
        let mut centers: Vec<usize> = Vec::new();
        let mut owner = vec![usize::MAX; pts.len()];
        for (rank, &p) in order.iter().enumerate() {
            let near = centers
                .iter()
                .map(|&c| (common::euclid(&pts[p].coords, &pts[c].coords), c))
                .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            match near {
                Some((d, c)) if rank > k && d <= eps * pts[p].weight => owner[p] = c,
                _ => {
                    centers.push(p);
                    owner[p] = p;
                }
            }
        }
        let got = cluster(&pts, k, eps).unwrap();
        assert_eq!(got.centers, centers, "seed {seed}");
        for p in 0..pts.len() {
            assert_eq!(got.centers[got.assignment[p]], owner[p]);
        }
        assert!(invariant_suite(&Artifact::Clustering {
            clustering: &got,
            points: &pts,
            k,
            eps
        })
        .is_empty());
    }
}

/// Lightest point c and a far point a are the two initial centers; b and d
/// join c. C' of c's cluster is {c, b} and B_c = {a}.
#[test]
fn four_point_hand_trace() {
    let pts = vec![
        wp(0, 0.0, 0.0, 0.1),
        wp(1, 5.0, 0.0, 0.2),
        wp(2, 0.1, 0.0, 1.0),
        wp(3, 0.0, 0.1, 2.0),
    ];
    let (c, a, b, d) = (0, 1, 2, 3);
    let built = build_vftswp_rd_detailed(&pts, 1, 0.5, &RdOptions::default()).unwrap();
    assert_eq!(built.clustering.centers, vec![c, a]);
    assert_eq!(built.clustering.members[0], vec![c, b, d]);
    let want: BTreeSet<(usize, usize)> = [(c, a), (c, b), (a, b), (c, d), (b, d), (a, d)]
        .into_iter()
        .collect();
    assert_eq!(edge_set(&built.graph), want);
    for (u, v, l) in built.graph.edges() {
        assert_eq!(l, common::euclid(&pts[u].coords, &pts[v].coords));
    }
}

#[test]
fn small_inputs() {
    assert_eq!(
        build_vftswp_rd(&[wp(0, 0.0, 0.0, 1.0)], 1, 0.5)
            .unwrap()
            .edge_count(),
        0
    );
    let g = build_vftswp_rd(&[wp(0, 0.0, 0.0, 1.0), wp(1, 1.0, 1.0, 0.5)], 1, 0.5).unwrap();
    assert_eq!(edge_set(&g), [(0, 1)].into_iter().collect());
    let base = build_base_vfts(
        &[vec![0.0, 0.0], vec![1.0, 0.0]],
        &BaseSpannerParams::new(1, 2.5).unwrap(),
    )
    .unwrap();
    assert_eq!(base.edge_count(), 1);
    assert!(build_base_vfts(
        &[
            vec![0.0, 0.0],
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![0.0, 1.0]
        ],
        &BaseSpannerParams::new(1, 2.5).unwrap()
    )
    .is_err());
}

#[test]
fn base_spanner_certified_by_brute_force() {
    for seed in 0..4 {
        for k in 1..=2 {
            let pts =
                points_in_box(12, 2, (0.0, 0.0), &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
            let coords: Vec<Vec<f64>> = pts.iter().map(|p| p.coords.clone()).collect();
            let g = build_base_vfts(&coords, &BaseSpannerParams::new(k, 2.5).unwrap()).unwrap();
            let edges: Vec<_> = g.edges().collect();
            let (worst, _) = common::brute_stretch(
                &pts,
                &edges,
                |p, q| common::euclid(&coords[p], &coords[q]),
                k,
            );
            assert!(worst <= 2.5 + 1e-9, "seed {seed} k {k}: {worst}");
        }
    }
}

#[test]
fn base_spanner_in_three_dimensions() {
    let pts = points_in_box(12, 3, (0.0, 0.0), &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
    let coords: Vec<Vec<f64>> = pts.iter().map(|p| p.coords.clone()).collect();
    let g = build_base_vfts(&coords, &BaseSpannerParams::new(1, 2.5).unwrap()).unwrap();
    let edges: Vec<_> = g.edges().collect();
    let (worst, _) = common::brute_stretch(
        &pts,
        &edges,
        |p, q| common::euclid(&coords[p], &coords[q]),
        1,
    );
    assert!(worst <= 2.5 + 1e-9, "{worst}");
}

#[test]
fn rd_spanner_report_agrees_with_brute_force() {
    for seed in 0..3 {
        for k in 1..=2 {
            let pts =
                points_in_box(12, 2, (0.0, 1.0), &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
            let g = build_vftswp_rd(&pts, k, 0.5).unwrap();
            let report =
                fault_stretch_check(&g, &pts, Metric::Euclidean, k, 6.5, CheckMode::Exhaustive)
                    .unwrap();
            let edges: Vec<_> = g.edges().collect();
            let (worst, least) =
                common::brute_stretch(&pts, &edges, |p, q| pts[p].euclidean(&pts[q]), k);
            assert!(report.pass, "seed {seed} k {k}");
            assert!(
                (report.max_stretch - worst).abs() <= 1e-9,
                "{} vs {worst}",
                report.max_stretch
            );
            assert!(least >= 1.0 - 1e-9);
            assert_eq!(report.lower_bound_violations, 0);
        }
    }
}

#[test]
fn second_shortest_path_implementation_agrees() {
    for seed in 0..3 {
        let pts = points_in_box(
            12,
            2,
            (0.0, 1.0),
            &mut ChaCha8Rng::seed_from_u64(100 + seed),
        )
        .unwrap();
        let g = build_vftswp_rd(&pts, 2, 0.5).unwrap();
        let sets = removal_sets_up_to(pts.len(), 2);
        assert!(cross_check_shortest_paths(&g, &pts, &sets) <= 1e-9);
    }
}

#[test]
fn size_bound_and_edge_lengths() {
    for (seed, k) in [(0u64, 1usize), (1, 2), (2, 3)] {
        let pts = points_in_box(60, 2, (0.0, 1.0), &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let built = build_vftswp_rd_detailed(&pts, k, 0.5, &RdOptions::default()).unwrap();
        let n = pts.len();
        let b = built.base.edge_count();
        let c = built.clustering.cluster_count();
        // every non-center links to at most k + 1 light members and every base neighbour
        let max_deg_b = built.base.degrees().into_iter().max().unwrap_or(0);
        assert!(built.graph.edge_count() <= b + (n - c) * (k + 1 + max_deg_b));
        assert!(invariant_suite(&Artifact::Spanner {
            graph: &built.graph,
            points: &pts,
            metric: Metric::Euclidean
        })
        .is_empty());
    }
}

#[test]
fn verify_examples() {
    let pts = points_in_box(7, 2, (0.0, 1.0), &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
    let mut complete = SpannerGraph::new(7);
    for u in 0..7 {
        for v in u + 1..7 {
            complete.add_edge(u, v, pts[u].euclidean(&pts[v]));
        }
    }
    let r = fault_stretch_check(
        &complete,
        &pts,
        Metric::Euclidean,
        3,
        1.0 + 1e-9,
        CheckMode::Exhaustive,
    )
    .unwrap();
    assert!(r.pass);

    let line = vec![
        wp(0, 0.0, 0.0, 0.0),
        wp(1, 1.0, 0.0, 0.0),
        wp(2, 2.0, 0.0, 0.0),
    ];
    let mut path = SpannerGraph::new(3);
    path.add_edge(0, 1, 1.0);
    path.add_edge(1, 2, 1.0);
    let r = fault_stretch_check(
        &path,
        &line,
        Metric::Euclidean,
        1,
        2.0,
        CheckMode::Exhaustive,
    )
    .unwrap();
    assert!(!r.pass);
    let w = r.witness.unwrap();
    assert_eq!(
        (w.removed, w.p, w.q, w.graph_distance),
        (vec![1], 0, 2, None)
    );

    assert_eq!(size_report(&SpannerGraph::new(0), 1, 0, 0.5, 0).edges, 0);
    assert_eq!(size_report(&path, 1, 2, 0.5, 0).per_kn, 1.0);
}

#[test]
fn stretch_monotone_in_k_and_sampling_reproducible() {
    let pts = points_in_box(14, 2, (0.0, 1.0), &mut ChaCha8Rng::seed_from_u64(21)).unwrap();
    let g = build_vftswp_rd(&pts, 2, 0.5).unwrap();
    let mut last = 0.0;
    for k in 0..=2 {
        let r = fault_stretch_check(&g, &pts, Metric::Euclidean, k, 6.25, CheckMode::Exhaustive)
            .unwrap();
        assert!(r.max_stretch >= last);
        last = r.max_stretch;
    }
    let mode = CheckMode::Sampled {
        seed: 4,
        trials: 50,
    };
    let a = fault_stretch_check(&g, &pts, Metric::Euclidean, 2, 6.25, mode).unwrap();
    let b = fault_stretch_check(&g, &pts, Metric::Euclidean, 2, 6.25, mode).unwrap();
    assert_eq!(a, b);
}

#[test]
fn exhaustive_refuses_over_budget() {
    let pts = points_in_box(200, 2, (0.0, 1.0), &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
    let g = SpannerGraph::new(200);
    assert!(
        fault_stretch_check(&g, &pts, Metric::Euclidean, 3, 6.25, CheckMode::Exhaustive).is_err()
    );
}
