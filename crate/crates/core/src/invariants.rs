//! Structural checks on intermediate artifacts. Each check returns the list of
//! violated invariants; an empty list means the artifact is sound.

use serde::{Deserialize, Serialize};

use crate::cluster::{weight_order, Clustering};
use crate::decomposition::DomainDecomposition;
use crate::geodesic::GeodesicEngine;
use crate::geometry::{point_segment_distance, Point2};
use crate::metric::{SpannerGraph, WeightedPoint};
use crate::polygon_spanner::{ProjectionSet, SeparatorRecord, SplitRecord};
use crate::verify::Metric;

const TOL: f64 = 1e-9;

/// Anything [`invariant_suite`] knows how to check.
#[derive(Debug, Clone, Copy)]
pub enum Artifact<'a> {
    Clustering {
        clustering: &'a Clustering,
        points: &'a [WeightedPoint],
        k: usize,
        eps: f64,
    },
    Decomposition {
        decomposition: &'a DomainDecomposition,
        points: &'a [Point2],
        holes: usize,
    },
    Projections {
        sets: &'a [ProjectionSet],
        points: &'a [WeightedPoint],
        /// When present, projection weights are checked against geodesic
        /// distances.
        engine: Option<&'a GeodesicEngine>,
        refine: bool,
        pieces: usize,
    },
    Spanner {
        graph: &'a SpannerGraph,
        points: &'a [WeightedPoint],
        metric: Metric<'a>,
    },
    Splits(&'a [SplitRecord]),
    Separators(&'a [SeparatorRecord]),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub invariant: String,
    pub detail: String,
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= TOL * a.abs().max(b.abs()).max(1.0)
}

struct Sink(Vec<Violation>);

impl Sink {
    fn check(&mut self, ok: bool, invariant: &str, detail: impl FnOnce() -> String) {
        if !ok {
            self.0.push(Violation {
                invariant: invariant.to_string(),
                detail: detail(),
            });
        }
    }
}

pub fn invariant_suite(artifact: &Artifact) -> Vec<Violation> {
    let mut s = Sink(Vec::new());
    match *artifact {
        Artifact::Clustering {
            clustering,
            points,
            k,
            eps,
        } => check_clustering(&mut s, clustering, points, k, eps),
        Artifact::Decomposition {
            decomposition,
            points,
            holes,
        } => check_decomposition(&mut s, decomposition, points, holes),
        Artifact::Projections {
            sets,
            points,
            engine,
            refine,
            pieces,
        } => check_projections(&mut s, sets, points, engine, refine, pieces),
        Artifact::Spanner {
            graph,
            points,
            metric,
        } => {
            s.check(
                graph.n() == points.len(),
                "graph order equals point count",
                || format!("{} nodes for {} points", graph.n(), points.len()),
            );
            for (u, v, l) in graph.edges() {
                if u >= points.len() || v >= points.len() {
                    continue;
                }
                let d = metric.base_distance(&points[u], &points[v]);
                s.check(close(l, d), "edge length equals base distance", || {
                    format!("edge ({u}, {v}) stores {l}, metric gives {d}")
                });
            }
        }
        Artifact::Splits(records) => {
            for (i, r) in records.iter().enumerate() {
                s.check(
                    r.is_balanced(),
                    "split sides hold at most 2m/3 points",
                    || format!("split {i}: {} and {}", r.left.len(), r.right.len()),
                );
                s.check(
                    r.left.iter().all(|x| !r.right.contains(x)),
                    "split sides are disjoint",
                    || format!("split {i}"),
                );
            }
        }
        Artifact::Separators(records) => {
            for (i, r) in records.iter().enumerate() {
                s.check(r.is_balanced(), "separator sides weigh at most 2/3", || {
                    format!(
                        "round {i}: {} and {} of {}",
                        r.left_weight, r.right_weight, r.total_weight
                    )
                });
                s.check(
                    r.is_small(),
                    "separator has at most 4 sqrt(faces) faces",
                    || format!("round {i}: {} of {} faces", r.r.len(), r.faces),
                );
            }
        }
    }
    s.0
}

fn check_clustering(s: &mut Sink, c: &Clustering, points: &[WeightedPoint], k: usize, eps: f64) {
    let n = points.len();
    s.check(c.assignment.len() == n, "every point is assigned", || {
        format!("{} assignments for {n} points", c.assignment.len())
    });
    s.check(
        c.members.len() == c.centers.len(),
        "one member list per center",
        String::new,
    );
    if c.assignment.len() != n || c.members.len() != c.centers.len() {
        return;
    }
    let total: usize = c.members.iter().map(Vec::len).sum();
    s.check(total == n, "clusters partition the points", || {
        format!("{total} members for {n} points")
    });
    for (i, members) in c.members.iter().enumerate() {
        let center = c.centers[i];
        s.check(
            members.first() == Some(&center),
            "center listed first",
            || format!("cluster {i}"),
        );
        for &p in members {
            s.check(
                c.assignment[p] == i,
                "assignment matches membership",
                || {
                    format!(
                        "point {p} is in cluster {i} but assigned to {}",
                        c.assignment[p]
                    )
                },
            );
            s.check(
                points[center].weight <= points[p].weight,
                "center has the least weight",
                || format!("cluster {i}: member {p} is lighter than center {center}"),
            );
            if p != center {
                let d = points[p].euclidean(&points[center]);
                let bound = eps * points[p].weight;
                s.check(
                    d <= bound + TOL * bound.max(1.0),
                    "member within eps w(p) of its center",
                    || format!("point {p} is {d} from center {center}, bound {bound}"),
                );
            }
        }
    }
    for &p in weight_order(points).iter().take(k + 1) {
        s.check(
            c.centers[c.assignment[p]] == p,
            "k + 1 lightest points are centers",
            || format!("point {p} is not a center"),
        );
    }
}

fn check_decomposition(s: &mut Sink, d: &DomainDecomposition, points: &[Point2], holes: usize) {
    let faces = d.faces.len();
    s.check(faces <= 8 * (holes + 1), "at most 8(h + 1) faces", || {
        format!("{faces} faces, {holes} holes")
    });
    for (f, face) in d.faces.iter().enumerate() {
        s.check(
            face.segments.len() <= 3,
            "each face touches at most 3 segments",
            || format!("face {f} touches {}", face.segments.len()),
        );
    }
    let assignment = match d.assign_points(points) {
        Ok(a) => a,
        Err(e) => {
            s.check(false, "every point lies in a face", || e.to_string());
            return;
        }
    };
    let dual = d.dual_graph(&assignment);
    let weight = dual.total_weight();
    s.check(
        close(weight, points.len() as f64),
        "face weights sum to n",
        || format!("{weight} for {} points", points.len()),
    );
    let comps = dual.components(&vec![false; faces]).len();
    s.check(faces == 0 || comps == 1, "dual graph connected", || {
        format!("{comps} components")
    });
}

fn check_projections(
    s: &mut Sink,
    sets: &[ProjectionSet],
    points: &[WeightedPoint],
    engine: Option<&GeodesicEngine>,
    refine: bool,
    pieces: usize,
) {
    for (i, set) in sets.iter().enumerate() {
        let seg = &set.segment;
        for src in set.sources() {
            let count = set.of_source(src).count();
            let cap = if refine { pieces } else { 1 };
            s.check(
                count >= 1 && count <= cap,
                "projection set size within the piece count",
                || format!("set {i}: source {src} has {count}, cap {cap}"),
            );
        }
        for q in &set.points {
            let off = point_segment_distance(seg.a, seg.b, q.point);
            s.check(
                off <= TOL * seg.length().max(1.0),
                "projection lies on its segment",
                || format!("set {i}: source {} is {off} off the segment", q.source),
            );
            let Some(p) = points.get(q.source) else {
                s.check(false, "projection source exists", || {
                    format!("set {i}: source {}", q.source)
                });
                continue;
            };
            s.check(
                q.weight >= p.weight - TOL,
                "projection weight at least w(p)",
                || {
                    format!(
                        "set {i}: source {} weight {} < {}",
                        q.source, q.weight, p.weight
                    )
                },
            );
            if let Some(engine) = engine {
                let expect = p.weight + engine.distance(p.xy(), q.point);
                s.check(
                    close(q.weight, expect),
                    "projection weight is w(p) plus geodesic distance",
                    || {
                        format!(
                            "set {i}: source {} weight {} expected {expect}",
                            q.source, q.weight
                        )
                    },
                );
            }
        }
    }
}
