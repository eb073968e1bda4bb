//! Instance and spanner file formats, plus the build and verify drivers the
//! command line uses.
//!
//! Both formats are JSON with a version tag. Writing goes through
//! [`to_canonical_json`], so a parse followed by a write reproduces the file
//! byte for byte: keys are sorted, reals use the shortest representation that
//! round-trips, and every point, edge, and ring vertex sits on its own line.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::cluster::{build_vftswp_rd_detailed, RdOptions};
use crate::error::SpannerError;
use crate::geodesic::GeodesicEngine;
use crate::geometry::Point2;
use crate::metric::{SpannerGraph, WeightedPoint};
use crate::polygon::{PolygonalDomain, SimplePolygon};
use crate::polygon_spanner::{build_with_engine, PolygonSpannerParams};
use crate::verify::{
    fault_stretch_check, invariant_suite, Artifact, CheckMode, FaultReport, Metric, Violation,
};

pub const INSTANCE_VERSION: &str = "wvfts-instance/1";
pub const SPANNER_VERSION: &str = "wvfts-spanner/1";
pub const REPORT_VERSION: &str = "wvfts-report/1";

#[derive(Debug, Error)]
pub enum IoError {
    /// The document is malformed or violates a format invariant.
    #[error("{what} at byte {offset}: {invariant}: {detail}")]
    Invalid {
        what: &'static str,
        offset: usize,
        invariant: String,
        detail: String,
    },
    #[error(transparent)]
    Spanner(#[from] SpannerError),
    #[error("{path}: {source}")]
    File {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type IoResult<T> = std::result::Result<T, IoError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InstanceMode {
    Rd,
    Polygon,
    Domain,
}

impl InstanceMode {
    pub fn as_str(self) -> &'static str {
        match self {
            InstanceMode::Rd => "rd",
            InstanceMode::Polygon => "polygon",
            InstanceMode::Domain => "domain",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolygonRecord {
    pub outer: Vec<[f64; 2]>,
    #[serde(default)]
    pub holes: Vec<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub version: String,
    pub mode: InstanceMode,
    pub dim: usize,
    /// `[coords..., weight]` per point.
    pub points: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polygon: Option<PolygonRecord>,
}

/// A validated instance.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub mode: InstanceMode,
    pub dim: usize,
    pub points: Vec<WeightedPoint>,
    pub domain: Option<PolygonalDomain>,
}

fn ring_record(p: &SimplePolygon) -> Vec<[f64; 2]> {
    p.vertices().iter().map(|v| [v.x, v.y]).collect()
}

impl Instance {
    pub fn rd(points: Vec<WeightedPoint>) -> Self {
        let dim = points.first().map_or(2, |p| p.dim());
        Instance {
            mode: InstanceMode::Rd,
            dim,
            points,
            domain: None,
        }
    }

    pub fn in_domain(domain: PolygonalDomain, points: Vec<WeightedPoint>) -> Self {
        let mode = if domain.hole_count() == 0 {
            InstanceMode::Polygon
        } else {
            InstanceMode::Domain
        };
        Instance {
            mode,
            dim: 2,
            points,
            domain: Some(domain),
        }
    }

    pub fn hole_count(&self) -> usize {
        self.domain.as_ref().map_or(0, |d| d.hole_count())
    }

    pub fn to_file(&self) -> InstanceFile {
        InstanceFile {
            version: INSTANCE_VERSION.to_string(),
            mode: self.mode,
            dim: self.dim,
            points: self
                .points
                .iter()
                .map(|p| p.coords.iter().copied().chain([p.weight]).collect())
                .collect(),
            polygon: self.domain.as_ref().map(|d| PolygonRecord {
                outer: ring_record(d.outer()),
                holes: d.holes().iter().map(ring_record).collect(),
            }),
        }
    }

    pub fn to_json(&self) -> String {
        to_canonical_json(&self.to_file())
    }

    /// SHA-256 of the canonical serialization, hex encoded.
    pub fn hash(&self) -> String {
        Sha256::digest(self.to_json().as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

/// Byte offset of a JSON syntax error.
fn offset_of(text: &str, line: usize, column: usize) -> usize {
    let start: usize = text
        .split_inclusive('\n')
        .take(line.saturating_sub(1))
        .map(str::len)
        .sum();
    (start + column.saturating_sub(1)).min(text.len())
}

/// Byte offset of `"key"` in the text, or 0.
fn key_offset(text: &str, key: &str) -> usize {
    text.find(&format!("\"{key}\"")).unwrap_or(0)
}

/// Byte offset of the `index`-th element of the array stored under `key`.
fn element_offset(text: &str, key: &str, index: usize) -> usize {
    let base = key_offset(text, key);
    let Some(open) = text[base..].find('[').map(|i| base + i) else {
        return base;
    };
    let mut depth = 0usize;
    let mut seen = 0usize;
    let mut in_string = false;
    let bytes = text.as_bytes();
    let mut i = open;
    while i < bytes.len() {
        let c = bytes[i];
        if in_string {
            if c == b'\\' {
                i += 1;
            } else if c == b'"' {
                in_string = false;
            }
        } else {
            match c {
                b'"' => in_string = true,
                b'[' | b'{' => {
                    depth += 1;
                    if depth == 2 {
                        if seen == index {
                            return i;
                        }
                        seen += 1;
                    }
                }
                b']' | b'}' => {
                    if depth == 1 {
                        return base;
                    }
                    depth -= 1;
                }
                _ => {}
            }
        }
        i += 1;
    }
    base
}

fn invalid_at(
    what: &'static str,
    offset: usize,
    invariant: &str,
    detail: impl Into<String>,
) -> IoError {
    IoError::Invalid {
        what,
        offset,
        invariant: invariant.to_string(),
        detail: detail.into(),
    }
}

fn syntax(what: &'static str, text: &str, e: serde_json::Error) -> IoError {
    invalid_at(
        what,
        offset_of(text, e.line(), e.column()),
        "well-formed document",
        e.to_string(),
    )
}

fn ring(raw: &[[f64; 2]]) -> Vec<Point2> {
    raw.iter().map(|&p| Point2::from(p)).collect()
}

/// Parses and validates an instance, naming the violated invariant and its
/// byte offset on failure.
pub fn parse_instance(text: &str) -> IoResult<Instance> {
    const WHAT: &str = "invalid instance";
    let file: InstanceFile = serde_json::from_str(text).map_err(|e| syntax(WHAT, text, e))?;
    if file.version != INSTANCE_VERSION {
        return Err(invalid_at(
            WHAT,
            key_offset(text, "version"),
            "version tag",
            format!("expected {INSTANCE_VERSION}, found {}", file.version),
        ));
    }
    if file.dim == 0 {
        return Err(invalid_at(
            WHAT,
            key_offset(text, "dim"),
            "dim >= 1",
            "dimension is zero",
        ));
    }
    let mut points = Vec::with_capacity(file.points.len());
    for (i, row) in file.points.iter().enumerate() {
        let at = || element_offset(text, "points", i);
        if row.len() != file.dim + 1 {
            return Err(invalid_at(
                WHAT,
                at(),
                "point arity is dim + 1",
                format!(
                    "point {i} has {} numbers, expected {}",
                    row.len(),
                    file.dim + 1
                ),
            ));
        }
        if row.iter().any(|v| !v.is_finite()) {
            return Err(invalid_at(
                WHAT,
                at(),
                "finite coordinates",
                format!("point {i}"),
            ));
        }
        let weight = row[file.dim];
        if weight < 0.0 {
            return Err(invalid_at(
                WHAT,
                at(),
                "weight >= 0",
                format!("point {i} has weight {weight}"),
            ));
        }
        points.push(WeightedPoint::new(i, row[..file.dim].to_vec(), weight));
    }
    let domain = match (file.mode, &file.polygon) {
        (InstanceMode::Rd, None) => None,
        (InstanceMode::Rd, Some(_)) => {
            return Err(invalid_at(
                WHAT,
                key_offset(text, "polygon"),
                "rd instances have no polygon",
                "",
            ));
        }
        (_, None) => {
            return Err(invalid_at(
                WHAT,
                key_offset(text, "mode"),
                "polygon present",
                "polygon and domain instances need one",
            ));
        }
        (mode, Some(rec)) => {
            let at = key_offset(text, "polygon");
            if file.dim != 2 {
                return Err(invalid_at(
                    WHAT,
                    key_offset(text, "dim"),
                    "dim = 2 with a polygon",
                    format!("dim is {}", file.dim),
                ));
            }
            if mode == InstanceMode::Polygon && !rec.holes.is_empty() {
                return Err(invalid_at(
                    WHAT,
                    key_offset(text, "holes"),
                    "polygon instances have no holes",
                    "",
                ));
            }
            let outer = SimplePolygon::new(ring(&rec.outer)).map_err(|e| {
                invalid_at(
                    WHAT,
                    key_offset(text, "outer"),
                    "outer polygon is simple",
                    e.to_string(),
                )
            })?;
            let holes = rec
                .holes
                .iter()
                .enumerate()
                .map(|(h, r)| {
                    SimplePolygon::new(ring(r)).map_err(|e| {
                        invalid_at(
                            WHAT,
                            element_offset(text, "holes", h),
                            "hole is simple",
                            e.to_string(),
                        )
                    })
                })
                .collect::<IoResult<Vec<_>>>()?;
            let dom = PolygonalDomain::new(outer, holes).map_err(|e| {
                invalid_at(
                    WHAT,
                    at,
                    "holes disjoint and inside the outer polygon",
                    e.to_string(),
                )
            })?;
            if let Some(i) = points.iter().position(|p| !dom.contains(p.xy())) {
                return Err(invalid_at(
                    WHAT,
                    element_offset(text, "points", i),
                    "points lie in the free space",
                    format!("point {i}"),
                ));
            }
            Some(dom)
        }
    };
    Ok(Instance {
        mode: file.mode,
        dim: file.dim,
        points,
        domain,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BuildParams {
    pub k: usize,
    pub eps: f64,
    pub mode: InstanceMode,
    pub refine: bool,
    /// Base spanner stretch used on cluster centers.
    pub t_b: f64,
    #[serde(default)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpannerFile {
    pub version: String,
    pub params: BuildParams,
    pub n: usize,
    /// `[u, v, base_length]` with `u < v`, sorted.
    pub edges: Vec<(usize, usize, f64)>,
    pub instance_sha256: String,
}

impl SpannerFile {
    pub fn graph(&self) -> SpannerGraph {
        let mut g = SpannerGraph::new(self.n);
        for &(u, v, l) in &self.edges {
            g.add_edge(u, v, l);
        }
        g
    }

    pub fn to_json(&self) -> String {
        to_canonical_json(self)
    }
}

pub fn parse_spanner(text: &str) -> IoResult<SpannerFile> {
    const WHAT: &str = "invalid spanner file";
    let file: SpannerFile = serde_json::from_str(text).map_err(|e| syntax(WHAT, text, e))?;
    if file.version != SPANNER_VERSION {
        return Err(invalid_at(
            WHAT,
            key_offset(text, "version"),
            "version tag",
            format!("expected {SPANNER_VERSION}, found {}", file.version),
        ));
    }
    for (i, &(u, v, l)) in file.edges.iter().enumerate() {
        let at = || element_offset(text, "edges", i);
        if u >= v {
            return Err(invalid_at(
                WHAT,
                at(),
                "u < v in every edge",
                format!("edge {i} is ({u}, {v})"),
            ));
        }
        if v >= file.n {
            return Err(invalid_at(
                WHAT,
                at(),
                "endpoints below n",
                format!("edge {i} reaches {v}, n = {}", file.n),
            ));
        }
        if !(l >= 0.0 && l.is_finite()) {
            return Err(invalid_at(
                WHAT,
                at(),
                "base_length finite and >= 0",
                format!("edge {i} has {l}"),
            ));
        }
        if i > 0 {
            let (pu, pv, _) = file.edges[i - 1];
            if (pu, pv) >= (u, v) {
                return Err(invalid_at(
                    WHAT,
                    at(),
                    "edges sorted without duplicates",
                    format!("edge {i}"),
                ));
            }
        }
    }
    Ok(file)
}

/// Builds the spanner for an instance with the construction its mode calls
/// for.
pub fn run_build(
    instance: &Instance,
    k: usize,
    eps: f64,
    refine: bool,
    seed: Option<u64>,
) -> IoResult<SpannerFile> {
    Ok(run_build_checked(instance, k, eps, refine, seed)?.0)
}

/// [`run_build`] plus the invariant checks of every intermediate artifact.
pub fn run_build_checked(
    instance: &Instance,
    k: usize,
    eps: f64,
    refine: bool,
    seed: Option<u64>,
) -> IoResult<(SpannerFile, Vec<Violation>)> {
    let points = &instance.points;
    let (graph, violations) = match &instance.domain {
        None => {
            let built = build_vftswp_rd_detailed(points, k, eps, &RdOptions::default())?;
            let mut v = invariant_suite(&Artifact::Clustering {
                clustering: &built.clustering,
                points,
                k,
                eps,
            });
            v.extend(invariant_suite(&Artifact::Spanner {
                graph: &built.graph,
                points,
                metric: Metric::Euclidean,
            }));
            (built.graph, v)
        }
        Some(dom) => {
            let engine = GeodesicEngine::new(dom.clone())?;
            let params = PolygonSpannerParams::new(k, eps, refine);
            let built = build_with_engine(&engine, points, &params)?;
            let xy: Vec<Point2> = points.iter().map(|p| p.xy()).collect();
            let mut v = invariant_suite(&Artifact::Decomposition {
                decomposition: &built.decomposition,
                points: &xy,
                holes: dom.hole_count(),
            });
            v.extend(invariant_suite(&Artifact::Projections {
                sets: &built.projections,
                points,
                engine: Some(&engine),
                refine,
                pieces: params.piece_count(),
            }));
            v.extend(invariant_suite(&Artifact::Splits(&built.splits)));
            v.extend(invariant_suite(&Artifact::Separators(&built.separators)));
            v.extend(invariant_suite(&Artifact::Spanner {
                graph: &built.graph,
                points,
                metric: Metric::Geodesic(&engine),
            }));
            (built.graph, v)
        }
    };
    let file = SpannerFile {
        version: SPANNER_VERSION.to_string(),
        params: BuildParams {
            k,
            eps,
            mode: instance.mode,
            refine,
            t_b: 2.0 + eps,
            seed,
        },
        n: points.len(),
        edges: graph.edges().collect(),
        instance_sha256: instance.hash(),
    };
    Ok((file, violations))
}

/// Stretch bound certified for a build: `(2 + eps)^2` in R^d, and for
/// polygons `4 + 14 eps` refined or `12 + 15 eps` unrefined.
pub fn default_t_bound(params: &BuildParams) -> f64 {
    let e = params.eps;
    match (params.mode, params.refine) {
        (InstanceMode::Rd, _) => (2.0 + e) * (2.0 + e),
        (_, true) => 4.0 + 14.0 * e,
        (_, false) => 12.0 + 15.0 * e,
    }
}

/// Result of checking a spanner file against its instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyDocument {
    pub version: String,
    pub instance_sha256: String,
    /// Edges whose stored length disagrees with the metric.
    pub bad_edge_lengths: Vec<(usize, usize)>,
    pub report: FaultReport,
    pub pass: bool,
}

pub fn run_verify(
    instance: &Instance,
    spanner: &SpannerFile,
    k: usize,
    t_bound: f64,
    mode: CheckMode,
) -> IoResult<VerifyDocument> {
    if spanner.instance_sha256 != instance.hash() {
        return Err(invalid_at(
            "spanner file does not match instance",
            0,
            "instance hash",
            format!("spanner was built for {}", spanner.instance_sha256),
        ));
    }
    if spanner.n != instance.points.len() {
        return Err(invalid_at(
            "spanner file does not match instance",
            0,
            "n equals the point count",
            "",
        ));
    }
    let engine = match &instance.domain {
        Some(d) => Some(GeodesicEngine::new(d.clone())?),
        None => None,
    };
    let metric = engine.as_ref().map_or(Metric::Euclidean, Metric::Geodesic);
    let bad_edge_lengths: Vec<(usize, usize)> = spanner
        .edges
        .iter()
        .filter(|&&(u, v, l)| {
            let d = metric.base_distance(&instance.points[u], &instance.points[v]);
            (d - l).abs() > 1e-9 * d.max(1.0)
        })
        .map(|&(u, v, _)| (u, v))
        .collect();
    let report = fault_stretch_check(&spanner.graph(), &instance.points, metric, k, t_bound, mode)?;
    let pass = report.pass && report.lower_bound_violations == 0 && bad_edge_lengths.is_empty();
    Ok(VerifyDocument {
        version: REPORT_VERSION.to_string(),
        instance_sha256: spanner.instance_sha256.clone(),
        bad_edge_lengths,
        report,
        pass,
    })
}

/// Canonical JSON text: sorted keys, arrays of scalars inline, other arrays
/// one element per line.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("serializable value");
    let mut out = String::new();
    write_value(&v, 0, &mut out);
    out.push('\n');
    out
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn write_value(v: &Value, indent: usize, out: &mut String) {
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(items) if items.iter().all(is_scalar) => {
            out.push('[');
            for (i, x) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                out.push_str(&x.to_string());
            }
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, x) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_value(x, indent + 1, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push_str("{\n");
            for (i, (k, x)) in map.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_value(x, indent + 1, out);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        scalar => out.push_str(&scalar.to_string()),
    }
}

pub fn read_text(path: &str) -> IoResult<String> {
    std::fs::read_to_string(path).map_err(|source| IoError::File {
        path: path.to_string(),
        source,
    })
}

pub fn write_text(path: &str, text: &str) -> IoResult<()> {
    std::fs::write(path, text).map_err(|source| IoError::File {
        path: path.to_string(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{points_in_box, points_in_domain, square_with_holes};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn instance_round_trip_is_byte_identical() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let dom = square_with_holes(2).unwrap();
        let pts = points_in_domain(&dom, 7, (0.0, 1.0), &mut rng).unwrap();
        let inst = Instance::in_domain(dom, pts);
        let text = inst.to_json();
        let back = parse_instance(&text).unwrap();
        assert_eq!(back, inst);
        assert_eq!(back.to_json(), text);
    }

    #[test]
    fn spanner_round_trip_and_single_edge() {
        let pts = points_in_box(2, 2, (0.0, 1.0), &mut ChaCha8Rng::seed_from_u64(2)).unwrap();
        let inst = Instance::rd(pts);
        let file = run_build(&inst, 1, 0.5, false, Some(3)).unwrap();
        assert_eq!(file.edges.len(), 1);
        let text = file.to_json();
        let back = parse_spanner(&text).unwrap();
        assert_eq!(back, file);
        assert_eq!(back.to_json(), text);
        assert_eq!(
            run_build(&inst, 1, 0.5, false, Some(3)).unwrap().to_json(),
            text
        );
    }

    #[test]
    fn diagnostics_name_invariant_and_offset() {
        let text = "{\"version\": \"wvfts-instance/1\", \"mode\": \"rd\", \"dim\": 2, \"points\": [[0, 0, 1], [1, 1, -2]]}";
        match parse_instance(text) {
            Err(IoError::Invalid {
                offset, invariant, ..
            }) => {
                assert_eq!(invariant, "weight >= 0");
                assert_eq!(&text[offset..offset + 3], "[1,");
            }
            other => panic!("unexpected {other:?}"),
        }
        match parse_instance("{\"version\": 3") {
            Err(IoError::Invalid { invariant, .. }) => {
                assert_eq!(invariant, "well-formed document")
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn spanner_invariants_checked() {
        let base = |edges: &str| {
            format!(
                "{{\"version\": \"wvfts-spanner/1\", \"params\": {{\"k\": 1, \"eps\": 0.5, \"mode\": \"rd\", \"refine\": false, \"t_b\": 2.5}}, \"n\": 3, \"edges\": {edges}, \"instance_sha256\": \"x\"}}"
            )
        };
        assert!(parse_spanner(&base("[[0, 1, 1.0], [1, 2, 1.0]]")).is_ok());
        for bad in [
            "[[1, 0, 1.0]]",
            "[[1, 2, 1.0], [0, 1, 1.0]]",
            "[[0, 5, 1.0]]",
            "[[0, 1, -1.0]]",
        ] {
            assert!(parse_spanner(&base(bad)).is_err(), "{bad}");
        }
    }

    #[test]
    fn verify_detects_mismatched_instance() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a = Instance::rd(points_in_box(5, 2, (0.0, 1.0), &mut rng).unwrap());
        let b = Instance::rd(points_in_box(5, 2, (0.0, 1.0), &mut rng).unwrap());
        let file = run_build(&a, 1, 0.5, false, None).unwrap();
        assert!(run_verify(&b, &file, 1, 6.25, CheckMode::Exhaustive).is_err());
        assert!(
            run_verify(&a, &file, 1, 6.25, CheckMode::Exhaustive)
                .unwrap()
                .pass
        );
    }
}
