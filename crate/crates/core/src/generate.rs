//! Seeded instance generators and a small library of canned shapes.

use std::f64::consts::TAU;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Result, SpannerError};
use crate::geometry::Point2;
use crate::metric::WeightedPoint;
use crate::polygon::{PolygonalDomain, SimplePolygon};

/// Draws allowed before rejection sampling gives up.
pub const MAX_DRAWS: usize = 1_000_000;

fn pts(raw: &[(f64, f64)]) -> Vec<Point2> {
    raw.iter().map(|&(x, y)| Point2::new(x, y)).collect()
}

fn rect(x0: f64, y0: f64, x1: f64, y1: f64) -> Vec<Point2> {
    pts(&[(x0, y0), (x1, y0), (x1, y1), (x0, y1)])
}

/// Regular `m`-gon inscribed in the unit box.
pub fn convex_polygon(m: usize) -> Result<SimplePolygon> {
    if m < 3 {
        return invalid(format!("convex polygon needs at least 3 vertices, got {m}"));
    }
    SimplePolygon::new(
        (0..m)
            .map(|i| {
                let a = TAU * i as f64 / m as f64;
                Point2::new(0.5 + 0.5 * a.cos(), 0.5 + 0.5 * a.sin())
            })
            .collect(),
    )
}

/// Star-shaped `m`-gon around the box center with jittered angles and random
/// radii in `[0.2, 0.5]`.
pub fn random_star_polygon(m: usize, rng: &mut ChaCha8Rng) -> Result<SimplePolygon> {
    if m < 3 {
        return invalid(format!("star polygon needs at least 3 vertices, got {m}"));
    }
    let step = TAU / m as f64;
    SimplePolygon::new(
        (0..m)
            .map(|i| {
                let a = step * (i as f64 + rng.gen_range(0.1..0.9));
                let r = rng.gen_range(0.2..0.5);
                Point2::new(0.5 + r * a.cos(), 0.5 + r * a.sin())
            })
            .collect(),
    )
}

pub fn l_shape() -> SimplePolygon {
    SimplePolygon::new(pts(&[
        (0.0, 0.0),
        (1.0, 0.0),
        (1.0, 0.4),
        (0.4, 0.4),
        (0.4, 1.0),
        (0.0, 1.0),
    ]))
    .expect("valid shape")
}

pub fn u_shape() -> SimplePolygon {
    SimplePolygon::new(pts(&[
        (0.0, 0.0),
        (1.0, 0.0),
        (1.0, 1.0),
        (0.7, 1.0),
        (0.7, 0.3),
        (0.3, 0.3),
        (0.3, 1.0),
        (0.0, 1.0),
    ]))
    .expect("valid shape")
}

/// Comb with `teeth` slots cut down from the top edge.
pub fn comb(teeth: usize) -> Result<SimplePolygon> {
    if teeth == 0 {
        return invalid("comb needs at least one tooth");
    }
    let w = 1.0 / (2 * teeth + 1) as f64;
    let mut v = vec![
        Point2::new(0.0, 0.0),
        Point2::new(1.0, 0.0),
        Point2::new(1.0, 1.0),
    ];
    for i in (0..teeth).rev() {
        let x0 = w * (2 * i + 1) as f64;
        v.push(Point2::new(x0 + w, 1.0));
        v.push(Point2::new(x0 + w, 0.3));
        v.push(Point2::new(x0, 0.3));
        v.push(Point2::new(x0, 1.0));
    }
    v.push(Point2::new(0.0, 1.0));
    SimplePolygon::new(v)
}

fn unit_square() -> SimplePolygon {
    SimplePolygon::new(rect(0.0, 0.0, 1.0, 1.0)).expect("valid square")
}

/// Unit square with `holes` square holes along the diagonal band.
pub fn square_with_holes(holes: usize) -> Result<PolygonalDomain> {
    let hs = match holes {
        0 => Vec::new(),
        1 => vec![rect(0.35, 0.35, 0.65, 0.65)],
        2 => vec![rect(0.15, 0.15, 0.4, 0.4), rect(0.6, 0.55, 0.85, 0.8)],
        3 => vec![
            rect(0.1, 0.1, 0.3, 0.3),
            rect(0.42, 0.45, 0.6, 0.6),
            rect(0.7, 0.72, 0.9, 0.9),
        ],
        _ => {
            return invalid(format!(
                "square-with-holes supports up to 3 holes, got {holes}"
            ))
        }
    };
    let holes = hs
        .into_iter()
        .map(SimplePolygon::new)
        .collect::<Result<Vec<_>>>()?;
    PolygonalDomain::new(unit_square(), holes)
}

/// Unit square with two holes side by side.
pub fn two_holes() -> PolygonalDomain {
    PolygonalDomain::new(
        unit_square(),
        vec![
            SimplePolygon::new(rect(0.15, 0.3, 0.35, 0.7)).expect("valid hole"),
            SimplePolygon::new(rect(0.65, 0.3, 0.85, 0.7)).expect("valid hole"),
        ],
    )
    .expect("valid domain")
}

/// Names accepted by [`shape`].
pub const SHAPE_NAMES: &[&str] = &[
    "convex-<m>",
    "star-<m>",
    "L",
    "U",
    "comb-<teeth>",
    "square",
    "square-hole",
    "square-holes-<h>",
    "two-holes",
];

/// Canned shape by name. Random shapes draw from `rng`.
pub fn shape(name: &str, rng: &mut ChaCha8Rng) -> Result<PolygonalDomain> {
    let simple = |p: SimplePolygon| PolygonalDomain::simple(p);
    let count = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| SpannerError::InvalidInput(format!("bad shape size in `{name}`")))
    };
    match name {
        "L" => Ok(simple(l_shape())),
        "U" => Ok(simple(u_shape())),
        "comb" => Ok(simple(comb(4)?)),
        "square" => Ok(simple(unit_square())),
        "square-hole" => square_with_holes(1),
        "two-holes" => Ok(two_holes()),
        _ => {
            if let Some(m) = name.strip_prefix("convex-") {
                Ok(simple(convex_polygon(count(m)?)?))
            } else if let Some(m) = name.strip_prefix("star-") {
                Ok(simple(random_star_polygon(count(m)?, rng)?))
            } else if let Some(t) = name.strip_prefix("comb-") {
                Ok(simple(comb(count(t)?)?))
            } else if let Some(h) = name.strip_prefix("square-holes-") {
                square_with_holes(count(h)?)
            } else {
                invalid(format!(
                    "unknown shape `{name}`; known: {}",
                    SHAPE_NAMES.join(", ")
                ))
            }
        }
    }
}

fn weight(rng: &mut ChaCha8Rng, range: (f64, f64)) -> f64 {
    if range.0 == range.1 {
        range.0
    } else {
        rng.gen_range(range.0..range.1)
    }
}

fn check_range(range: (f64, f64)) -> Result<()> {
    if !(range.0 >= 0.0 && range.0 <= range.1 && range.1.is_finite()) {
        return invalid(format!(
            "weight range [{}, {}] is not a valid non-negative interval",
            range.0, range.1
        ));
    }
    Ok(())
}

/// `n` uniform points in the unit box of dimension `dim`.
pub fn points_in_box(
    n: usize,
    dim: usize,
    weights: (f64, f64),
    rng: &mut ChaCha8Rng,
) -> Result<Vec<WeightedPoint>> {
    check_range(weights)?;
    if dim == 0 {
        return invalid("dimension must be at least 1");
    }
    Ok((0..n)
        .map(|i| {
            let coords = (0..dim).map(|_| rng.gen::<f64>()).collect();
            WeightedPoint::new(i, coords, weight(rng, weights))
        })
        .collect())
}

/// `n` points strictly inside the free space, by rejection from its bounding
/// box.
pub fn points_in_domain(
    dom: &PolygonalDomain,
    n: usize,
    weights: (f64, f64),
    rng: &mut ChaCha8Rng,
) -> Result<Vec<WeightedPoint>> {
    check_range(weights)?;
    let (lo, hi) = dom.outer().bbox();
    let mut out = Vec::with_capacity(n);
    let mut draws = 0;
    while out.len() < n {
        if draws == MAX_DRAWS {
            return invalid(format!(
                "rejection sampling placed {} of {n} points in {MAX_DRAWS} draws",
                out.len()
            ));
        }
        draws += 1;
        let p = Point2::new(rng.gen_range(lo.x..hi.x), rng.gen_range(lo.y..hi.y));
        if dom.contains_strictly(p) {
            out.push(WeightedPoint::planar(out.len(), p, weight(rng, weights)));
        }
    }
    Ok(out)
}
