//! Planar primitives shared by the polygon and geodesic code.

use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

/// Absolute tolerance for incidence tests on unit-scale instances.
pub const GEOM_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn dist(self, other: Point2) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn dot(self, other: Point2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn cross(self, other: Point2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn lerp(self, other: Point2, t: f64) -> Point2 {
        Point2::new(
            self.x + (other.x - self.x) * t,
            self.y + (other.y - self.y) * t,
        )
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, o: Point2) -> Point2 {
        Point2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, s: f64) -> Point2 {
        Point2::new(self.x * s, self.y * s)
    }
}

impl From<[f64; 2]> for Point2 {
    fn from(a: [f64; 2]) -> Self {
        Point2::new(a[0], a[1])
    }
}

/// Twice the signed area of (a, b, c); positive when c is left of a->b.
#[inline]
pub fn orient(a: Point2, b: Point2, c: Point2) -> f64 {
    (b - a).cross(c - a)
}

/// Sign of `orient` with a length-scaled dead zone.
pub fn orient_sign(a: Point2, b: Point2, c: Point2) -> i8 {
    let o = orient(a, b, c);
    let scale = (b - a).norm().max((c - a).norm()).max(1.0);
    if o > GEOM_EPS * scale {
        1
    } else if o < -GEOM_EPS * scale {
        -1
    } else {
        0
    }
}

/// Parameter of the orthogonal projection of `p` onto the line through a, b,
/// clamped to [0, 1].
pub fn segment_param(a: Point2, b: Point2, p: Point2) -> f64 {
    let d = b - a;
    let len2 = d.dot(d);
    if len2 == 0.0 {
        return 0.0;
    }
    ((p - a).dot(d) / len2).clamp(0.0, 1.0)
}

pub fn point_segment_distance(a: Point2, b: Point2, p: Point2) -> f64 {
    p.dist(a.lerp(b, segment_param(a, b, p)))
}

pub fn on_segment(a: Point2, b: Point2, p: Point2) -> bool {
    point_segment_distance(a, b, p) <= GEOM_EPS
}

/// True when the open segments cross at a single interior point of both.
pub fn segments_cross_properly(a: Point2, b: Point2, c: Point2, d: Point2) -> bool {
    let o1 = orient_sign(a, b, c);
    let o2 = orient_sign(a, b, d);
    let o3 = orient_sign(c, d, a);
    let o4 = orient_sign(c, d, b);
    o1 * o2 < 0 && o3 * o4 < 0
}

/// True when the closed segments share at least one point.
pub fn segments_intersect(a: Point2, b: Point2, c: Point2, d: Point2) -> bool {
    if segments_cross_properly(a, b, c, d) {
        return true;
    }
    on_segment(a, b, c) || on_segment(a, b, d) || on_segment(c, d, a) || on_segment(c, d, b)
}

/// Intersection of the line through (a, b) with the line through (c, d), as the
/// parameter along a->b. `None` for (near-)parallel lines.
pub fn line_intersection_param(a: Point2, b: Point2, c: Point2, d: Point2) -> Option<f64> {
    let r = b - a;
    let s = d - c;
    let denom = r.cross(s);
    if denom.abs() <= 1e-15 * r.norm().max(1e-300) * s.norm().max(1e-300) {
        return None;
    }
    Some((c - a).cross(s) / denom)
}

/// Signed area of a closed ring (positive for counterclockwise).
pub fn signed_area(ring: &[Point2]) -> f64 {
    let n = ring.len();
    let mut acc = 0.0;
    for i in 0..n {
        acc += ring[i].cross(ring[(i + 1) % n]);
    }
    acc * 0.5
}

/// Even-odd containment; boundary points are reported by `ring_distance`.
pub fn ring_contains(ring: &[Point2], p: Point2) -> bool {
    let n = ring.len();
    let mut inside = false;
    let mut j = n - 1;
    for i in 0..n {
        let (a, b) = (ring[i], ring[j]);
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if p.x < x {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

/// Euclidean distance from `p` to the boundary of a closed ring.
pub fn ring_distance(ring: &[Point2], p: Point2) -> f64 {
    let n = ring.len();
    (0..n)
        .map(|i| point_segment_distance(ring[i], ring[(i + 1) % n], p))
        .fold(f64::INFINITY, f64::min)
}

/// Closed containment with the boundary snap tolerance.
pub fn ring_contains_closed(ring: &[Point2], p: Point2) -> bool {
    ring_contains(ring, p) || ring_distance(ring, p) <= GEOM_EPS
}

/// Checks that a closed ring has no two non-adjacent edges that touch and no
/// adjacent edges that overlap.
pub fn ring_is_simple(ring: &[Point2]) -> bool {
    let n = ring.len();
    if n < 3 {
        return false;
    }
    for i in 0..n {
        if ring[i].dist(ring[(i + 1) % n]) <= GEOM_EPS {
            return false;
        }
    }
    for i in 0..n {
        let (a, b) = (ring[i], ring[(i + 1) % n]);
        for j in i + 1..n {
            let (c, d) = (ring[j], ring[(j + 1) % n]);
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            if adjacent {
                // Shared vertex only: the far endpoints must not fold back
                // onto the other edge.
                let (shared, far_a, far_b) = if j == i + 1 { (b, a, d) } else { (a, b, c) };
                if orient_sign(far_a, shared, far_b) == 0
                    && (far_b - shared).dot(far_a - shared) > 0.0
                {
                    return false;
                }
                continue;
            }
            if segments_intersect(a, b, c, d) {
                return false;
            }
        }
    }
    true
}
