//! Planar primitives: points, exact predicates, angles and the eight-cone
//! partition around a vertex.
//!
//! Orientation and in-circle signs are exact (adaptive floating point with an
//! exact fallback). Angles are computed with `atan2` over compensated cross and
//! dot products. Cone membership is decided with a small angular tolerance,
//! since the cone rays are irrational directions in general.

use std::cmp::Ordering;
use std::f64::consts::{FRAC_PI_4, PI, TAU};
use std::fmt;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

pub type VertexId = u32;

/// Number of cones around every vertex.
pub const CONE_COUNT: usize = 8;
/// Angular width of a cone.
pub const CONE_WIDTH: f64 = FRAC_PI_4;
/// Default angular tolerance (radians) for deciding that a direction lies on a
/// cone boundary ray.
pub const DEFAULT_CONE_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn distance(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn rotated(&self, angle: f64) -> Point {
        let (s, c) = angle.sin_cos();
        Point::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    fn coord(&self) -> robust::Coord<f64> {
        robust::Coord { x: self.x, y: self.y }
    }
}

impl From<(f64, f64)> for Point {
    fn from((x, y): (f64, f64)) -> Self {
        Point::new(x, y)
    }
}

impl From<[f64; 2]> for Point {
    fn from([x, y]: [f64; 2]) -> Self {
        Point::new(x, y)
    }
}

/// An immutable, indexed list of points. A point's id is its index.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct PointSet {
    points: Vec<Point>,
}

impl PointSet {
    pub fn new(points: Vec<Point>) -> Result<Self> {
        if let Some(index) = points.iter().position(|p| !p.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(PointSet { points })
    }

    pub fn from_xy<I: IntoIterator<Item = (f64, f64)>>(coords: I) -> Result<Self> {
        Self::new(coords.into_iter().map(Point::from).collect())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn get(&self, id: VertexId) -> Option<&Point> {
        self.points.get(id as usize)
    }

    pub fn as_slice(&self) -> &[Point] {
        &self.points
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Point> {
        self.points.iter()
    }

    pub fn distance(&self, a: VertexId, b: VertexId) -> f64 {
        self[a].distance(&self[b])
    }
}

impl std::ops::Index<VertexId> for PointSet {
    type Output = Point;

    fn index(&self, id: VertexId) -> &Point {
        &self.points[id as usize]
    }
}

/// Sign of the signed area of triangle `(a, b, c)`: `+1` for a
/// counterclockwise turn, `-1` for clockwise, `0` when collinear.
pub fn orient2d(a: Point, b: Point, c: Point) -> i8 {
    sign(robust::orient2d(a.coord(), b.coord(), c.coord()))
}

/// `+1` iff `d` lies strictly inside the circle through the counterclockwise
/// triangle `(a, b, c)`, `0` if cocircular, `-1` otherwise.
pub fn incircle(a: Point, b: Point, c: Point, d: Point) -> i8 {
    sign(robust::incircle(a.coord(), b.coord(), c.coord(), d.coord()))
}

/// In-circle test under a symbolic perturbation that never returns 0 for four
/// distinct vertices with `(a, b, c)` counterclockwise.
///
/// Each lifted coordinate `x^2 + y^2` of vertex `i` is raised by `eps^(i+1)`.
/// When the exact determinant vanishes, the sign is that of the cofactor of
/// the lowest-id vertex whose cofactor is non-zero.
pub fn incircle_perturbed(pts: [(Point, VertexId); 4]) -> i8 {
    let [(a, _), (b, _), (c, _), (d, _)] = pts;
    let s = incircle(a, b, c, d);
    if s != 0 {
        return s;
    }
    let mut order = [0usize, 1, 2, 3];
    order.sort_by_key(|&slot| pts[slot].1);
    for slot in order {
        let cofactor = match slot {
            0 => orient2d(b, c, d),
            1 => -orient2d(a, c, d),
            2 => orient2d(a, b, d),
            _ => -orient2d(a, b, c),
        };
        if cofactor != 0 {
            return cofactor;
        }
    }
    0
}

fn sign(v: f64) -> i8 {
    if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    }
}

/// `a*b - c*d` with a single rounding error in the common case.
fn diff_of_products(a: f64, b: f64, c: f64, d: f64) -> f64 {
    let w = c * d;
    let e = (-c).mul_add(d, w);
    let f = a.mul_add(b, -w);
    f + e
}

/// `a*b + c*d`, compensated.
fn sum_of_products(a: f64, b: f64, c: f64, d: f64) -> f64 {
    let w = c * d;
    let e = c.mul_add(d, -w);
    let f = a.mul_add(b, w);
    f + e
}

/// Cross and dot product of two vectors.
pub(crate) fn cross_dot(u: (f64, f64), v: (f64, f64)) -> (f64, f64) {
    (diff_of_products(u.0, v.1, u.1, v.0), sum_of_products(u.0, v.0, u.1, v.1))
}

/// Unsigned angle in `[0, pi]` between rays `vertex -> a` and `vertex -> b`.
pub fn angle_at(vertex: Point, a: Point, b: Point) -> Result<f64> {
    let u = (a.x - vertex.x, a.y - vertex.y);
    let v = (b.x - vertex.x, b.y - vertex.y);
    if u == (0.0, 0.0) || v == (0.0, 0.0) {
        return Err(Error::Coincident);
    }
    let (cross, dot) = cross_dot(u, v);
    Ok(cross.abs().atan2(dot))
}

/// Exact comparison of `|ab|^2` against `|cd|^2`.
pub fn cmp_squared_distance(a: Point, b: Point, c: Point, d: Point) -> Ordering {
    let s1 = squared(a, b);
    let s2 = squared(c, d);
    let bound = 8.0 * f64::EPSILON * (s1 + s2);
    if (s1 - s2).abs() > bound && s1 + s2 > 1e-280 {
        return s1.partial_cmp(&s2).unwrap_or(Ordering::Equal);
    }
    let e1 = exact::squared(a, b);
    let e2 = exact::squared(c, d);
    e1.cmp(&e2)
}

fn squared(a: Point, b: Point) -> f64 {
    let dx = a.x - b.x;
    let dy = a.y - b.y;
    dx * dx + dy * dy
}

/// Exact sign of `(p - q) . (r - q)`; negative iff the angle at `q` in the
/// triangle `p q r` is obtuse.
pub fn dot_sign(q: Point, p: Point, r: Point) -> i8 {
    let t1 = (p.x - q.x) * (r.x - q.x);
    let t2 = (p.y - q.y) * (r.y - q.y);
    let bound = 8.0 * f64::EPSILON * (t1.abs() + t2.abs());
    let s = t1 + t2;
    if s.abs() > bound && t1.abs() + t2.abs() > 1e-280 {
        return sign(s);
    }
    let e = exact::dot(q, p, r);
    if e.is_zero() {
        0
    } else if e.is_positive() {
        1
    } else {
        -1
    }
}

mod exact {
    use super::{BigRational, Point};

    fn q(v: f64) -> BigRational {
        BigRational::from_float(v).expect("finite coordinate")
    }

    pub(super) fn squared(a: Point, b: Point) -> BigRational {
        let dx = q(a.x) - q(b.x);
        let dy = q(a.y) - q(b.y);
        &dx * &dx + &dy * &dy
    }

    pub(super) fn dot(q0: Point, p: Point, r: Point) -> BigRational {
        (q(p.x) - q(q0.x)) * (q(r.x) - q(q0.x)) + (q(p.y) - q(q0.y)) * (q(r.y) - q(q0.y))
    }
}

/// A direction, as an angle normalized to `[0, 2*pi)`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Direction(f64);

impl Direction {
    pub fn new(theta: f64) -> Self {
        let t = theta.rem_euclid(TAU);
        Direction(if t >= TAU { 0.0 } else { t })
    }

    pub fn between(from: Point, to: Point) -> Result<Self> {
        if from == to {
            return Err(Error::Coincident);
        }
        Ok(Direction::new((to.y - from.y).atan2(to.x - from.x)))
    }

    pub fn theta(&self) -> f64 {
        self.0
    }
}

/// A set of cone labels (`1..=8`).
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct ConeSet(u8);

impl ConeSet {
    pub const EMPTY: ConeSet = ConeSet(0);

    pub fn single(label: u8) -> Self {
        debug_assert!((1..=8).contains(&label));
        ConeSet(1 << (label - 1))
    }

    pub fn with(self, label: u8) -> Self {
        ConeSet(self.0 | ConeSet::single(label).0)
    }

    pub fn contains(&self, label: u8) -> bool {
        (1..=8).contains(&label) && self.0 & (1 << (label - 1)) != 0
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn labels(&self) -> impl Iterator<Item = u8> + '_ {
        (1..=8u8).filter(move |&l| self.contains(l))
    }

    pub fn to_vec(&self) -> Vec<u8> {
        self.labels().collect()
    }
}

impl fmt::Debug for ConeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.labels()).finish()
    }
}

/// Maps an integer sector number onto a label in `1..=8`.
fn wrap_label(sector: i64) -> u8 {
    ((sector - 1).rem_euclid(CONE_COUNT as i64) + 1) as u8
}

/// Cone labels for a clockwise offset `phi` (radians) from the anchor ray.
///
/// Cone `i` covers offsets `[(i-1)*pi/4, i*pi/4]` modulo `2*pi`.
pub fn cones_for_offset(phi: f64, tolerance: f64) -> ConeSet {
    let k = phi / CONE_WIDTH;
    let m = k.round();
    if (phi - m * CONE_WIDTH).abs() <= tolerance {
        let m = m as i64;
        ConeSet::single(wrap_label(m)).with(wrap_label(m + 1))
    } else {
        ConeSet::single(wrap_label(k.floor() as i64 + 1))
    }
}

/// Eight closed cones of width `pi/4` around `apex`, labeled clockwise from
/// the ray towards the apex's nearest neighbor. That ray is the shared
/// boundary of cones 1 and 8.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConeSystem {
    pub apex: VertexId,
    pub origin: Point,
    anchor: (f64, f64),
    theta0: Direction,
    pub tolerance: f64,
}

impl ConeSystem {
    pub fn new(apex: VertexId, origin: Point, q_min: Point) -> Result<Self> {
        let theta0 = Direction::between(origin, q_min)?;
        Ok(ConeSystem {
            apex,
            origin,
            anchor: (q_min.x - origin.x, q_min.y - origin.y),
            theta0,
            tolerance: DEFAULT_CONE_TOLERANCE,
        })
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    /// Direction of the anchor ray (towards the nearest neighbor).
    pub fn anchor(&self) -> Direction {
        self.theta0
    }

    /// Clockwise angle from the anchor ray to `target`, in `[-pi, pi)`.
    pub fn clockwise_offset(&self, target: Point) -> Result<f64> {
        let v = (target.x - self.origin.x, target.y - self.origin.y);
        if v == (0.0, 0.0) {
            return Err(Error::Coincident);
        }
        let (cross, dot) = cross_dot(self.anchor, v);
        let psi = cross.atan2(dot);
        // psi is in (-pi, pi]; flip to a clockwise offset.
        Ok(if psi >= PI { -PI } else { -psi })
    }

    pub fn cones_containing(&self, target: Point) -> Result<ConeSet> {
        Ok(cones_for_offset(self.clockwise_offset(target)?, self.tolerance))
    }

    /// Cones containing the absolute direction `theta`.
    pub fn cones_for_direction(&self, theta: f64) -> ConeSet {
        let psi = (theta - self.theta0.theta() + PI).rem_euclid(TAU) - PI;
        cones_for_offset(-psi, self.tolerance)
    }

    /// The closed sector of cone `label` as absolute angles
    /// `(theta0 - label*pi/4, theta0 - (label-1)*pi/4)`.
    pub fn sector(&self, label: u8) -> (f64, f64) {
        let t0 = self.theta0.theta();
        let l = f64::from(label);
        (t0 - l * CONE_WIDTH, t0 - (l - 1.0) * CONE_WIDTH)
    }
}

/// The disk with three given points on its boundary.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Disk {
    pub a: Point,
    pub b: Point,
    pub c: Point,
}

impl Disk {
    pub fn through(a: Point, b: Point, c: Point) -> Result<Self> {
        if orient2d(a, b, c) == 0 {
            return Err(Error::InvalidParameters("collinear disk boundary points".into()));
        }
        Ok(Disk { a, b, c })
    }

    pub fn center(&self) -> Point {
        let (a, b, c) = (self.a, self.b, self.c);
        let bx = b.x - a.x;
        let by = b.y - a.y;
        let cx = c.x - a.x;
        let cy = c.y - a.y;
        let d = 2.0 * (bx * cy - by * cx);
        let b2 = bx * bx + by * by;
        let c2 = cx * cx + cy * cy;
        Point::new(a.x + (cy * b2 - by * c2) / d, a.y + (bx * c2 - cx * b2) / d)
    }

    pub fn radius(&self) -> f64 {
        self.center().distance(&self.a)
    }

    /// `+1` strictly inside, `0` on the circle, `-1` outside (exact).
    pub fn side(&self, p: Point) -> i8 {
        if orient2d(self.a, self.b, self.c) > 0 {
            incircle(self.a, self.b, self.c, p)
        } else {
            incircle(self.a, self.c, self.b, p)
        }
    }
}
