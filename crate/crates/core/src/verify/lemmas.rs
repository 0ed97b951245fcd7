//! Numeric checks of the geometric statements behind the stretch bound.
//!
//! Statements about Delaunay wedges (a, b, c, i) are checked on every
//! qualifying wedge of a given triangulation. The purely geometric ones
//! (d through h) are checked on random configurations. Each check reports a
//! relative margin `(rhs - lhs) / rhs`; a negative margin is a violation.

use std::cmp::Ordering;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8, PI, SQRT_2, TAU};

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::delaunay::Triangulation;
use crate::geom::{angle_at, cmp_squared_distance, orient2d, Point, VertexId};

use super::paths::{distance_between, Graph};
use super::STRETCH_BOUND;

/// Largest wedge (number of apex neighbors) inspected by the wedge checks.
pub const MAX_WEDGE_MEMBERS: usize = 16;

/// `1 / (1 - 2 sin(pi/8))`, the smallest constant for which (f) holds.
pub fn k_min() -> f64 {
    1.0 / (1.0 - 2.0 * FRAC_PI_8.sin())
}

/// A configuration that can be replayed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub points: Vec<[f64; 2]>,
    pub params: Vec<f64>,
}

impl Witness {
    fn new(points: &[Point], params: &[f64]) -> Self {
        Witness { points: points.iter().map(|p| [p.x, p.y]).collect(), params: params.to_vec() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LemmaRecord {
    pub name: String,
    pub trials: usize,
    /// Smallest relative margin seen; `+inf` when no trial ran.
    #[serde(with = "finite_or_null")]
    pub worst_margin: f64,
    pub pass: bool,
    /// The configuration attaining `worst_margin`.
    pub witness: Option<Witness>,
}

impl LemmaRecord {
    fn new(name: &str) -> Self {
        LemmaRecord { name: name.to_string(), trials: 0, worst_margin: f64::INFINITY, pass: true, witness: None }
    }

    fn observe(&mut self, margin: f64, witness: impl FnOnce() -> Witness) {
        self.trials += 1;
        // NaN counts as a violation
        let margin = if margin.is_nan() { f64::NEG_INFINITY } else { margin };
        if margin < self.worst_margin {
            self.worst_margin = margin;
            self.witness = Some(witness());
        }
    }

    fn finish(&mut self, tolerance: f64) {
        self.pass = self.worst_margin >= -tolerance;
    }

    fn merge(&mut self, other: &LemmaRecord, tolerance: f64) {
        self.trials += other.trials;
        if other.worst_margin < self.worst_margin {
            self.worst_margin = other.worst_margin;
            self.witness = other.witness.clone();
        }
        self.finish(tolerance);
    }
}

mod finite_or_null {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() { Some(*v) } else { None }.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LemmaSuite {
    pub tolerance: f64,
    pub records: Vec<LemmaRecord>,
}

pub const NAMES: [&str; 10] = [
    "a: two shortest wedge edges, path <= |rp| alpha/sin alpha",
    "b: shortest wedge edge, path <= pi/(2 sqrt 2) (|pr'| + |r'r|)",
    "c: shortest wedge edge, DT path <= pi/2 |rp|",
    "d: right triangle, pi/(2 sqrt 2)(|pq|+|qr|) <= pi/2 |pr|",
    "e: obtuse triangle, k|qp| + d|rq| <= k|rp|",
    "f1: |sr| + K(|rr'|+|r'p|) <= K|sp|, K = 1/(1-2 sin(pi/8))",
    "f2: |sr| + K(|rr'|+|r'p|) <= K|sp|, K = (1+sqrt 2)^2",
    "g: inscribed angle, |ab|+|bc| <= |ac|/cos(alpha/2)",
    "h: arc length = |pa| beta/sin beta",
    "i: wedge member angle >= pi - apex angle",
];

impl LemmaSuite {
    pub fn empty(tolerance: f64) -> Self {
        LemmaSuite { tolerance, records: NAMES.iter().map(|n| LemmaRecord::new(n)).collect() }
    }

    pub fn pass(&self) -> bool {
        self.records.iter().all(|r| r.pass)
    }

    pub fn min_trials(&self) -> usize {
        self.records.iter().map(|r| r.trials).min().unwrap_or(0)
    }

    pub fn record(&self, prefix: &str) -> Option<&LemmaRecord> {
        self.records.iter().find(|r| r.name.starts_with(prefix))
    }

    /// Adds the trials of `other`, keeping the worst witness of each check.
    pub fn merge(&mut self, other: &LemmaSuite) {
        for (mine, theirs) in self.records.iter_mut().zip(&other.records) {
            mine.merge(theirs, self.tolerance);
        }
    }

    fn finish(&mut self) {
        for r in &mut self.records {
            r.finish(self.tolerance);
        }
    }
}

/// Runs every check: the wedge checks on up to `trials` qualifying wedges of
/// `t` each, the synthetic ones on `trials` random configurations each.
pub fn lemma_suite(t: &Triangulation, trials: usize, seed: u64, tolerance: f64) -> LemmaSuite {
    let mut suite = LemmaSuite::empty(tolerance);
    wedge_checks(t, trials, &mut suite);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let [_, _, _, d, e, f1, f2, g, h, _] = &mut suite.records[..] else { unreachable!() };
    for _ in 0..trials {
        check_right_triangle(d, &mut rng);
        check_obtuse_triangle(e, &mut rng);
        check_rr_prime(f1, k_min(), &mut rng);
        check_rr_prime(f2, STRETCH_BOUND, &mut rng);
        check_max_eq(g, &mut rng);
        check_arc_length(h, &mut rng);
    }
    suite.finish();
    suite
}

fn rel(lhs: f64, rhs: f64) -> f64 {
    (rhs - lhs) / rhs.abs().max(f64::MIN_POSITIVE)
}

/// Rigid motion applied to synthetic configurations so the checks do not
/// only see axis-aligned coordinates.
struct Placement {
    angle: f64,
    shift: Point,
}

impl Placement {
    fn random(rng: &mut ChaCha8Rng) -> Self {
        Placement {
            angle: rng.random_range(0.0..TAU),
            shift: Point::new(rng.random_range(-10.0..10.0), rng.random_range(-10.0..10.0)),
        }
    }

    fn identity() -> Self {
        Placement { angle: 0.0, shift: Point::new(0.0, 0.0) }
    }

    fn place(&self, p: Point) -> Point {
        let q = p.rotated(self.angle);
        Point::new(q.x + self.shift.x, q.y + self.shift.y)
    }
}

/// Margin of (d) for the right triangle with hypotenuse `scale` and angle
/// `beta` at `r`. Zero up to rounding at `beta = pi/4`.
pub fn right_triangle_margin(beta: f64, scale: f64) -> f64 {
    right_triangle(beta, scale, &Placement::identity()).0
}

fn right_triangle(beta: f64, scale: f64, at: &Placement) -> (f64, [Point; 3]) {
    let q = at.place(Point::new(0.0, 0.0));
    let r = at.place(Point::new(scale * beta.cos(), 0.0));
    let p = at.place(Point::new(0.0, scale * beta.sin()));
    let lhs = PI / (2.0 * SQRT_2) * (p.distance(&q) + q.distance(&r));
    let rhs = FRAC_PI_2 * p.distance(&r);
    (rel(lhs, rhs), [p, q, r])
}

fn check_right_triangle(rec: &mut LemmaRecord, rng: &mut ChaCha8Rng) {
    let beta = rng.random_range(0.0..FRAC_PI_2);
    let scale = rng.random_range(0.01..10.0);
    let (m, pts) = right_triangle(beta, scale, &Placement::random(rng));
    rec.observe(m, || Witness::new(&pts, &[beta, scale]));
}

fn check_obtuse_triangle(rec: &mut LemmaRecord, rng: &mut ChaCha8Rng) {
    let gamma = rng.random_range(3.0 * FRAC_PI_4..PI);
    let (a, b) = (rng.random_range(0.01..10.0), rng.random_range(0.01..10.0));
    let at = Placement::random(rng);
    let q = at.place(Point::new(0.0, 0.0));
    let p = at.place(Point::new(a, 0.0));
    let r = at.place(Point::new(b * gamma.cos(), b * gamma.sin()));
    let (k, d) = (STRETCH_BOUND, FRAC_PI_2);
    let lhs = k * q.distance(&p) + d * r.distance(&q);
    let rhs = k * r.distance(&p);
    rec.observe(rel(lhs, rhs), || Witness::new(&[r, q, p], &[gamma, k, d]));
}

fn check_rr_prime(rec: &mut LemmaRecord, k: f64, rng: &mut ChaCha8Rng) {
    let alpha = rng.random_range(0.0..FRAC_PI_4);
    let sp = rng.random_range(0.01..10.0);
    let sr = sp * rng.random_range(0.0..=1.0f64).max(1e-6);
    let at = Placement::random(rng);
    let s = at.place(Point::new(0.0, 0.0));
    let p = at.place(Point::new(sp, 0.0));
    let r = at.place(Point::new(sr * alpha.cos(), sr * alpha.sin()));
    let r1 = at.place(Point::new(sr, 0.0));
    let lhs = s.distance(&r) + k * (r.distance(&r1) + r1.distance(&p));
    let rhs = k * s.distance(&p);
    rec.observe(rel(lhs, rhs), || Witness::new(&[s, r, p, r1], &[alpha, k]));
}

/// Margin of (g) for a triangle `abc` with `|ac| = scale`, angle `pi - alpha`
/// at `b` and angle `beta1` at `c`. Zero up to rounding at
/// `beta1 = alpha / 2`.
pub fn max_eq_margin(alpha: f64, beta1: f64, scale: f64) -> f64 {
    max_eq(alpha, beta1, scale, &Placement::identity()).0
}

fn max_eq(alpha: f64, beta1: f64, scale: f64, at: &Placement) -> (f64, [Point; 3]) {
    let beta2 = alpha - beta1;
    // law of sines: |ab| = |ac| sin(beta1) / sin(pi - alpha)
    let ab = scale * beta1.sin() / alpha.sin();
    let a = at.place(Point::new(0.0, 0.0));
    let c = at.place(Point::new(scale, 0.0));
    let b = at.place(Point::new(ab * beta2.cos(), ab * beta2.sin()));
    let lhs = a.distance(&b) + b.distance(&c);
    let rhs = a.distance(&c) / (alpha / 2.0).cos();
    (rel(lhs, rhs), [a, b, c])
}

fn check_max_eq(rec: &mut LemmaRecord, rng: &mut ChaCha8Rng) {
    let alpha = rng.random_range(1e-3..=FRAC_PI_2);
    let beta1 = alpha * rng.random_range(1e-3..1.0 - 1e-3);
    let scale = rng.random_range(0.01..10.0);
    let (m, pts) = max_eq(alpha, beta1, scale, &Placement::random(rng));
    rec.observe(m, || Witness::new(&pts, &[alpha, beta1]));
}

fn check_arc_length(rec: &mut LemmaRecord, rng: &mut ChaCha8Rng) {
    let radius = rng.random_range(0.01..10.0);
    // offset in units of the radius so coordinates keep their relative precision
    let center = Point::new(radius * rng.random_range(-10.0..10.0), radius * rng.random_range(-10.0..10.0));
    let on = |t: f64| Point::new(center.x + radius * t.cos(), center.y + radius * t.sin());
    // p and a bound an arc of central angle 2 beta; z lies on the other arc
    let t0 = rng.random_range(0.0..TAU);
    // keep every chord at least ~1e-3 radius long; shorter ones lose the
    // concyclicity of the rounded points
    let central = rng.random_range(1e-3..TAU - 2e-3);
    let tz = t0 + central + rng.random_range(1e-3..TAU - central - 1e-3);
    let (p, a, z) = (on(t0), on(t0 + central), on(tz));
    let beta = angle_at(z, p, a).expect("distinct points");
    let lhs = p.distance(&a) * beta / beta.sin();
    let rhs = radius * central;
    rec.observe(-(lhs - rhs).abs() / rhs, || Witness::new(&[p, a, z], &[radius, central]));
}

/// Counterclockwise angle in `[0, 2 pi)` from `a - v` to `b - v`.
fn ccw_angle(v: Point, a: Point, b: Point) -> f64 {
    let (ux, uy) = (a.x - v.x, a.y - v.y);
    let (wx, wy) = (b.x - v.x, b.y - v.y);
    let ang = (ux * wy - uy * wx).atan2(ux * wx + uy * wy);
    if ang < 0.0 {
        ang + TAU
    } else {
        ang
    }
}

/// Clockwise wedges of each vertex with 2..=MAX_WEDGE_MEMBERS members and an
/// apex angle below pi.
fn wedges(t: &Triangulation, s: VertexId) -> impl Iterator<Item = Vec<VertexId>> + '_ {
    let ring = t.neighbors_cw(s);
    let closed = t.is_ring_closed(s);
    let pts = t.points();
    let d = ring.len();
    (0..d).flat_map(move |i| {
        let max_len = if closed { d.min(MAX_WEDGE_MEMBERS) } else { (d - i).min(MAX_WEDGE_MEMBERS) };
        (2..=max_len)
            .map(move |len| (0..len).map(|k| ring[(i + k) % d]).collect::<Vec<_>>())
            .take_while(move |m| orient2d(pts[s], pts[m[0]], pts[m[m.len() - 1]]) < 0)
    })
}

/// Shortest path from the first to the last member using only DT edges
/// between members.
fn member_path(t: &Triangulation, members: &[VertexId]) -> f64 {
    let mut g = Graph::new(members.len());
    for a in 0..members.len() {
        for b in a + 1..members.len() {
            if t.edge_id(members[a], members[b]).is_some() {
                g.add_edge(a as u32, b as u32, t.points().distance(members[a], members[b]));
            }
        }
    }
    distance_between(&g, 0, members.len() as u32 - 1, f64::INFINITY)
}

fn wedge_checks(t: &Triangulation, limit: usize, suite: &mut LemmaSuite) {
    let pts = t.points();
    let dt = Graph::from_triangulation(t);
    let [a, b, c, .., i] = &mut suite.records[..] else { unreachable!() };
    for s in 0..t.num_vertices() as VertexId {
        let ps = pts[s];
        for members in wedges(t, s) {
            let witness =
                || Witness::new(&std::iter::once(ps).chain(members.iter().map(|&m| pts[m])).collect::<Vec<_>>(), &[]);
            let (first, last) = (members[0], members[members.len() - 1]);
            let alpha = angle_at(ps, pts[first], pts[last]).expect("distinct points");
            let cmp = |x: VertexId, y: VertexId| cmp_squared_distance(ps, pts[x], ps, pts[y]);
            let interior = &members[1..members.len() - 1];

            if i.trials < limit && !interior.is_empty() {
                let bound = PI - alpha;
                let worst =
                    interior.iter().map(|&q| ccw_angle(pts[q], pts[first], pts[last])).fold(f64::INFINITY, f64::min);
                i.observe((worst - bound) / PI, witness);
            }

            if a.trials < limit
                && interior.iter().all(|&x| cmp(first, x) != Ordering::Greater && cmp(last, x) != Ordering::Greater)
            {
                let path = member_path(t, &members);
                let rp = pts.distance(first, last);
                let factor = if alpha > 0.0 { alpha / alpha.sin() } else { 1.0 };
                a.observe(rel(path, rp * factor), witness);
            }

            if alpha > FRAC_PI_4 {
                continue;
            }
            // {s,r} shortest in the wedge, with r at either end
            for (r, p) in [(first, last), (last, first)] {
                if !members.iter().all(|&x| cmp(r, x) != Ordering::Greater) {
                    continue;
                }
                let (pr, pp) = (pts[r], pts[p]);
                let rp = pr.distance(&pp);
                if b.trials < limit {
                    let path = member_path(t, &members);
                    let r1 = project(pr, ps, pp);
                    b.observe(rel(path, PI / (2.0 * SQRT_2) * (pp.distance(&r1) + r1.distance(&pr))), witness);
                }
                if c.trials < limit {
                    let bound = FRAC_PI_2 * rp;
                    let path = distance_between(&dt, r, p, 2.0 * bound);
                    c.observe(rel(path, bound), witness);
                }
            }
        }
        if [&*a, &*b, &*c, &*i].iter().all(|r| r.trials >= limit) {
            break;
        }
    }
}

/// Orthogonal projection of `r` on the line through `s` and `p`.
fn project(r: Point, s: Point, p: Point) -> Point {
    let (dx, dy) = (p.x - s.x, p.y - s.y);
    let t = ((r.x - s.x) * dx + (r.y - s.y) * dy) / (dx * dx + dy * dy);
    Point::new(s.x + t * dx, s.y + t * dy)
}
