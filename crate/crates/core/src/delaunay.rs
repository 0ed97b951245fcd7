//! Delaunay triangulation with per-vertex clockwise neighbor rings and the
//! globally ordered edge list.
//!
//! Construction is Bowyer-Watson over a Hilbert-sorted insertion order. The
//! convex hull is closed off with ghost triangles sharing a vertex at
//! infinity, so points outside the current hull need no special casing.
//! Cocircular ties go through [`incircle_perturbed`], which makes the result
//! unique for every input without duplicate points.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::geom::{cmp_squared_distance, incircle_perturbed, orient2d, Point, PointSet, VertexId};

pub type EdgeId = u32;

const GHOST: VertexId = VertexId::MAX;
const NONE: u32 = u32::MAX;

/// An undirected edge with `u < v`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    pub length: f64,
}

impl Edge {
    pub fn new(points: &PointSet, a: VertexId, b: VertexId) -> Self {
        let (u, v) = if a < b { (a, b) } else { (b, a) };
        Edge { u, v, length: points.distance(u, v) }
    }

    pub fn key(&self) -> (VertexId, VertexId) {
        (self.u, self.v)
    }

    pub fn other(&self, end: VertexId) -> VertexId {
        if end == self.u {
            self.v
        } else {
            self.u
        }
    }

    pub fn touches(&self, w: VertexId) -> bool {
        self.u == w || self.v == w
    }
}

/// Exact global total order on edges: squared length, then smaller endpoint,
/// then larger endpoint.
pub fn cmp_edges(points: &PointSet, a: &Edge, b: &Edge) -> Ordering {
    if a.key() == b.key() {
        return Ordering::Equal;
    }
    cmp_squared_distance(points[a.u], points[a.v], points[b.u], points[b.v]).then_with(|| a.key().cmp(&b.key()))
}

#[derive(Clone, Debug)]
pub struct Triangulation {
    points: PointSet,
    /// Sorted by the global total order; an edge's id is its rank.
    edges: Vec<Edge>,
    rings: Vec<Vec<VertexId>>,
    ring_edges: Vec<Vec<EdgeId>>,
    ring_closed: Vec<bool>,
    /// Per vertex: (neighbor, edge id), sorted by neighbor.
    adjacency: Vec<Vec<(VertexId, EdgeId)>>,
    triangles: Vec<[VertexId; 3]>,
    collinear: bool,
}

/// A fan of consecutive neighbors of `apex`, listed clockwise from the start
/// neighbor to the end neighbor (both included), spanning less than `pi`.
#[derive(Clone, Debug, PartialEq)]
pub struct Wedge {
    pub apex: VertexId,
    pub members: Vec<VertexId>,
}

impl Wedge {
    pub fn start(&self) -> VertexId {
        self.members[0]
    }

    pub fn end(&self) -> VertexId {
        *self.members.last().expect("wedge has at least two members")
    }

    /// Members strictly between the two extremes.
    pub fn interior(&self) -> &[VertexId] {
        &self.members[1..self.members.len() - 1]
    }
}

/// Computes the Delaunay triangulation of `points`.
pub fn build_delaunay(points: PointSet) -> Result<Triangulation> {
    let n = points.len();
    if n < 2 {
        return Err(Error::TooFewPoints(n));
    }
    if n > (u32::MAX / 4) as usize {
        return Err(Error::InvalidParameters(format!("too many points: {n}")));
    }
    check_duplicates(&points)?;

    let order = hilbert_order(points.as_slice());
    let pts = points.as_slice();
    let i0 = order[0];
    let i1 = order[1];
    let third =
        order[2..].iter().copied().find(|&k| orient2d(pts[i0 as usize], pts[i1 as usize], pts[k as usize]) != 0);

    let Some(i2) = third else {
        return Ok(collinear_path(points));
    };

    let mut mesh = Mesh::new(pts);
    mesh.init(i0, i1, i2);
    for &k in &order[2..] {
        if k != i2 {
            mesh.insert(k);
        }
    }
    let triangles = mesh.finite_triangles();
    let fans = mesh.fans();
    Ok(assemble(points, triangles, fans, false))
}

fn check_duplicates(points: &PointSet) -> Result<()> {
    let pts = points.as_slice();
    let mut idx: Vec<VertexId> = (0..pts.len() as VertexId).collect();
    idx.sort_by(|&a, &b| {
        let (p, q) = (pts[a as usize], pts[b as usize]);
        p.x.total_cmp(&q.x).then(p.y.total_cmp(&q.y)).then(a.cmp(&b))
    });
    for w in idx.windows(2) {
        let (p, q) = (pts[w[0] as usize], pts[w[1] as usize]);
        if p == q {
            let (first, second) = (w[0].min(w[1]), w[0].max(w[1]));
            return Err(Error::DuplicatePoint { first, second });
        }
    }
    Ok(())
}

/// All points on one line: consecutive points along the line form a path.
fn collinear_path(points: PointSet) -> Triangulation {
    let pts = points.as_slice();
    let mut idx: Vec<VertexId> = (0..pts.len() as VertexId).collect();
    idx.sort_by(|&a, &b| {
        let (p, q) = (pts[a as usize], pts[b as usize]);
        p.x.total_cmp(&q.x).then(p.y.total_cmp(&q.y))
    });
    let mut fans = vec![Vec::new(); pts.len()];
    for (k, &v) in idx.iter().enumerate() {
        // one neighbor on each side; order within a 2-element open ring is arbitrary
        if k + 1 < idx.len() {
            fans[v as usize].push(idx[k + 1]);
        }
        if k > 0 {
            fans[v as usize].push(idx[k - 1]);
        }
    }
    let fans = fans.into_iter().map(|ring| (ring, false)).collect();
    assemble(points, Vec::new(), fans, true)
}

fn assemble(
    points: PointSet,
    triangles: Vec<[VertexId; 3]>,
    fans: Vec<(Vec<VertexId>, bool)>,
    collinear: bool,
) -> Triangulation {
    let mut pairs: Vec<(VertexId, VertexId)> = Vec::new();
    for (v, (ring, _)) in fans.iter().enumerate() {
        let v = v as VertexId;
        pairs.extend(ring.iter().filter(|&&w| v < w).map(|&w| (v, w)));
    }
    let mut edges: Vec<Edge> = pairs.into_iter().map(|(u, v)| Edge::new(&points, u, v)).collect();
    edges.sort_by(|a, b| cmp_edges(&points, a, b));

    let mut adjacency = vec![Vec::new(); points.len()];
    for (id, e) in edges.iter().enumerate() {
        adjacency[e.u as usize].push((e.v, id as EdgeId));
        adjacency[e.v as usize].push((e.u, id as EdgeId));
    }
    for adj in &mut adjacency {
        adj.sort_unstable();
    }
    let lookup = |adj: &Vec<(VertexId, EdgeId)>, w: VertexId| -> EdgeId {
        let k = adj.binary_search_by_key(&w, |&(x, _)| x).expect("ring neighbor is adjacent");
        adj[k].1
    };

    let mut rings = Vec::with_capacity(fans.len());
    let mut ring_edges = Vec::with_capacity(fans.len());
    let mut ring_closed = Vec::with_capacity(fans.len());
    for (v, (ring, closed)) in fans.into_iter().enumerate() {
        ring_edges.push(ring.iter().map(|&w| lookup(&adjacency[v], w)).collect());
        rings.push(ring);
        ring_closed.push(closed);
    }
    Triangulation { points, edges, rings, ring_edges, ring_closed, adjacency, triangles, collinear }
}

impl Triangulation {
    pub fn points(&self) -> &PointSet {
        &self.points
    }

    pub fn num_vertices(&self) -> usize {
        self.points.len()
    }

    /// Edges in nondecreasing length, ties broken by endpoint ids. The index
    /// of an edge in this list is its [`EdgeId`].
    pub fn sorted_edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id as usize]
    }

    pub fn edge_id(&self, a: VertexId, b: VertexId) -> Option<EdgeId> {
        let adj = self.adjacency.get(a as usize)?;
        adj.binary_search_by_key(&b, |&(w, _)| w).ok().map(|k| adj[k].1)
    }

    /// Neighbors of `p` in strict clockwise order. Interior vertices have a
    /// cyclic ring; for hull vertices the sequence runs from one hull
    /// neighbor to the other.
    pub fn neighbors_cw(&self, p: VertexId) -> &[VertexId] {
        &self.rings[p as usize]
    }

    /// Edge ids parallel to [`neighbors_cw`](Self::neighbors_cw).
    pub fn ring_edge_ids(&self, p: VertexId) -> &[EdgeId] {
        &self.ring_edges[p as usize]
    }

    pub fn is_ring_closed(&self, p: VertexId) -> bool {
        self.ring_closed[p as usize]
    }

    pub fn degree(&self, p: VertexId) -> usize {
        self.rings[p as usize].len()
    }

    /// Counterclockwise finite triangles (empty for collinear input).
    pub fn triangles(&self) -> &[[VertexId; 3]] {
        &self.triangles
    }

    /// True when all input points are collinear and the edge set is a path.
    pub fn is_collinear(&self) -> bool {
        self.collinear
    }

    /// Shortest incident edge of `p` under the global total order.
    pub fn nearest_neighbor_edge(&self, p: VertexId) -> Option<&Edge> {
        self.ring_edges[p as usize].iter().min().map(|&id| self.edge(id))
    }

    pub fn cmp_edge_len(&self, a: EdgeId, b: EdgeId) -> Ordering {
        let (ea, eb) = (self.edge(a), self.edge(b));
        let p = &self.points;
        cmp_squared_distance(p[ea.u], p[ea.v], p[eb.u], p[eb.v])
    }

    /// The wedge at `apex` from neighbor `start` clockwise to neighbor `end`.
    pub fn wedge(&self, apex: VertexId, start: VertexId, end: VertexId) -> Result<Wedge> {
        if apex as usize >= self.num_vertices() {
            return Err(Error::NoSuchVertex(apex));
        }
        let bad = |reason| Error::InvalidWedge { apex, reason };
        let ring = self.neighbors_cw(apex);
        let i = ring.iter().position(|&w| w == start).ok_or(bad("start is not a neighbor"))?;
        let j = ring.iter().position(|&w| w == end).ok_or(bad("end is not a neighbor"))?;
        if i == j {
            return Err(bad("start equals end"));
        }
        let pts = &self.points;
        if orient2d(pts[apex], pts[start], pts[end]) >= 0 {
            return Err(bad("clockwise sweep from start to end is not below pi"));
        }
        let members: Vec<VertexId> = if i < j {
            ring[i..=j].to_vec()
        } else if self.is_ring_closed(apex) {
            ring[i..].iter().chain(&ring[..=j]).copied().collect()
        } else {
            return Err(bad("wedge crosses the hull gap"));
        };
        Ok(Wedge { apex, members })
    }

    /// Length of the path through consecutive wedge members.
    pub fn wedge_path_length(&self, w: &Wedge) -> f64 {
        w.members.windows(2).map(|m| self.points.distance(m[0], m[1])).sum()
    }
}

/// Orders point indices along a Hilbert curve over the bounding box.
fn hilbert_order(pts: &[Point]) -> Vec<VertexId> {
    let (mut x0, mut y0, mut x1, mut y1) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
    for p in pts {
        x0 = x0.min(p.x);
        y0 = y0.min(p.y);
        x1 = x1.max(p.x);
        y1 = y1.max(p.y);
    }
    let span = (x1 - x0).max(y1 - y0).max(f64::MIN_POSITIVE);
    const SIDE: u32 = 1 << 16;
    let cell = |v: f64, lo: f64| (((v - lo) / span) * f64::from(SIDE - 1)).round() as u32;
    let mut keyed: Vec<(u64, VertexId)> = pts
        .iter()
        .enumerate()
        .map(|(i, p)| (hilbert_index(SIDE, cell(p.x, x0), cell(p.y, y0)), i as VertexId))
        .collect();
    keyed.sort_unstable();
    keyed.into_iter().map(|(_, i)| i).collect()
}

fn hilbert_index(side: u32, mut x: u32, mut y: u32) -> u64 {
    let mut d = 0u64;
    let mut s = side / 2;
    while s > 0 {
        let rx = u32::from(x & s > 0);
        let ry = u32::from(y & s > 0);
        d += u64::from(s) * u64::from(s) * u64::from((3 * rx) ^ ry);
        if ry == 0 {
            if rx == 1 {
                x = side - 1 - x;
                y = side - 1 - y;
            }
            std::mem::swap(&mut x, &mut y);
        }
        s /= 2;
    }
    d
}

/// Triangle soup with adjacency. Vertices of a triangle are counterclockwise;
/// a ghost triangle keeps the vertex at infinity in slot 2 and its finite
/// edge `(v0, v1)` has the outside of the hull on its left.
/// `nbr[t][i]` is the triangle across the edge opposite `tri[t][i]`.
struct Mesh<'a> {
    pts: &'a [Point],
    tri: Vec<[VertexId; 3]>,
    nbr: Vec<[u32; 3]>,
    alive: Vec<bool>,
    free: Vec<u32>,
    visit: Vec<u32>,
    conflict: Vec<bool>,
    epoch: u32,
    last: u32,
    rng: u64,
    cavity: Vec<u32>,
    boundary: Vec<(VertexId, VertexId, u32)>,
    created: Vec<(VertexId, u32)>,
}

impl<'a> Mesh<'a> {
    fn new(pts: &'a [Point]) -> Self {
        let cap = 2 * pts.len() + 8;
        Mesh {
            pts,
            tri: Vec::with_capacity(cap),
            nbr: Vec::with_capacity(cap),
            alive: Vec::with_capacity(cap),
            free: Vec::new(),
            visit: Vec::with_capacity(cap),
            conflict: Vec::with_capacity(cap),
            epoch: 0,
            last: 0,
            rng: 0x9E37_79B9_7F4A_7C15,
            cavity: Vec::new(),
            boundary: Vec::new(),
            created: Vec::new(),
        }
    }

    fn pt(&self, v: VertexId) -> Point {
        self.pts[v as usize]
    }

    fn alloc(&mut self, t: [VertexId; 3]) -> u32 {
        if let Some(id) = self.free.pop() {
            self.tri[id as usize] = t;
            self.nbr[id as usize] = [NONE; 3];
            self.alive[id as usize] = true;
            id
        } else {
            self.tri.push(t);
            self.nbr.push([NONE; 3]);
            self.alive.push(true);
            self.visit.push(0);
            self.conflict.push(false);
            (self.tri.len() - 1) as u32
        }
    }

    fn is_ghost(&self, t: u32) -> bool {
        self.tri[t as usize][2] == GHOST
    }

    /// Slot of `t` whose opposite edge is the directed edge `(a, b)`.
    fn slot_of_edge(&self, t: u32, a: VertexId, b: VertexId) -> usize {
        let v = self.tri[t as usize];
        (0..3).find(|&i| v[(i + 1) % 3] == a && v[(i + 2) % 3] == b).expect("edge belongs to triangle")
    }

    fn init(&mut self, a: VertexId, b: VertexId, c: VertexId) {
        let (a, b, c) = if orient2d(self.pt(a), self.pt(b), self.pt(c)) > 0 { (a, b, c) } else { (a, c, b) };
        let ids =
            [self.alloc([a, b, c]), self.alloc([b, a, GHOST]), self.alloc([c, b, GHOST]), self.alloc([a, c, GHOST])];
        // pair up directed edges by brute force
        for &t in &ids {
            for i in 0..3 {
                let v = self.tri[t as usize];
                let (x, y) = (v[(i + 1) % 3], v[(i + 2) % 3]);
                let other = ids
                    .iter()
                    .copied()
                    .find(|&o| {
                        o != t
                            && (0..3).any(|k| {
                                let w = self.tri[o as usize];
                                w[(k + 1) % 3] == y && w[(k + 2) % 3] == x
                            })
                    })
                    .expect("closed initial mesh");
                self.nbr[t as usize][i] = other;
            }
        }
        self.last = ids[0];
    }

    fn next_random(&mut self) -> u64 {
        self.rng ^= self.rng << 13;
        self.rng ^= self.rng >> 7;
        self.rng ^= self.rng << 17;
        self.rng
    }

    fn in_conflict(&self, t: u32, v: VertexId) -> bool {
        let [a, b, c] = self.tri[t as usize];
        let p = self.pt(v);
        if c == GHOST {
            let (pa, pb) = (self.pt(a), self.pt(b));
            match orient2d(pa, pb, p) {
                1 => true,
                0 => strictly_between(pa, pb, p),
                _ => false,
            }
        } else {
            incircle_perturbed([(self.pt(a), a), (self.pt(b), b), (self.pt(c), c), (p, v)]) > 0
        }
    }

    /// Remembering stochastic walk to a triangle in conflict with `v`.
    fn locate(&mut self, v: VertexId) -> u32 {
        let p = self.pt(v);
        let mut t = self.last;
        if !self.alive[t as usize] {
            t = (0..self.tri.len() as u32).find(|&k| self.alive[k as usize]).expect("mesh not empty");
        }
        if self.is_ghost(t) {
            t = self.nbr[t as usize][2];
        }
        let mut prev = NONE;
        'walk: loop {
            let verts = self.tri[t as usize];
            let r = (self.next_random() % 3) as usize;
            for k in 0..3 {
                let i = (r + k) % 3;
                let next = self.nbr[t as usize][i];
                if next == prev {
                    continue;
                }
                let (a, b) = (verts[(i + 1) % 3], verts[(i + 2) % 3]);
                if orient2d(self.pt(a), self.pt(b), p) < 0 {
                    prev = t;
                    t = next;
                    if self.is_ghost(t) {
                        return t;
                    }
                    continue 'walk;
                }
            }
            return t;
        }
    }

    fn insert(&mut self, v: VertexId) {
        let start = self.locate(v);
        debug_assert!(self.in_conflict(start, v));
        self.epoch += 1;
        let epoch = self.epoch;
        self.cavity.clear();
        self.boundary.clear();
        self.visit[start as usize] = epoch;
        self.conflict[start as usize] = true;
        self.cavity.push(start);
        let mut k = 0;
        while k < self.cavity.len() {
            let t = self.cavity[k];
            k += 1;
            for i in 0..3 {
                let n = self.nbr[t as usize][i];
                if self.visit[n as usize] != epoch {
                    self.visit[n as usize] = epoch;
                    let c = self.in_conflict(n, v);
                    self.conflict[n as usize] = c;
                    if c {
                        self.cavity.push(n);
                    }
                }
                if !self.conflict[n as usize] {
                    let verts = self.tri[t as usize];
                    self.boundary.push((verts[(i + 1) % 3], verts[(i + 2) % 3], n));
                }
            }
        }
        for idx in 0..self.cavity.len() {
            let t = self.cavity[idx];
            self.alive[t as usize] = false;
            self.conflict[t as usize] = false;
            self.free.push(t);
        }

        // New triangle (a, b, v) per boundary edge; slot 2 faces the outside.
        self.created.clear();
        let mut fresh = Vec::with_capacity(self.boundary.len());
        for idx in 0..self.boundary.len() {
            let (a, b, outer) = self.boundary[idx];
            debug_assert!(
                a == GHOST || b == GHOST || orient2d(self.pt(a), self.pt(b), self.pt(v)) > 0,
                "cavity is not star-shaped"
            );
            let t = self.alloc([a, b, v]);
            self.nbr[t as usize][2] = outer;
            let s = self.slot_of_edge(outer, b, a);
            self.nbr[outer as usize][s] = t;
            self.created.push((a, t));
            fresh.push((a, b, t));
        }
        self.created.sort_unstable();
        for &(_, b, t) in &fresh {
            // edge (b, v) is shared with the new triangle whose boundary edge starts at b
            let k = self.created.binary_search_by_key(&b, |&(s, _)| s).expect("cavity boundary is a cycle");
            let next = self.created[k].1;
            self.nbr[t as usize][0] = next;
            self.nbr[next as usize][1] = t;
        }
        for &(a, b, t) in &fresh {
            if a == GHOST || b == GHOST {
                self.normalize_ghost(t);
            }
        }
        self.last = fresh.iter().map(|&(_, _, t)| t).find(|&t| !self.is_ghost(t)).unwrap_or(fresh[0].2);
    }

    /// Rotates a triangle so the vertex at infinity sits in slot 2.
    fn normalize_ghost(&mut self, t: u32) {
        let v = self.tri[t as usize];
        let n = self.nbr[t as usize];
        let g = v.iter().position(|&x| x == GHOST).expect("ghost vertex present");
        let r = (g + 1) % 3;
        self.tri[t as usize] = [v[r], v[(r + 1) % 3], v[(r + 2) % 3]];
        self.nbr[t as usize] = [n[r], n[(r + 1) % 3], n[(r + 2) % 3]];
    }

    fn finite_triangles(&self) -> Vec<[VertexId; 3]> {
        (0..self.tri.len()).filter(|&t| self.alive[t] && self.tri[t][2] != GHOST).map(|t| self.tri[t]).collect()
    }

    /// Clockwise neighbor rings built by rotating around each vertex.
    fn fans(&self) -> Vec<(Vec<VertexId>, bool)> {
        let n = self.pts.len();
        let mut incident = vec![NONE; n];
        for t in 0..self.tri.len() {
            if self.alive[t] {
                for &v in &self.tri[t] {
                    if v != GHOST {
                        incident[v as usize] = t as u32;
                    }
                }
            }
        }
        let mut out = Vec::with_capacity(n);
        for p in 0..n as VertexId {
            let start = incident[p as usize];
            let mut ccw = Vec::new();
            let mut t = start;
            loop {
                let v = self.tri[t as usize];
                let i = v.iter().position(|&x| x == p).expect("incident triangle");
                ccw.push(v[(i + 1) % 3]);
                t = self.nbr[t as usize][(i + 1) % 3];
                if t == start {
                    break;
                }
            }
            let closed = !ccw.contains(&GHOST);
            if let Some(g) = ccw.iter().position(|&x| x == GHOST) {
                ccw.rotate_left(g + 1);
                ccw.pop();
            }
            ccw.reverse();
            out.push((ccw, closed));
        }
        out
    }
}

/// For collinear `a, b, p`: is `p` strictly inside segment `ab`?
fn strictly_between(a: Point, b: Point, p: Point) -> bool {
    if a.x != b.x {
        (a.x < p.x && p.x < b.x) || (b.x < p.x && p.x < a.x)
    } else {
        (a.y < p.y && p.y < b.y) || (b.y < p.y && p.y < a.y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::incircle;

    fn pset(c: &[(f64, f64)]) -> PointSet {
        PointSet::from_xy(c.iter().copied()).unwrap()
    }

    fn keys(t: &Triangulation) -> Vec<(VertexId, VertexId)> {
        let mut k: Vec<_> = t.sorted_edges().iter().map(Edge::key).collect();
        k.sort_unstable();
        k
    }

    #[test]
    fn triangle_has_three_edges() {
        let t = build_delaunay(pset(&[(0., 0.), (4., 0.), (1., 2.)])).unwrap();
        assert_eq!(keys(&t), vec![(0, 1), (0, 2), (1, 2)]);
        assert_eq!(t.triangles().len(), 1);
        for v in 0..3 {
            let ring = t.neighbors_cw(v);
            assert_eq!(ring.len(), 2);
            // clockwise: the second neighbor is to the right of apex->first
            let p = t.points();
            assert!(orient2d(p[v], p[ring[0]], p[ring[1]]) < 0);
            assert!(!t.is_ring_closed(v));
        }
    }

    #[test]
    fn unit_square_uses_tie_break_diagonal() {
        let t = build_delaunay(pset(&[(0., 0.), (1., 0.), (1., 1.), (0., 1.)])).unwrap();
        assert_eq!(keys(&t), vec![(0, 1), (0, 3), (1, 2), (1, 3), (2, 3)]);
    }

    #[test]
    fn center_of_square_has_full_ring() {
        let t = build_delaunay(pset(&[(0., 0.), (2., 0.), (2., 2.), (0., 2.), (1., 1.)])).unwrap();
        let ring = t.neighbors_cw(4);
        assert!(t.is_ring_closed(4));
        let start = ring.iter().position(|&v| v == 0).unwrap();
        let mut r = ring.to_vec();
        r.rotate_left(start);
        assert_eq!(r, vec![0, 3, 2, 1]);
    }

    #[test]
    fn sorted_edges_by_length_then_ids() {
        let t = build_delaunay(pset(&[(0., 0.), (3., 0.), (0., 4.)])).unwrap();
        let lens: Vec<f64> = t.sorted_edges().iter().map(|e| e.length).collect();
        assert_eq!(lens, vec![3.0, 4.0, 5.0]);

        let h = 3f64.sqrt() / 2.0;
        let t = build_delaunay(pset(&[(0., 0.), (1., 0.), (0.5, h)])).unwrap();
        let k: Vec<_> = t.sorted_edges().iter().map(Edge::key).collect();
        // equilateral up to rounding: exact comparison decides, ids break exact ties
        let mut expected = k.clone();
        expected.sort_by(|a, b| {
            let p = t.points();
            cmp_squared_distance(p[a.0], p[a.1], p[b.0], p[b.1]).then(a.cmp(b))
        });
        assert_eq!(k, expected);
    }

    #[test]
    fn nearest_neighbor_edges() {
        let t = build_delaunay(pset(&[(0., 0.), (1., 0.), (0., 2.), (-3., 0.)])).unwrap();
        assert_eq!(t.nearest_neighbor_edge(0).unwrap().key(), (0, 1));
        // equidistant neighbors: smaller partner id wins
        let t = build_delaunay(pset(&[(0., 0.), (0., 1.), (1., 0.), (5., 5.)])).unwrap();
        assert_eq!(t.nearest_neighbor_edge(0).unwrap().key(), (0, 1));
    }

    #[test]
    fn two_points_and_collinear_input() {
        let t = build_delaunay(pset(&[(0., 0.), (1., 1.)])).unwrap();
        assert_eq!(keys(&t), vec![(0, 1)]);
        assert!(t.is_collinear());
        let t = build_delaunay(pset(&[(2., 0.), (0., 0.), (3., 0.), (1., 0.)])).unwrap();
        assert_eq!(keys(&t), vec![(0, 2), (0, 3), (1, 3)]);
        assert!(t.is_collinear());
        assert_eq!(t.neighbors_cw(3).len(), 2);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(build_delaunay(pset(&[(0., 0.)])), Err(Error::TooFewPoints(1))));
        assert!(matches!(
            build_delaunay(pset(&[(0., 0.), (1., 0.), (0., 0.)])),
            Err(Error::DuplicatePoint { first: 0, second: 2 })
        ));
    }

    #[test]
    fn integer_grid_is_valid() {
        let mut c = Vec::new();
        for i in 0..12 {
            for j in 0..9 {
                c.push((f64::from(i), f64::from(j)));
            }
        }
        let t = build_delaunay(pset(&c)).unwrap();
        let n = c.len();
        // a full grid triangulates into 2 triangles per cell
        assert_eq!(t.triangles().len(), 2 * 11 * 8);
        assert_eq!(t.sorted_edges().len(), 11 * 9 + 12 * 8 + 11 * 8);
        assert!(t.sorted_edges().len() <= 3 * n - 6);
        let p = t.points();
        for tri in t.triangles() {
            assert!(orient2d(p[tri[0]], p[tri[1]], p[tri[2]]) > 0);
            for d in 0..n as VertexId {
                assert!(incircle(p[tri[0]], p[tri[1]], p[tri[2]], p[d]) <= 0);
            }
        }
    }

    #[test]
    fn wedge_path_lengths() {
        let t = build_delaunay(pset(&[(0., 0.), (2., 0.), (2., 2.), (0., 2.), (1., 1.)])).unwrap();
        let w = t.wedge(4, 3, 2).unwrap();
        assert_eq!(w.members, vec![3, 2]);
        assert!((t.wedge_path_length(&w) - 2.0).abs() < 1e-15);
        assert!(t.wedge(4, 3, 1).is_err()); // straight angle
        assert!(t.wedge(4, 3, 0).is_err()); // sweep of 3*pi/2
        assert!(t.wedge(4, 3, 3).is_err());

        let t = build_delaunay(pset(&[(0., 0.), (2., 1.), (2.2, 0.), (2., -1.)])).unwrap();
        assert_eq!(t.neighbors_cw(0), &[1, 2, 3]);
        let w = t.wedge(0, 1, 3).unwrap();
        assert_eq!(w.members, vec![1, 2, 3]);
        assert_eq!(w.interior(), &[2]);
        let expected = 2.0 * (0.04f64 + 1.0).sqrt();
        assert!((t.wedge_path_length(&w) - expected).abs() < 1e-15);
    }
}
