//! Sequential bounded-degree spanner construction.
//!
//! DT edges are scanned in the global total order. An edge is kept when both
//! endpoints agree on it, i.e. every closed cone containing it is still free
//! of kept edges at that endpoint. Each kept edge triggers the wedge
//! subroutine at both endpoints, which collects auxiliary ring edges (`E*`).
//! `E*` is merged only after the scan, so cone checks never see it.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::delaunay::{Edge, EdgeId, Triangulation};
use crate::geom::{dot_sign, ConeSet, ConeSystem, PointSet, VertexId, CONE_COUNT, DEFAULT_CONE_TOLERANCE};

/// How the index ranges of the wedge subroutine are read.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WedgeRanges {
    /// `j < m < i-1` and `i < m < k-1`, plus the obtuse-angle rule for the
    /// ring edges at `q_i`.
    #[default]
    Literal,
    /// `j <= m < i` and `i <= m < k`: every ring edge of the cone.
    Inclusive,
}

/// Cone systems of all vertices and the cone assignment of every DT edge at
/// both of its endpoints.
#[derive(Clone, Debug)]
pub struct ConeLayout {
    systems: Vec<ConeSystem>,
    edge_cones: Vec<Vec<ConeSet>>,
    /// Ring positions inside each cone, clockwise.
    members: Vec<[Vec<u32>; CONE_COUNT]>,
    /// (edge id, ring position), sorted by edge id.
    positions: Vec<Vec<(EdgeId, u32)>>,
}

impl ConeLayout {
    pub fn new(t: &Triangulation) -> Self {
        Self::with_tolerance(t, DEFAULT_CONE_TOLERANCE)
    }

    pub fn with_tolerance(t: &Triangulation, tolerance: f64) -> Self {
        let n = t.num_vertices();
        let pts = t.points();
        let mut systems = Vec::with_capacity(n);
        let mut edge_cones = Vec::with_capacity(n);
        let mut members = Vec::with_capacity(n);
        let mut positions = Vec::with_capacity(n);
        for p in 0..n as VertexId {
            let q_min = t.nearest_neighbor_edge(p).expect("every vertex has a neighbor").other(p);
            let sys = ConeSystem::new(p, pts[p], pts[q_min]).expect("distinct points").with_tolerance(tolerance);
            let ring = t.neighbors_cw(p);
            let cones: Vec<ConeSet> =
                ring.iter().map(|&q| sys.cones_containing(pts[q]).expect("distinct points")).collect();
            let mut per_cone: [Vec<u32>; CONE_COUNT] = Default::default();
            for label in 1..=CONE_COUNT as u8 {
                per_cone[label as usize - 1] = cone_run(&cones, label, t.is_ring_closed(p));
            }
            let mut pos: Vec<(EdgeId, u32)> =
                t.ring_edge_ids(p).iter().enumerate().map(|(k, &e)| (e, k as u32)).collect();
            pos.sort_unstable();
            systems.push(sys);
            edge_cones.push(cones);
            members.push(per_cone);
            positions.push(pos);
        }
        ConeLayout { systems, edge_cones, members, positions }
    }

    pub fn system(&self, p: VertexId) -> &ConeSystem {
        &self.systems[p as usize]
    }

    /// Ring position of edge `e` around `p`.
    pub fn position(&self, p: VertexId, e: EdgeId) -> Option<u32> {
        let pos = &self.positions[p as usize];
        pos.binary_search_by_key(&e, |&(id, _)| id).ok().map(|k| pos[k].1)
    }

    /// Cones of `p` containing its ring edge at position `pos`.
    pub fn cones_at(&self, p: VertexId, pos: u32) -> ConeSet {
        self.edge_cones[p as usize][pos as usize]
    }

    /// Cones of `p` containing the incident DT edge `e`.
    pub fn cones_of_edge(&self, p: VertexId, e: EdgeId) -> ConeSet {
        self.position(p, e).map(|k| self.cones_at(p, k)).unwrap_or_default()
    }

    /// Ring positions of the DT edges of `p` inside cone `label`, clockwise.
    pub fn cone_members(&self, p: VertexId, label: u8) -> &[u32] {
        &self.members[p as usize][label as usize - 1]
    }
}

/// Positions of the ring inside cone `label`, as a clockwise run.
fn cone_run(cones: &[ConeSet], label: u8, closed: bool) -> Vec<u32> {
    let inside: Vec<bool> = cones.iter().map(|c| c.contains(label)).collect();
    let len = inside.len();
    let count = inside.iter().filter(|&&b| b).count();
    if count == 0 {
        return Vec::new();
    }
    if !closed || count == len {
        return (0..len as u32).filter(|&k| inside[k as usize]).collect();
    }
    // a cone is narrower than pi, so its members are one cyclic run
    let start = (0..len).find(|&k| inside[k] && !inside[(k + len - 1) % len]).expect("run has a start");
    let run: Vec<u32> = (0..count).map(|d| ((start + d) % len) as u32).collect();
    debug_assert!(run.iter().all(|&k| inside[k as usize]), "cone members are not contiguous");
    run
}

/// Which kept edge (if any) occupies each cone of each vertex.
#[derive(Clone, Debug)]
pub struct ConeOccupancy {
    slots: Vec<[Option<EdgeId>; CONE_COUNT]>,
}

impl ConeOccupancy {
    pub fn new(n: usize) -> Self {
        ConeOccupancy { slots: vec![[None; CONE_COUNT]; n] }
    }

    /// True iff every cone in `cones` is empty at `p`.
    pub fn agrees(&self, p: VertexId, cones: ConeSet) -> bool {
        cones.labels().all(|l| self.slots[p as usize][l as usize - 1].is_none())
    }

    pub fn occupy(&mut self, p: VertexId, cones: ConeSet, e: EdgeId) {
        for l in cones.labels() {
            let slot = &mut self.slots[p as usize][l as usize - 1];
            debug_assert!(slot.is_none(), "cone {l} of {p} already occupied");
            *slot = Some(e);
        }
    }

    pub fn occupant(&self, p: VertexId, label: u8) -> Option<EdgeId> {
        self.slots[p as usize][label as usize - 1]
    }
}

/// Agreement of `p` on its incident DT edge `e`.
pub fn agrees(layout: &ConeLayout, occ: &ConeOccupancy, p: VertexId, e: EdgeId) -> bool {
    occ.agrees(p, layout.cones_of_edge(p, e))
}

/// Edge ids chosen by a construction: kept edges in the order they were kept
/// and the auxiliary set, sorted.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Selection {
    pub core: Vec<EdgeId>,
    pub wedge: Vec<EdgeId>,
}

impl Selection {
    /// Canonical form: both lists sorted.
    pub fn canonical(&self) -> (Vec<EdgeId>, Vec<EdgeId>) {
        let mut core = self.core.clone();
        core.sort_unstable();
        (core, self.wedge.clone())
    }

    pub fn to_graph(&self, t: &Triangulation) -> SpannerGraph {
        let edges = |ids: &[EdgeId]| ids.iter().map(|&id| *t.edge(id)).collect::<Vec<_>>();
        SpannerGraph::new(t.points().clone(), edges(&self.core), edges(&self.wedge))
    }
}

/// Wedge subroutine for the edge `{p, q}` just kept, run at `p`.
/// Appends the auxiliary ring edges to `out`.
pub fn wedge(
    t: &Triangulation,
    layout: &ConeLayout,
    p: VertexId,
    q: VertexId,
    ranges: WedgeRanges,
    out: &mut Vec<EdgeId>,
) {
    let Some(e) = t.edge_id(p, q) else { return };
    let Some(pos) = layout.position(p, e) else { return };
    let ring = t.neighbors_cw(p);
    let pts = t.points();
    for label in layout.cones_at(p, pos).labels() {
        let members = layout.cone_members(p, label);
        let Some(i) = members.iter().position(|&k| k == pos) else { continue };
        let k = members.len() - 1;
        let vertex = |m: usize| ring[members[m] as usize];
        let mut push = |m: usize| {
            let id =
                t.edge_id(vertex(m), vertex(m + 1)).expect("consecutive ring neighbors inside a cone are adjacent");
            out.push(id);
        };
        match ranges {
            WedgeRanges::Literal => {
                // j = 0 < m < i-1 and i < m < k-1
                for m in 1..i.saturating_sub(1) {
                    push(m);
                }
                for m in i + 1..k.saturating_sub(1) {
                    push(m);
                }
                let qi = pts[vertex(i)];
                if i < k && i + 1 != k && dot_sign(qi, pts[p], pts[vertex(i + 1)]) < 0 {
                    push(i);
                }
                if i > 0 && i - 1 != 0 && dot_sign(qi, pts[p], pts[vertex(i - 1)]) < 0 {
                    push(i - 1);
                }
            }
            WedgeRanges::Inclusive => {
                for m in 0..k {
                    push(m);
                }
            }
        }
    }
}

/// Runs the sequential construction with default settings.
pub fn bound_spanner(t: &Triangulation) -> SpannerGraph {
    let layout = ConeLayout::new(t);
    bound_spanner_with(t, &layout, WedgeRanges::Literal).to_graph(t)
}

pub fn bound_spanner_with(t: &Triangulation, layout: &ConeLayout, ranges: WedgeRanges) -> Selection {
    let mut occ = ConeOccupancy::new(t.num_vertices());
    let mut core = Vec::new();
    let mut aux = Vec::new();
    for (id, e) in t.sorted_edges().iter().enumerate() {
        let id = id as EdgeId;
        let (cp, cq) = (layout.cones_of_edge(e.u, id), layout.cones_of_edge(e.v, id));
        if occ.agrees(e.u, cp) && occ.agrees(e.v, cq) {
            occ.occupy(e.u, cp, id);
            occ.occupy(e.v, cq, id);
            core.push(id);
            wedge(t, layout, e.u, e.v, ranges, &mut aux);
            wedge(t, layout, e.v, e.u, ranges, &mut aux);
        }
    }
    let wedge: BTreeSet<EdgeId> = aux.into_iter().collect();
    Selection { core, wedge: wedge.into_iter().collect() }
}

/// The spanner: kept edges `E` and auxiliary edges `E*`. The final edge set
/// is their union.
#[derive(Clone, Debug, PartialEq)]
pub struct SpannerGraph {
    pub points: PointSet,
    pub core: Vec<Edge>,
    pub wedge: Vec<Edge>,
}

impl SpannerGraph {
    /// Builds a graph, normalizing both edge lists (sorted by endpoints,
    /// duplicates removed).
    pub fn new(points: PointSet, mut core: Vec<Edge>, mut wedge: Vec<Edge>) -> Self {
        for list in [&mut core, &mut wedge] {
            list.sort_by_key(Edge::key);
            list.dedup_by_key(|e| e.key());
        }
        SpannerGraph { points, core, wedge }
    }

    pub fn num_vertices(&self) -> usize {
        self.points.len()
    }

    /// `E` and `E*` merged, sorted by endpoints.
    pub fn edges(&self) -> Vec<Edge> {
        let mut all: Vec<Edge> = self.core.iter().chain(&self.wedge).copied().collect();
        all.sort_by_key(Edge::key);
        all.dedup_by_key(|e| e.key());
        all
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.num_vertices()];
        for e in self.edges() {
            deg[e.u as usize] += 1;
            deg[e.v as usize] += 1;
        }
        deg
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpannerStats {
    pub vertices: usize,
    pub core_edges: usize,
    pub wedge_edges: usize,
    /// Auxiliary edges not already in the core set.
    pub wedge_only_edges: usize,
    pub edges: usize,
    pub max_degree: usize,
    /// `degree_histogram[d]` = number of vertices of degree `d`.
    pub degree_histogram: Vec<usize>,
}

pub fn spanner_stats(g: &SpannerGraph) -> SpannerStats {
    let degrees = g.degrees();
    let max_degree = degrees.iter().copied().max().unwrap_or(0);
    let mut degree_histogram = vec![0; max_degree + 1];
    for d in degrees {
        degree_histogram[d] += 1;
    }
    let edges = g.edges().len();
    SpannerStats {
        vertices: g.num_vertices(),
        core_edges: g.core.len(),
        wedge_edges: g.wedge.len(),
        wedge_only_edges: edges - g.core.len(),
        edges,
        max_degree,
        degree_histogram,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::delaunay::build_delaunay;

    fn tri(c: &[(f64, f64)]) -> Triangulation {
        build_delaunay(PointSet::from_xy(c.iter().copied()).unwrap()).unwrap()
    }

    #[test]
    fn two_points() {
        let g = bound_spanner(&tri(&[(0., 0.), (1., 0.)]));
        let s = spanner_stats(&g);
        assert_eq!((s.edges, s.max_degree), (1, 1));
    }

    #[test]
    fn agreement_on_empty_and_occupied_cones() {
        let mut occ = ConeOccupancy::new(2);
        let boundary = ConeSet::single(3).with(4);
        assert!(occ.agrees(0, boundary));
        occ.occupy(0, ConeSet::single(3), 7);
        assert!(!occ.agrees(0, boundary));
        assert!(!occ.agrees(0, ConeSet::single(3)));
        assert!(occ.agrees(0, ConeSet::single(4)));
        assert!(occ.agrees(1, boundary));
        assert_eq!(occ.occupant(0, 3), Some(7));
    }

    #[test]
    fn hand_traced_triangle() {
        // (0,0),(4,0),(1,2): lengths |02|=sqrt5 < |12|=sqrt13 < |01|=4.
        // {0,2} is kept first. At 0 the anchor is towards 2 (63.4 deg); {0,1}
        // lies 63.4 deg clockwise, cone 2 of 0, free. At 2 the anchor is
        // towards 0; {2,1} is in cone 7 of 2, free -> {1,2} kept. At 1 the
        // anchor is towards 2 (146.3 deg); {1,0} is 33.7 deg counterclockwise,
        // cone 8, which {1,2} occupies (boundary 1|8) -> {0,1} rejected.
        let t = tri(&[(0., 0.), (4., 0.), (1., 2.)]);
        let layout = ConeLayout::new(&t);
        let sel = bound_spanner_with(&t, &layout, WedgeRanges::Literal);
        let keys: Vec<_> = sel.core.iter().map(|&id| t.edge(id).key()).collect();
        assert_eq!(keys, vec![(0, 2), (1, 2)]);
        assert!(sel.wedge.is_empty());
        let e01 = t.edge_id(0, 1).unwrap();
        assert_eq!(layout.cones_of_edge(0, e01).to_vec(), vec![2]);
        assert_eq!(layout.cones_of_edge(1, e01).to_vec(), vec![8]);
        let e12 = t.edge_id(1, 2).unwrap();
        assert_eq!(layout.cones_of_edge(2, e12).to_vec(), vec![7]);
    }

    #[test]
    fn wedge_single_member_cone_adds_nothing() {
        let t = tri(&[(0., 0.), (1., 0.), (0., 3.)]);
        let layout = ConeLayout::new(&t);
        let mut out = Vec::new();
        wedge(&t, &layout, 0, 1, WedgeRanges::Literal, &mut out);
        wedge(&t, &layout, 1, 0, WedgeRanges::Literal, &mut out);
        assert!(out.is_empty());
    }

    #[test]
    fn first_edge_is_nearest_neighbor() {
        let pts: Vec<(f64, f64)> = (0..40)
            .map(|i| {
                let f = f64::from(i);
                ((f * 0.618_034).fract() * 10.0, (f * 0.414_214).fract() * 7.0)
            })
            .collect();
        let t = tri(&pts);
        let layout = ConeLayout::new(&t);
        let sel = bound_spanner_with(&t, &layout, WedgeRanges::Literal);
        for p in 0..t.num_vertices() as VertexId {
            let nn = t.ring_edge_ids(p).iter().copied().min().unwrap();
            assert!(sel.core.contains(&nn));
            let first = sel.core.iter().find(|&&id| t.edge(id).touches(p)).copied();
            assert_eq!(first, Some(nn));
        }
        assert!(sel.to_graph(&t).max_degree() <= 7);
    }

    #[test]
    fn graph_normalizes_edges() {
        let pts = PointSet::from_xy([(0., 0.), (1., 0.), (0., 1.)]).unwrap();
        let e = |a, b| Edge::new(&pts, a, b);
        let g = SpannerGraph::new(pts.clone(), vec![e(1, 0), e(0, 1)], vec![e(0, 2), e(1, 0)]);
        assert_eq!(g.core.len(), 1);
        assert_eq!(g.edges().len(), 2);
        assert_eq!(g.degrees(), vec![2, 1, 1]);
        let s = spanner_stats(&g);
        assert_eq!((s.core_edges, s.wedge_edges, s.wedge_only_edges), (1, 2, 1));
        assert_eq!(s.degree_histogram, vec![0, 2, 1]);
    }
}
