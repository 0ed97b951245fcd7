//! Shortest paths over undirected graphs with nonnegative edge lengths.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::delaunay::{Edge, Triangulation};
use crate::geom::VertexId;
use crate::spanner::SpannerGraph;

/// Adjacency lists with edge lengths.
#[derive(Clone, Debug)]
pub struct Graph {
    adj: Vec<Vec<(VertexId, f64)>>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph { adj: vec![Vec::new(); n] }
    }

    pub fn from_edges<'a>(n: usize, edges: impl IntoIterator<Item = &'a Edge>) -> Self {
        let mut g = Graph::new(n);
        for e in edges {
            g.add_edge(e.u, e.v, e.length);
        }
        g
    }

    pub fn from_spanner(g: &SpannerGraph) -> Self {
        Graph::from_edges(g.num_vertices(), &g.edges())
    }

    pub fn from_triangulation(t: &Triangulation) -> Self {
        Graph::from_edges(t.num_vertices(), t.sorted_edges())
    }

    pub fn add_edge(&mut self, a: VertexId, b: VertexId, length: f64) {
        self.adj[a as usize].push((b, length));
        self.adj[b as usize].push((a, length));
    }

    pub fn num_vertices(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, v: VertexId) -> &[(VertexId, f64)] {
        &self.adj[v as usize]
    }
}

#[derive(PartialEq)]
struct Entry(f64, VertexId);

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then_with(|| other.1.cmp(&self.1))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Options for a single-source search.
#[derive(Clone, Copy, Debug)]
pub struct Search {
    /// Stop once every remaining vertex is farther than this.
    pub limit: f64,
    /// Ignore edges longer than this.
    pub max_edge: f64,
    /// Stop as soon as this vertex is settled.
    pub target: Option<VertexId>,
}

impl Default for Search {
    fn default() -> Self {
        Search { limit: f64::INFINITY, max_edge: f64::INFINITY, target: None }
    }
}

/// Dijkstra from `source`. Unreached vertices stay at `+inf`.
pub fn dijkstra(g: &Graph, source: VertexId, search: Search) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; g.num_vertices()];
    let mut heap = BinaryHeap::new();
    dist[source as usize] = 0.0;
    heap.push(Entry(0.0, source));
    while let Some(Entry(d, v)) = heap.pop() {
        if d > dist[v as usize] {
            continue;
        }
        if d > search.limit || search.target == Some(v) {
            break;
        }
        for &(w, len) in g.neighbors(v) {
            if len > search.max_edge {
                continue;
            }
            let nd = d + len;
            if nd < dist[w as usize] {
                dist[w as usize] = nd;
                heap.push(Entry(nd, w));
            }
        }
    }
    dist
}

/// Exact single-source distances from every source, one row per source.
pub fn shortest_path_lengths(g: &Graph, sources: &[VertexId]) -> Vec<Vec<f64>> {
    sources.iter().map(|&s| dijkstra(g, s, Search::default())).collect()
}

/// Distance between `a` and `b`; `+inf` if it exceeds `limit`.
pub fn distance_between(g: &Graph, a: VertexId, b: VertexId, limit: f64) -> f64 {
    let d = dijkstra(g, a, Search { limit, target: Some(b), ..Search::default() })[b as usize];
    if d > limit {
        f64::INFINITY
    } else {
        d
    }
}
