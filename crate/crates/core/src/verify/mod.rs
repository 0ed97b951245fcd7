//! Verification engine: structural invariants, stretch measurements and the
//! numeric lemma suite, gathered into a [`VerificationReport`].

pub mod lemmas;
pub mod paths;

use std::cmp::Ordering;
use std::collections::HashSet;
use std::f64::consts::SQRT_2;
use std::fmt;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::delaunay::Triangulation;
use crate::geom::VertexId;
use crate::spanner::{ConeLayout, Selection, SpannerGraph};

pub use lemmas::{lemma_suite, LemmaRecord, LemmaSuite, Witness};
pub use paths::{dijkstra, distance_between, shortest_path_lengths, Graph, Search};

/// `(1 + sqrt 2)^2 = 3 + 2 sqrt 2`.
pub const STRETCH_BOUND: f64 = 3.0 + 2.0 * SQRT_2;

pub const MAX_DEGREE: usize = 7;

/// Relative tolerance for inequalities checked in floating point.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Above this many vertices the global ratio is measured from sampled sources.
pub const FULL_RATIO_LIMIT: usize = 2000;

pub const SAMPLED_SOURCES: usize = 256;

pub const REPORT_SCHEMA: &str = "bdspanner.report/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum StructureFailure {
    DegreeExceeded { vertex: VertexId, degree: usize },
    NotInTriangulation { u: VertexId, v: VertexId },
    Disconnected { u: VertexId, v: VertexId },
}

impl fmt::Display for StructureFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StructureFailure::DegreeExceeded { vertex, degree } => write!(f, "vertex {vertex} has degree {degree}"),
            StructureFailure::NotInTriangulation { u, v } => write!(f, "edge {u}-{v} is not a Delaunay edge"),
            StructureFailure::Disconnected { u, v } => write!(f, "no path between {u} and {v}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureReport {
    pub max_degree: usize,
    pub failures: Vec<StructureFailure>,
}

impl StructureReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Degree at most 7 everywhere and every edge a Delaunay edge.
pub fn check_structure(g: &SpannerGraph, t: &Triangulation) -> StructureReport {
    let degrees = g.degrees();
    let mut failures: Vec<StructureFailure> = degrees
        .iter()
        .enumerate()
        .filter(|&(_, &d)| d > MAX_DEGREE)
        .map(|(v, &degree)| StructureFailure::DegreeExceeded { vertex: v as VertexId, degree })
        .collect();
    for e in g.edges() {
        if t.edge_id(e.u, e.v).is_none() {
            failures.push(StructureFailure::NotInTriangulation { u: e.u, v: e.v });
        }
    }
    StructureReport { max_degree: degrees.into_iter().max().unwrap_or(0), failures }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeStretch {
    /// Largest `d_G(p, q) / |pq|` over Delaunay edges `{p, q}`.
    pub max_ratio: f64,
    pub witness: Option<(VertexId, VertexId)>,
    pub edges_checked: usize,
}

/// Ratios above this multiple of the bound are not resolved exactly.
const SEARCH_SLACK: f64 = 4.0;

/// Spanner distance over length for every Delaunay edge.
pub fn per_edge_stretch(g: &SpannerGraph, t: &Triangulation) -> EdgeStretch {
    let graph = Graph::from_spanner(g);
    per_edge_stretch_in(&graph, t)
}

pub fn per_edge_stretch_in(graph: &Graph, t: &Triangulation) -> EdgeStretch {
    let mut out =
        EdgeStretch { max_ratio: if t.sorted_edges().is_empty() { 0.0 } else { 1.0 }, witness: None, edges_checked: 0 };
    let n = t.num_vertices();
    let mut by_source: Vec<Vec<(VertexId, f64)>> = vec![Vec::new(); n];
    for e in t.sorted_edges() {
        by_source[e.u as usize].push((e.v, e.length));
    }
    for (s, targets) in by_source.iter().enumerate() {
        let Some(longest) = targets.iter().map(|&(_, l)| l).max_by(f64::total_cmp) else { continue };
        let limit = SEARCH_SLACK * STRETCH_BOUND * longest;
        let mut dist = dijkstra(graph, s as VertexId, Search { limit, ..Search::default() });
        if targets.iter().any(|&(v, _)| dist[v as usize] > limit) {
            dist = dijkstra(graph, s as VertexId, Search::default());
        }
        for &(v, len) in targets {
            out.edges_checked += 1;
            let ratio = dist[v as usize] / len;
            if ratio > out.max_ratio || out.witness.is_none() && ratio >= out.max_ratio {
                out.max_ratio = ratio;
                out.witness = Some((s as VertexId, v));
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpannerRatios {
    /// Max over vertex pairs of `d_G(p, q) / |pq|`.
    pub global_ratio: f64,
    /// The same for the Delaunay triangulation.
    pub dt_ratio: f64,
    /// Number of sampled sources, or `None` when every vertex was a source.
    pub sampled_sources: Option<usize>,
}

impl SpannerRatios {
    pub fn within_bound(&self, tolerance: f64) -> bool {
        self.global_ratio <= STRETCH_BOUND * self.dt_ratio * (1.0 + tolerance)
    }
}

/// Global stretch of `g` and of `t`. Uses every vertex as a source up to
/// [`FULL_RATIO_LIMIT`] vertices, and [`SAMPLED_SOURCES`] uniformly sampled
/// sources above.
pub fn spanner_ratios(g: &SpannerGraph, t: &Triangulation, seed: u64) -> SpannerRatios {
    let n = t.num_vertices();
    let (sources, sampled): (Vec<VertexId>, _) = if n > FULL_RATIO_LIMIT {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut s: Vec<VertexId> = sample(&mut rng, n, SAMPLED_SOURCES).into_iter().map(|i| i as VertexId).collect();
        s.sort_unstable();
        (s, Some(SAMPLED_SOURCES))
    } else {
        ((0..n as VertexId).collect(), None)
    };
    let gs = Graph::from_spanner(g);
    let gt = Graph::from_triangulation(t);
    let pts = t.points();
    let mut global_ratio: f64 = 1.0;
    let mut dt_ratio: f64 = 1.0;
    for &s in &sources {
        let ds = dijkstra(&gs, s, Search::default());
        let dt = dijkstra(&gt, s, Search::default());
        for v in 0..n as VertexId {
            // with full sources each pair is seen from its smaller end
            if v == s || sampled.is_none() && v < s {
                continue;
            }
            let d = pts.distance(s, v);
            global_ratio = global_ratio.max(ds[v as usize] / d);
            dt_ratio = dt_ratio.max(dt[v as usize] / d);
        }
    }
    SpannerRatios { global_ratio, dt_ratio, sampled_sources: sampled }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StrongDiagnostic {
    pub holds: bool,
    /// Delaunay edges lacking a short path made of edges no longer than them.
    pub failures: usize,
    pub witness: Option<(VertexId, VertexId)>,
}

/// Whether every Delaunay edge `{p, q}` has a path in `g` of length at most
/// `STRETCH_BOUND * |pq|` using only edges of length at most `|pq|`.
pub fn strong_spanner_diagnostic(g: &SpannerGraph, t: &Triangulation, tolerance: f64) -> StrongDiagnostic {
    let graph = Graph::from_spanner(g);
    let mut out = StrongDiagnostic { holds: true, failures: 0, witness: None };
    for e in t.sorted_edges() {
        let limit = STRETCH_BOUND * e.length * (1.0 + tolerance);
        let d = dijkstra(&graph, e.u, Search { limit, max_edge: e.length, target: Some(e.v) })[e.v as usize];
        if d > limit {
            out.holds = false;
            out.failures += 1;
            out.witness.get_or_insert((e.u, e.v));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShortestEdgeCheck {
    pub checked: usize,
    /// (apex, kept neighbor, other neighbor, offending member).
    pub violations: Vec<(VertexId, VertexId, VertexId, VertexId)>,
}

/// For every kept edge `{s, r}` and Delaunay edge `{s, p}` in a common cone
/// of `s`, every neighbor `x` of `s` between `r` and `p` satisfies
/// `|sx| >= min(|sr|, |sp|)`. Exact comparisons.
pub fn check_shortest_edge(t: &Triangulation, layout: &ConeLayout, sel: &Selection) -> ShortestEdgeCheck {
    let mut out = ShortestEdgeCheck { checked: 0, violations: Vec::new() };
    for &id in &sel.core {
        let e = *t.edge(id);
        for (s, r) in [(e.u, e.v), (e.v, e.u)] {
            let ring = t.ring_edge_ids(s);
            let Some(pos) = layout.position(s, id) else { continue };
            for label in layout.cones_at(s, pos).labels() {
                let members = layout.cone_members(s, label);
                let i = members.iter().position(|&k| k == pos).expect("edge is in its cone");
                for j in 0..members.len() {
                    if j == i {
                        continue;
                    }
                    let other = ring[members[j] as usize];
                    let shorter = match t.cmp_edge_len(id, other) {
                        Ordering::Greater => other,
                        _ => id,
                    };
                    out.checked += 1;
                    for &k in &members[i.min(j) + 1..i.max(j)] {
                        let x = ring[k as usize];
                        if t.cmp_edge_len(x, shorter) == Ordering::Less {
                            let p = t.edge(other).other(s);
                            out.violations.push((s, r, p, t.edge(x).other(s)));
                        }
                    }
                }
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VerifyOptions {
    pub tolerance: f64,
    /// Trials per lemma check; zero skips the suite.
    pub lemma_trials: usize,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { tolerance: DEFAULT_TOLERANCE, lemma_trials: 0, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: String,
    pub vertices: usize,
    pub dt_edges: usize,
    pub core_edges: usize,
    pub wedge_edges: usize,
    pub edges: usize,
    pub collinear_input: bool,
    pub tolerance: f64,
    pub max_degree: usize,
    pub structure_failures: Vec<StructureFailure>,
    pub per_edge_stretch_max: f64,
    pub per_edge_stretch_witness: Option<(VertexId, VertexId)>,
    pub per_edge_stretch_bound: f64,
    pub global_spanner_ratio: f64,
    pub dt_spanner_ratio: f64,
    pub ratio_sampled_sources: Option<usize>,
    pub lemma_suite: Vec<LemmaRecord>,
    pub strong_spanner_diagnostic: bool,
    pub pass: bool,
}

impl VerificationReport {
    /// One line per failed check.
    pub fn failures(&self) -> Vec<String> {
        let mut out: Vec<String> = self.structure_failures.iter().map(|f| f.to_string()).collect();
        if !self.stretch_ok() {
            let (u, v) = self.per_edge_stretch_witness.unwrap_or_default();
            out.push(format!(
                "edge {u}-{v} has stretch {} > {}",
                self.per_edge_stretch_max, self.per_edge_stretch_bound
            ));
        }
        if !self.ratio_ok() {
            out.push(format!(
                "global ratio {} exceeds {} * delta = {}",
                self.global_spanner_ratio,
                STRETCH_BOUND,
                STRETCH_BOUND * self.dt_spanner_ratio
            ));
        }
        for r in self.lemma_suite.iter().filter(|r| !r.pass) {
            out.push(format!("lemma check {:?} worst margin {}", r.name, r.worst_margin));
        }
        out
    }

    fn stretch_ok(&self) -> bool {
        self.per_edge_stretch_max <= self.per_edge_stretch_bound * (1.0 + self.tolerance)
    }

    fn ratio_ok(&self) -> bool {
        self.global_spanner_ratio <= STRETCH_BOUND * self.dt_spanner_ratio * (1.0 + self.tolerance)
    }
}

/// Runs every check on `g` built from `t`.
pub fn verify(g: &SpannerGraph, t: &Triangulation, opts: &VerifyOptions) -> VerificationReport {
    let mut structure = check_structure(g, t);
    let stretch = per_edge_stretch(g, t);
    if !stretch.max_ratio.is_finite() {
        let (u, v) = stretch.witness.expect("an infinite ratio has a witness");
        structure.failures.push(StructureFailure::Disconnected { u, v });
    }
    let ratios = spanner_ratios(g, t, opts.seed);
    let strong = strong_spanner_diagnostic(g, t, opts.tolerance);
    let suite = if opts.lemma_trials > 0 {
        lemma_suite(t, opts.lemma_trials, opts.seed, opts.tolerance).records
    } else {
        Vec::new()
    };
    let core: HashSet<_> = g.core.iter().map(|e| e.key()).collect();
    let mut report = VerificationReport {
        schema: REPORT_SCHEMA.to_string(),
        vertices: t.num_vertices(),
        dt_edges: t.sorted_edges().len(),
        core_edges: core.len(),
        wedge_edges: g.wedge.len(),
        edges: g.edges().len(),
        collinear_input: t.is_collinear(),
        tolerance: opts.tolerance,
        max_degree: structure.max_degree,
        structure_failures: structure.failures,
        per_edge_stretch_max: stretch.max_ratio,
        per_edge_stretch_witness: stretch.witness,
        per_edge_stretch_bound: STRETCH_BOUND,
        global_spanner_ratio: ratios.global_ratio,
        dt_spanner_ratio: ratios.dt_ratio,
        ratio_sampled_sources: ratios.sampled_sources,
        lemma_suite: suite,
        strong_spanner_diagnostic: strong.holds,
        pass: false,
    };
    report.pass = report.failures().is_empty();
    report
}
