//! Linear-time distributed variant, simulated in synchronous rounds.
//!
//! Every vertex precomputes a short candidate list per cone and merges them
//! into `List(p)`. Processes then pop candidates one per round, wait on the
//! other endpoint while its list still holds an earlier edge, and commit
//! through the same cone rules as the sequential construction.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::delaunay::{EdgeId, Triangulation};
use crate::error::{Error, Result};
use crate::geom::{VertexId, CONE_COUNT};
use crate::spanner::{wedge, ConeLayout, ConeOccupancy, Selection, WedgeRanges};

/// Positions (into the clockwise cone order) of the candidate edges of one
/// cone with `k` edges. `cmp(a, b)` compares the lengths of edges `a` and `b`.
///
/// The result is the clockwise nondecreasing run from the first edge, the
/// counterclockwise nondecreasing run from the last edge, and every
/// minimum-length edge strictly between the two runs. Sorted by position.
pub fn candidate_indices_by<F>(k: usize, cmp: F) -> Vec<usize>
where
    F: Fn(usize, usize) -> Ordering,
{
    if k == 0 {
        return Vec::new();
    }
    let mut i = 0;
    while i + 1 < k && cmp(i + 1, i) != Ordering::Less {
        i += 1;
    }
    let mut j = k - 1;
    while j > 0 && cmp(j - 1, j) != Ordering::Less {
        j -= 1;
    }
    if j <= i + 1 {
        return (0..k).collect();
    }
    let mut out: Vec<usize> = (0..=i).collect();
    let middle = i + 1..j;
    let shortest =
        middle.clone().reduce(|a, b| if cmp(b, a) == Ordering::Less { b } else { a }).expect("non-empty middle");
    out.extend(middle.filter(|&m| cmp(m, shortest) == Ordering::Equal));
    out.extend(j..k);
    out
}

/// [`candidate_indices_by`] over explicit lengths.
pub fn candidate_indices<T: Ord>(lengths: &[T]) -> Vec<usize> {
    candidate_indices_by(lengths.len(), |a, b| lengths[a].cmp(&lengths[b]))
}

/// Candidate edges of cone `label` of `p`, sorted by the global order.
pub fn candidate_edges_in_cone(t: &Triangulation, layout: &ConeLayout, p: VertexId, label: u8) -> Vec<EdgeId> {
    let ring = t.ring_edge_ids(p);
    let ids: Vec<EdgeId> = layout.cone_members(p, label).iter().map(|&k| ring[k as usize]).collect();
    let mut out: Vec<EdgeId> =
        candidate_indices_by(ids.len(), |a, b| t.cmp_edge_len(ids[a], ids[b])).into_iter().map(|m| ids[m]).collect();
    out.sort_unstable();
    out
}

/// `List(p)`: the merged candidate lists of all cones of `p`.
pub fn candidate_list(t: &Triangulation, layout: &ConeLayout, p: VertexId) -> Vec<EdgeId> {
    let mut all: Vec<EdgeId> =
        (1..=CONE_COUNT as u8).flat_map(|label| candidate_edges_in_cone(t, layout, p, label)).collect();
    all.sort_unstable();
    all.dedup();
    all
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProcessStatus {
    Running,
    BlockedOn(VertexId),
    Done,
}

/// One simulated process.
#[derive(Clone, Debug)]
pub struct Process {
    pub owner: VertexId,
    list: Vec<EdgeId>,
    cursor: usize,
    /// Popped edge whose decision is pending on the other endpoint.
    held: Option<EdgeId>,
    waited: usize,
}

impl Process {
    pub fn new(t: &Triangulation, layout: &ConeLayout, p: VertexId) -> Self {
        Process { owner: p, list: candidate_list(t, layout, p), cursor: 0, held: None, waited: 0 }
    }

    pub fn list(&self) -> &[EdgeId] {
        &self.list
    }

    pub fn remaining(&self) -> &[EdgeId] {
        &self.list[self.cursor..]
    }

    /// The earliest edge this process has not decided yet.
    fn top(&self) -> Option<EdgeId> {
        self.held.or_else(|| self.list.get(self.cursor).copied())
    }

    pub fn status(&self, t: &Triangulation) -> ProcessStatus {
        match self.held {
            Some(e) => ProcessStatus::BlockedOn(t.edge(e).other(self.owner)),
            None if self.cursor < self.list.len() => ProcessStatus::Running,
            None => ProcessStatus::Done,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimulationMetrics {
    pub rounds: usize,
    pub pops: usize,
    /// Longest run of consecutive rounds any process spent waiting.
    pub max_wait: usize,
    pub commits: usize,
    /// Sum of all candidate list lengths.
    pub candidates: usize,
}

#[derive(Clone, Debug, Default)]
pub struct DistributedOptions {
    pub schedule_seed: u64,
    pub wedge_ranges: WedgeRanges,
    pub trace: bool,
}

#[derive(Clone, Debug)]
pub struct DistributedRun {
    pub selection: Selection,
    pub metrics: SimulationMetrics,
    /// `round vertex action u-v` lines, when tracing was requested.
    pub trace: Vec<String>,
}

pub fn run_distributed(t: &Triangulation, schedule_seed: u64) -> Result<DistributedRun> {
    let layout = ConeLayout::new(t);
    run_distributed_with(t, &layout, &DistributedOptions { schedule_seed, ..Default::default() })
}

pub fn run_distributed_with(
    t: &Triangulation,
    layout: &ConeLayout,
    opts: &DistributedOptions,
) -> Result<DistributedRun> {
    let n = t.num_vertices();
    let mut procs: Vec<Process> = (0..n as VertexId).map(|p| Process::new(t, layout, p)).collect();
    let mut metrics = SimulationMetrics { candidates: procs.iter().map(|p| p.list.len()).sum(), ..Default::default() };
    let mut occ = ConeOccupancy::new(n);
    let mut core = Vec::new();
    let mut aux = Vec::new();
    let mut trace = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.schedule_seed);
    let mut order: Vec<VertexId> = (0..n as VertexId).collect();

    let mut log = |round: usize, v: VertexId, action: &str, e: EdgeId| {
        if opts.trace {
            let e = t.edge(e);
            trace.push(format!("{round} {v} {action} {}-{}", e.u, e.v));
        }
    };

    loop {
        if procs.iter().all(|p| p.top().is_none()) {
            break;
        }
        metrics.rounds += 1;
        let round = metrics.rounds;
        order.shuffle(&mut rng);
        let mut progress = false;
        for &p in &order {
            let pi = p as usize;
            let e = match procs[pi].held {
                Some(e) => e,
                None => {
                    let Some(&e) = procs[pi].list.get(procs[pi].cursor) else { continue };
                    procs[pi].cursor += 1;
                    metrics.pops += 1;
                    progress = true;
                    if !occ.agrees(p, layout.cones_of_edge(p, e)) {
                        log(round, p, "discard", e);
                        continue;
                    }
                    procs[pi].held = Some(e);
                    log(round, p, "pop", e);
                    e
                }
            };
            let q = t.edge(e).other(p);
            if procs[q as usize].top().is_some_and(|top| top < e) {
                procs[pi].waited += 1;
                metrics.max_wait = metrics.max_wait.max(procs[pi].waited);
                log(round, p, "wait", e);
                continue;
            }
            procs[pi].held = None;
            procs[pi].waited = 0;
            progress = true;
            let (cp, cq) = (layout.cones_of_edge(p, e), layout.cones_of_edge(q, e));
            if !occ.agrees(q, cq) {
                log(round, p, "reject", e);
                continue;
            }
            if !occ.agrees(p, cp) {
                let edge = t.edge(e);
                return Err(Error::CommitConflict { vertex: p, edge: (edge.u, edge.v) });
            }
            occ.occupy(p, cp, e);
            occ.occupy(q, cq, e);
            core.push(e);
            metrics.commits += 1;
            log(round, p, "commit", e);
            wedge(t, layout, p, q, opts.wedge_ranges, &mut aux);
            wedge(t, layout, q, p, opts.wedge_ranges, &mut aux);
        }
        if !progress {
            let blocked: Vec<String> = procs
                .iter()
                .filter_map(|pr| match pr.status(t) {
                    ProcessStatus::BlockedOn(q) => Some(format!("{}->{}", pr.owner, q)),
                    _ => None,
                })
                .collect();
            return Err(Error::Livelock { round, detail: format!("blocked: {}", blocked.join(" ")) });
        }
    }

    let wedge: BTreeSet<EdgeId> = aux.into_iter().collect();
    Ok(DistributedRun { selection: Selection { core, wedge: wedge.into_iter().collect() }, metrics, trace })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::delaunay::build_delaunay;
    use crate::geom::PointSet;
    use crate::spanner::bound_spanner_with;

    #[test]
    fn increasing_cone_is_all_candidates() {
        assert_eq!(candidate_indices(&[1, 2, 3]), vec![0, 1, 2]);
    }

    #[test]
    fn valley_cone() {
        // [3,1,2]: both runs stop after one edge, the middle minimum is 1
        assert_eq!(candidate_indices(&[3, 1, 2]), vec![0, 1, 2]);
        // [2,5,1,4,6,3]: runs {2,5} and {6,3}; middle {1,4} contributes 1
        assert_eq!(candidate_indices(&[2, 5, 1, 4, 6, 3]), vec![0, 1, 2, 4, 5]);
    }

    #[test]
    fn ties_in_the_middle_are_all_kept() {
        assert_eq!(candidate_indices(&[5, 9, 2, 7, 2, 8, 6]), vec![0, 1, 2, 4, 5, 6]);
        assert_eq!(candidate_indices(&[4, 4, 4]), vec![0, 1, 2]);
        assert!(candidate_indices::<u8>(&[]).is_empty());
    }

    #[test]
    fn two_points() {
        let t = build_delaunay(PointSet::from_xy([(0., 0.), (1., 1.)]).unwrap()).unwrap();
        let run = run_distributed(&t, 7).unwrap();
        assert_eq!(run.selection.core, vec![0]);
        assert_eq!(run.metrics.pops, 2);
        assert_eq!(run.metrics.rounds, 1);
    }

    #[test]
    fn degree_one_vertex_list() {
        let t = build_delaunay(PointSet::from_xy([(0., 0.), (1., 0.), (2., 0.)]).unwrap()).unwrap();
        let layout = ConeLayout::new(&t);
        assert_eq!(candidate_list(&t, &layout, 0).len(), 1);
    }

    #[test]
    fn matches_sequential_with_trace() {
        let pts: Vec<(f64, f64)> = (0..120)
            .map(|i| {
                let f = f64::from(i);
                ((f * 0.754_877_7).fract() * 20.0, (f * 0.569_840_3).fract() * 20.0)
            })
            .collect();
        let t = build_delaunay(PointSet::from_xy(pts).unwrap()).unwrap();
        let layout = ConeLayout::new(&t);
        let seq = bound_spanner_with(&t, &layout, WedgeRanges::Literal);
        for seed in 0..5 {
            let opts = DistributedOptions { schedule_seed: seed, trace: true, ..Default::default() };
            let run = run_distributed_with(&t, &layout, &opts).unwrap();
            assert_eq!(run.selection.canonical(), seq.canonical());
            assert!(run.metrics.pops <= run.metrics.candidates);
            assert_eq!(run.trace.iter().filter(|l| l.contains(" commit ")).count(), seq.core.len());
        }
    }
}
