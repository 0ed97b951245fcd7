mod common;

use std::collections::BTreeSet;
use std::f64::consts::{FRAC_PI_2, PI};

use bdspanner::distributed::{candidate_indices, candidate_list, run_distributed};
use bdspanner::geom::{angle_at, incircle, orient2d, Point};
use bdspanner::spanner::wedge;
use bdspanner::verify::{shortest_path_lengths, Graph};
use bdspanner::*;
use common::*;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn keys(t: &Triangulation, ids: &[EdgeId]) -> Vec<(u32, u32)> {
    let mut k: Vec<_> = ids.iter().map(|&id| t.edge(id).key()).collect();
    k.sort_unstable();
    k
}

#[test]
fn predicates_match_exact_arithmetic() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for trial in 0..20_000 {
        let mut pts: Vec<Point> = (0..4).map(|_| Point::new(rng.random(), rng.random())).collect();
        if trial % 2 == 0 {
            // nearly collinear / cocircular inputs
            let t: f64 = rng.random();
            pts[2] = Point::new(pts[0].x + t * (pts[1].x - pts[0].x), pts[0].y + t * (pts[1].y - pts[0].y));
        }
        if trial % 3 == 0 {
            let (cx, cy, r) = (0.5, 0.5, 0.3);
            for p in pts.iter_mut() {
                let a: f64 = rng.random_range(0.0..std::f64::consts::TAU);
                *p = Point::new(cx + r * a.cos(), cy + r * a.sin());
            }
        }
        assert_eq!(orient2d(pts[0], pts[1], pts[2]), orient_exact(pts[0], pts[1], pts[2]));
        let (a, b, c) = if orient_exact(pts[0], pts[1], pts[2]) >= 0 { (0, 1, 2) } else { (0, 2, 1) };
        assert_eq!(incircle(pts[a], pts[b], pts[c], pts[3]), incircle_exact(pts[a], pts[b], pts[c], pts[3]));
    }
}

#[test]
fn integer_grid_predicates_are_exact() {
    for x in -2..=2 {
        for y in -2..=2 {
            let p = |a: i32, b: i32| Point::new(f64::from(a), f64::from(b));
            let d = p(x, y);
            assert_eq!(orient2d(p(0, 0), p(1, 1), d), orient_exact(p(0, 0), p(1, 1), d));
            assert_eq!(incircle(p(1, 0), p(0, 1), p(-1, 0), d), incircle_exact(p(1, 0), p(0, 1), p(-1, 0), d));
        }
    }
}

#[test]
fn delaunay_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..40 {
        let n = rng.random_range(3..=25);
        let pts = PointSet::from_xy((0..n).map(|_| (rng.random(), rng.random()))).unwrap();
        let t = build_delaunay(pts.clone()).unwrap();
        let ours: BTreeSet<_> = t.sorted_edges().iter().map(Edge::key).collect();
        assert_eq!(ours, brute_force_delaunay(&pts));
    }
}

#[test]
fn unit_square_diagonal() {
    // both diagonals are empty-circle edges; the tie-break must pick exactly one
    let t = build_delaunay(PointSet::from_xy([(0., 0.), (1., 0.), (1., 1.), (0., 1.)]).unwrap()).unwrap();
    let edges: Vec<_> = t.sorted_edges().iter().map(Edge::key).collect();
    assert_eq!(edges.len(), 5);
    assert!(edges.contains(&(1, 3)) && !edges.contains(&(0, 2)));
    let p = t.points();
    assert_eq!(incircle_exact(p[0], p[1], p[2], p[3]), 0);
}

#[test]
fn nearest_neighbor_is_the_shortest_dt_edge() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let pts = PointSet::from_xy((0..300).map(|_| (rng.random(), rng.random()))).unwrap();
    let t = build_delaunay(pts.clone()).unwrap();
    for p in 0..pts.len() as VertexId {
        let nn = (0..pts.len() as VertexId)
            .filter(|&q| q != p)
            .min_by(|&a, &b| pts.distance(p, a).total_cmp(&pts.distance(p, b)).then(a.cmp(&b)))
            .unwrap();
        assert_eq!(t.nearest_neighbor_edge(p).unwrap().other(p), nn);
    }
}

#[test]
fn dijkstra_matches_path_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..60 {
        let n = rng.random_range(2..=12);
        let mut edges = Vec::new();
        for a in 0..n as u32 {
            for b in a + 1..n as u32 {
                if rng.random_bool(0.35) {
                    edges.push((a, b, rng.random_range(0.1..5.0)));
                }
            }
        }
        let mut g = Graph::new(n);
        for &(a, b, l) in &edges {
            g.add_edge(a, b, l);
        }
        let sources: Vec<u32> = (0..n as u32).collect();
        let table = shortest_path_lengths(&g, &sources);
        for s in 0..n as u32 {
            let want = exhaustive_distances(n, &edges, s);
            for v in 0..n {
                let (a, b) = (table[s as usize][v], want[v]);
                assert!(a == b || (a - b).abs() <= 1e-12 * b, "{s}->{v}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn three_point_golden_trace() {
    // (0,0),(4,0),(1,2): {0,2} then {1,2} are kept; {0,1} falls in cone 8 of
    // vertex 1, already holding {1,2}. No auxiliary edges.
    let t = build_delaunay(PointSet::from_xy([(0., 0.), (4., 0.), (1., 2.)]).unwrap()).unwrap();
    let g = bound_spanner(&t);
    let core: Vec<_> = g.core.iter().map(Edge::key).collect();
    assert_eq!(core, vec![(0, 2), (1, 2)]);
    assert!(g.wedge.is_empty());
    let run = run_distributed(&t, 11).unwrap();
    assert_eq!(keys(&t, &run.selection.core), vec![(0, 2), (1, 2)]);
}

/// p = 0 with its nearest neighbor due west, and four neighbors at 85, 75,
/// 60 and 50 degrees: all inside cone 3 of p (absolute directions 45..90).
/// The angle at q_i = 3 between p and q_{i+1} = 4 is 2 rad.
fn six_point_fan() -> Triangulation {
    let pol = |deg: f64, r: f64| (r * deg.to_radians().cos(), r * deg.to_radians().sin());
    let ang_p = 15f64.to_radians();
    let r2 = 2f64.sin() / (PI - ang_p - 2.0).sin();
    let pts = [(0.0, 0.0), (-0.5, 0.0), pol(85.0, 1.1), pol(75.0, 1.0), pol(60.0, r2), pol(50.0, 1.4)];
    build_delaunay(PointSet::from_xy(pts).unwrap()).unwrap()
}

#[test]
fn wedge_adds_ring_edge_at_obtuse_angle() {
    let t = six_point_fan();
    let pts = t.points();
    assert!((angle_at(pts[3], pts[0], pts[4]).unwrap() - 2.0).abs() < 1e-12);
    for q in 2..=5 {
        assert!(t.edge_id(0, q).is_some());
    }
    let layout = ConeLayout::new(&t);
    let ring = t.neighbors_cw(0);
    let cone3: Vec<VertexId> = layout.cone_members(0, 3).iter().map(|&k| ring[k as usize]).collect();
    assert_eq!(cone3, vec![2, 3, 4, 5]);

    let mut out = Vec::new();
    wedge(&t, &layout, 0, 3, WedgeRanges::Literal, &mut out);
    assert_eq!(keys(&t, &out), vec![(3, 4)]);

    // at q_{i+1} = 4 the next edge ends the cone and the angle back to 3 is acute
    let mut out = Vec::new();
    wedge(&t, &layout, 0, 4, WedgeRanges::Literal, &mut out);
    assert!(out.is_empty());
    assert!(angle_at(pts[4], pts[0], pts[3]).unwrap() < FRAC_PI_2);

    let mut out = Vec::new();
    wedge(&t, &layout, 0, 3, WedgeRanges::Inclusive, &mut out);
    assert_eq!(keys(&t, &out), vec![(2, 3), (3, 4), (4, 5)]);
}

#[test]
fn candidate_example_and_characterization() {
    assert_eq!(candidate_indices(&[3, 1, 2]), vec![0, 1, 2]);
    for k in 0..=6 {
        for lens in weak_orders(k) {
            let got: BTreeSet<usize> = candidate_indices(&lens).into_iter().collect();
            assert_eq!(got, characterized_candidates(&lens), "{lens:?}");
        }
    }
}

#[test]
fn candidate_lists_contain_every_kept_edge() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for kind in PointKind::ALL {
        let pts = generate_points(kind, 400, rng.random()).unwrap();
        let t = build_delaunay(pts).unwrap();
        let layout = ConeLayout::new(&t);
        let sel = bound_spanner_with(&t, &layout, WedgeRanges::Literal);
        let lists: Vec<Vec<EdgeId>> =
            (0..t.num_vertices() as VertexId).map(|p| candidate_list(&t, &layout, p)).collect();
        for &id in &sel.core {
            let e = t.edge(id);
            assert!(lists[e.u as usize].binary_search(&id).is_ok());
            assert!(lists[e.v as usize].binary_search(&id).is_ok());
        }
    }
}

/// Twelve points where the literal Wedge rules push one vertex to degree 8.
/// Vertex 1 keeps edges in cones 7, 1|8, 3 and 4 (cones 2, 5 and 6 stay
/// empty) and receives four auxiliary edges: {1,4} from Wedge(5,4),
/// {1,5} and {1,10} from Wedge(0,10), {1,2} from the angle rule in
/// Wedge(7,1). The checked-in copy was cut down from a 1579-point cluster
/// instance and reproduced with an independent script.
#[test]
fn degree_eight_counterexample() {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/degree8.csv")).unwrap();
    let t = build_delaunay(bdspanner::io::parse_csv(&text).unwrap()).unwrap();
    let layout = ConeLayout::new(&t);
    let sel = bound_spanner_with(&t, &layout, WedgeRanges::Literal);
    let g = sel.to_graph(&t);
    assert_eq!(g.degrees()[1], 8);
    assert_eq!(g.max_degree(), 8);

    let at = |ids: &[EdgeId]| -> BTreeSet<VertexId> {
        ids.iter().map(|&id| *t.edge(id)).filter(|e| e.touches(1)).map(|e| e.other(1)).collect()
    };
    assert_eq!(at(&sel.core), [6, 7, 8, 9].into());
    assert_eq!(at(&sel.wedge), [2, 4, 5, 10].into());

    let mut occupied = ConeSet::default();
    for &id in &sel.core {
        if t.edge(id).touches(1) {
            for c in layout.cones_of_edge(1, id).labels() {
                occupied = occupied.with(c);
            }
        }
    }
    assert_eq!(occupied.to_vec(), vec![1, 3, 4, 7, 8]);

    // no direction is near a cone boundary, so the cone tolerance plays no part
    let pts = t.points().as_slice();
    for p in 0..t.num_vertices() as VertexId {
        let nn = t.nearest_neighbor_edge(p).unwrap().other(p);
        for &q in t.neighbors_cw(p).iter().filter(|&&q| q != nn) {
            let u = layout.system(p).clockwise_offset(pts[q as usize]).unwrap() / std::f64::consts::FRAC_PI_4;
            assert!((u - u.round()).abs() > 5e-4);
        }
    }

    for seed in 0..4 {
        assert_eq!(run_distributed(&t, seed).unwrap().selection.canonical(), sel.canonical());
    }
}
