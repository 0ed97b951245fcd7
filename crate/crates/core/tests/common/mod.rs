#![allow(dead_code)]

use std::collections::BTreeSet;

use bdspanner::geom::Point;
use bdspanner::PointSet;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

fn q(v: f64) -> BigRational {
    BigRational::from_float(v).expect("finite")
}

fn sign(v: &BigRational) -> i8 {
    if v.is_zero() {
        0
    } else if v.is_positive() {
        1
    } else {
        -1
    }
}

/// Exact orientation of (a, b, c): +1 counterclockwise.
pub fn orient_exact(a: Point, b: Point, c: Point) -> i8 {
    let (ax, ay, bx, by, cx, cy) = (q(a.x), q(a.y), q(b.x), q(b.y), q(c.x), q(c.y));
    sign(&((&bx - &ax) * (&cy - &ay) - (&by - &ay) * (&cx - &ax)))
}

/// Exact in-circle test: +1 if d is strictly inside the circle through the
/// counterclockwise triangle (a, b, c).
pub fn incircle_exact(a: Point, b: Point, c: Point, d: Point) -> i8 {
    let rows: Vec<[BigRational; 3]> = [a, b, c]
        .iter()
        .map(|p| {
            let x = q(p.x) - q(d.x);
            let y = q(p.y) - q(d.y);
            let w = &x * &x + &y * &y;
            [x, y, w]
        })
        .collect();
    let m = |r: usize, c: usize| &rows[r][c];
    let det = m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
        + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
    sign(&det)
}

/// Delaunay edges by the empty-circle definition, for point sets with no
/// four cocircular and no three collinear points. O(n^4).
pub fn brute_force_delaunay(points: &PointSet) -> BTreeSet<(u32, u32)> {
    let p = points.as_slice();
    let n = p.len();
    let mut edges = BTreeSet::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let o = orient_exact(p[a], p[b], p[c]);
                if o == 0 {
                    continue;
                }
                let (x, y) = if o > 0 { (b, c) } else { (c, b) };
                let empty = (0..n).all(|d| d == a || d == b || d == c || incircle_exact(p[a], p[x], p[y], p[d]) <= 0);
                if empty {
                    for (u, v) in [(a, b), (a, c), (b, c)] {
                        edges.insert((u as u32, v as u32));
                    }
                }
            }
        }
    }
    edges
}

/// Shortest distances from `s` by enumerating every simple path.
pub fn exhaustive_distances(n: usize, edges: &[(u32, u32, f64)], s: u32) -> Vec<f64> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b, l) in edges {
        adj[a as usize].push((b as usize, l));
        adj[b as usize].push((a as usize, l));
    }
    let mut best = vec![f64::INFINITY; n];
    let mut on_path = vec![false; n];
    fn dfs(v: usize, len: f64, adj: &[Vec<(usize, f64)>], on_path: &mut [bool], best: &mut [f64]) {
        best[v] = best[v].min(len);
        on_path[v] = true;
        for &(w, l) in &adj[v] {
            if !on_path[w] {
                dfs(w, len + l, adj, on_path, best);
            }
        }
        on_path[v] = false;
    }
    dfs(s as usize, 0.0, &adj, &mut on_path, &mut best);
    best
}

/// Candidate positions of a cone straight from the characterization: the
/// longest clockwise nondecreasing run from the first edge, the longest
/// counterclockwise nondecreasing run from the last edge, and the shortest
/// edges of the wedge between the two run ends (inclusive).
pub fn characterized_candidates(len: &[u32]) -> BTreeSet<usize> {
    let k = len.len();
    let mut out = BTreeSet::new();
    if k == 0 {
        return out;
    }
    let i = (0..k).take_while(|&m| (1..=m).all(|t| len[t - 1] <= len[t])).last().unwrap();
    let j = (0..k).rev().take_while(|&m| (m..k - 1).all(|t| len[t + 1] <= len[t])).last().unwrap();
    out.extend(0..=i);
    out.extend(j..k);
    let (lo, hi) = (i.min(j), i.max(j));
    let shortest = (lo..=hi).map(|m| len[m]).min().unwrap();
    out.extend((lo..=hi).filter(|&m| len[m] == shortest));
    out
}

/// All permutations of `0..k`.
pub fn permutations(k: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur: Vec<u32> = (0..k as u32).collect();
    fn heap(m: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if m <= 1 {
            out.push(cur.clone());
            return;
        }
        for i in 0..m {
            heap(m - 1, cur, out);
            let j = if m.is_multiple_of(2) { i } else { 0 };
            cur.swap(j, m - 1);
        }
    }
    heap(k, &mut cur, &mut out);
    out
}

/// Every length pattern with ties allowed (weak orders) on `k` edges.
pub fn weak_orders(k: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; k];
    fn rec(i: usize, k: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == k {
            // keep only patterns whose values are exactly 0..levels
            let mut levels: Vec<u32> = cur.clone();
            levels.sort_unstable();
            levels.dedup();
            if levels.iter().enumerate().all(|(r, &v)| v == r as u32) {
                out.push(cur.clone());
            }
            return;
        }
        for v in 0..k as u32 {
            cur[i] = v;
            rec(i + 1, k, cur, out);
        }
    }
    rec(0, k, &mut cur, &mut out);
    out
}
