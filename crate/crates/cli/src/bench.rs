use std::path::PathBuf;
use std::time::Instant;

use anyhow::Result;
use bdspanner::{
    bound_spanner_with, build_delaunay, generate_points, run_distributed_with, ConeLayout, DistributedOptions,
    PointKind, WedgeRanges,
};
use clap::Args;
use serde::Serialize;

use super::{input, parse_kind, write_file, InputError};

#[derive(Args)]
pub struct BenchArgs {
    /// Comma-separated point counts.
    #[arg(long, value_delimiter = ',', default_values_t = [1000usize, 2000, 4000, 8000])]
    sizes: Vec<usize>,
    /// Repetitions per size; the table shows medians.
    #[arg(long, default_value_t = 3)]
    reps: usize,
    #[arg(long, value_parser = parse_kind, default_value = "uniform")]
    kind: PointKind,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also write the rows as JSON.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Serialize)]
struct Row {
    n: usize,
    dt_ms: f64,
    seq_ms: f64,
    dist_ms: f64,
    pops: usize,
    rounds: usize,
    /// Pops relative to the previous size.
    pop_ratio: Option<f64>,
    /// Sequential time relative to the previous size.
    seq_ratio: Option<f64>,
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len().is_multiple_of(2) {
        (v[m - 1] + v[m]) / 2.0
    } else {
        v[m]
    }
}

fn ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

pub fn run(a: &BenchArgs) -> Result<()> {
    if a.reps == 0 || a.sizes.is_empty() {
        return Err(InputError("need at least one size and one repetition".into()).into());
    }
    let mut rows: Vec<Row> = Vec::new();
    for &n in &a.sizes {
        let (mut dt, mut seq, mut dist, mut pops, mut rounds) = (vec![], vec![], vec![], vec![], vec![]);
        for r in 0..a.reps as u64 {
            let pts = input(generate_points(a.kind, n, a.seed.wrapping_add(r)), "generator")?;
            let start = Instant::now();
            let t = input(build_delaunay(pts), "points")?;
            dt.push(ms(start));

            let start = Instant::now();
            let layout = ConeLayout::new(&t);
            let sel = bound_spanner_with(&t, &layout, WedgeRanges::Literal);
            seq.push(ms(start));
            std::hint::black_box(sel);

            let start = Instant::now();
            let run = run_distributed_with(
                &t,
                &ConeLayout::new(&t),
                &DistributedOptions { schedule_seed: r, ..Default::default() },
            )?;
            dist.push(ms(start));
            pops.push(run.metrics.pops as f64);
            rounds.push(run.metrics.rounds as f64);
        }
        let prev = rows.last();
        let row = Row {
            n,
            dt_ms: median(dt),
            seq_ms: median(seq),
            dist_ms: median(dist),
            pops: median(pops) as usize,
            rounds: median(rounds) as usize,
            pop_ratio: None,
            seq_ratio: None,
        };
        let row = Row {
            pop_ratio: prev.map(|p| row.pops as f64 / p.pops as f64),
            seq_ratio: prev.map(|p| row.seq_ms / p.seq_ms),
            ..row
        };
        rows.push(row);
    }

    let ratio = |r: Option<f64>| r.map_or_else(|| "-".to_string(), |v| format!("{v:.3}"));
    println!(
        "{:>8} {:>10} {:>10} {:>10} {:>10} {:>7} {:>9} {:>9}",
        "n", "dt_ms", "seq_ms", "dist_ms", "pops", "rounds", "pop_x", "seq_x"
    );
    for r in &rows {
        println!(
            "{:>8} {:>10.3} {:>10.3} {:>10.3} {:>10} {:>7} {:>9} {:>9}",
            r.n,
            r.dt_ms,
            r.seq_ms,
            r.dist_ms,
            r.pops,
            r.rounds,
            ratio(r.pop_ratio),
            ratio(r.seq_ratio)
        );
    }
    if let Some(path) = &a.json {
        write_file(path, &(serde_json::to_string_pretty(&rows)? + "\n"))?;
    }
    Ok(())
}
