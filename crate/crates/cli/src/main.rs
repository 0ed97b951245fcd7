//! `bdspanner`: generate points, build and verify spanners, benchmark, render.
//!
//! Exit status: 0 on success, 2 when a verification check fails, 3 on bad
//! input, 1 on anything else.

mod bench;

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use bdspanner::io::{self, GeneratorInfo, Provenance, SvgStyle};
use bdspanner::verify::DEFAULT_TOLERANCE;
use bdspanner::{
    bound_spanner_with, build_delaunay, generate_points, run_distributed_with, verify, ConeLayout, DistributedOptions,
    PointKind, PointSet, SimulationMetrics, SpannerGraph, Triangulation, VerificationReport, VerifyOptions,
    WedgeRanges,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

#[derive(Parser)]
#[command(name = "bdspanner", version, about = "Degree-7 planar spanners from the Delaunay triangulation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated point set as CSV or JSON.
    Gen(GenArgs),
    /// Build the spanner, verify it and write the artifacts.
    Build(BuildArgs),
    /// Re-verify a graph file.
    Verify(VerifyArgs),
    /// Time triangulation and both constructions over a range of sizes.
    Bench(bench::BenchArgs),
    /// Draw a graph file as SVG.
    Render(RenderArgs),
}

#[derive(Args)]
struct GeneratorArgs {
    /// Point distribution.
    #[arg(long, value_parser = parse_kind, default_value = "uniform")]
    kind: PointKind,
    /// Number of points.
    #[arg(short, long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    gen: GeneratorArgs,
    #[arg(long, value_enum, default_value_t = PointFormat::Csv)]
    format: PointFormat,
    /// Output file (stdout if omitted).
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum PointFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algorithm {
    Seq,
    Dist,
    Both,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Seq => "seq",
            Algorithm::Dist => "dist",
            Algorithm::Both => "both",
        })
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Ranges {
    Literal,
    Inclusive,
}

impl From<Ranges> for WedgeRanges {
    fn from(r: Ranges) -> Self {
        match r {
            Ranges::Literal => WedgeRanges::Literal,
            Ranges::Inclusive => WedgeRanges::Inclusive,
        }
    }
}

#[derive(Args)]
struct CheckArgs {
    /// Relative tolerance for the metric checks.
    #[arg(long, env = "BDSPANNER_TOLERANCE", default_value_t = DEFAULT_TOLERANCE)]
    tolerance: f64,
    /// Random configurations per lemma check (0 skips the suite).
    #[arg(long, default_value_t = 0)]
    lemma_trials: usize,
    /// Seed for the lemma suite and for source sampling.
    #[arg(long, default_value_t = 0)]
    verify_seed: u64,
}

impl CheckArgs {
    fn options(&self) -> VerifyOptions {
        VerifyOptions { tolerance: self.tolerance, lemma_trials: self.lemma_trials, seed: self.verify_seed }
    }
}

#[derive(Args)]
struct BuildArgs {
    /// Points file (`x,y` CSV or `{"points": [[x, y], ...]}` JSON).
    #[arg(short, long, conflicts_with = "n")]
    input: Option<PathBuf>,
    #[command(flatten)]
    gen: GeneratorArgs,
    #[arg(long, value_enum, default_value_t = Algorithm::Seq)]
    algorithm: Algorithm,
    /// Scheduler seed for the distributed run; repeat for several runs.
    #[arg(long = "schedule-seed", default_values_t = [0u64])]
    schedule_seeds: Vec<u64>,
    #[arg(long, value_enum, default_value_t = Ranges::Literal)]
    wedge_ranges: Ranges,
    /// Angular slack for deciding that an edge lies on a cone boundary.
    #[arg(long, default_value_t = bdspanner::geom::DEFAULT_CONE_TOLERANCE)]
    cone_tolerance: f64,
    #[command(flatten)]
    check: CheckArgs,
    /// Graph JSON output.
    #[arg(long, default_value = "graph.json")]
    graph: PathBuf,
    /// Verification report output.
    #[arg(long, default_value = "report.json")]
    report: PathBuf,
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Simulation metrics output (distributed runs only).
    #[arg(long)]
    metrics: Option<PathBuf>,
    /// Per-round trace of the first distributed run.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    graph: PathBuf,
    #[command(flatten)]
    check: CheckArgs,
    /// Report output (stdout if omitted).
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct RenderArgs {
    graph: PathBuf,
    #[arg(short, long)]
    output: PathBuf,
    #[arg(long, default_value_t = 800.0)]
    width: f64,
}

fn parse_kind(s: &str) -> Result<PointKind, String> {
    s.parse().map_err(|e: bdspanner::Error| e.to_string())
}

/// Bad user input: unreadable files, malformed points, impossible parameters.
#[derive(Debug)]
struct InputError(String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

#[derive(Debug)]
struct VerificationFailed(Vec<String>);

impl fmt::Display for VerificationFailed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "verification failed:")?;
        for line in &self.0 {
            write!(f, "\n  {line}")?;
        }
        Ok(())
    }
}

impl std::error::Error for VerificationFailed {}

fn input<T>(r: bdspanner::Result<T>, what: impl fmt::Display) -> Result<T> {
    r.map_err(|e| InputError(format!("{what}: {e}")).into())
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn report_json(r: &VerificationReport) -> String {
    serde_json::to_string_pretty(r).expect("report serializes") + "\n"
}

fn exit_code(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<VerificationFailed>().is_some() {
        2
    } else if e.downcast_ref::<InputError>().is_some() {
        3
    } else {
        1
    }
}

fn generated(g: &GeneratorArgs) -> Result<(PointSet, GeneratorInfo)> {
    let n = g.n.ok_or_else(|| InputError("either --input or -n is required".into()))?;
    let pts = input(generate_points(g.kind, n, g.seed), "generator")?;
    Ok((pts, GeneratorInfo { kind: g.kind.name().to_string(), n, seed: g.seed }))
}

fn cmd_gen(a: &GenArgs) -> Result<()> {
    let (pts, _) = generated(&a.gen)?;
    let text = match a.format {
        PointFormat::Csv => io::points_to_csv(&pts),
        PointFormat::Json => io::points_to_json(&pts) + "\n",
    };
    match &a.output {
        Some(path) => write_file(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn triangulate(pts: PointSet) -> Result<Triangulation> {
    input(build_delaunay(pts), "points")
}

fn cmd_build(a: &BuildArgs) -> Result<()> {
    let (pts, generator, source) = match &a.input {
        Some(path) => {
            let pts = input(io::read_points(path), path.display())?;
            (pts, None, Some(path.display().to_string()))
        }
        None => {
            let (pts, info) = generated(&a.gen)?;
            (pts, Some(info), None)
        }
    };
    if !(a.cone_tolerance >= 0.0 && a.cone_tolerance < 0.1) {
        return Err(InputError(format!("cone tolerance {} out of range [0, 0.1)", a.cone_tolerance)).into());
    }
    let t = triangulate(pts)?;
    let layout = ConeLayout::with_tolerance(&t, a.cone_tolerance);
    let ranges = WedgeRanges::from(a.wedge_ranges);

    let seq = matches!(a.algorithm, Algorithm::Seq | Algorithm::Both).then(|| bound_spanner_with(&t, &layout, ranges));
    let mut runs: Vec<(u64, SimulationMetrics)> = Vec::new();
    let mut mismatched = Vec::new();
    let mut selection = seq.clone();
    if a.algorithm != Algorithm::Seq {
        for (k, &seed) in a.schedule_seeds.iter().enumerate() {
            let opts =
                DistributedOptions { schedule_seed: seed, wedge_ranges: ranges, trace: k == 0 && a.trace.is_some() };
            let run = run_distributed_with(&t, &layout, &opts)?;
            if let (Some(path), true) = (&a.trace, k == 0) {
                write_file(path, &(run.trace.join("\n") + "\n"))?;
            }
            let same = selection.as_ref().is_none_or(|s| s.canonical() == run.selection.canonical());
            if !same {
                mismatched.push(seed);
            }
            selection.get_or_insert(run.selection);
            runs.push((seed, run.metrics));
        }
    }
    let g: SpannerGraph = selection.expect("at least one construction ran").to_graph(&t);

    let provenance = Provenance {
        tool: "bdspanner".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        algorithm: a.algorithm.to_string(),
        generator,
        input: source,
        schedule_seeds: if a.algorithm == Algorithm::Seq { Vec::new() } else { a.schedule_seeds.clone() },
        wedge_ranges: serde_json::to_value(ranges)?.as_str().unwrap_or_default().to_string(),
        cone_tolerance: a.cone_tolerance,
    };
    write_file(&a.graph, &(io::graph_to_json(&g, &provenance) + "\n"))?;
    if let Some(path) = &a.svg {
        write_file(path, &io::render_svg(&g, &SvgStyle::default()))?;
    }
    if let Some(path) = &a.metrics {
        let rows: Vec<_> = runs.iter().map(|(seed, m)| json!({ "schedule_seed": seed, "metrics": m })).collect();
        write_file(path, &(serde_json::to_string_pretty(&rows)? + "\n"))?;
    }

    let report = verify(&g, &t, &a.check.options());
    write_file(&a.report, &report_json(&report))?;

    println!(
        "n={} dt_edges={} core={} wedge={} max_degree={} stretch={:.6} global={:.6} dt_ratio={:.6}",
        report.vertices,
        report.dt_edges,
        report.core_edges,
        report.wedge_edges,
        report.max_degree,
        report.per_edge_stretch_max,
        report.global_spanner_ratio,
        report.dt_spanner_ratio
    );
    for (seed, m) in &runs {
        println!(
            "schedule_seed={seed} rounds={} pops={} commits={} max_wait={}",
            m.rounds, m.pops, m.commits, m.max_wait
        );
    }

    let mut failures = report.failures();
    if !mismatched.is_empty() {
        failures.push(format!("distributed output differs from sequential for schedule seeds {mismatched:?}"));
    } else if a.algorithm == Algorithm::Both {
        println!("identity: sequential and distributed outputs match for {} schedule seeds", runs.len());
    }
    if failures.is_empty() {
        println!("pass");
        Ok(())
    } else {
        Err(VerificationFailed(failures).into())
    }
}

fn load_graph(path: &Path) -> Result<(SpannerGraph, Provenance)> {
    let text = fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    input(io::graph_from_json(&text), path.display())
}

fn cmd_verify(a: &VerifyArgs) -> Result<()> {
    let (g, _) = load_graph(&a.graph)?;
    let t = triangulate(g.points.clone())?;
    let report = verify(&g, &t, &a.check.options());
    let text = report_json(&report);
    match &a.report {
        Some(path) => write_file(path, &text)?,
        None => print!("{text}"),
    }
    let failures = report.failures();
    if failures.is_empty() {
        Ok(())
    } else {
        Err(VerificationFailed(failures).into())
    }
}

fn cmd_render(a: &RenderArgs) -> Result<()> {
    let (g, _) = load_graph(&a.graph)?;
    if !(a.width.is_finite() && a.width > 0.0) {
        return Err(InputError(format!("width must be positive, got {}", a.width)).into());
    }
    write_file(&a.output, &io::render_svg(&g, &SvgStyle { width: a.width, ..SvgStyle::default() }))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Build(a) => cmd_build(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Bench(a) => bench::run(a),
        Command::Render(a) => cmd_render(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
