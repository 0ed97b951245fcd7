//! Browser bindings for the demo page in `www/`.
//!
//! A [`Demo`] holds one generated instance. The page asks it for the spanner
//! drawing, for the cone picture around a clicked vertex, and for statistics
//! of a distributed run under a chosen schedule seed.

use bdspanner::io::{render_svg, SvgCanvas, SvgStyle};
use bdspanner::spanner::Selection;
use bdspanner::verify::{per_edge_stretch, spanner_ratios};
use bdspanner::{
    bound_spanner_with, build_delaunay, generate_points, run_distributed_with, spanner_stats, ConeLayout,
    DistributedOptions, Point, PointKind, SpannerGraph, Triangulation, VertexId, WedgeRanges,
};
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Largest instance the page will build.
pub const MAX_POINTS: usize = 5000;

const WIDTH: f64 = 720.0;

#[wasm_bindgen]
pub struct Demo {
    t: Triangulation,
    layout: ConeLayout,
    selection: Selection,
    graph: SpannerGraph,
    ranges: WedgeRanges,
}

impl Demo {
    pub fn build(kind: &str, n: usize, seed: u64, inclusive: bool) -> Result<Demo, String> {
        let kind: PointKind = kind.parse().map_err(|e: bdspanner::Error| e.to_string())?;
        if n > MAX_POINTS {
            return Err(format!("at most {MAX_POINTS} points"));
        }
        let pts = generate_points(kind, n, seed).map_err(|e| e.to_string())?;
        let t = build_delaunay(pts).map_err(|e| e.to_string())?;
        let layout = ConeLayout::new(&t);
        let ranges = if inclusive { WedgeRanges::Inclusive } else { WedgeRanges::Literal };
        let selection = bound_spanner_with(&t, &layout, ranges);
        let graph = selection.to_graph(&t);
        Ok(Demo { t, layout, selection, graph, ranges })
    }

    pub fn try_cone_view(&self, vertex: u32) -> Result<String, String> {
        let n = self.t.num_vertices() as u32;
        if vertex >= n {
            return Err(format!("vertex {vertex} out of range (n = {n})"));
        }
        Ok(self.draw_cones(vertex))
    }

    pub fn try_simulate(&self, schedule_seed: u64) -> Result<String, String> {
        let opts = DistributedOptions { schedule_seed, wedge_ranges: self.ranges, trace: false };
        let run = run_distributed_with(&self.t, &self.layout, &opts).map_err(|e| e.to_string())?;
        let stats = spanner_stats(&self.graph);
        let stretch = per_edge_stretch(&self.graph, &self.t);
        let ratios = (self.t.num_vertices() <= 1000).then(|| spanner_ratios(&self.graph, &self.t, 0));
        let doc = json!({
            "stats": stats,
            "dt_edges": self.t.sorted_edges().len(),
            "per_edge_stretch": stretch.max_ratio,
            "global_ratio": ratios.as_ref().map(|r| r.global_ratio),
            "dt_ratio": ratios.as_ref().map(|r| r.dt_ratio),
            "schedule_seed": schedule_seed,
            "metrics": run.metrics,
            "identical": run.selection.canonical() == self.selection.canonical(),
        });
        Ok(serde_json::to_string(&doc).expect("stats serialize"))
    }

    fn draw_cones(&self, v: VertexId) -> String {
        let pts = self.t.points().as_slice();
        let p = pts[v as usize];
        let sys = self.layout.system(v);
        let mut c = SvgCanvas::fit(pts, WIDTH);
        let reach = self.t.neighbors_cw(v).iter().map(|&q| p.distance(&pts[q as usize])).fold(0.0, f64::max) * 1.15;

        for label in 1..=8u8 {
            let (a, b) = sys.sector(label);
            let mut poly = vec![p];
            for s in 0..=12 {
                let th = a + (b - a) * f64::from(s) / 12.0;
                poly.push(Point::new(p.x + reach * th.cos(), p.y + reach * th.sin()));
            }
            let occupied = self
                .selection
                .core
                .iter()
                .any(|&id| self.t.edge(id).touches(v) && self.layout.cones_of_edge(v, id).contains(label));
            c.polygon(&poly, if occupied { "cone full" } else { "cone" });
            let mid = (a + b) / 2.0;
            let at = Point::new(p.x + 0.8 * reach * mid.cos(), p.y + 0.8 * reach * mid.sin());
            c.text(at, &label.to_string(), "label");
        }
        for e in self.t.sorted_edges() {
            c.line(pts[e.u as usize], pts[e.v as usize], "dt");
        }
        let core: std::collections::HashSet<_> = self.graph.core.iter().map(|e| e.key()).collect();
        for e in self.graph.edges() {
            let class = match (core.contains(&e.key()), e.touches(v)) {
                (true, true) => "core at",
                (true, false) => "core",
                (false, true) => "wedge at",
                (false, false) => "wedge",
            };
            c.line(pts[e.u as usize], pts[e.v as usize], class);
        }
        for (i, &q) in pts.iter().enumerate() {
            let class = if i as VertexId == v { "pt apex" } else { "pt" };
            c.circle(q, 2.5, class, Some(i as VertexId));
        }
        c.finish(
            "polygon.cone{fill:#f4d03f;fill-opacity:.12;stroke:#b7950b;stroke-width:.6}\
             polygon.full{fill:#2e86c1;fill-opacity:.18}\
             text.label{font:11px sans-serif;fill:#7d6608;text-anchor:middle}\
             line{stroke-linecap:round}\
             line.dt{stroke:#ccc;stroke-width:.6}\
             line.core{stroke:#1f3b73;stroke-width:1}\
             line.wedge{stroke:#c0392b;stroke-width:1;stroke-dasharray:4 3}\
             line.at{stroke-width:2.4}\
             circle.pt{fill:#111}\
             circle.apex{fill:#e67e22;r:5px}",
        )
    }
}

#[wasm_bindgen]
impl Demo {
    /// Generates `n` points of `kind` and builds the spanner.
    #[wasm_bindgen(constructor)]
    pub fn new(kind: &str, n: u32, seed: u32, inclusive: bool) -> Result<Demo, JsError> {
        Demo::build(kind, n as usize, u64::from(seed), inclusive).map_err(|e| JsError::new(&e))
    }

    pub fn vertices(&self) -> u32 {
        self.t.num_vertices() as u32
    }

    /// Kept edges solid, auxiliary edges dashed.
    pub fn svg(&self) -> String {
        render_svg(&self.graph, &SvgStyle { width: WIDTH, ..SvgStyle::default() })
    }

    /// The eight cones of `vertex`, shaded when they hold a kept edge.
    pub fn cone_view(&self, vertex: u32) -> Result<String, JsError> {
        self.try_cone_view(vertex).map_err(|e| JsError::new(&e))
    }

    /// Runs the distributed simulation and returns statistics as JSON.
    pub fn simulate(&self, schedule_seed: u32) -> Result<String, JsError> {
        self.try_simulate(u64::from(schedule_seed)).map_err(|e| JsError::new(&e))
    }
}
