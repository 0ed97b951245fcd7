//! Point input, graph JSON and SVG output.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::delaunay::Edge;
use crate::error::{Error, Result};
use crate::geom::{Point, PointSet, VertexId};
use crate::spanner::SpannerGraph;

pub const GRAPH_SCHEMA: &str = "bdspanner.graph/1";

/// Parses `x,y` lines. Blank lines and `#` comments are skipped; a first
/// line that does not parse is taken as a header.
pub fn parse_csv(text: &str) -> Result<PointSet> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut pts = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| Error::Parse(e.to_string()))?;
        if rec.iter().all(str::is_empty) {
            continue;
        }
        let parsed = match (rec.get(0), rec.get(1), rec.len()) {
            (Some(x), Some(y), 2) => x.parse::<f64>().ok().zip(y.parse::<f64>().ok()),
            _ => None,
        };
        match parsed {
            Some((x, y)) => pts.push(Point::new(x, y)),
            None if i == 0 => continue,
            None => {
                let line = rec.position().map_or(i as u64 + 1, |p| p.line());
                return Err(Error::Parse(format!("line {line}: expected `x,y`")));
            }
        }
    }
    PointSet::new(pts)
}

#[derive(Deserialize)]
struct PointsFile {
    points: Vec<[f64; 2]>,
}

/// Parses `{"points": [[x, y], ...]}`.
pub fn parse_points_json(text: &str) -> Result<PointSet> {
    let f: PointsFile = serde_json::from_str(text)?;
    PointSet::new(f.points.into_iter().map(Point::from).collect())
}

/// Reads points, choosing the format by extension (`.json` or CSV otherwise).
pub fn read_points(path: &Path) -> Result<PointSet> {
    let text = std::fs::read_to_string(path)?;
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
        parse_points_json(&text)
    } else {
        parse_csv(&text)
    }
}

pub fn points_to_csv(points: &PointSet) -> String {
    let mut out = String::from("x,y\n");
    for p in points.iter() {
        let _ = writeln!(out, "{},{}", p.x, p.y);
    }
    out
}

pub fn points_to_json(points: &PointSet) -> String {
    let pts: Vec<[f64; 2]> = points.iter().map(|p| [p.x, p.y]).collect();
    serde_json::to_string_pretty(&serde_json::json!({ "points": pts })).expect("finite coordinates serialize")
}

/// Where a graph came from. Everything here is reproducible input; there are
/// no timestamps, so identical runs give identical files.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    pub algorithm: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<GeneratorInfo>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub schedule_seeds: Vec<u64>,
    pub wedge_ranges: String,
    pub cone_tolerance: f64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorInfo {
    pub kind: String,
    pub n: usize,
    pub seed: u64,
}

#[derive(Serialize, Deserialize)]
struct GraphFile {
    schema: String,
    points: Vec<[f64; 2]>,
    core_edges: Vec<[VertexId; 2]>,
    wedge_edges: Vec<[VertexId; 2]>,
    provenance: Provenance,
}

pub fn graph_to_json(g: &SpannerGraph, provenance: &Provenance) -> String {
    let keys = |es: &[Edge]| es.iter().map(|e| [e.u, e.v]).collect();
    let f = GraphFile {
        schema: GRAPH_SCHEMA.to_string(),
        points: g.points.iter().map(|p| [p.x, p.y]).collect(),
        core_edges: keys(&g.core),
        wedge_edges: keys(&g.wedge),
        provenance: provenance.clone(),
    };
    serde_json::to_string_pretty(&f).expect("graph serializes")
}

pub fn graph_from_json(text: &str) -> Result<(SpannerGraph, Provenance)> {
    let f: GraphFile = serde_json::from_str(text)?;
    if f.schema != GRAPH_SCHEMA {
        return Err(Error::Parse(format!("unsupported schema {:?}, expected {GRAPH_SCHEMA:?}", f.schema)));
    }
    let points = PointSet::new(f.points.into_iter().map(Point::from).collect())?;
    let n = points.len() as VertexId;
    let edges = |keys: Vec<[VertexId; 2]>| -> Result<Vec<Edge>> {
        keys.into_iter()
            .map(|[a, b]| {
                if a >= n || b >= n || a == b {
                    return Err(Error::Parse(format!("bad edge {a}-{b}")));
                }
                Ok(Edge::new(&points, a, b))
            })
            .collect()
    };
    let core = edges(f.core_edges)?;
    let wedge = edges(f.wedge_edges)?;
    Ok((SpannerGraph::new(points.clone(), core, wedge), f.provenance))
}

/// A minimal SVG writer in data coordinates (y up).
pub struct SvgCanvas {
    body: String,
    x0: f64,
    y1: f64,
    scale: f64,
    width: f64,
    height: f64,
}

impl SvgCanvas {
    /// Fits the bounding box of `points` into a `width` pixel wide image.
    pub fn fit(points: &[Point], width: f64) -> Self {
        let (mut x0, mut y0, mut x1, mut y1) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
        for p in points {
            x0 = x0.min(p.x);
            y0 = y0.min(p.y);
            x1 = x1.max(p.x);
            y1 = y1.max(p.y);
        }
        if points.is_empty() {
            (x0, y0, x1, y1) = (0.0, 0.0, 1.0, 1.0);
        }
        let span = (x1 - x0).max(y1 - y0).max(1e-300);
        let pad = 0.04 * span;
        let scale = width / (span + 2.0 * pad);
        let height = ((y1 - y0) + 2.0 * pad) * scale;
        SvgCanvas { body: String::new(), x0: x0 - pad, y1: y1 + pad, scale, width, height: height.max(1.0) }
    }

    fn map(&self, p: Point) -> (f64, f64) {
        ((p.x - self.x0) * self.scale, (self.y1 - p.y) * self.scale)
    }

    pub fn line(&mut self, a: Point, b: Point, class: &str) {
        let ((x1, y1), (x2, y2)) = (self.map(a), self.map(b));
        let _ = writeln!(self.body, r#"<line class="{class}" x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}"/>"#);
    }

    pub fn circle(&mut self, c: Point, radius_px: f64, class: &str, id: Option<VertexId>) {
        let (x, y) = self.map(c);
        let data = id.map(|v| format!(r#" data-id="{v}""#)).unwrap_or_default();
        let _ = writeln!(self.body, r#"<circle class="{class}"{data} cx="{x:.3}" cy="{y:.3}" r="{radius_px:.3}"/>"#);
    }

    /// A closed polygon in data coordinates.
    pub fn polygon(&mut self, pts: &[Point], class: &str) {
        let coords: Vec<String> = pts
            .iter()
            .map(|&p| {
                let (x, y) = self.map(p);
                format!("{x:.3},{y:.3}")
            })
            .collect();
        let _ = writeln!(self.body, r#"<polygon class="{class}" points="{}"/>"#, coords.join(" "));
    }

    pub fn text(&mut self, at: Point, s: &str, class: &str) {
        let (x, y) = self.map(at);
        let _ = writeln!(self.body, r#"<text class="{class}" x="{x:.3}" y="{y:.3}">{s}</text>"#);
    }

    pub fn finish(self, style: &str) -> String {
        let (w, h) = (self.width, self.height);
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {w:.3} {h:.3}\" width=\"{w:.0}\" height=\"{h:.0}\">\n<style>{style}</style>\n{}</svg>\n",
            self.body
        )
    }
}

#[derive(Clone, Debug)]
pub struct SvgStyle {
    pub width: f64,
    pub point_radius: f64,
}

impl Default for SvgStyle {
    fn default() -> Self {
        SvgStyle { width: 800.0, point_radius: 2.5 }
    }
}

/// Draws `E` solid and `E* \ E` dashed: one line per edge of the union, one
/// circle per point.
pub fn render_svg(g: &SpannerGraph, style: &SvgStyle) -> String {
    let pts = g.points.as_slice();
    let mut c = SvgCanvas::fit(pts, style.width);
    let core: std::collections::HashSet<_> = g.core.iter().map(Edge::key).collect();
    for e in g.edges() {
        let class = if core.contains(&e.key()) { "core" } else { "wedge" };
        c.line(pts[e.u as usize], pts[e.v as usize], class);
    }
    for (i, &p) in pts.iter().enumerate() {
        c.circle(p, style.point_radius, "pt", Some(i as VertexId));
    }
    c.finish(
        "line{stroke:#1f3b73;stroke-width:1.2;stroke-linecap:round}\
         line.wedge{stroke:#c0392b;stroke-dasharray:4 3}\
         circle.pt{fill:#111}",
    )
}
