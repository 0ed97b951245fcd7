//! Bounded-degree planar spanners extracted from the Delaunay triangulation.
//!
//! The output is a plane subgraph of the Delaunay triangulation built to have
//! maximum degree 7 and stretch at most `(1 + sqrt 2)^2 * delta`, where
//! `delta` is the stretch of the triangulation. The degree target can be
//! missed (see `tests/fixtures/degree8.csv`); [`verify`] reports it.
//!
//! ```
//! use bdspanner::{build_delaunay, bound_spanner, PointSet};
//!
//! let pts = PointSet::from_xy([(0.0, 0.0), (4.0, 0.0), (1.0, 2.0), (3.0, 3.0)]).unwrap();
//! let dt = build_delaunay(pts).unwrap();
//! let g = bound_spanner(&dt);
//! assert!(g.max_degree() <= 7);
//! ```

pub mod delaunay;
pub mod distributed;
pub mod error;
pub mod gen;
pub mod geom;
pub mod io;
pub mod spanner;
pub mod verify;

pub use delaunay::{build_delaunay, Edge, EdgeId, Triangulation, Wedge};
pub use distributed::{run_distributed, run_distributed_with, DistributedOptions, DistributedRun, SimulationMetrics};
pub use error::{Error, Result};
pub use gen::{generate_points, PointKind};
pub use geom::{ConeSet, ConeSystem, Point, PointSet, VertexId};
pub use spanner::{
    bound_spanner, bound_spanner_with, spanner_stats, ConeLayout, Selection, SpannerGraph, SpannerStats, WedgeRanges,
};
pub use verify::{verify, VerificationReport, VerifyOptions, STRETCH_BOUND};
