//! Deterministic point generators.

use std::collections::HashSet;
use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{Point, PointSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PointKind {
    /// Uniform in the unit square.
    Uniform,
    /// A jittered square grid.
    GridJitter,
    /// Gaussian blobs around uniform centers.
    Clusters,
    /// Near-cocircular points on the circle of radius 1/2 centered at (1/2, 1/2).
    Ring,
}

impl PointKind {
    pub const ALL: [PointKind; 4] = [PointKind::Uniform, PointKind::GridJitter, PointKind::Clusters, PointKind::Ring];

    pub fn name(self) -> &'static str {
        match self {
            PointKind::Uniform => "uniform",
            PointKind::GridJitter => "grid-jitter",
            PointKind::Clusters => "clusters",
            PointKind::Ring => "ring",
        }
    }
}

impl fmt::Display for PointKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PointKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PointKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidParameters(format!("unknown point kind {s:?}")))
    }
}

/// Largest relative deviation from the circle for [`PointKind::Ring`].
pub const RING_JITTER: f64 = 1e-9;

const MAX_ATTEMPTS: usize = 1000;

/// `n` distinct points of the given kind; identical for identical arguments.
pub fn generate_points(kind: PointKind, n: usize, seed: u64) -> Result<PointSet> {
    if n < 2 {
        return Err(Error::InvalidParameters(format!("need n >= 2, got {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sampler = Sampler::new(kind, n, &mut rng);
    let mut seen = HashSet::with_capacity(n);
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut attempts = 0;
        loop {
            let p = sampler.sample(i, &mut rng);
            if seen.insert((p.x.to_bits(), p.y.to_bits())) {
                out.push(p);
                break;
            }
            attempts += 1;
            if attempts == MAX_ATTEMPTS {
                return Err(Error::InvalidParameters(format!("could not draw {n} distinct {kind} points")));
            }
        }
    }
    PointSet::new(out)
}

enum Sampler {
    Uniform,
    Grid { side: usize, cell: f64 },
    Clusters { centers: Vec<Point>, spread: Normal<f64> },
    Ring,
}

impl Sampler {
    fn new(kind: PointKind, n: usize, rng: &mut impl Rng) -> Self {
        match kind {
            PointKind::Uniform => Sampler::Uniform,
            PointKind::GridJitter => {
                let side = (n as f64).sqrt().ceil() as usize;
                Sampler::Grid { side, cell: 1.0 / side as f64 }
            }
            PointKind::Clusters => {
                let k = ((n as f64).sqrt() / 2.0).ceil().max(1.0) as usize;
                let centers = (0..k).map(|_| Point::new(rng.random(), rng.random())).collect();
                let sigma = 0.5 / (k as f64 * 4.0);
                Sampler::Clusters { centers, spread: Normal::new(0.0, sigma).expect("positive sigma") }
            }
            PointKind::Ring => Sampler::Ring,
        }
    }

    fn sample(&mut self, i: usize, rng: &mut impl Rng) -> Point {
        match self {
            Sampler::Uniform => Point::new(rng.random(), rng.random()),
            Sampler::Grid { side, cell } => {
                let (gx, gy) = ((i % *side) as f64, (i / *side) as f64);
                let jx: f64 = rng.random_range(-0.25..0.25);
                let jy: f64 = rng.random_range(-0.25..0.25);
                Point::new((gx + 0.5 + jx) * *cell, (gy + 0.5 + jy) * *cell)
            }
            Sampler::Clusters { centers, spread } => {
                let c = centers[rng.random_range(0..centers.len())];
                Point::new(c.x + spread.sample(rng), c.y + spread.sample(rng))
            }
            Sampler::Ring => {
                let theta: f64 = rng.random_range(0.0..TAU);
                let r = 0.5 * (1.0 + rng.random_range(-RING_JITTER..=RING_JITTER));
                Point::new(0.5 + r * theta.cos(), 0.5 + r * theta.sin())
            }
        }
    }
}
