//! Collections of planes in a common Grassmannian, with pairwise-distance
//! helpers shared by the optimizer, bounds audit, and analysis passes.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::plane::{
    self, chordal_distance, geodesic_distance, max_angle_distance, random_plane, Plane,
};

/// Which of the three distance functions a computation runs under.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Chordal,
    Geodesic,
    MaxAngle,
}

impl Metric {
    /// Distance between two planes under this metric.
    pub fn distance(self, p: &Plane, q: &Plane) -> Result<f64> {
        match self {
            Metric::Chordal => chordal_distance(p, q),
            Metric::Geodesic => geodesic_distance(p, q),
            Metric::MaxAngle => max_angle_distance(p, q),
        }
    }

    pub const ALL: [Metric; 3] = [Metric::Chordal, Metric::Geodesic, Metric::MaxAngle];
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Metric::Chordal => "chordal",
            Metric::Geodesic => "geodesic",
            Metric::MaxAngle => "maxangle",
        })
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "chordal" => Ok(Metric::Chordal),
            "geodesic" => Ok(Metric::Geodesic),
            "maxangle" => Ok(Metric::MaxAngle),
            other => Err(Error::InvalidArgument(format!(
                "unknown metric '{other}' (expected chordal, geodesic, or maxangle)"
            ))),
        }
    }
}

/// N planes in a common G(m, n), tagged with the metric they were built or
/// optimized under.
#[derive(Debug, Clone)]
pub struct Packing {
    m: usize,
    n: usize,
    planes: Vec<Plane>,
    metric: Metric,
}

impl Packing {
    /// Build a packing, verifying every plane lives in the same G(m, n).
    pub fn new(planes: Vec<Plane>, metric: Metric) -> Result<Self> {
        let first = planes
            .first()
            .ok_or_else(|| Error::InvalidArgument("packing needs at least one plane".into()))?;
        let (m, n) = (first.m(), first.n());
        for p in &planes {
            if p.m() != m || p.n() != n {
                return Err(Error::DimensionMismatch {
                    expected_m: m,
                    expected_n: n,
                    got_m: p.m(),
                    got_n: p.n(),
                });
            }
        }
        Ok(Packing { m, n, planes, metric })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of planes N.
    pub fn len(&self) -> usize {
        self.planes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.planes.is_empty()
    }

    pub fn planes(&self) -> &[Plane] {
        &self.planes
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    /// Same planes, retagged with another metric.
    pub fn with_metric(mut self, metric: Metric) -> Self {
        self.metric = metric;
        self
    }

    /// Full symmetric distance matrix under `metric` (zero diagonal).
    pub fn distance_matrix(&self, metric: Metric) -> Result<Vec<Vec<f64>>> {
        let n = self.len();
        let mut d = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in (i + 1)..n {
                let dist = metric.distance(&self.planes[i], &self.planes[j])?;
                d[i][j] = dist;
                d[j][i] = dist;
            }
        }
        Ok(d)
    }
}

/// Minimal pairwise distance of a packing under `metric`, with the first
/// (lexicographically smallest) pair attaining it. Needs at least two planes.
pub fn min_distance(packing: &Packing, metric: Metric) -> Result<(f64, (usize, usize))> {
    if packing.len() < 2 {
        return Err(Error::InvalidArgument(
            "min_distance needs at least two planes".into(),
        ));
    }
    let mut best = f64::INFINITY;
    let mut pair = (0, 0);
    for i in 0..packing.len() {
        for j in (i + 1)..packing.len() {
            let d = metric.distance(&packing.planes()[i], &packing.planes()[j])?;
            if d < best {
                best = d;
                pair = (i, j);
            }
        }
    }
    Ok((best, pair))
}

/// A packing of N independently uniform random planes.
pub fn random_packing<R: Rng>(m: usize, n: usize, count: usize, metric: Metric, rng: &mut R) -> Packing {
    let planes = (0..count).map(|_| random_plane(m, n, rng)).collect();
    Packing { m, n, planes, metric }
}

/// Smallest principal angle over all pairs, in radians. The headline number
/// for line packings, where the single principal angle determines all three
/// metrics.
pub fn min_interplane_angle(packing: &Packing) -> Result<f64> {
    if packing.len() < 2 {
        return Err(Error::InvalidArgument(
            "min_interplane_angle needs at least two planes".into(),
        ));
    }
    let mut best = f64::INFINITY;
    for i in 0..packing.len() {
        for j in (i + 1)..packing.len() {
            let angles = plane::principal_angles(&packing.planes()[i], &packing.planes()[j])?;
            best = best.min(angles.angles()[0]);
        }
    }
    Ok(best)
}
