//! Embedding diagnostics and tours: how many dimensions a packing really
//! spans, explicit sphere coordinates realizing the chordal metric, and a
//! short closed walk through all planes.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::bounds::embedding_dimension_theory;
use crate::error::{Error, Result};
use crate::packing::{Metric, Packing};
use crate::plane::projection_matrix;

/// Two-opt moves are applied only while they shorten the tour by more than
/// this, which guarantees termination.
const TWO_OPT_GAIN: f64 = 1e-12;

/// Spectral summary of the double-centered Gram matrix of a packing's
/// distances.
#[derive(Clone, Debug)]
pub struct EmbeddingReport {
    /// Number of eigenvalues above `tol` times the largest: the dimension
    /// the distance set actually spans.
    pub d_found: usize,
    /// Dimension (m-1)(m+2)/2 of the ambient embedding space for G(m, n).
    pub d_theory: usize,
    /// Root mean square distance of the embedded points from their
    /// centroid. For a packing whose projections average to n/m times the
    /// identity this equals sqrt(n(m-n)/(2m)), the radius of the sphere
    /// carrying all of G(m, n) in the chordal-isometric scaling.
    pub radius: f64,
    /// Eigenvalues of the centered Gram matrix, descending.
    pub gram_eigenvalues: Vec<f64>,
    /// Relative rank tolerance the counts were taken at.
    pub tol: f64,
}

impl EmbeddingReport {
    /// True when some eigenvalue is below `-tol` times the largest: the
    /// distances admit no Euclidean embedding. Expected for geodesic
    /// distances, never for chordal ones.
    pub fn negative_eigenvalue(&self) -> bool {
        let largest = self
            .gram_eigenvalues
            .first()
            .copied()
            .unwrap_or(0.0)
            .max(0.0);
        self.gram_eigenvalues
            .iter()
            .any(|&l| l < -self.tol * largest)
    }
}

/// Measures the dimension spanned by a packing's distances under its own
/// metric.
///
/// Classical scaling: with squared distances D2 and the centering J = I -
/// 11^T/N, the matrix B = -J D2 J / 2 is the Gram matrix of any point set
/// realizing the distances, centered on its centroid. Its positive
/// eigenvalue count (relative tolerance `tol`) is the embedding dimension;
/// eigenvalues below -tol times the largest mean no embedding exists.
pub fn embedding_dimension(packing: &Packing, tol: f64) -> Result<EmbeddingReport> {
    let count = packing.len();
    if count < 2 {
        return Err(Error::InvalidArgument(format!(
            "embedding dimension needs at least 2 planes, got {count}"
        )));
    }
    let dist = packing.distance_matrix(packing.metric())?;
    let sq = |x: f64| x * x;
    let row_mean: Vec<f64> = dist
        .iter()
        .map(|row| row.iter().map(|&d| sq(d)).sum::<f64>() / count as f64)
        .collect();
    let total_mean = row_mean.iter().sum::<f64>() / count as f64;
    let b = DMatrix::from_fn(count, count, |i, j| {
        -0.5 * (sq(dist[i][j]) - row_mean[i] - row_mean[j] + total_mean)
    });
    let mean_diag = b.diagonal().sum() / count as f64;
    let eigen = SymmetricEigen::new(b);
    let mut eigs: Vec<f64> = eigen.eigenvalues.iter().copied().collect();
    eigs.sort_by(|a, b| b.total_cmp(a));
    let largest = eigs[0].max(0.0);
    let d_found = eigs.iter().filter(|&&l| l > tol * largest).count();
    Ok(EmbeddingReport {
        d_found,
        d_theory: embedding_dimension_theory(packing.m()),
        radius: mean_diag.max(0.0).sqrt(),
        gram_eigenvalues: eigs,
        tol,
    })
}

/// Embeds each plane as a point in R^{(m-1)(m+2)/2} so that Euclidean
/// distance equals chordal distance.
///
/// Coordinates are the de-traced projection matrix P - (n/m) I expanded in
/// an orthonormal basis of traceless symmetric matrices (off-diagonal
/// pairs, then a diagonal ladder) and scaled by 1/sqrt(2); every point then
/// lies at distance sqrt(n(m-n)/(2m)) from the origin, and complementary
/// planes land on antipodal points.
pub fn embed_points(packing: &Packing) -> Vec<Vec<f64>> {
    let m = packing.m();
    let n = packing.n();
    let shift = n as f64 / m as f64;
    packing
        .planes()
        .iter()
        .map(|plane| {
            let proj = projection_matrix(plane);
            let mut pbar = proj.matrix().clone();
            for i in 0..m {
                pbar[(i, i)] -= shift;
            }
            let mut coords = Vec::with_capacity(embedding_dimension_theory(m));
            for i in 0..m {
                for j in (i + 1)..m {
                    // <Pbar, (E_ij + E_ji)/sqrt(2)> / sqrt(2)
                    coords.push(pbar[(i, j)]);
                }
            }
            for k in 1..m {
                // <Pbar, diag(1, ..., 1, -k, 0, ...)/sqrt(k(k+1))> / sqrt(2)
                let kf = k as f64;
                let partial: f64 = (0..k).map(|j| pbar[(j, j)]).sum();
                coords.push((partial - kf * pbar[(k, k)]) / (2.0 * kf * (kf + 1.0)).sqrt());
            }
            coords
        })
        .collect()
}

/// A closed walk visiting every plane once, with its chordal edge lengths.
#[derive(Clone, Debug)]
pub struct Tour {
    /// Visiting order: a permutation of the plane indices; the cycle closes
    /// from the last entry back to the first.
    pub order: Vec<usize>,
    /// Sum of chordal distances over the cycle edges.
    pub total_length: f64,
    /// Shortest cycle edge.
    pub min_edge: f64,
    /// Longest cycle edge.
    pub max_edge: f64,
}

/// Builds a short closed tour through all planes under chordal distance:
/// nearest-neighbor construction from plane 0, then repeated best
/// 2-opt exchanges until none improves. Deterministic in the plane order;
/// locally 2-opt optimal, not guaranteed globally minimal.
pub fn tour(packing: &Packing) -> Result<Tour> {
    let count = packing.len();
    if count < 3 {
        return Err(Error::InvalidArgument(format!(
            "a tour needs at least 3 planes, got {count}"
        )));
    }
    let dist = packing.distance_matrix(Metric::Chordal)?;
    let mut order = vec![0];
    let mut visited = vec![false; count];
    visited[0] = true;
    while order.len() < count {
        let last = *order.last().expect("order starts nonempty");
        let next = (0..count)
            .filter(|&j| !visited[j])
            .min_by(|&a, &b| dist[last][a].total_cmp(&dist[last][b]))
            .expect("unvisited planes remain");
        visited[next] = true;
        order.push(next);
    }
    two_opt(&mut order, &dist);
    let edges: Vec<f64> = (0..count)
        .map(|k| dist[order[k]][order[(k + 1) % count]])
        .collect();
    Ok(Tour {
        order,
        total_length: edges.iter().sum(),
        min_edge: edges.iter().copied().fold(f64::INFINITY, f64::min),
        max_edge: edges.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    })
}

/// Applies the best available 2-opt exchange until no exchange shortens the
/// cycle by more than [`TWO_OPT_GAIN`]. Reversing `order[i..=j]` replaces
/// the edges into `order[i]` and out of `order[j]`.
fn two_opt(order: &mut [usize], dist: &[Vec<f64>]) {
    let count = order.len();
    loop {
        let mut best_gain = TWO_OPT_GAIN;
        let mut best = None;
        for i in 0..count - 1 {
            for j in i + 1..count {
                if i == 0 && j == count - 1 {
                    // reversing the whole cycle changes nothing
                    continue;
                }
                let before = order[(i + count - 1) % count];
                let start = order[i];
                let end = order[j];
                let after = order[(j + 1) % count];
                let gain = dist[before][start] + dist[end][after]
                    - dist[before][end]
                    - dist[start][after];
                if gain > best_gain {
                    best_gain = gain;
                    best = Some((i, j));
                }
            }
        }
        match best {
            Some((i, j)) => order[i..=j].reverse(),
            None => break,
        }
    }
}
