//! Upper bounds on how far apart N planes in G(m, n) can sit under the
//! chordal metric, and an audit that scores a packing against them.
//!
//! Both bounds come from the trace embedding of G(m, n) onto a sphere of
//! radius sqrt(n(m-n)/m) in dimension D = (m-1)(m+2)/2: the simplex bound is
//! the best possible simplex of N points on that sphere, the orthoplex bound
//! the regular-orthoplex ceiling that takes over once N exceeds D + 1.

use crate::error::{Error, Result};
use crate::packing::{min_distance, Metric, Packing};

/// Embedding dimension D = (m-1)(m+2)/2 of G(m, n) for any n.
pub fn embedding_dimension_theory(m: usize) -> usize {
    (m - 1) * (m + 2) / 2
}

/// Simplex bound: d_c^2 <= min{ n, m-n, (n(m-n)/m) * N/(N-1) }.
///
/// The distance cap is min(n, m-n) because at most that many principal
/// angles are nonzero; for the usual convention n <= m/2 it reads n.
/// Equality requires N <= D + 1.
pub fn simplex_bound(m: usize, n: usize, count: usize) -> Result<f64> {
    check_args(m, n, count)?;
    let s = n as f64 * (m - n) as f64 / m as f64;
    Ok((s * count as f64 / (count as f64 - 1.0)).min(n.min(m - n) as f64))
}

/// Orthoplex bound: d_c^2 <= n(m-n)/m, binding for N > D + 1.
///
/// Equality requires N <= 2D.
pub fn orthoplex_bound(m: usize, n: usize) -> Result<f64> {
    if n < 1 || n >= m {
        return Err(Error::InvalidArgument(format!(
            "bounds need 1 <= n < m, got n = {n}, m = {m}"
        )));
    }
    Ok(n as f64 * (m - n) as f64 / m as f64)
}

fn check_args(m: usize, n: usize, count: usize) -> Result<()> {
    if n < 1 || n >= m {
        return Err(Error::InvalidArgument(format!(
            "bounds need 1 <= n < m, got n = {n}, m = {m}"
        )));
    }
    if count < 2 {
        return Err(Error::InvalidArgument(format!(
            "bounds need at least 2 planes, got {count}"
        )));
    }
    Ok(())
}

/// Scorecard of a packing against the applicable chordal-distance bound.
#[derive(Debug, Clone)]
pub struct BoundReport {
    pub m: usize,
    pub n: usize,
    pub count: usize,
    /// Embedding dimension D = (m-1)(m+2)/2.
    pub embedding_dim: usize,
    /// Achieved minimal squared chordal distance.
    pub achieved_sq: f64,
    pub simplex_bound: f64,
    /// Present only in the orthoplex regime N > D + 1.
    pub orthoplex_bound: Option<f64>,
    /// achieved / applicable bound.
    pub ratio: f64,
    /// True when the packing attains the applicable bound (ratio within
    /// 1e-7), and attainment is not already ruled out by N > 2D.
    pub meets: bool,
}

impl BoundReport {
    /// The bound the ratio is taken against: simplex for N <= D + 1, else the
    /// orthoplex bound.
    pub fn applicable_bound(&self) -> f64 {
        self.orthoplex_bound.unwrap_or(self.simplex_bound)
    }
}

/// Audit a packing: compute its minimal squared chordal distance and compare
/// against the applicable bound.
pub fn audit(packing: &Packing) -> Result<BoundReport> {
    let (m, n, count) = (packing.m(), packing.n(), packing.len());
    check_args(m, n, count)?;
    let embedding_dim = embedding_dimension_theory(m);
    let (min_dc, _) = min_distance(packing, Metric::Chordal)?;
    let achieved_sq = min_dc * min_dc;
    let simplex = simplex_bound(m, n, count)?;
    let orthoplex = if count > embedding_dim + 1 {
        Some(orthoplex_bound(m, n)?)
    } else {
        None
    };
    let applicable = orthoplex.unwrap_or(simplex);
    let ratio = achieved_sq / applicable;
    // Beyond N = 2D a regular orthoplex no longer fits, so equality cannot
    // be claimed no matter how close the ratio lands.
    let meets = ratio > 1.0 - 1e-7 && count <= 2 * embedding_dim;
    Ok(BoundReport {
        m,
        n,
        count,
        embedding_dim,
        achieved_sq,
        simplex_bound: simplex,
        orthoplex_bound: orthoplex,
        ratio,
        meets,
    })
}
