//! Subspaces of R^m and the principal-angle machinery between them.
//!
//! A plane is stored as an n x m generator matrix with orthonormal rows; the
//! row space is the subspace, the particular basis is a normalized artifact of
//! construction. All pairwise geometry (three distance functions, projection
//! matrices) reduces to the principal angles recovered from the SVD of the
//! product of two generators.

use std::f64::consts::FRAC_PI_4;

use nalgebra::{DMatrix, SymmetricEigen, SVD};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};

/// Ratio of smallest to largest singular value below which a generator is
/// treated as rank deficient.
pub const RANK_TOL: f64 = 1e-10;

/// An n-dimensional subspace of R^m, stored as a generator matrix with
/// orthonormal rows (n rows, m columns).
#[derive(Debug, Clone, PartialEq)]
pub struct Plane {
    gen: DMatrix<f64>,
}

impl Plane {
    /// Ambient dimension m.
    pub fn m(&self) -> usize {
        self.gen.ncols()
    }

    /// Subspace dimension n.
    pub fn n(&self) -> usize {
        self.gen.nrows()
    }

    /// The orthonormal generator matrix (n x m).
    pub fn gen(&self) -> &DMatrix<f64> {
        &self.gen
    }

    /// Consume the plane and return its generator.
    pub fn into_gen(self) -> DMatrix<f64> {
        self.gen
    }

    /// Max absolute deviation of gen * gen^T from the identity.
    pub fn orthonormality_drift(&self) -> f64 {
        let gram = &self.gen * self.gen.transpose();
        let mut drift = 0.0f64;
        for i in 0..gram.nrows() {
            for j in 0..gram.ncols() {
                let target = if i == j { 1.0 } else { 0.0 };
                drift = drift.max((gram[(i, j)] - target).abs());
            }
        }
        drift
    }
}

/// Principal angles between two planes, sorted ascending, each in [0, pi/2].
#[derive(Debug, Clone, PartialEq)]
pub struct PrincipalAngles {
    angles: Vec<f64>,
}

impl PrincipalAngles {
    /// The angles theta_1 <= ... <= theta_n.
    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    /// Largest principal angle theta_n.
    pub fn max_angle(&self) -> f64 {
        *self.angles.last().expect("n >= 1")
    }

    /// Squared chordal distance: sum of sin^2 theta_i.
    pub fn chordal_sq(&self) -> f64 {
        self.angles.iter().map(|t| t.sin().powi(2)).sum()
    }

    /// Squared geodesic distance: sum of theta_i^2.
    pub fn geodesic_sq(&self) -> f64 {
        self.angles.iter().map(|t| t * t).sum()
    }
}

/// Orthogonal projection onto a plane, as the symmetric idempotent m x m
/// matrix with trace n.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionMatrix {
    mat: DMatrix<f64>,
}

impl ProjectionMatrix {
    /// Ambient dimension m.
    pub fn m(&self) -> usize {
        self.mat.nrows()
    }

    /// The projection matrix itself.
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.mat
    }

    /// Trace, which equals the subspace dimension n.
    pub fn trace(&self) -> f64 {
        self.mat.trace()
    }
}

/// Orthonormalize the rows of a raw n x m matrix into a [`Plane`].
///
/// Runs a rank check (singular-value ratio against [`RANK_TOL`]) and then a
/// Householder QR of the transpose with the R-diagonal flipped positive, so
/// equal row spaces with equal row order produce identical generators.
pub fn orthonormalize(raw: &DMatrix<f64>) -> Result<Plane> {
    let n = raw.nrows();
    let m = raw.ncols();
    if n == 0 || n > m {
        return Err(Error::InvalidArgument(format!(
            "generator must have 1 <= n <= m rows, got n = {n}, m = {m}"
        )));
    }
    let svd = SVD::new(raw.clone(), false, false);
    let largest = svd.singular_values.max();
    let smallest = svd.singular_values.min();
    if largest == 0.0 || smallest < RANK_TOL * largest {
        return Err(Error::RankDeficient { smallest, largest });
    }

    let qr = raw.transpose().qr();
    let q = qr.q();
    let r = qr.r();
    let mut gen = q.transpose();
    for i in 0..n {
        if r[(i, i)] < 0.0 {
            for j in 0..m {
                gen[(i, j)] = -gen[(i, j)];
            }
        }
    }
    Ok(Plane { gen })
}

/// Draw a plane uniformly (O(m)-invariantly) by orthonormalizing an n x m
/// matrix of independent standard Gaussians.
pub fn random_plane<R: Rng>(m: usize, n: usize, rng: &mut R) -> Plane {
    assert!(n >= 1 && n <= m, "need 1 <= n <= m");
    loop {
        let raw = DMatrix::from_fn(n, m, |_, _| StandardNormal.sample(rng));
        // Gaussian matrices are full rank almost surely; retry on the null set.
        if let Ok(plane) = orthonormalize(&raw) {
            return plane;
        }
    }
}

fn check_same_space(p: &Plane, q: &Plane) -> Result<()> {
    if p.m() != q.m() || p.n() != q.n() {
        return Err(Error::DimensionMismatch {
            expected_m: p.m(),
            expected_n: p.n(),
            got_m: q.m(),
            got_n: q.n(),
        });
    }
    Ok(())
}

/// Principal angles between two planes of the same (m, n), sorted ascending.
///
/// Cosines are the singular values of gen(p) * gen(q)^T, clamped to [0, 1].
/// For angles below pi/4 the arccosine of a computed singular value loses
/// relative accuracy like eps / theta^2, so those angles are recovered
/// instead from the sine-form SVD of the residual of gen(q) against p, which
/// is accurate to eps / theta.
pub fn principal_angles(p: &Plane, q: &Plane) -> Result<PrincipalAngles> {
    check_same_space(p, q)?;
    let product = p.gen() * q.gen().transpose();
    let mut angles: Vec<f64> = SVD::new(product.clone(), false, false)
        .singular_values
        .iter()
        .map(|s| s.clamp(0.0, 1.0).acos())
        .collect();
    angles.sort_by(|a, b| a.partial_cmp(b).expect("angles are finite"));
    if angles[0] < FRAC_PI_4 {
        // Rows of q minus their projection onto p; singular values sin theta_i.
        let residual = q.gen() - product.transpose() * p.gen();
        let mut from_sin: Vec<f64> = SVD::new(residual, false, false)
            .singular_values
            .iter()
            .map(|s| s.clamp(0.0, 1.0).asin())
            .collect();
        from_sin.sort_by(|a, b| a.partial_cmp(b).expect("angles are finite"));
        for (angle, refined) in angles.iter_mut().zip(from_sin) {
            if *angle < FRAC_PI_4 {
                *angle = refined;
            }
        }
    }
    Ok(PrincipalAngles { angles })
}

/// Chordal distance sqrt(sum sin^2 theta_i).
pub fn chordal_distance(p: &Plane, q: &Plane) -> Result<f64> {
    let angles = principal_angles(p, q)?;
    let d = angles.chordal_sq().sqrt();
    debug_assert!(
        (angles.chordal_sq() - chordal_sq_from_gens(p.gen(), q.gen())).abs() < 1e-9,
        "angle-sum and trace formulas for d_c^2 disagree"
    );
    Ok(d)
}

/// Geodesic distance sqrt(sum theta_i^2).
pub fn geodesic_distance(p: &Plane, q: &Plane) -> Result<f64> {
    Ok(principal_angles(p, q)?.geodesic_sq().sqrt())
}

/// Max-angle distance theta_n.
pub fn max_angle_distance(p: &Plane, q: &Plane) -> Result<f64> {
    Ok(principal_angles(p, q)?.max_angle())
}

/// Squared chordal distance straight from generators:
/// n - ||gen(p) * gen(q)^T||_F^2, clamped at 0. Avoids the SVD in hot loops.
pub(crate) fn chordal_sq_from_gens(gp: &DMatrix<f64>, gq: &DMatrix<f64>) -> f64 {
    let product = gp * gq.transpose();
    let n = gp.nrows() as f64;
    (n - product.norm_squared()).max(0.0)
}

/// Projection matrix gen^T * gen of a plane.
pub fn projection_matrix(p: &Plane) -> ProjectionMatrix {
    ProjectionMatrix {
        mat: p.gen().transpose() * p.gen(),
    }
}

/// Chordal distance between two planes given their projection matrices:
/// (1 / sqrt 2) * ||P - Q||_F. Requires equal ambient dimensions and equal
/// traces (same subspace dimension).
pub fn chordal_from_projection(p: &ProjectionMatrix, q: &ProjectionMatrix) -> Result<f64> {
    if p.m() != q.m() {
        return Err(Error::DimensionMismatch {
            expected_m: p.m(),
            expected_n: p.trace().round() as usize,
            got_m: q.m(),
            got_n: q.trace().round() as usize,
        });
    }
    if (p.trace() - q.trace()).abs() > 1e-6 {
        return Err(Error::InvalidArgument(format!(
            "projection traces differ: {} vs {}",
            p.trace(),
            q.trace()
        )));
    }
    Ok((p.matrix() - q.matrix()).norm() / 2.0f64.sqrt())
}

/// Orthogonal complement of a plane (requires n < m): the (m-n)-dimensional
/// subspace picked out by the near-zero eigenvalues of the projection matrix.
pub fn complement(p: &Plane) -> Result<Plane> {
    let m = p.m();
    let n = p.n();
    if n >= m {
        return Err(Error::InvalidArgument(format!(
            "complement needs n < m, got n = {n}, m = {m}"
        )));
    }
    let proj = projection_matrix(p);
    let eigen = SymmetricEigen::new(proj.matrix().clone());
    let mut rows: Vec<(f64, Vec<f64>)> = Vec::with_capacity(m - n);
    for k in 0..m {
        // Projection eigenvalues are 0 or 1; 1/2 splits them cleanly.
        if eigen.eigenvalues[k] < 0.5 {
            rows.push((eigen.eigenvalues[k], eigen.eigenvectors.column(k).iter().copied().collect()));
        }
    }
    assert_eq!(rows.len(), m - n, "projection eigenvalues must split into n ones and m - n zeros");
    rows.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("eigenvalues are finite"));
    let raw = DMatrix::from_fn(m - n, m, |i, j| rows[i].1[j]);
    orthonormalize(&raw)
}
