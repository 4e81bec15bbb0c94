//! Left/right representation of planes in G(4,2) and the induced matching
//! problem.
//!
//! Identifying R^4 with the quaternions, every 2-plane through the origin
//! corresponds to a pair (l, r) of unit 3-vectors (purely imaginary unit
//! quaternions), unique up to negating both. Principal angles between two
//! planes reduce to the ordinary angles between their left vectors and
//! between their right vectors, so packings in G(4,2) are equivalent to a
//! pair of spherical codes tied together by an antipode-respecting matching.

use std::f64::consts::PI;

use nalgebra::{DMatrix, Vector3};

use crate::error::{Error, Result};
use crate::packing::{Metric, Packing};
use crate::plane::{orthonormalize, Plane};

/// Coordinates at most this magnitude count as zero when picking the
/// canonical sign of a pair.
const SIGN_TOL: f64 = 1e-9;

/// Accepted drift of an input vector norm from 1; anything closer is
/// renormalized, anything further is rejected.
const UNIT_TOL: f64 = 1e-6;

/// Two points are antipodes when their sum has norm at most this.
const ANTIPODE_TOL: f64 = 1e-9;

/// Threshold on 1 +- l.r that routes construction to a degenerate branch.
const DEGENERATE_TOL: f64 = 1e-12;

// ─── quaternions ───────────────────────────────────────────────────────────

/// Components (w, x, y, z) with w the real part.
type Quat = [f64; 4];

fn qconj(q: Quat) -> Quat {
    [q[0], -q[1], -q[2], -q[3]]
}

fn qmul(a: Quat, b: Quat) -> Quat {
    [
        a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
        a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
        a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
        a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0],
    ]
}

fn pure(v: Vector3<f64>) -> Quat {
    [0.0, v.x, v.y, v.z]
}

// ─── pair representation ───────────────────────────────────────────────────

/// A plane in G(4,2) encoded as a pair of unit 3-vectors.
///
/// (l, r) and (-l, -r) describe the same plane; stored pairs are canonical,
/// with the first coordinate of `l` larger than [`SIGN_TOL`] in magnitude
/// made positive.
#[derive(Clone, Copy, Debug)]
pub struct BinocularPair {
    l: Vector3<f64>,
    r: Vector3<f64>,
}

impl BinocularPair {
    /// Builds a canonical pair from two unit vectors.
    ///
    /// Norms may drift from 1 by at most 1e-6 and are renormalized.
    pub fn new(l: Vector3<f64>, r: Vector3<f64>) -> Result<Self> {
        for (name, v) in [("l", &l), ("r", &r)] {
            if (v.norm() - 1.0).abs() > UNIT_TOL {
                return Err(Error::InvalidArgument(format!(
                    "{name} must be a unit vector, norm is {:.6}",
                    v.norm()
                )));
            }
        }
        let (l, r) = canonical_sign(l.normalize(), r.normalize());
        Ok(Self { l, r })
    }

    /// Left unit vector.
    pub fn l(&self) -> Vector3<f64> {
        self.l
    }

    /// Right unit vector.
    pub fn r(&self) -> Vector3<f64> {
        self.r
    }
}

/// Negates both vectors if needed so the first coordinate of `l` with
/// magnitude above [`SIGN_TOL`] is positive.
fn canonical_sign(l: Vector3<f64>, r: Vector3<f64>) -> (Vector3<f64>, Vector3<f64>) {
    for k in 0..3 {
        if l[k].abs() > SIGN_TOL {
            return if l[k] < 0.0 { (-l, -r) } else { (l, r) };
        }
    }
    (l, r)
}

/// Converts a plane in G(4,2) to its left/right pair.
///
/// Reading the generator rows as quaternions u and v, the pair is the
/// normalized imaginary part of (u * conj(v), conj(v) * u). The result
/// depends only on the span: any other orthonormal basis changes the two
/// products by a joint rotation of the real/imaginary split that the
/// normalization and canonical sign absorb.
pub fn plane_to_lr(p: &Plane) -> Result<BinocularPair> {
    if p.m() != 4 || p.n() != 2 {
        return Err(Error::DimensionMismatch {
            expected_m: 4,
            expected_n: 2,
            got_m: p.m(),
            got_n: p.n(),
        });
    }
    let g = p.gen();
    let u: Quat = [g[(0, 0)], g[(0, 1)], g[(0, 2)], g[(0, 3)]];
    let v: Quat = [g[(1, 0)], g[(1, 1)], g[(1, 2)], g[(1, 3)]];
    let lq = qmul(u, qconj(v));
    let rq = qmul(qconj(v), u);
    // u orthonormal to v makes both products purely imaginary with unit norm
    let l = Vector3::new(lq[1], lq[2], lq[3]).normalize();
    let r = Vector3::new(rq[1], rq[2], rq[3]).normalize();
    let (l, r) = canonical_sign(l, r);
    Ok(BinocularPair { l, r })
}

/// Reconstructs the plane described by a pair.
///
/// Generically the plane is spanned by the quaternions 1 - l*r and l + r.
/// When l = r the plane contains the real axis and is span{1, l}. When
/// l = -r both generic spans collapse; the plane is then purely imaginary,
/// spanned by two vectors completing l to a right-handed orthonormal
/// 3-frame.
pub fn lr_to_plane(pair: &BinocularPair) -> Plane {
    let l = pair.l;
    let r = pair.r;
    let c = l.dot(&r).clamp(-1.0, 1.0);
    let rows: [Quat; 2] = if 1.0 + c < DEGENERATE_TOL {
        let seed = if l.x.abs() < 0.9 {
            Vector3::x()
        } else {
            Vector3::y()
        };
        let u = l.cross(&seed).normalize();
        let v = l.cross(&u);
        [pure(u), pure(v)]
    } else if 1.0 - c < DEGENERATE_TOL {
        [[1.0, 0.0, 0.0, 0.0], pure(l)]
    } else {
        let lr = qmul(pure(l), pure(r));
        [[1.0 - lr[0], -lr[1], -lr[2], -lr[3]], pure(l + r)]
    };
    let flat = [
        rows[0][0], rows[0][1], rows[0][2], rows[0][3], rows[1][0], rows[1][1], rows[1][2],
        rows[1][3],
    ];
    let raw = DMatrix::from_row_slice(2, 4, &flat);
    orthonormalize(&raw).expect("pair rows are orthogonal and nonzero by construction")
}

// ─── closed-form distances ─────────────────────────────────────────────────

/// Principal angles and squared distances between two planes given as pairs.
#[derive(Clone, Copy, Debug)]
pub struct LrDistances {
    /// Smaller principal angle, radians.
    pub theta1: f64,
    /// Larger principal angle, radians.
    pub theta2: f64,
    /// Squared chordal distance.
    pub chordal_sq: f64,
    /// Squared geodesic distance.
    pub geodesic_sq: f64,
}

/// Computes principal angles and distances directly from the angle phi
/// between left vectors and psi between right vectors.
///
/// A pair is defined only up to joint negation, which replaces both angles
/// by their supplements; when phi + psi > pi the supplements are taken so
/// the principal angles (psi -+ phi)/2 land in [0, pi/2]. The squared
/// chordal distance 1 - cos(phi)cos(psi) is unchanged by that swap, the
/// squared geodesic distance (phi^2 + psi^2)/2 requires it.
pub fn lr_distances(a: &BinocularPair, b: &BinocularPair) -> LrDistances {
    let mut phi = a.l.dot(&b.l).clamp(-1.0, 1.0).acos();
    let mut psi = a.r.dot(&b.r).clamp(-1.0, 1.0).acos();
    if phi + psi > PI {
        phi = PI - phi;
        psi = PI - psi;
    }
    let (lo, hi) = if phi <= psi { (phi, psi) } else { (psi, phi) };
    LrDistances {
        theta1: (hi - lo) / 2.0,
        theta2: (hi + lo) / 2.0,
        chordal_sq: 1.0 - phi.cos() * psi.cos(),
        geodesic_sq: (phi * phi + psi * psi) / 2.0,
    }
}

// ─── antipodal matching ────────────────────────────────────────────────────

/// An antipode-respecting bijection of a spherical code onto itself,
/// scored by the packing it induces.
///
/// Each antipodal class {P, -P} matched to {f(P), -f(P)} yields the plane
/// of the pair (P, f(P)); the objective is the minimum over distinct
/// classes of 1 - (Pi . Pk)(f(Pi) . f(Pk)), the squared chordal distance
/// between the corresponding planes.
#[derive(Clone, Debug)]
pub struct Matching {
    points: Vec<[f64; 3]>,
    perm: Vec<usize>,
    objective: f64,
}

impl Matching {
    /// The matched points: unit vectors closed under negation.
    pub fn points(&self) -> &[[f64; 3]] {
        &self.points
    }

    /// `perm[i]` is the index of f(points\[i\]); f(-P) = -f(P) throughout.
    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    /// Minimum pair value over distinct antipodal classes; infinite when
    /// there is only one class.
    pub fn objective(&self) -> f64 {
        self.objective
    }

    /// Recomputes the objective from the stored points and permutation.
    pub fn recompute_objective(&self) -> Result<f64> {
        let pts = to_vectors(&self.points);
        let classes = antipodal_classes(&pts)?;
        Ok(objective_of(&pts, &classes.reps, &self.perm))
    }
}

struct Classes {
    /// Representative point index per class, in first-occurrence order.
    reps: Vec<usize>,
    /// Antipode index per point.
    mate: Vec<usize>,
    /// Class index per point.
    class_of: Vec<usize>,
}

fn to_vectors(points: &[[f64; 3]]) -> Vec<Vector3<f64>> {
    points.iter().map(|p| Vector3::from(*p)).collect()
}

fn validate_and_normalize(points: &[[f64; 3]]) -> Result<Vec<Vector3<f64>>> {
    if points.is_empty() {
        return Err(Error::InvalidArgument("point set is empty".into()));
    }
    if points.len() % 2 != 0 {
        return Err(Error::InvalidArgument(format!(
            "an antipodally closed set has an even point count, got {}",
            points.len()
        )));
    }
    let mut out = Vec::with_capacity(points.len());
    for (i, p) in points.iter().enumerate() {
        let v = Vector3::from(*p);
        if (v.norm() - 1.0).abs() > UNIT_TOL {
            return Err(Error::InvalidArgument(format!(
                "point {i} must be a unit vector, norm is {:.6}",
                v.norm()
            )));
        }
        out.push(v.normalize());
    }
    Ok(out)
}

/// Greedily pairs each point with its exact negation; duplicates are fine
/// as long as the pairing is perfect.
fn antipodal_classes(pts: &[Vector3<f64>]) -> Result<Classes> {
    let total = pts.len();
    let mut mate = vec![usize::MAX; total];
    let mut class_of = vec![usize::MAX; total];
    let mut reps = Vec::with_capacity(total / 2);
    for i in 0..total {
        if mate[i] != usize::MAX {
            continue;
        }
        let j = (i + 1..total)
            .find(|&j| mate[j] == usize::MAX && (pts[i] + pts[j]).norm() <= ANTIPODE_TOL)
            .ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "point {i} has no antipode: the set is not closed under negation"
                ))
            })?;
        mate[i] = j;
        mate[j] = i;
        class_of[i] = reps.len();
        class_of[j] = reps.len();
        reps.push(i);
    }
    Ok(Classes {
        reps,
        mate,
        class_of,
    })
}

fn dot_matrix(pts: &[Vector3<f64>]) -> Vec<Vec<f64>> {
    pts.iter()
        .map(|p| pts.iter().map(|q| p.dot(q)).collect())
        .collect()
}

fn objective_of(pts: &[Vector3<f64>], reps: &[usize], perm: &[usize]) -> f64 {
    let mut min = f64::INFINITY;
    for (i, &a) in reps.iter().enumerate() {
        for &b in &reps[i + 1..] {
            let v = 1.0 - pts[a].dot(&pts[b]) * pts[perm[a]].dot(&pts[perm[b]]);
            min = min.min(v);
        }
    }
    min
}

/// Searches for an antipode-respecting bijection in which every pair of
/// distinct classes has value at least `threshold`; `None` means no such
/// matching exists, a legitimate outcome rather than a failure.
///
/// Exact depth-first search: class i is assigned, in order, an unused
/// target class with one of two signs, and a partial assignment is
/// abandoned as soon as any pair value falls strictly below the threshold.
pub fn solve_matching(points: &[[f64; 3]], threshold: f64) -> Result<Option<Matching>> {
    let pts = validate_and_normalize(points)?;
    let classes = antipodal_classes(&pts)?;
    let dots = dot_matrix(&pts);
    Ok(search_matching(&pts, &classes, &dots, threshold))
}

fn search_matching(
    pts: &[Vector3<f64>],
    classes: &Classes,
    dots: &[Vec<f64>],
    threshold: f64,
) -> Option<Matching> {
    let n = classes.reps.len();
    let mut assign = Vec::with_capacity(n);
    let mut used = vec![false; n];
    if !assign_class(0, classes, dots, threshold, &mut assign, &mut used) {
        return None;
    }
    let mut perm = vec![usize::MAX; pts.len()];
    for (i, &c) in assign.iter().enumerate() {
        let a = classes.reps[i];
        perm[a] = c;
        perm[classes.mate[a]] = classes.mate[c];
    }
    let objective = objective_of(pts, &classes.reps, &perm);
    Some(Matching {
        points: pts.iter().map(|p| [p.x, p.y, p.z]).collect(),
        perm,
        objective,
    })
}

fn assign_class(
    i: usize,
    classes: &Classes,
    dots: &[Vec<f64>],
    threshold: f64,
    assign: &mut Vec<usize>,
    used: &mut [bool],
) -> bool {
    let n = classes.reps.len();
    if i == n {
        return true;
    }
    let a = classes.reps[i];
    for t in 0..n {
        if used[t] {
            continue;
        }
        let rep = classes.reps[t];
        for c in [rep, classes.mate[rep]] {
            let feasible = (0..i).all(|j| {
                let v = 1.0 - dots[a][classes.reps[j]] * dots[c][assign[j]];
                !(v < threshold)
            });
            if feasible {
                used[t] = true;
                assign.push(c);
                if assign_class(i + 1, classes, dots, threshold, assign, used) {
                    return true;
                }
                assign.pop();
                used[t] = false;
            }
        }
    }
    false
}

/// Finds the matching with maximal objective by binary search over the
/// achievable pair values.
///
/// Candidate thresholds are every value 1 - (class dot)(target dot) a
/// matching could realize, formed from the same dot-product matrix the
/// solver reads, so the search compares thresholds exactly.
pub fn best_matching(points: &[[f64; 3]]) -> Result<Matching> {
    let pts = validate_and_normalize(points)?;
    let classes = antipodal_classes(&pts)?;
    let n = classes.reps.len();
    if n < 2 {
        // one class: f is the identity and there are no pair constraints
        return Ok(Matching {
            points: pts.iter().map(|p| [p.x, p.y, p.z]).collect(),
            perm: (0..pts.len()).collect(),
            objective: f64::INFINITY,
        });
    }
    let dots = dot_matrix(&pts);
    let mut rep_dots = Vec::new();
    for (i, &a) in classes.reps.iter().enumerate() {
        for &b in &classes.reps[i + 1..] {
            rep_dots.push(dots[a][b]);
        }
    }
    let mut target_dots = Vec::new();
    for c in 0..pts.len() {
        for d in 0..pts.len() {
            if classes.class_of[c] != classes.class_of[d] {
                target_dots.push(dots[c][d]);
            }
        }
    }
    rep_dots.sort_by(f64::total_cmp);
    rep_dots.dedup();
    target_dots.sort_by(f64::total_cmp);
    target_dots.dedup();
    let mut candidates: Vec<f64> = rep_dots
        .iter()
        .flat_map(|&x| target_dots.iter().map(move |&y| 1.0 - x * y))
        .collect();
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();

    let mut best = None;
    let (mut lo, mut hi) = (0isize, candidates.len() as isize - 1);
    while lo <= hi {
        let mid = (lo + hi) / 2;
        match search_matching(&pts, &classes, &dots, candidates[mid as usize]) {
            Some(m) => {
                best = Some(m);
                lo = mid + 1;
            }
            None => hi = mid - 1,
        }
    }
    Ok(best.expect("the smallest candidate threshold is always feasible"))
}

/// Converts a matching into the packing it describes: each antipodal class
/// {P, -P} contributes the plane of the pair (P, f(P)).
pub fn matching_to_packing(matching: &Matching) -> Result<Packing> {
    let pts = to_vectors(&matching.points);
    let classes = antipodal_classes(&pts)?;
    let planes = classes
        .reps
        .iter()
        .map(|&a| {
            let pair = BinocularPair::new(pts[a], pts[matching.perm[a]])?;
            Ok(lr_to_plane(&pair))
        })
        .collect::<Result<Vec<_>>>()?;
    Packing::new(planes, Metric::Chordal)
}
