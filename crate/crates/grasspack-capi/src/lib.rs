//! C ABI over the packing library: opaque packing handles, integer status
//! codes, and a cbindgen-generated header in `include/grasspack.h`.
//!
//! Ownership rules: packings returned through `GrasspackPacking**` are freed
//! with [`grasspack_packing_free`], strings returned through `char**` with
//! [`grasspack_string_free`]. Out parameters are written only when the call
//! returns [`GrasspackStatus::Ok`]. The last error message is thread-local
//! and stays valid until the next failing call on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};

use grasspack::constructions::{
    hamming10_code, lines_from_code, nordstrom_robinson_code, planes18_g42, planes28_g73,
    planes70_g84,
};
use grasspack::io::{parse_packing, serialize_packing};
use grasspack::{
    audit, min_distance, min_interplane_angle, optimize, random_packing, Error, Metric,
    OptimConfig, Packing,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

// ─── status codes and handles ──────────────────────────────────────────────

/// Result of every fallible call. Anything other than `Ok` leaves a
/// human-readable explanation in [`grasspack_last_error_message`].
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GrasspackStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// An argument was outside the operation's domain.
    InvalidArgument = 3,
    /// Malformed packing or matrix text.
    ParseFailed = 4,
    /// A generator block drifted too far from orthonormality.
    NotOrthonormal = 5,
    /// Header counts disagree with the file body.
    CountMismatch = 6,
    /// Subspaces disagree on (m, n).
    DimensionMismatch = 7,
    /// Generator rows do not span an n-dimensional subspace.
    RankDeficient = 8,
    /// A pairwise distance fell on or below the potential pole.
    PoleCrossed = 9,
    /// Input fails the conditions of a combinatorial construction.
    ConstructionFailed = 10,
    /// Operating-system I/O failure.
    IoFailed = 11,
}

/// Metric selector: pass one of these values wherever a `uint32_t metric`
/// parameter appears.
#[repr(u32)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GrasspackMetric {
    Chordal = 0,
    Geodesic = 1,
    MaxAngle = 2,
}

/// An immutable packing of N n-dimensional subspaces of R^m (opaque).
pub struct GrasspackPacking(Packing);

/// Scorecard of a packing against the simplex and orthoplex bounds on the
/// squared chordal distance.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct GrasspackBoundReport {
    pub m: usize,
    pub n: usize,
    pub count: usize,
    /// Embedding dimension D = (m-1)(m+2)/2.
    pub embedding_dim: usize,
    /// Achieved minimal squared chordal distance.
    pub achieved_sq: f64,
    pub simplex_bound: f64,
    /// Valid only when `has_orthoplex_bound` is true (N > D + 1).
    pub orthoplex_bound: f64,
    pub has_orthoplex_bound: bool,
    /// achieved_sq divided by the applicable bound.
    pub ratio: f64,
    /// True when the packing attains the applicable bound.
    pub meets: bool,
}

// ─── error plumbing ────────────────────────────────────────────────────────

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: String) {
    let msg = CString::new(msg).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = msg);
}

fn fail(err: Error) -> GrasspackStatus {
    let status = match err {
        Error::RankDeficient { .. } => GrasspackStatus::RankDeficient,
        Error::DimensionMismatch { .. } => GrasspackStatus::DimensionMismatch,
        Error::PoleCrossed { .. } => GrasspackStatus::PoleCrossed,
        Error::NotComplementClosed { .. } | Error::NotConferenceMatrix { .. } => {
            GrasspackStatus::ConstructionFailed
        }
        Error::Parse { .. } => GrasspackStatus::ParseFailed,
        Error::NotOrthonormal { .. } => GrasspackStatus::NotOrthonormal,
        Error::CountMismatch { .. } => GrasspackStatus::CountMismatch,
        Error::InvalidArgument(_) => GrasspackStatus::InvalidArgument,
        Error::Io(_) => GrasspackStatus::IoFailed,
    };
    set_error(err.to_string());
    status
}

fn fail_with(status: GrasspackStatus, msg: impl Into<String>) -> GrasspackStatus {
    set_error(msg.into());
    status
}

fn metric_from(raw: u32) -> Result<Metric, GrasspackStatus> {
    match raw {
        0 => Ok(Metric::Chordal),
        1 => Ok(Metric::Geodesic),
        2 => Ok(Metric::MaxAngle),
        other => Err(fail_with(
            GrasspackStatus::InvalidArgument,
            format!("unknown metric code {other} (expected 0, 1, or 2)"),
        )),
    }
}

fn hand_out(packing: Packing, out: *mut *mut GrasspackPacking) -> GrasspackStatus {
    let handle = Box::into_raw(Box::new(GrasspackPacking(packing)));
    unsafe { *out = handle };
    GrasspackStatus::Ok
}

/// Message of the most recent failure on this thread, empty before any.
/// The pointer stays valid until the next failing call on this thread.
#[no_mangle]
pub extern "C" fn grasspack_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

// ─── lifecycle ─────────────────────────────────────────────────────────────

/// Frees a packing handle. A null handle is a no-op.
///
/// # Safety
/// `packing` must be null or a pointer obtained from this library that has
/// not been freed before.
#[no_mangle]
pub unsafe extern "C" fn grasspack_packing_free(packing: *mut GrasspackPacking) {
    if !packing.is_null() {
        drop(Box::from_raw(packing));
    }
}

/// Frees a string returned by this library. A null pointer is a no-op.
///
/// # Safety
/// `text` must be null or a pointer obtained from this library that has not
/// been freed before.
#[no_mangle]
pub unsafe extern "C" fn grasspack_string_free(text: *mut c_char) {
    if !text.is_null() {
        drop(CString::from_raw(text));
    }
}

// ─── construction and serialization ────────────────────────────────────────

/// Parses a packing file (header `m n N metric`, then N blocks of n rows of
/// m reals) into a new handle.
///
/// # Safety
/// `text` must be a valid NUL-terminated string; `out` must be a valid
/// pointer to a `GrasspackPacking*`.
#[no_mangle]
pub unsafe extern "C" fn grasspack_packing_parse(
    text: *const c_char,
    out: *mut *mut GrasspackPacking,
) -> GrasspackStatus {
    if text.is_null() || out.is_null() {
        return fail_with(GrasspackStatus::NullPointer, "text and out must be non-null");
    }
    let text = match CStr::from_ptr(text).to_str() {
        Ok(text) => text,
        Err(_) => return fail_with(GrasspackStatus::InvalidUtf8, "packing text is not UTF-8"),
    };
    match parse_packing(text) {
        Ok(packing) => hand_out(packing, out),
        Err(e) => fail(e),
    }
}

/// Serializes a packing to the plain-text format (17 significant digits, so
/// parsing the result reproduces every coordinate bit for bit).
///
/// # Safety
/// `packing` must be a live handle; `out` must be a valid pointer to a
/// `char*`. The result is freed with [`grasspack_string_free`].
#[no_mangle]
pub unsafe extern "C" fn grasspack_packing_serialize(
    packing: *const GrasspackPacking,
    out: *mut *mut c_char,
) -> GrasspackStatus {
    if packing.is_null() || out.is_null() {
        return fail_with(
            GrasspackStatus::NullPointer,
            "packing and out must be non-null",
        );
    }
    let text = serialize_packing(&(*packing).0);
    match CString::new(text) {
        Ok(text) => {
            *out = text.into_raw();
            GrasspackStatus::Ok
        }
        Err(_) => fail_with(
            GrasspackStatus::InvalidArgument,
            "serialized text contains an interior NUL byte",
        ),
    }
}

/// Builds one of the named packings: "planes70-g84", "planes28-g73",
/// "planes18-g42", "hamming10", or "nordstrom-robinson".
///
/// # Safety
/// `name` must be a valid NUL-terminated string; `out` must be a valid
/// pointer to a `GrasspackPacking*`.
#[no_mangle]
pub unsafe extern "C" fn grasspack_construct(
    name: *const c_char,
    out: *mut *mut GrasspackPacking,
) -> GrasspackStatus {
    if name.is_null() || out.is_null() {
        return fail_with(GrasspackStatus::NullPointer, "name and out must be non-null");
    }
    let name = match CStr::from_ptr(name).to_str() {
        Ok(name) => name,
        Err(_) => return fail_with(GrasspackStatus::InvalidUtf8, "name is not UTF-8"),
    };
    let packing = match name {
        "planes70-g84" => planes70_g84(),
        "planes28-g73" => planes28_g73(),
        "planes18-g42" => planes18_g42(),
        "hamming10" => match lines_from_code(&hamming10_code()) {
            Ok(packing) => packing,
            Err(e) => return fail(e),
        },
        "nordstrom-robinson" => match lines_from_code(&nordstrom_robinson_code()) {
            Ok(packing) => packing,
            Err(e) => return fail(e),
        },
        other => {
            return fail_with(
                GrasspackStatus::InvalidArgument,
                format!("unknown construction '{other}'"),
            )
        }
    };
    hand_out(packing, out)
}

/// Draws N uniformly random n-planes in R^m from the given seed.
///
/// # Safety
/// `out` must be a valid pointer to a `GrasspackPacking*`.
#[no_mangle]
pub unsafe extern "C" fn grasspack_packing_random(
    m: usize,
    n: usize,
    count: usize,
    metric: u32,
    seed: u64,
    out: *mut *mut GrasspackPacking,
) -> GrasspackStatus {
    if out.is_null() {
        return fail_with(GrasspackStatus::NullPointer, "out must be non-null");
    }
    let metric = match metric_from(metric) {
        Ok(metric) => metric,
        Err(status) => return status,
    };
    if n < 1 || n > m || count < 1 {
        return fail_with(
            GrasspackStatus::InvalidArgument,
            format!("random packing needs 1 <= n <= m and N >= 1, got m = {m}, n = {n}, N = {count}"),
        );
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    hand_out(random_packing(m, n, count, metric, &mut rng), out)
}

// ─── queries ───────────────────────────────────────────────────────────────

/// Reports the ambient dimension m, subspace dimension n, and plane count N.
///
/// # Safety
/// `packing` must be a live handle; `m`, `n`, and `count` must be valid
/// pointers.
#[no_mangle]
pub unsafe extern "C" fn grasspack_packing_dims(
    packing: *const GrasspackPacking,
    m: *mut usize,
    n: *mut usize,
    count: *mut usize,
) -> GrasspackStatus {
    if packing.is_null() || m.is_null() || n.is_null() || count.is_null() {
        return fail_with(GrasspackStatus::NullPointer, "all pointers must be non-null");
    }
    let inner = &(*packing).0;
    *m = inner.m();
    *n = inner.n();
    *count = inner.len();
    GrasspackStatus::Ok
}

/// Copies the orthonormal generator of one plane into `rows`, row-major,
/// n rows of m entries.
///
/// # Safety
/// `packing` must be a live handle; `rows` must point to at least n * m
/// writable doubles.
#[no_mangle]
pub unsafe extern "C" fn grasspack_packing_generator(
    packing: *const GrasspackPacking,
    plane: usize,
    rows: *mut f64,
) -> GrasspackStatus {
    if packing.is_null() || rows.is_null() {
        return fail_with(
            GrasspackStatus::NullPointer,
            "packing and rows must be non-null",
        );
    }
    let inner = &(*packing).0;
    if plane >= inner.len() {
        return fail_with(
            GrasspackStatus::InvalidArgument,
            format!("plane index {plane} out of range for {} planes", inner.len()),
        );
    }
    let gen = inner.planes()[plane].gen();
    let out = std::slice::from_raw_parts_mut(rows, inner.n() * inner.m());
    for i in 0..inner.n() {
        for j in 0..inner.m() {
            out[i * inner.m() + j] = gen[(i, j)];
        }
    }
    GrasspackStatus::Ok
}

/// Reports the minimal pairwise distance under `metric` (0 chordal,
/// 1 geodesic, 2 max-angle) and which pair attains it.
///
/// # Safety
/// `packing` must be a live handle; `dist`, `i`, and `j` must be valid
/// pointers.
#[no_mangle]
pub unsafe extern "C" fn grasspack_min_distance(
    packing: *const GrasspackPacking,
    metric: u32,
    dist: *mut f64,
    i: *mut usize,
    j: *mut usize,
) -> GrasspackStatus {
    if packing.is_null() || dist.is_null() || i.is_null() || j.is_null() {
        return fail_with(GrasspackStatus::NullPointer, "all pointers must be non-null");
    }
    let metric = match metric_from(metric) {
        Ok(metric) => metric,
        Err(status) => return status,
    };
    match min_distance(&(*packing).0, metric) {
        Ok((d, (a, b))) => {
            *dist = d;
            *i = a;
            *j = b;
            GrasspackStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Reports the minimal interplane angle (smallest first principal angle over
/// all pairs) in radians.
///
/// # Safety
/// `packing` must be a live handle; `radians` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn grasspack_min_angle(
    packing: *const GrasspackPacking,
    radians: *mut f64,
) -> GrasspackStatus {
    if packing.is_null() || radians.is_null() {
        return fail_with(
            GrasspackStatus::NullPointer,
            "packing and radians must be non-null",
        );
    }
    match min_interplane_angle(&(*packing).0) {
        Ok(angle) => {
            *radians = angle;
            GrasspackStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Scores a packing against the simplex and orthoplex bounds.
///
/// # Safety
/// `packing` must be a live handle; `report` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn grasspack_audit(
    packing: *const GrasspackPacking,
    report: *mut GrasspackBoundReport,
) -> GrasspackStatus {
    if packing.is_null() || report.is_null() {
        return fail_with(
            GrasspackStatus::NullPointer,
            "packing and report must be non-null",
        );
    }
    match audit(&(*packing).0) {
        Ok(r) => {
            *report = GrasspackBoundReport {
                m: r.m,
                n: r.n,
                count: r.count,
                embedding_dim: r.embedding_dim,
                achieved_sq: r.achieved_sq,
                simplex_bound: r.simplex_bound,
                orthoplex_bound: r.orthoplex_bound.unwrap_or(0.0),
                has_orthoplex_bound: r.orthoplex_bound.is_some(),
                ratio: r.ratio,
                meets: r.meets,
            };
            GrasspackStatus::Ok
        }
        Err(e) => fail(e),
    }
}

// ─── optimization ──────────────────────────────────────────────────────────

/// Searches for a packing of N n-planes in R^m maximizing the minimal
/// distance under `metric` (0 chordal, 1 geodesic), running `restarts`
/// independent random restarts from the given seed. Writes the best packing
/// and its minimal distance.
///
/// # Safety
/// `out` and `min_dist` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn grasspack_optimize(
    m: usize,
    n: usize,
    count: usize,
    metric: u32,
    restarts: usize,
    seed: u64,
    out: *mut *mut GrasspackPacking,
    min_dist: *mut f64,
) -> GrasspackStatus {
    if out.is_null() || min_dist.is_null() {
        return fail_with(
            GrasspackStatus::NullPointer,
            "out and min_dist must be non-null",
        );
    }
    let metric = match metric_from(metric) {
        Ok(metric) => metric,
        Err(status) => return status,
    };
    let mut config = OptimConfig::new(metric);
    config.restarts = restarts;
    config.seed = seed;
    match optimize(m, n, count, &config) {
        Ok(result) => {
            *min_dist = result.min_dist;
            hand_out(result.packing, out)
        }
        Err(e) => fail(e),
    }
}

// ─── tests ─────────────────────────────────────────────────────────────────

#[cfg(test)]
mod tests {
    use super::*;
    use std::ptr;

    fn construct(name: &CStr) -> *mut GrasspackPacking {
        let mut handle = ptr::null_mut();
        let status = unsafe { grasspack_construct(name.as_ptr(), &mut handle) };
        assert_eq!(status, GrasspackStatus::Ok);
        assert!(!handle.is_null());
        handle
    }

    fn last_error() -> String {
        unsafe {
            CStr::from_ptr(grasspack_last_error_message())
                .to_str()
                .unwrap()
                .to_owned()
        }
    }

    #[test]
    fn construct_query_and_free_round_trip() {
        let handle = construct(c"planes18-g42");
        let (mut m, mut n, mut count) = (0usize, 0usize, 0usize);
        let status =
            unsafe { grasspack_packing_dims(handle, &mut m, &mut n, &mut count) };
        assert_eq!(status, GrasspackStatus::Ok);
        assert_eq!((m, n, count), (4, 2, 18));

        let (mut dist, mut i, mut j) = (0.0f64, 0usize, 0usize);
        let status = unsafe {
            grasspack_min_distance(
                handle,
                GrasspackMetric::Chordal as u32,
                &mut dist,
                &mut i,
                &mut j,
            )
        };
        assert_eq!(status, GrasspackStatus::Ok);
        assert!((dist - 1.0).abs() < 1e-12, "min chordal distance {dist}");
        assert!(i < j && j < 18);

        let mut report = GrasspackBoundReport {
            m: 0,
            n: 0,
            count: 0,
            embedding_dim: 0,
            achieved_sq: 0.0,
            simplex_bound: 0.0,
            orthoplex_bound: 0.0,
            has_orthoplex_bound: false,
            ratio: 0.0,
            meets: false,
        };
        let status = unsafe { grasspack_audit(handle, &mut report) };
        assert_eq!(status, GrasspackStatus::Ok);
        assert_eq!(report.embedding_dim, 9);
        assert!(report.has_orthoplex_bound);
        assert!((report.ratio - 1.0).abs() < 1e-12);
        assert!(report.meets);

        unsafe { grasspack_packing_free(handle) };
    }

    #[test]
    fn serialize_then_parse_preserves_the_packing() {
        let handle = construct(c"hamming10");
        let mut text = ptr::null_mut();
        let status = unsafe { grasspack_packing_serialize(handle, &mut text) };
        assert_eq!(status, GrasspackStatus::Ok);

        let mut back = ptr::null_mut();
        let status = unsafe { grasspack_packing_parse(text, &mut back) };
        assert_eq!(status, GrasspackStatus::Ok);
        let (mut m, mut n, mut count) = (0usize, 0usize, 0usize);
        unsafe { grasspack_packing_dims(back, &mut m, &mut n, &mut count) };
        assert_eq!((m, n, count), (10, 1, 16));

        unsafe {
            grasspack_string_free(text);
            grasspack_packing_free(back);
            grasspack_packing_free(handle);
        }
    }

    #[test]
    fn generator_rows_come_back_orthonormal() {
        let handle = construct(c"planes18-g42");
        let mut rows = [0.0f64; 8];
        let status = unsafe { grasspack_packing_generator(handle, 0, rows.as_mut_ptr()) };
        assert_eq!(status, GrasspackStatus::Ok);
        let norm0: f64 = rows[..4].iter().map(|x| x * x).sum();
        let norm1: f64 = rows[4..].iter().map(|x| x * x).sum();
        let dot: f64 = (0..4).map(|k| rows[k] * rows[4 + k]).sum();
        assert!((norm0 - 1.0).abs() < 1e-12);
        assert!((norm1 - 1.0).abs() < 1e-12);
        assert!(dot.abs() < 1e-12);

        let status = unsafe { grasspack_packing_generator(handle, 18, rows.as_mut_ptr()) };
        assert_eq!(status, GrasspackStatus::InvalidArgument);
        unsafe { grasspack_packing_free(handle) };
    }

    #[test]
    fn optimize_finds_orthogonal_lines() {
        let mut handle = ptr::null_mut();
        let mut dist = 0.0f64;
        let status = unsafe {
            grasspack_optimize(
                3,
                1,
                3,
                GrasspackMetric::Chordal as u32,
                3,
                0,
                &mut handle,
                &mut dist,
            )
        };
        assert_eq!(status, GrasspackStatus::Ok);
        assert!((dist - 1.0).abs() < 1e-3, "three lines in R^3 reach 90 deg");
        unsafe { grasspack_packing_free(handle) };
    }

    #[test]
    fn random_packings_obey_the_seed() {
        let mut first = ptr::null_mut();
        let mut second = ptr::null_mut();
        unsafe {
            assert_eq!(
                grasspack_packing_random(4, 2, 5, 0, 11, &mut first),
                GrasspackStatus::Ok
            );
            assert_eq!(
                grasspack_packing_random(4, 2, 5, 0, 11, &mut second),
                GrasspackStatus::Ok
            );
        }
        let (mut a, mut b) = (ptr::null_mut(), ptr::null_mut());
        unsafe {
            grasspack_packing_serialize(first, &mut a);
            grasspack_packing_serialize(second, &mut b);
            assert_eq!(CStr::from_ptr(a), CStr::from_ptr(b));
            grasspack_string_free(a);
            grasspack_string_free(b);
            grasspack_packing_free(first);
            grasspack_packing_free(second);
        }
    }

    #[test]
    fn failures_set_status_and_message() {
        let mut handle = ptr::null_mut();
        let status = unsafe { grasspack_packing_parse(c"not a packing".as_ptr(), &mut handle) };
        assert_eq!(status, GrasspackStatus::ParseFailed);
        assert!(last_error().contains("parse error"));

        let status = unsafe { grasspack_construct(c"mystery".as_ptr(), &mut handle) };
        assert_eq!(status, GrasspackStatus::InvalidArgument);
        assert!(last_error().contains("unknown construction"));

        let status = unsafe { grasspack_packing_parse(ptr::null(), &mut handle) };
        assert_eq!(status, GrasspackStatus::NullPointer);

        let mut dist = 0.0f64;
        let status = unsafe {
            grasspack_optimize(3, 1, 4, 9, 1, 0, &mut handle, &mut dist)
        };
        assert_eq!(status, GrasspackStatus::InvalidArgument);
        assert!(last_error().contains("unknown metric code"));
    }
}
