//! Explicit packings with algebraic structure: lines from binary codes and
//! conference matrices, diplo-simplex lines, and three hand-built plane
//! families in G(8, 4), G(7, 3) and G(4, 2) that attain their bounds.

use std::collections::HashMap;
use std::collections::VecDeque;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::packing::{Metric, Packing};
use crate::plane::{orthonormalize, projection_matrix, Plane};

// ─── binary codes ───────────────────────────────────────────────────────────

/// A binary code: `words` are bitmasks over `length` coordinates.
#[derive(Debug, Clone)]
pub struct BinaryCode {
    length: usize,
    words: Vec<u64>,
    closed_under_complement: bool,
}

impl BinaryCode {
    /// Build a code from distinct words over `length <= 63` coordinates.
    pub fn new(length: usize, mut words: Vec<u64>) -> Result<Self> {
        if length == 0 || length > 63 {
            return Err(Error::InvalidArgument(format!(
                "code length must be in 1..=63, got {length}"
            )));
        }
        let mask = (1u64 << length) - 1;
        if let Some(&w) = words.iter().find(|&&w| w & !mask != 0) {
            return Err(Error::InvalidArgument(format!(
                "word {w:#b} exceeds code length {length}"
            )));
        }
        words.sort_unstable();
        let before = words.len();
        words.dedup();
        if words.len() != before {
            return Err(Error::InvalidArgument("duplicate codewords".into()));
        }
        if words.is_empty() {
            return Err(Error::InvalidArgument("empty code".into()));
        }
        let set: std::collections::HashSet<u64> = words.iter().copied().collect();
        let closed_under_complement = words.iter().all(|&w| set.contains(&(!w & mask)));
        Ok(BinaryCode {
            length,
            words,
            closed_under_complement,
        })
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn closed_under_complement(&self) -> bool {
        self.closed_under_complement
    }

    /// Minimum Hamming distance over distinct word pairs.
    pub fn min_distance(&self) -> usize {
        let mut d = self.length;
        for (i, &u) in self.words.iter().enumerate() {
            for &v in &self.words[i + 1..] {
                d = d.min((u ^ v).count_ones() as usize);
            }
        }
        d
    }
}

/// The [10, 32, 4] complement-closed code with weight profile {0, 4, 6, 10}:
/// a distance-4 code of length 10 obtained by shortening a Hamming code and
/// keeping the complement-closed weight classes.
pub fn hamming10_code() -> BinaryCode {
    let gens: [u64; 5] = [
        0b10_0111_0110,
        0b10_1010_0111,
        0b11_1000_0010,
        0b11_1011_0001,
        0b11_1111_1111,
    ];
    let mut words = Vec::with_capacity(32);
    for mask in 0u32..32 {
        let mut w = 0u64;
        for (b, &g) in gens.iter().enumerate() {
            if mask >> b & 1 == 1 {
                w ^= g;
            }
        }
        words.push(w);
    }
    BinaryCode::new(10, words).expect("fixed generator set is valid")
}

/// The Nordstrom-Robinson (16, 256, 6) code, as the binary Gray image of the
/// parity-extended length-7 quaternary cyclic code generated by the Hensel
/// lift x^3 + 2x^2 + x + 3 of x^3 + x + 1.
pub fn nordstrom_robinson_code() -> BinaryCode {
    const H: [u8; 4] = [3, 1, 2, 1];
    // Quaternary words: span of the first four cyclic shifts of H.
    let mut shifts = [[0u8; 7]; 4];
    for (s, shift) in shifts.iter_mut().enumerate() {
        for (i, &c) in H.iter().enumerate() {
            shift[(i + s) % 7] = c;
        }
    }
    let mut words = Vec::with_capacity(256);
    for mask in 0u32..256 {
        let mut w = [0u8; 7];
        for (s, shift) in shifts.iter().enumerate() {
            let c = (mask >> (2 * s) & 3) as u8;
            for i in 0..7 {
                w[i] = (w[i] + c * shift[i]) % 4;
            }
        }
        // Extend by the coordinate that brings the quaternary sum to 0 mod 4.
        let sum: u8 = w.iter().sum::<u8>() % 4;
        let ext = [(4 - sum) % 4, w[0], w[1], w[2], w[3], w[4], w[5], w[6]];
        // Gray map 0 -> 00, 1 -> 01, 2 -> 11, 3 -> 10, high bit first.
        let mut bits = 0u64;
        for (k, &z) in ext.iter().enumerate() {
            let (hi, lo) = match z {
                0 => (0u64, 0u64),
                1 => (0, 1),
                2 => (1, 1),
                _ => (1, 0),
            };
            bits |= hi << (2 * k) | lo << (2 * k + 1);
        }
        words.push(bits);
    }
    BinaryCode::new(16, words).expect("construction yields 256 distinct words")
}

/// Turn a complement-closed (m, M, d) binary code into M/2 lines in G(m, 1):
/// one representative word per complement pair, coordinates (-1)^bit / sqrt m.
/// The minimal squared chordal distance is exactly 4 d (m - d) / m^2.
pub fn lines_from_code(code: &BinaryCode) -> Result<Packing> {
    if !code.closed_under_complement() {
        let mask = (1u64 << code.length()) - 1;
        let set: std::collections::HashSet<u64> = code.words().iter().copied().collect();
        let bad = code
            .words()
            .iter()
            .position(|&w| !set.contains(&(!w & mask)))
            .unwrap_or(0);
        return Err(Error::NotComplementClosed { word: bad });
    }
    let m = code.length();
    let mask = (1u64 << m) - 1;
    let mut reps: Vec<u64> = code
        .words()
        .iter()
        .map(|&w| w.min(!w & mask))
        .collect();
    reps.sort_unstable();
    reps.dedup();
    let scale = 1.0 / (m as f64).sqrt();
    let mut planes = Vec::with_capacity(reps.len());
    for &w in &reps {
        let raw = DMatrix::from_fn(1, m, |_, j| {
            if w >> j & 1 == 1 {
                -scale
            } else {
                scale
            }
        });
        planes.push(orthonormalize(&raw)?);
    }
    Packing::new(planes, Metric::Chordal)
}

// ─── conference matrices ────────────────────────────────────────────────────

/// Symmetric conference matrix of order q + 1 from the Paley construction,
/// for prime q = 1 mod 4: border of ones around the quadratic-residue
/// character table of F_q.
pub fn paley_conference_matrix(q: usize) -> Result<Vec<Vec<i64>>> {
    if q < 5 || q % 4 != 1 || !is_prime(q) {
        return Err(Error::InvalidArgument(format!(
            "Paley construction needs a prime q = 1 mod 4, got {q}"
        )));
    }
    let order = q + 1;
    let mut c = vec![vec![0i64; order]; order];
    for j in 1..order {
        c[0][j] = 1;
        c[j][0] = 1;
    }
    for a in 0..q {
        for b in 0..q {
            if a != b {
                c[a + 1][b + 1] = legendre((b + q - a) % q, q);
            }
        }
    }
    Ok(c)
}

fn is_prime(x: usize) -> bool {
    if x < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= x {
        if x % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Legendre symbol via Euler's criterion, for a in 0..q with q an odd prime.
fn legendre(a: usize, q: usize) -> i64 {
    if a == 0 {
        return 0;
    }
    let mut result = 1u64;
    let mut base = a as u64 % q as u64;
    let mut exp = (q as u64 - 1) / 2;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * base % q as u64;
        }
        base = base * base % q as u64;
        exp >>= 1;
    }
    if result == 1 {
        1
    } else {
        -1
    }
}

/// Turn a symmetric conference matrix C of order q + 1 into q + 1 lines in
/// G((q+1)/2, 1) with pairwise angle arccos(1/sqrt q): factor the Gram matrix
/// I + C/sqrt(q), whose spectrum is {0, 2} with equal multiplicities, through
/// its eigenvalue-2 eigenspace.
pub fn lines_from_conference_matrix(c: &[Vec<i64>]) -> Result<Packing> {
    let order = c.len();
    if order < 2 || order % 2 != 0 {
        return Err(Error::NotConferenceMatrix {
            reason: format!("order must be even and positive, got {order}"),
        });
    }
    let q = order - 1;
    for (i, row) in c.iter().enumerate() {
        if row.len() != order {
            return Err(Error::NotConferenceMatrix {
                reason: format!("row {i} has {} entries, expected {order}", row.len()),
            });
        }
        if row[i] != 0 {
            return Err(Error::NotConferenceMatrix {
                reason: format!("diagonal entry ({i}, {i}) is {}, expected 0", row[i]),
            });
        }
        for (j, &v) in row.iter().enumerate() {
            if i != j && v != 1 && v != -1 {
                return Err(Error::NotConferenceMatrix {
                    reason: format!("off-diagonal entry ({i}, {j}) is {v}, expected +-1"),
                });
            }
            if c[j][i] != v {
                return Err(Error::NotConferenceMatrix {
                    reason: format!("matrix is not symmetric at ({i}, {j})"),
                });
            }
        }
    }
    // C C^T = q I, checked exactly in integers.
    for i in 0..order {
        for j in 0..order {
            let dot: i64 = (0..order).map(|k| c[i][k] * c[j][k]).sum();
            let expected = if i == j { q as i64 } else { 0 };
            if dot != expected {
                return Err(Error::NotConferenceMatrix {
                    reason: format!("C C^T has entry {dot} at ({i}, {j}), expected {expected}"),
                });
            }
        }
    }

    let sqrt_q = (q as f64).sqrt();
    let gram = DMatrix::from_fn(order, order, |i, j| {
        (i == j) as u64 as f64 + c[i][j] as f64 / sqrt_q
    });
    let eigen = nalgebra::SymmetricEigen::new(gram);
    let half = order / 2;
    let mut top: Vec<usize> = (0..order)
        .filter(|&k| eigen.eigenvalues[k] > 1.0)
        .collect();
    if top.len() != half
        || (0..order).any(|k| {
            let ev = eigen.eigenvalues[k];
            (ev - 2.0).abs().min(ev.abs()) > 1e-6
        })
    {
        return Err(Error::NotConferenceMatrix {
            reason: "Gram spectrum is not {0, 2} with equal multiplicities".into(),
        });
    }
    top.sort_unstable();
    let mut planes = Vec::with_capacity(order);
    for i in 0..order {
        let raw = DMatrix::from_fn(1, half, |_, a| {
            2.0f64.sqrt() * eigen.eigenvectors[(i, top[a])]
        });
        planes.push(orthonormalize(&raw)?);
    }
    Packing::new(planes, Metric::Chordal)
}

// ─── diplo-simplex ──────────────────────────────────────────────────────────

/// The n + 1 lines in R^n through the vertices of a regular n-simplex
/// centered at the origin: pairwise cosine -1/n, meeting the simplex bound
/// 1 - 1/n^2.
pub fn diplo_simplex_lines(n: usize) -> Result<Packing> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "diplo-simplex needs ambient dimension n >= 2, got {n}"
        )));
    }
    let c = 1.0 / (n as f64 * (n as f64 + 1.0)).sqrt();
    // Vertex i in the sum-zero hyperplane of R^{n+1}: n at slot i, -1 elsewhere.
    let vertex = |i: usize, j: usize| c * if i == j { n as f64 } else { -1.0 };
    // Helmert rows: orthonormal basis of that hyperplane, fixed once so the
    // output is deterministic.
    let helmert = |k: usize, j: usize| {
        let norm = (k as f64 * (k as f64 + 1.0)).sqrt();
        if j < k {
            1.0 / norm
        } else if j == k {
            -(k as f64) / norm
        } else {
            0.0
        }
    };
    let mut planes = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let raw = DMatrix::from_fn(1, n, |_, a| {
            (0..=n).map(|j| helmert(a + 1, j) * vertex(i, j)).sum()
        });
        planes.push(orthonormalize(&raw)?);
    }
    Packing::new(planes, Metric::Chordal)
}

// ─── hand-built plane families ──────────────────────────────────────────────

fn fingerprint(plane: &Plane) -> Vec<i64> {
    // Projection entries in row-major order, rounded at 1e-8: basis-free and
    // collision-free for the exact algebraic planes handled here.
    let proj = projection_matrix(plane);
    proj.matrix()
        .row_iter()
        .flat_map(|row| {
            row.iter()
                .map(|&x| (x * 1e8).round() as i64)
                .collect::<Vec<_>>()
        })
        .collect()
}

/// 70 4-planes in R^8 meeting the orthoplex bound d_c^2 = 2: the orbit of two
/// seed planes under even sign changes and a PSL(2, 7) action on coordinates
/// labeled {inf, 0, .., 6}.
pub fn planes70_g84() -> Packing {
    let s = 1.0 / 2.0f64.sqrt();
    let mut seed_a = DMatrix::zeros(4, 8);
    for (row, pos) in [0usize, 1, 2, 4].iter().enumerate() {
        seed_a[(row, *pos)] = 1.0;
    }
    let mut seed_b = DMatrix::zeros(4, 8);
    for (row, (p1, p2)) in [(0usize, 1usize), (2, 4), (3, 7), (5, 6)].iter().enumerate() {
        seed_b[(row, *p1)] = s;
        seed_b[(row, *p2)] = s;
    }

    // x -> x+1, x -> -1/x and x -> 2x on the projective line over F_7, as
    // position permutations (position 0 is inf, position c+1 is c).
    let perms: [[usize; 8]; 3] = [
        [0, 2, 3, 4, 5, 6, 7, 1],
        [1, 0, 7, 4, 3, 6, 5, 2],
        [0, 1, 3, 5, 7, 2, 4, 6],
    ];

    let mut order: Vec<Plane> = Vec::new();
    let mut seen: HashMap<Vec<i64>, ()> = HashMap::new();
    let mut queue: VecDeque<DMatrix<f64>> = VecDeque::new();
    for seed in [seed_a, seed_b] {
        let plane = orthonormalize(&seed).expect("seed planes are full rank");
        seen.insert(fingerprint(&plane), ());
        order.push(plane);
        queue.push_back(seed);
    }
    while let Some(gen) = queue.pop_front() {
        let mut images: Vec<DMatrix<f64>> = Vec::with_capacity(10);
        for flip in 1..8usize {
            // Double sign flips (0, flip) generate the even sign-change group.
            let mut img = gen.clone();
            for r in 0..4 {
                img[(r, 0)] = -img[(r, 0)];
                img[(r, flip)] = -img[(r, flip)];
            }
            images.push(img);
        }
        for perm in &perms {
            let mut img = DMatrix::zeros(4, 8);
            for c in 0..8 {
                for r in 0..4 {
                    img[(r, perm[c])] = gen[(r, c)];
                }
            }
            images.push(img);
        }
        for img in images {
            let plane = orthonormalize(&img).expect("orbit stays full rank");
            let key = fingerprint(&plane);
            if !seen.contains_key(&key) {
                seen.insert(key, ());
                order.push(plane);
                queue.push_back(img);
            }
        }
    }
    assert_eq!(order.len(), 70, "orbit closure must have exactly 70 planes");
    Packing::new(order, Metric::Chordal).expect("orbit planes share G(8, 4)")
}

/// 28 3-planes in R^7 meeting the simplex bound d_c^2 = 16/9: spans of
/// disjoint-support vector triples with an even sign pattern, cycled over the
/// 7 coordinates.
pub fn planes28_g73() -> Packing {
    let r2 = 2.0f64.sqrt();
    // v_r places 1 at coordinate 2^r and +-sqrt 2 at coordinate 3 * 2^r (mod 7),
    // so the three supports {1,3}, {2,6}, {4,5} are disjoint.
    let supports: [(usize, usize); 3] = [(1, 3), (2, 6), (4, 5)];
    let signsets: [[f64; 3]; 4] = [
        [1.0, 1.0, 1.0],
        [1.0, -1.0, -1.0],
        [-1.0, 1.0, -1.0],
        [-1.0, -1.0, 1.0],
    ];
    let mut planes = Vec::with_capacity(28);
    for signs in &signsets {
        for shift in 0..7usize {
            let mut raw = DMatrix::zeros(3, 7);
            for (row, &(one_at, root_at)) in supports.iter().enumerate() {
                raw[(row, (one_at + shift) % 7)] = 1.0;
                raw[(row, (root_at + shift) % 7)] = signs[row] * r2;
            }
            planes.push(orthonormalize(&raw).expect("rows have disjoint supports"));
        }
    }
    let distinct: std::collections::HashSet<Vec<i64>> =
        planes.iter().map(fingerprint).collect();
    assert_eq!(distinct.len(), 28, "the 28 planes must be distinct");
    Packing::new(planes, Metric::Chordal).expect("planes share G(7, 3)")
}

/// 18 2-planes in R^4 meeting the orthoplex bound d_c^2 = 1: the spans of
/// perpendicular pairs of D_4 minimal vectors (permutations of (+-1, +-1, 0, 0)).
pub fn planes18_g42() -> Packing {
    let mut vectors: Vec<[f64; 4]> = Vec::with_capacity(24);
    let s = 1.0 / 2.0f64.sqrt();
    for i in 0..4usize {
        for j in (i + 1)..4 {
            for &si in &[s, -s] {
                for &sj in &[s, -s] {
                    let mut v = [0.0; 4];
                    v[i] = si;
                    v[j] = sj;
                    vectors.push(v);
                }
            }
        }
    }
    let mut planes: Vec<Plane> = Vec::new();
    let mut seen: std::collections::HashSet<Vec<i64>> = std::collections::HashSet::new();
    for (a, u) in vectors.iter().enumerate() {
        for w in &vectors[a + 1..] {
            let dot: f64 = u.iter().zip(w).map(|(x, y)| x * y).sum();
            if dot.abs() > 1e-12 {
                continue;
            }
            let raw = DMatrix::from_fn(2, 4, |r, c| if r == 0 { u[c] } else { w[c] });
            let plane = orthonormalize(&raw).expect("perpendicular pair is full rank");
            if seen.insert(fingerprint(&plane)) {
                planes.push(plane);
            }
        }
    }
    assert_eq!(planes.len(), 18, "D_4 perpendicular pairs span exactly 18 planes");
    Packing::new(planes, Metric::Chordal).expect("planes share G(4, 2)")
}
