//! Plain-text interchange format for packings, plus the small row-of-numbers
//! formats used for point sets and integer matrices.
//!
//! A packing file is a header line `m n N metric` followed by N blocks of n
//! rows, each row m whitespace-separated reals. Lines starting with `#` and
//! blank lines are ignored everywhere. Reals are written with 17 significant
//! digits, so serialize -> parse reproduces every f64 bit for bit.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::packing::{Metric, Packing};
use crate::plane::orthonormalize;

/// Drift from orthonormality beyond which a parsed generator block is
/// rejected instead of being quietly re-orthonormalized.
pub const MAX_PARSE_DRIFT: f64 = 1e-6;

fn parse_usize(token: &str, line: usize, what: &str) -> Result<usize> {
    token.parse::<usize>().map_err(|_| Error::Parse {
        line,
        msg: format!("{what} must be a non-negative integer, got '{token}'"),
    })
}

/// Serialize a packing. The output is deterministic: fixed header, one
/// generator row per line, blank line between planes, 17 significant digits.
pub fn serialize_packing(packing: &Packing) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "# packing of {} {}-planes in R^{}\n",
        packing.len(),
        packing.n(),
        packing.m()
    ));
    out.push_str(&format!(
        "{} {} {} {}\n",
        packing.m(),
        packing.n(),
        packing.len(),
        packing.metric()
    ));
    for plane in packing.planes() {
        out.push('\n');
        for i in 0..packing.n() {
            let row: Vec<String> = (0..packing.m())
                .map(|j| format!("{:.16e}", plane.gen()[(i, j)]))
                .collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
    }
    out
}

/// Parse a packing file. Generator blocks may carry rounding drift up to
/// [`MAX_PARSE_DRIFT`]; they are re-orthonormalized on the way in.
pub fn parse_packing(text: &str) -> Result<Packing> {
    let mut header: Option<(usize, usize, usize, Metric)> = None;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        match header {
            None => {
                if tokens.len() != 4 {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: format!(
                            "header must be 'm n N metric' (4 tokens), got {}",
                            tokens.len()
                        ),
                    });
                }
                let m = parse_usize(tokens[0], line_no, "m")?;
                let n = parse_usize(tokens[1], line_no, "n")?;
                let count = parse_usize(tokens[2], line_no, "N")?;
                let metric: Metric = tokens[3].parse().map_err(|_| Error::Parse {
                    line: line_no,
                    msg: format!("unknown metric '{}'", tokens[3]),
                })?;
                if n < 1 || n > m || count < 1 {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: format!("header out of range: m = {m}, n = {n}, N = {count}"),
                    });
                }
                header = Some((m, n, count, metric));
            }
            Some((m, _, _, _)) => {
                if tokens.len() != m {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: format!("expected {m} reals per row, got {}", tokens.len()),
                    });
                }
                let mut row = Vec::with_capacity(m);
                for tok in tokens {
                    row.push(tok.parse::<f64>().map_err(|_| Error::Parse {
                        line: line_no,
                        msg: format!("not a real number: '{tok}'"),
                    })?);
                }
                rows.push(row);
            }
        }
    }
    let (m, n, count, metric) = header.ok_or(Error::Parse {
        line: text.lines().count() + 1,
        msg: "missing header line".into(),
    })?;
    if rows.len() != n * count {
        return Err(Error::CountMismatch {
            expected: n * count,
            found: rows.len(),
        });
    }
    let mut planes = Vec::with_capacity(count);
    for p in 0..count {
        let raw = DMatrix::from_fn(n, m, |i, j| rows[p * n + i][j]);
        let gram = &raw * raw.transpose();
        let mut drift = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let target = if i == j { 1.0 } else { 0.0 };
                drift = drift.max((gram[(i, j)] - target).abs());
            }
        }
        if drift > MAX_PARSE_DRIFT {
            return Err(Error::NotOrthonormal { plane: p, drift });
        }
        planes.push(orthonormalize(&raw)?);
    }
    Packing::new(planes, metric)
}

/// Serialize a list of 3-dimensional unit points, one per line.
pub fn serialize_points(points: &[[f64; 3]]) -> String {
    let mut out = String::from("# antipodal point set on S^2\n");
    for p in points {
        out.push_str(&format!("{:.16e} {:.16e} {:.16e}\n", p[0], p[1], p[2]));
    }
    out
}

/// Parse a file of 3-dimensional points: one `x y z` row per line.
pub fn parse_points(text: &str) -> Result<Vec<[f64; 3]>> {
    let mut points = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        if tokens.len() != 3 {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("expected 3 reals per point, got {}", tokens.len()),
            });
        }
        let mut p = [0.0; 3];
        for (k, tok) in tokens.iter().enumerate() {
            p[k] = tok.parse::<f64>().map_err(|_| Error::Parse {
                line: line_no,
                msg: format!("not a real number: '{tok}'"),
            })?;
        }
        points.push(p);
    }
    if points.is_empty() {
        return Err(Error::Parse {
            line: 1,
            msg: "no points in file".into(),
        });
    }
    Ok(points)
}

/// Parse a whitespace-separated integer matrix (equal-length rows).
pub fn parse_int_matrix(text: &str) -> Result<Vec<Vec<i64>>> {
    let mut rows: Vec<Vec<i64>> = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut row = Vec::new();
        for tok in trimmed.split_whitespace() {
            row.push(tok.parse::<i64>().map_err(|_| Error::Parse {
                line: line_no,
                msg: format!("not an integer: '{tok}'"),
            })?);
        }
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("expected {} entries per row, got {}", first.len(), row.len()),
                });
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Parse {
            line: 1,
            msg: "no rows in file".into(),
        });
    }
    Ok(rows)
}
