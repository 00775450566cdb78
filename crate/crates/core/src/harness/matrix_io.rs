//! Text matrix format: the first line holds `n`, followed by `n` lines of
//! `n` whitespace-separated entries written as `re`, `re+imj` or `re-imj`.
//! The reader validates Hermitian symmetry and symmetrizes; the writer
//! emits 17 significant digits.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;

use super::{HarnessError, HarnessResult};
use crate::linalg::{CMatrix, HermitianMatrix};

/// Symmetry tolerance, relative to `max(1, max |entry|)`.
pub const FILE_HERMITIAN_TOL: f64 = 1e-9;

fn parse_entry(tok: &str) -> Option<Complex64> {
    let (body, imaginary) = match tok.strip_suffix('j') {
        Some(b) => (b, true),
        None => (tok, false),
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let z = match (split, imaginary) {
        (Some(k), true) => Complex64::new(body[..k].parse().ok()?, body[k..].parse().ok()?),
        (None, true) => Complex64::new(0.0, body.parse().ok()?),
        (_, false) => Complex64::new(body.parse().ok()?, 0.0),
    };
    (z.re.is_finite() && z.im.is_finite()).then_some(z)
}

pub fn parse_matrix(text: &str) -> HarnessResult<HermitianMatrix> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let header = lines
        .next()
        .ok_or_else(|| HarnessError::Parse("empty matrix file".into()))?;
    let n: usize = header
        .parse()
        .map_err(|_| HarnessError::Parse(format!("first line '{header}' is not a dimension")))?;
    if n == 0 {
        return Err(HarnessError::Parse("dimension must be at least 1".into()));
    }
    let mut data = Vec::with_capacity(n * n);
    for row in 0..n {
        let line = lines
            .next()
            .ok_or_else(|| HarnessError::Parse(format!("expected {n} rows, found {row}")))?;
        let entries = line
            .split_whitespace()
            .map(|t| parse_entry(t).ok_or_else(|| HarnessError::Parse(format!("row {}: bad entry '{t}'", row + 1))))
            .collect::<HarnessResult<Vec<_>>>()?;
        if entries.len() != n {
            return Err(HarnessError::Parse(format!(
                "row {} has {} entries, expected {n}",
                row + 1,
                entries.len()
            )));
        }
        data.extend(entries);
    }
    if lines.next().is_some() {
        return Err(HarnessError::Parse(format!("more than {n} rows")));
    }
    let m = CMatrix::from_row_major(n, data).expect("n * n entries");
    let tol = FILE_HERMITIAN_TOL * m.max_abs().max(1.0);
    HermitianMatrix::with_tolerance(m, tol).map_err(|e| HarnessError::Parse(e.to_string()))
}

pub fn format_matrix(m: &HermitianMatrix) -> String {
    let n = m.dim();
    let mut out = format!("{n}\n");
    for i in 0..n {
        let row: Vec<String> = (0..n)
            .map(|j| {
                let z = m.get(i, j);
                if z.im == 0.0 {
                    format!("{:.16e}", z.re)
                } else {
                    format!("{:.16e}{:+.16e}j", z.re, z.im)
                }
            })
            .collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}

pub fn read_matrix_file(path: &Path) -> HarnessResult<HermitianMatrix> {
    let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path.display().to_string(), e))?;
    parse_matrix(&text)
}

pub fn write_matrix_file(path: &Path, m: &HermitianMatrix) -> HarnessResult<()> {
    std::fs::write(path, format_matrix(m)).map_err(|e| HarnessError::io(path.display().to_string(), e))
}
