#![allow(dead_code)]

use std::io::Write;

use nalgebra::DMatrix;
use psineq::linalg::{CMatrix, Complex64, HermitianMatrix};

pub fn to_nalgebra(m: &CMatrix) -> DMatrix<Complex64> {
    let n = m.dim();
    DMatrix::from_fn(n, n, |i, j| m[(i, j)])
}

/// Descending singular values from nalgebra's SVD.
pub fn svd_oracle(m: &CMatrix) -> Vec<f64> {
    let mut s: Vec<f64> = to_nalgebra(m).singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Descending eigenvalues from nalgebra's symmetric eigensolver.
pub fn eigh_oracle(m: &HermitianMatrix) -> Vec<f64> {
    let mut e: Vec<f64> = to_nalgebra(m.as_matrix())
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .collect();
    e.sort_by(|a, b| b.total_cmp(a));
    e
}

/// Eigenvalues of a general complex matrix from the Schur form, sorted by
/// descending real part.
pub fn schur_eigenvalues(m: &CMatrix) -> Vec<Complex64> {
    let mut e: Vec<Complex64> = to_nalgebra(m)
        .schur()
        .eigenvalues()
        .expect("complex Schur form is triangular")
        .iter()
        .copied()
        .collect();
    e.sort_by(|a, b| b.re.total_cmp(&a.re));
    e
}

/// Writes one verdict line straight to the process's stderr, so it shows up
/// even when libtest captures output.
pub fn verdict(criterion: u32, passed: bool, detail: &str) {
    let line = format!(
        "{} criterion {criterion}: {detail}\n",
        if passed { "PASS" } else { "FAIL" }
    );
    let _ = std::io::stderr().lock().write_all(line.as_bytes());
}
