use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::matrix::CMatrix;
use crate::error::{Error, Result};

/// Absolute tolerance used by [`HermitianMatrix::new`] for the symmetry check.
pub const HERMITIAN_CONSTRUCTION_TOL: f64 = 1e-12;

/// Relative/absolute tolerance pair. The effective tolerance at scale `s`
/// is `max(abs, rel * s)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceModel {
    pub rel: f64,
    pub abs: f64,
}

impl Default for ToleranceModel {
    fn default() -> Self {
        Self { rel: 1e-9, abs: 1e-12 }
    }
}

impl ToleranceModel {
    pub fn new(rel: f64, abs: f64) -> Result<Self> {
        if !(rel > 0.0 && rel.is_finite()) || !(abs > 0.0 && abs.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "tolerances must be positive and finite (rel = {rel}, abs = {abs})"
            )));
        }
        Ok(Self { rel, abs })
    }

    pub fn at_scale(&self, scale: f64) -> f64 {
        self.abs.max(self.rel * scale)
    }
}

/// Dense Hermitian matrix. The stored entries are exactly Hermitian: the
/// diagonal is real and `m[j][i] == conj(m[i][j])` bit-for-bit.
#[derive(Clone, PartialEq)]
pub struct HermitianMatrix {
    inner: CMatrix,
}

impl HermitianMatrix {
    /// Checks symmetry within [`HERMITIAN_CONSTRUCTION_TOL`] and symmetrizes.
    pub fn new(m: CMatrix) -> Result<Self> {
        Self::with_tolerance(m, HERMITIAN_CONSTRUCTION_TOL)
    }

    pub fn with_tolerance(m: CMatrix, tol: f64) -> Result<Self> {
        if m.dim() == 0 {
            return Err(Error::InvalidInput("matrix dimension must be at least 1".into()));
        }
        if !m.is_finite() {
            return Err(Error::InvalidInput("matrix has non-finite entries".into()));
        }
        let defect = m.hermitian_defect();
        if defect > tol {
            return Err(Error::InvalidInput(format!(
                "matrix is not Hermitian: max |m_ij - conj(m_ji)| = {defect:e} > {tol:e}"
            )));
        }
        Ok(Self {
            inner: m.hermitian_part(),
        })
    }

    /// Takes the Hermitian part `(M + M*)/2` without checking. Used for
    /// products that are Hermitian in exact arithmetic.
    pub fn from_hermitian_part(m: &CMatrix) -> Self {
        Self {
            inner: m.hermitian_part(),
        }
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput("rows must form a square matrix".into()));
        }
        Self::new(CMatrix::from_fn(n, |i, j| Complex64::new(rows[i][j], 0.0)))
    }

    pub fn from_complex_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput("rows must form a square matrix".into()));
        }
        Self::new(CMatrix::from_fn(n, |i, j| rows[i][j]))
    }

    pub fn diagonal(diag: &[f64]) -> Result<Self> {
        Self::new(CMatrix::from_real_diagonal(diag))
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::new(CMatrix::identity(n))
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::new(CMatrix::zeros(n))
    }

    pub fn dim(&self) -> usize {
        self.inner.dim()
    }

    pub fn as_matrix(&self) -> &CMatrix {
        &self.inner
    }

    pub fn into_matrix(self) -> CMatrix {
        self.inner
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.inner[(i, j)]
    }

    pub fn trace(&self) -> f64 {
        self.inner.trace().re
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.inner.frobenius_norm()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_hermitian_part(&(&self.inner + &other.inner))
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::from_hermitian_part(&(&self.inner - &other.inner))
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            inner: self.inner.scale(s),
        }
    }

    /// `self + shift * I`
    pub fn shifted(&self, shift: f64) -> Self {
        let mut m = self.inner.clone();
        for i in 0..m.dim() {
            m[(i, i)] += shift;
        }
        Self { inner: m }
    }

    /// `V self V*` for an arbitrary square `V`.
    pub fn congruence(&self, v: &CMatrix) -> Self {
        Self::from_hermitian_part(&(&(v * &self.inner) * &v.adjoint()))
    }
}

impl std::fmt::Debug for HermitianMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Hermitian{:?}", self.inner)
    }
}
