//! Absolute value, Jordan decomposition, singular values and the
//! clamp-based parallel minimum of two PSD matrices.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_same_dim, Result};
use crate::linalg::{
    eig_hermitian, eig_hermitian_graded, CMatrix, HermitianMatrix, SpectralDecomposition, ToleranceModel,
};

/// `|A|` for Hermitian `A`: same eigenvectors, eigenvalues `|lambda_i|`.
pub fn abs_hermitian(a: &HermitianMatrix) -> Result<HermitianMatrix> {
    let e = eig_hermitian(a)?;
    Ok(abs_from_spectrum(&e))
}

pub(crate) fn abs_from_spectrum(e: &SpectralDecomposition) -> HermitianMatrix {
    let values: Vec<f64> = e.eigenvalues.iter().map(|x| x.abs()).collect();
    e.recompose(&values)
}

/// Singular values of a Hermitian matrix, i.e. `|lambda_i|` sorted descending.
pub fn singular_values(a: &HermitianMatrix) -> Result<Vec<f64>> {
    Ok(singular_values_from_spectrum(&eig_hermitian(a)?))
}

pub(crate) fn singular_values_from_spectrum(e: &SpectralDecomposition) -> Vec<f64> {
    let mut s: Vec<f64> = e.eigenvalues.iter().map(|x| x.abs()).collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

/// Singular values of an arbitrary square matrix as square roots of the
/// eigenvalues of `M* M`.
pub fn singular_values_general(m: &CMatrix) -> Result<Vec<f64>> {
    let gram = HermitianMatrix::from_hermitian_part(&(&m.adjoint() * m));
    Ok(eig_hermitian(&gram)?
        .eigenvalues
        .into_iter()
        .map(|x| x.max(0.0).sqrt())
        .collect())
}

/// `A = plus - minus` with `plus, minus >= 0` and `plus * minus = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct JordanPair {
    pub plus: HermitianMatrix,
    pub minus: HermitianMatrix,
    /// Number of eigenvalues treated as nonnegative.
    pub split_index: usize,
    /// Eigenvalues of `plus`, descending (zeros included).
    pub plus_eigenvalues: Vec<f64>,
    /// Eigenvalues of `minus`, descending (zeros included).
    pub minus_eigenvalues: Vec<f64>,
}

/// Eigenvalues with `|lambda| <= tol` at the spectral-norm scale count as
/// zero and go to the positive part.
pub fn jordan_decompose(a: &HermitianMatrix, tol: &ToleranceModel) -> Result<JordanPair> {
    Ok(jordan_from_spectrum(&eig_hermitian(a)?, tol))
}

pub(crate) fn jordan_from_spectrum(e: &SpectralDecomposition, tol: &ToleranceModel) -> JordanPair {
    let eff = tol.at_scale(e.spectral_norm());
    let split_index = e.eigenvalues.iter().take_while(|&&x| x >= -eff).count();
    let plus_eigenvalues: Vec<f64> = e
        .eigenvalues
        .iter()
        .enumerate()
        .map(|(i, &x)| if i < split_index { x.max(0.0) } else { 0.0 })
        .collect();
    let minus_diag: Vec<f64> = e
        .eigenvalues
        .iter()
        .enumerate()
        .map(|(i, &x)| if i < split_index { 0.0 } else { -x })
        .collect();
    let mut minus_eigenvalues = minus_diag.clone();
    minus_eigenvalues.sort_by(|x, y| y.total_cmp(x));
    JordanPair {
        plus: e.recompose(&plus_eigenvalues),
        minus: e.recompose(&minus_diag),
        split_index,
        plus_eigenvalues,
        minus_eigenvalues,
    }
}

/// Which argument's inverse square root is applied.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pivot {
    A,
    #[default]
    B,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParallelMinResult {
    pub s: HermitianMatrix,
    pub pivot: Pivot,
    /// Multiple of the identity added to the pivot matrix (0 when it was
    /// safely invertible).
    pub regularization_epsilon: f64,
    /// `min(d_i, 1)` for the eigenvalues `d_i` of `P^(-1/2) Q P^(-1/2)`,
    /// descending.
    pub clamp_values: Vec<f64>,
}

/// Clamp construction of a PSD `S` with `S <= A` and `S <= B`.
///
/// With pivot `B`: diagonalize `B^(-1/2) A B^(-1/2) = W diag(d) W*`, clamp
/// each `d_i` to `[0, 1]`, and return `S = B^(1/2) W diag(t) W* B^(1/2)`.
/// When `lambda_min(B)` is not above the tolerance, `B + eps I` is used in
/// place of `B` and `eps` is reported; then only `S <= B + eps I` holds.
/// The result is not symmetric in `(A, B)` for non-commuting input.
pub fn parallel_min(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    pivot: Pivot,
    tol: &ToleranceModel,
) -> Result<ParallelMinResult> {
    ensure_same_dim(a.dim(), b.dim())?;
    let ea = eig_hermitian(a)?;
    let eb = eig_hermitian(b)?;
    parallel_min_from_spectra(a, &ea, b, &eb, pivot, tol)
}

pub(crate) fn parallel_min_from_spectra(
    a: &HermitianMatrix,
    ea: &SpectralDecomposition,
    b: &HermitianMatrix,
    eb: &SpectralDecomposition,
    pivot: Pivot,
    tol: &ToleranceModel,
) -> Result<ParallelMinResult> {
    // Both must be PSD even though only the pivot is factored.
    crate::linalg::clamped_psd_spectrum(ea, tol)?;
    crate::linalg::clamped_psd_spectrum(eb, tol)?;
    let (other, base) = match pivot {
        Pivot::B => (a, eb),
        Pivot::A => (b, ea),
    };

    let eff = tol.at_scale(base.spectral_norm());
    let (shift, values): (f64, Vec<f64>) = if base.lambda_min() > eff {
        (0.0, base.eigenvalues.clone())
    } else {
        (eff, base.eigenvalues.iter().map(|x| x.max(0.0) + eff).collect())
    };
    // Work in the pivot's eigenbasis so that P^(-1/2) Q P^(-1/2) is the
    // diagonally graded matrix D (U* Q U) D with D = diag(values^(-1/2)).
    let u = &base.vectors;
    let rotated = (&(&u.adjoint() * other.as_matrix()) * u).hermitian_part();
    let inv_root: Vec<f64> = values.iter().map(|x| 1.0 / x.sqrt()).collect();
    let n = values.len();
    let graded = CMatrix::from_fn(n, |i, j| rotated[(i, j)] * (inv_root[i] * inv_root[j]));
    let em = eig_hermitian_graded(&HermitianMatrix::from_hermitian_part(&graded))?;
    let clamp_values: Vec<f64> = em.eigenvalues.iter().map(|d| d.clamp(0.0, 1.0)).collect();
    let clamped = em.recompose(&clamp_values);
    // S = U D^-1 (W diag(t) W*) D^-1 U*
    let root: Vec<f64> = values.iter().map(|x| x.sqrt()).collect();
    let inner = CMatrix::from_fn(n, |i, j| clamped.get(i, j) * (root[i] * root[j]));
    let s = HermitianMatrix::from_hermitian_part(&(&(u * &inner) * &u.adjoint()));

    Ok(ParallelMinResult {
        s,
        pivot,
        regularization_epsilon: shift,
        clamp_values,
    })
}
