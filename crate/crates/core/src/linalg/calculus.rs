//! Spectral functional calculus on Hermitian matrices.
//!
//! Fractional powers follow the support-projection convention: `0^a = 0`
//! for every `a` in `[0, 1]`, including `a = 0`, while `x^0 = 1` for
//! `x > 0`. So `A^0` is the orthogonal projector onto the range of `A`, and
//! `a -> Tr(A^a B^(1-a))` is continuous at the endpoints for singular
//! inputs.
//!
//! Eigenvalues in `[-tol, tol]` (at the matrix's spectral-norm scale) count
//! as exact zeros before powering; anything below `-tol` is rejected.

use super::eigen::{eig_hermitian, SpectralDecomposition};
use super::hermitian::{HermitianMatrix, ToleranceModel};
use crate::error::{ensure_same_dim, Error, Result};

/// Applies `f` to the spectrum: `U diag(f(lambda_i)) U*`.
pub fn matrix_function(a: &HermitianMatrix, f: impl Fn(f64) -> f64) -> Result<HermitianMatrix> {
    let e = eig_hermitian(a)?;
    let mut values = Vec::with_capacity(e.dim());
    for &lambda in &e.eigenvalues {
        let y = f(lambda);
        if !y.is_finite() {
            return Err(Error::DomainError { eigenvalue: lambda });
        }
        values.push(y);
    }
    Ok(e.recompose(&values))
}

fn check_alpha(alpha: f64) -> Result<()> {
    if (0.0..=1.0).contains(&alpha) {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("exponent {alpha} outside [0, 1]")))
    }
}

/// Eigenvalues of a PSD spectrum after clamping and the zero threshold.
/// Returns the clamped values; errors if the spectrum is genuinely indefinite.
pub(crate) fn clamped_psd_spectrum(e: &SpectralDecomposition, tol: &ToleranceModel) -> Result<Vec<f64>> {
    let eff = tol.at_scale(e.spectral_norm());
    let lambda_min = e.lambda_min();
    if lambda_min < -eff {
        return Err(Error::NotPsd {
            lambda_min,
            tolerance: eff,
        });
    }
    Ok(e.eigenvalues.iter().map(|&x| if x <= eff { 0.0 } else { x }).collect())
}

fn power_scalar(x: f64, alpha: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else if alpha == 0.0 {
        1.0
    } else {
        x.powf(alpha)
    }
}

/// `A^alpha` from an existing decomposition of `A`.
pub fn power_from_spectrum(e: &SpectralDecomposition, alpha: f64, tol: &ToleranceModel) -> Result<HermitianMatrix> {
    check_alpha(alpha)?;
    let values: Vec<f64> = clamped_psd_spectrum(e, tol)?
        .into_iter()
        .map(|x| power_scalar(x, alpha))
        .collect();
    Ok(e.recompose(&values))
}

/// `A^alpha` for PSD `A` and `alpha` in `[0, 1]`.
pub fn matrix_power(a: &HermitianMatrix, alpha: f64, tol: &ToleranceModel) -> Result<HermitianMatrix> {
    check_alpha(alpha)?;
    power_from_spectrum(&eig_hermitian(a)?, alpha, tol)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsdWitness {
    pub is_psd: bool,
    pub lambda_min: f64,
    /// The effective tolerance the smallest eigenvalue was compared against.
    pub tolerance: f64,
}

pub fn is_psd(a: &HermitianMatrix, tol: &ToleranceModel) -> Result<PsdWitness> {
    let e = eig_hermitian(a)?;
    let tolerance = tol.at_scale(e.spectral_norm());
    let lambda_min = e.lambda_min();
    Ok(PsdWitness {
        is_psd: lambda_min >= -tolerance,
        lambda_min,
        tolerance,
    })
}

/// Eigenvalues of `A^alpha B^(1-alpha)` (descending, clamped at 0), computed
/// through the similar Hermitian matrix `B^((1-alpha)/2) A^alpha B^((1-alpha)/2)`.
pub fn eig_product(a: &HermitianMatrix, b: &HermitianMatrix, alpha: f64, tol: &ToleranceModel) -> Result<Vec<f64>> {
    ensure_same_dim(a.dim(), b.dim())?;
    check_alpha(alpha)?;
    let ea = eig_hermitian(a)?;
    let eb = eig_hermitian(b)?;
    let a_pow = power_from_spectrum(&ea, alpha, tol)?;
    let b_half = power_from_spectrum(&eb, (1.0 - alpha) / 2.0, tol)?;
    hermitized_eigenvalues(&b_half, &a_pow)
}

/// Eigenvalues of `outer * inner * outer`, descending, clamped at 0.
pub(crate) fn hermitized_eigenvalues(outer: &HermitianMatrix, inner: &HermitianMatrix) -> Result<Vec<f64>> {
    let h = sandwich(outer, inner);
    Ok(eig_hermitian(&h)?.eigenvalues.into_iter().map(|x| x.max(0.0)).collect())
}

/// `outer * inner * outer` as a Hermitian matrix.
pub(crate) fn sandwich(outer: &HermitianMatrix, inner: &HermitianMatrix) -> HermitianMatrix {
    let o = outer.as_matrix();
    HermitianMatrix::from_hermitian_part(&(&(o * inner.as_matrix()) * o))
}
