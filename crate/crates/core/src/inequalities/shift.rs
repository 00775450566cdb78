use super::{InequalityId, PreparedPair, SlackReport};
use crate::decomp::{singular_values, singular_values_from_spectrum, singular_values_general};
use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, power_from_spectrum, CMatrix, HermitianMatrix, ToleranceModel};
use crate::norms::{prefix_sums, weakly_majorized};

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionShiftResult {
    /// `Tr(T) - Tr(X)` with `T = 2 A^(a/2) B^(1-a) A^(a/2)`.
    pub beta: f64,
    /// Rank-1 spectral projector of `T` for its smallest eigenvalue.
    pub q: HermitianMatrix,
    /// `T - beta Q`
    pub t1: HermitianMatrix,
    /// `2 A^a B^(1-a) - beta A^(a/2) Q A^(-a/2)`, not Hermitian in general.
    pub shifted: CMatrix,
    /// `lambda_n(T) - beta`
    pub gamma_n: f64,
    /// Descending eigenvalues of `T`.
    pub t_eigenvalues: Vec<f64>,
    pub t1_singular_values: Vec<f64>,
    pub shifted_singular_values: Vec<f64>,
    /// Weak-majorization margin of `s(X)` under `s(shifted)`.
    pub shifted_margin: f64,
}

pub fn projection_shift(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    alpha: f64,
    tol: &ToleranceModel,
) -> Result<(ProjectionShiftResult, SlackReport)> {
    PreparedPair::new(a, b, tol)?.projection_shift(alpha)
}

impl PreparedPair {
    /// Shifts `T = 2 A^(a/2) B^(1-a) A^(a/2)` down by `beta` on its bottom
    /// eigenvector so that `Tr(T_1) = Tr(X)`, then compares Ky Fan prefix
    /// sums of `s(X)` and `s(T_1)` (the last prefix is the trace norm).
    /// Requires `lambda_min(A) > tol.rel * lambda_max(A)`.
    pub fn projection_shift(&self, alpha: f64) -> Result<(ProjectionShiftResult, SlackReport)> {
        let ea = &self.spectrum_a;
        let (lambda_min, lambda_max) = (ea.lambda_min(), ea.lambda_max());
        if lambda_min.is_nan() || lambda_min <= self.tol.rel * lambda_max {
            return Err(Error::NearSingular { lambda_min, lambda_max });
        }
        let n = self.dim();
        let a_half = power_from_spectrum(ea, alpha / 2.0, &self.tol)?;
        let a_pow = power_from_spectrum(ea, alpha, &self.tol)?;
        let a_neg_half = ea.recompose(&ea.eigenvalues.iter().map(|x| x.powf(-alpha / 2.0)).collect::<Vec<_>>());
        let b_pow = power_from_spectrum(&self.spectrum_b, 1.0 - alpha, &self.tol)?;

        let t = crate::linalg::sandwich(&a_half, &b_pow).scale(2.0);
        let et = eig_hermitian(&t)?;
        let beta = t.trace() - self.x.trace();
        // Last index of the stable descending sort.
        let q = et.projector(n - 1);
        let t1 = t.sub(&q.scale(beta));
        let gamma_n = et.lambda_min() - beta;

        let product = (a_pow.as_matrix() * b_pow.as_matrix()).scale(2.0);
        let correction = (&(a_half.as_matrix() * q.as_matrix()) * a_neg_half.as_matrix()).scale(beta);
        let shifted = &product - &correction;

        let s_x = singular_values_from_spectrum(&self.spectrum_x);
        let t1_singular_values = singular_values(&t1)?;
        let shifted_singular_values = singular_values_general(&shifted)?;
        let shifted_margin = weakly_majorized(&s_x, &shifted_singular_values, 0.0)?.margin;

        let slacks: Vec<f64> = prefix_sums(&t1_singular_values)
            .iter()
            .zip(prefix_sums(&s_x))
            .map(|(y, x)| y - x)
            .collect();
        let report = SlackReport::new(
            InequalityId::ProjectionShift,
            alpha,
            None,
            slacks,
            self.scale,
            &self.tol,
        );

        Ok((
            ProjectionShiftResult {
                beta,
                q,
                t1,
                shifted,
                gamma_n,
                t_eigenvalues: et.eigenvalues,
                t1_singular_values,
                shifted_singular_values,
                shifted_margin,
            },
            report,
        ))
    }
}
