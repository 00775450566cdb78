//! Slack computations for the eigenvalue, trace and norm inequalities
//! relating `X = A + B - |A - B|` to `2 A^a B^(1-a)`, the projection-shift
//! construction, and the Chernoff exponent.
//!
//! Every checker returns a [`SlackReport`] whose slacks are `RHS - LHS`;
//! a report passes when its smallest slack is at least
//! `-max(tol.abs, tol.rel * scale)` with `scale = ||A||_2 + ||B||_2`.

mod chernoff;
mod shift;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use chernoff::{chernoff_exponent, golden_section_minimize, trace_distance, ChernoffResult, CHERNOFF_GRID_POINTS};
pub use shift::{projection_shift, ProjectionShiftResult};

use crate::decomp::{abs_from_spectrum, jordan_from_spectrum, singular_values_general, JordanPair};
use crate::error::{ensure_same_dim, Error, Result};
use crate::linalg::{
    clamped_psd_spectrum, eig_hermitian, hermitized_eigenvalues, power_from_spectrum, HermitianMatrix,
    SpectralDecomposition, ToleranceModel,
};
use crate::norms::NormSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum InequalityId {
    EigDominance,
    TraceLower,
    TraceUpper,
    PartPlusNorm,
    PartMinusNorm,
    OperatorNorm,
    ProjectionShift,
}

impl InequalityId {
    pub const ALL: [InequalityId; 7] = [
        InequalityId::EigDominance,
        InequalityId::TraceLower,
        InequalityId::TraceUpper,
        InequalityId::PartPlusNorm,
        InequalityId::PartMinusNorm,
        InequalityId::OperatorNorm,
        InequalityId::ProjectionShift,
    ];

    /// Whether the check is evaluated once per configured norm.
    pub fn is_per_norm(&self) -> bool {
        matches!(self, InequalityId::PartPlusNorm | InequalityId::PartMinusNorm)
    }
}

impl fmt::Display for InequalityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for InequalityId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_ascii_lowercase();
        InequalityId::ALL
            .into_iter()
            .find(|id| id.to_string().to_ascii_lowercase() == key)
            .ok_or_else(|| Error::InvalidInput(format!("unknown check '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlackReport {
    pub inequality_id: InequalityId,
    pub alpha: f64,
    pub norm_spec: Option<NormSpec>,
    /// `RHS - LHS`, one entry per index (or a single entry).
    pub slacks: Vec<f64>,
    pub worst_slack: f64,
    pub passed: bool,
    /// Normalizer for the tolerance, `||A||_2 + ||B||_2`.
    pub scale: f64,
}

impl SlackReport {
    pub fn new(
        inequality_id: InequalityId,
        alpha: f64,
        norm_spec: Option<NormSpec>,
        slacks: Vec<f64>,
        scale: f64,
        tol: &ToleranceModel,
    ) -> Self {
        let worst_slack = slacks.iter().copied().fold(f64::INFINITY, f64::min);
        Self {
            inequality_id,
            alpha,
            norm_spec,
            passed: worst_slack >= -tol.at_scale(scale),
            slacks,
            worst_slack,
            scale,
        }
    }
}

/// A PSD pair with every `alpha`-independent quantity computed once.
#[derive(Debug, Clone)]
pub struct PreparedPair {
    pub a: HermitianMatrix,
    pub b: HermitianMatrix,
    pub spectrum_a: SpectralDecomposition,
    pub spectrum_b: SpectralDecomposition,
    /// `A + B - |A - B|`
    pub x: HermitianMatrix,
    pub spectrum_x: SpectralDecomposition,
    pub jordan_x: JordanPair,
    /// `||A||_2 + ||B||_2`
    pub scale: f64,
    pub tol: ToleranceModel,
}

/// Quantities that depend on `alpha`.
#[derive(Debug, Clone)]
pub struct AlphaTerms {
    pub alpha: f64,
    /// Eigenvalues of `B^((1-a)/2) A^a B^((1-a)/2)`, descending.
    pub product_eigenvalues: Vec<f64>,
    /// Eigenvalues of `A^(a/2) B^(1-a) A^(a/2)`, descending. These are also
    /// its singular values.
    pub hermitized_singular_values: Vec<f64>,
}

impl PreparedPair {
    pub fn new(a: &HermitianMatrix, b: &HermitianMatrix, tol: &ToleranceModel) -> Result<Self> {
        ensure_same_dim(a.dim(), b.dim())?;
        let spectrum_a = eig_hermitian(a)?;
        let spectrum_b = eig_hermitian(b)?;
        clamped_psd_spectrum(&spectrum_a, tol)?;
        clamped_psd_spectrum(&spectrum_b, tol)?;
        let diff = eig_hermitian(&a.sub(b))?;
        let x = a.add(b).sub(&abs_from_spectrum(&diff));
        let spectrum_x = eig_hermitian(&x)?;
        let jordan_x = jordan_from_spectrum(&spectrum_x, tol);
        let scale = spectrum_a.spectral_norm() + spectrum_b.spectral_norm();
        Ok(Self {
            a: a.clone(),
            b: b.clone(),
            spectrum_a,
            spectrum_b,
            x,
            spectrum_x,
            jordan_x,
            scale,
            tol: *tol,
        })
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    pub fn alpha_terms(&self, alpha: f64) -> Result<AlphaTerms> {
        let a_pow = power_from_spectrum(&self.spectrum_a, alpha, &self.tol)?;
        let b_half = power_from_spectrum(&self.spectrum_b, (1.0 - alpha) / 2.0, &self.tol)?;
        let a_half = power_from_spectrum(&self.spectrum_a, alpha / 2.0, &self.tol)?;
        let b_pow = power_from_spectrum(&self.spectrum_b, 1.0 - alpha, &self.tol)?;
        Ok(AlphaTerms {
            alpha,
            product_eigenvalues: hermitized_eigenvalues(&b_half, &a_pow)?,
            hermitized_singular_values: hermitized_eigenvalues(&a_half, &b_pow)?,
        })
    }

    /// Singular values of the non-Hermitian product `A^a B^(1-a)`.
    pub fn product_singular_values(&self, alpha: f64) -> Result<Vec<f64>> {
        let a_pow = power_from_spectrum(&self.spectrum_a, alpha, &self.tol)?;
        let b_pow = power_from_spectrum(&self.spectrum_b, 1.0 - alpha, &self.tol)?;
        singular_values_general(&(a_pow.as_matrix() * b_pow.as_matrix()))
    }

    fn report(&self, id: InequalityId, alpha: f64, norm: Option<NormSpec>, slacks: Vec<f64>) -> SlackReport {
        SlackReport::new(id, alpha, norm, slacks, self.scale, &self.tol)
    }

    /// `2 lambda_i(A^a B^(1-a)) - lambda_i(X)` for each `i`.
    pub fn eig_dominance(&self, terms: &AlphaTerms) -> SlackReport {
        let slacks = terms
            .product_eigenvalues
            .iter()
            .zip(&self.spectrum_x.eigenvalues)
            .map(|(p, x)| 2.0 * p - x)
            .collect();
        self.report(InequalityId::EigDominance, terms.alpha, None, slacks)
    }

    /// `(Tr X - 0, 2 Tr(A^a B^(1-a)) - Tr X)`.
    pub fn trace(&self, terms: &AlphaTerms) -> (SlackReport, SlackReport) {
        let tr_x = self.x.trace();
        let tr_product: f64 = terms.product_eigenvalues.iter().sum();
        (
            self.report(InequalityId::TraceLower, terms.alpha, None, vec![tr_x]),
            self.report(
                InequalityId::TraceUpper,
                terms.alpha,
                None,
                vec![2.0 * tr_product - tr_x],
            ),
        )
    }

    /// Norm of `X_+` and of `X_-` against `2 |||A^(a/2) B^(1-a) A^(a/2)|||`.
    pub fn part_norms(&self, terms: &AlphaTerms, spec: NormSpec) -> Result<(SlackReport, SlackReport)> {
        let rhs = 2.0 * spec.gauge(&terms.hermitized_singular_values)?;
        let plus = spec.gauge(&self.jordan_x.plus_eigenvalues)?;
        let minus = spec.gauge(&self.jordan_x.minus_eigenvalues)?;
        Ok((
            self.report(InequalityId::PartPlusNorm, terms.alpha, Some(spec), vec![rhs - plus]),
            self.report(InequalityId::PartMinusNorm, terms.alpha, Some(spec), vec![rhs - minus]),
        ))
    }

    /// `||X|| = max(||X_+||, ||X_-||)` against `2 ||A^(a/2) B^(1-a) A^(a/2)||`.
    pub fn operator_norm(&self, terms: &AlphaTerms) -> SlackReport {
        let lhs = self.jordan_x.plus_eigenvalues[0].max(self.jordan_x.minus_eigenvalues[0]);
        let rhs = 2.0 * terms.hermitized_singular_values[0];
        self.report(
            InequalityId::OperatorNorm,
            terms.alpha,
            Some(NormSpec::Operator),
            vec![rhs - lhs],
        )
    }
}

pub fn check_eig_dominance(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    alpha: f64,
    tol: &ToleranceModel,
) -> Result<SlackReport> {
    let p = PreparedPair::new(a, b, tol)?;
    Ok(p.eig_dominance(&p.alpha_terms(alpha)?))
}

pub fn check_trace(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    alpha: f64,
    tol: &ToleranceModel,
) -> Result<(SlackReport, SlackReport)> {
    let p = PreparedPair::new(a, b, tol)?;
    Ok(p.trace(&p.alpha_terms(alpha)?))
}

pub fn check_part_norms(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    alpha: f64,
    spec: NormSpec,
    tol: &ToleranceModel,
) -> Result<(SlackReport, SlackReport)> {
    let p = PreparedPair::new(a, b, tol)?;
    p.part_norms(&p.alpha_terms(alpha)?, spec)
}

pub fn check_operator_norm(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    alpha: f64,
    tol: &ToleranceModel,
) -> Result<SlackReport> {
    let p = PreparedPair::new(a, b, tol)?;
    Ok(p.operator_norm(&p.alpha_terms(alpha)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::abs_hermitian;
    use crate::randgen::random_psd;

    fn tol() -> ToleranceModel {
        ToleranceModel::default()
    }

    #[test]
    fn equal_pair_has_zero_slacks() {
        let a = random_psd(3, 3, 1).unwrap();
        let r = check_eig_dominance(&a, &a, 0.3, &tol()).unwrap();
        assert!(r.passed);
        assert!(r.slacks.iter().all(|s| s.abs() < 1e-12), "{:?}", r.slacks);
    }

    #[test]
    fn orthogonal_supports() {
        let a = HermitianMatrix::diagonal(&[1.0, 0.0]).unwrap();
        let b = HermitianMatrix::diagonal(&[0.0, 1.0]).unwrap();
        let r = check_eig_dominance(&a, &b, 0.5, &tol()).unwrap();
        assert_eq!(r.slacks.len(), 2);
        assert!(r.slacks.iter().all(|s| s.abs() < 1e-15));
        for alpha in [0.0, 0.3, 1.0] {
            let (lo, hi) = check_trace(&a, &b, alpha, &tol()).unwrap();
            assert!(lo.worst_slack.abs() < 1e-15 && hi.worst_slack.abs() < 1e-15);
        }
        let (plus, minus) = check_part_norms(&a, &b, 0.5, NormSpec::Trace, &tol()).unwrap();
        assert!(plus.worst_slack.abs() < 1e-15 && minus.worst_slack.abs() < 1e-15);
    }

    #[test]
    fn commuting_example_with_identity() {
        // B = I: X = A + I - |A - I|, eigenvalues a + 1 - |a - 1| for
        // a = (3 +- sqrt 5)/2; RHS 2 sqrt(a).
        let a = HermitianMatrix::from_real_rows(&[&[2.0, 1.0], &[1.0, 1.0]]).unwrap();
        let b = HermitianMatrix::identity(2).unwrap();
        let r = check_eig_dominance(&a, &b, 0.5, &tol()).unwrap();
        let lam = [(3.0 + 5f64.sqrt()) / 2.0, (3.0 - 5f64.sqrt()) / 2.0];
        let expected: Vec<f64> = lam
            .iter()
            .map(|&x| 2.0 * x.sqrt() - (x + 1.0 - (x - 1.0).abs()))
            .collect();
        assert!(r.passed);
        for (s, e) in r.slacks.iter().zip(&expected) {
            assert!((s - e).abs() < 1e-12, "{s} vs {e}");
        }
        assert!((r.slacks[0] - 1.2361).abs() < 1e-4 && (r.slacks[1] - 0.4721).abs() < 1e-4);
    }

    #[test]
    fn density_pair_trace_slacks() {
        let a = random_psd(3, 3, 2).unwrap();
        let rho = a.scale(1.0 / a.trace());
        let (lo, hi) = check_trace(&rho, &rho, 0.4, &tol()).unwrap();
        assert!((hi.worst_slack).abs() < 1e-12);
        assert!((lo.worst_slack - 2.0).abs() < 1e-12);
    }

    #[test]
    fn equal_pair_part_norms() {
        let a = random_psd(3, 3, 4).unwrap();
        for spec in [
            NormSpec::Operator,
            NormSpec::Trace,
            NormSpec::KyFan(2),
            NormSpec::Schatten(3.0),
        ] {
            let (plus, minus) = check_part_norms(&a, &a, 0.6, spec, &tol()).unwrap();
            assert!(plus.worst_slack.abs() < 1e-10, "{spec}: {plus:?}");
            let rhs = 2.0 * crate::norms::norm(&a, spec).unwrap();
            assert!((minus.worst_slack - rhs).abs() < 1e-10);
        }
    }

    #[test]
    fn operator_norm_examples() {
        let i = HermitianMatrix::identity(2).unwrap();
        let r = check_operator_norm(&i, &i, 0.5, &tol()).unwrap();
        assert!(r.worst_slack.abs() < 1e-15);
        let a = HermitianMatrix::diagonal(&[2.0, 0.0]).unwrap();
        let b = HermitianMatrix::diagonal(&[0.0, 3.0]).unwrap();
        let r = check_operator_norm(&a, &b, 0.5, &tol()).unwrap();
        assert!(r.passed && r.worst_slack >= 0.0);
    }

    #[test]
    fn x_matches_twice_b_minus_negative_part() {
        let a = random_psd(4, 4, 10).unwrap();
        let b = random_psd(4, 2, 11).unwrap();
        let p = PreparedPair::new(&a, &b, &tol()).unwrap();
        let direct = a.add(&b).sub(&abs_hermitian(&a.sub(&b)).unwrap());
        assert!((p.x.as_matrix() - direct.as_matrix()).frobenius_norm() < 1e-12);
    }

    #[test]
    fn errors_propagate() {
        let a = HermitianMatrix::diagonal(&[1.0, -1.0]).unwrap();
        let b = HermitianMatrix::identity(2).unwrap();
        assert!(matches!(
            check_eig_dominance(&a, &b, 0.5, &tol()),
            Err(Error::NotPsd { .. })
        ));
        let c = HermitianMatrix::identity(3).unwrap();
        assert!(matches!(
            check_trace(&b, &c, 0.5, &tol()),
            Err(Error::ShapeError { .. })
        ));
    }

    #[test]
    fn check_names_parse() {
        for id in InequalityId::ALL {
            assert_eq!(id.to_string().parse::<InequalityId>().unwrap(), id);
        }
        assert_eq!("trace-upper".parse::<InequalityId>().unwrap(), InequalityId::TraceUpper);
        assert!("nonsense".parse::<InequalityId>().is_err());
    }

    #[test]
    fn report_pass_rule() {
        let t = ToleranceModel { rel: 1e-8, abs: 1e-12 };
        let r = SlackReport::new(InequalityId::TraceUpper, 0.5, None, vec![1.0, -5e-9], 1.0, &t);
        assert!(r.passed);
        let r = SlackReport::new(InequalityId::TraceUpper, 0.5, None, vec![1.0, -2e-8], 1.0, &t);
        assert!(!r.passed);
        assert_eq!(r.worst_slack, -2e-8);
    }
}
