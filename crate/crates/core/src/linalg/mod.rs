//! Dense Hermitian matrices, the Jacobi eigensolver and spectral calculus.

mod calculus;
mod eigen;
mod hermitian;
mod matrix;

pub(crate) use calculus::{clamped_psd_spectrum, hermitized_eigenvalues, sandwich};
pub use calculus::{eig_product, is_psd, matrix_function, matrix_power, power_from_spectrum, PsdWitness};
pub(crate) use eigen::eig_hermitian_graded;
pub use eigen::{eig_hermitian, SpectralDecomposition, MAX_SWEEPS, OFF_DIAGONAL_RTOL};
pub use hermitian::{HermitianMatrix, ToleranceModel, HERMITIAN_CONSTRUCTION_TOL};
pub use matrix::CMatrix;

pub use num_complex::Complex64;
