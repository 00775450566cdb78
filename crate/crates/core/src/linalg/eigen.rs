//! Cyclic Jacobi eigensolver for dense Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq` with a diagonal
//! unitary and then applies a real Givens rotation, so the working matrix
//! stays exactly Hermitian and its diagonal stays real. Sweeps stop when the
//! off-diagonal Frobenius mass falls to `OFF_DIAGONAL_RTOL * ||A||_F` or after
//! `MAX_SWEEPS` sweeps.

use num_complex::Complex64;

use super::hermitian::HermitianMatrix;
use super::matrix::CMatrix;
use crate::error::{Error, Result};

pub const OFF_DIAGONAL_RTOL: f64 = 1e-14;
pub const MAX_SWEEPS: usize = 100;

/// Eigenvalues in descending order with the matching unitary eigenvector
/// matrix (column `j` belongs to `eigenvalues[j]`).
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub vectors: CMatrix,
    /// Number of Jacobi sweeps that were performed.
    pub sweeps: usize,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn lambda_max(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn lambda_min(&self) -> f64 {
        self.eigenvalues[self.eigenvalues.len() - 1]
    }

    /// `max |lambda_i|`, the operator norm of the decomposed matrix.
    pub fn spectral_norm(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    /// `U diag(values) U*` for arbitrary per-eigenvalue values.
    pub fn recompose(&self, values: &[f64]) -> HermitianMatrix {
        let scaled = self.vectors.scale_columns(values);
        HermitianMatrix::from_hermitian_part(&(&scaled * &self.vectors.adjoint()))
    }

    pub fn reconstruct(&self) -> HermitianMatrix {
        self.recompose(&self.eigenvalues)
    }

    /// Rank-1 projector onto eigenvector `j`.
    pub fn projector(&self, j: usize) -> HermitianMatrix {
        HermitianMatrix::from_hermitian_part(&CMatrix::outer(&self.vectors.column(j)))
    }
}

/// Diagonalizes a Hermitian matrix. Deterministic for identical input bits.
pub fn eig_hermitian(a: &HermitianMatrix) -> Result<SpectralDecomposition> {
    jacobi(a, false)
}

/// Like [`eig_hermitian`], followed by extra sweeps until every off-diagonal
/// entry is negligible relative to its two diagonal entries,
/// `|a_pq| <= GRADED_RTOL * sqrt(|a_pp a_qq|)`. For graded matrices
/// `D H D` with diagonal `D` this recovers small eigenvalues to high
/// relative accuracy.
pub(crate) fn eig_hermitian_graded(a: &HermitianMatrix) -> Result<SpectralDecomposition> {
    jacobi(a, true)
}

const GRADED_RTOL: f64 = 1e-15;

fn relatively_converged(w: &CMatrix) -> bool {
    let n = w.dim();
    for p in 0..n {
        for q in (p + 1)..n {
            let bound = GRADED_RTOL * (w[(p, p)].re * w[(q, q)].re).abs().sqrt();
            if w[(p, q)].norm() > bound {
                return false;
            }
        }
    }
    true
}

fn jacobi(a: &HermitianMatrix, graded: bool) -> Result<SpectralDecomposition> {
    let m = a.as_matrix();
    if !m.is_finite() {
        return Err(Error::InvalidInput("matrix has non-finite entries".into()));
    }
    let n = m.dim();
    let mut w = m.clone();
    let mut v = CMatrix::identity(n);
    let target = OFF_DIAGONAL_RTOL * m.frobenius_norm();

    let mut sweeps = 0;
    while sweeps < MAX_SWEEPS && (off_diagonal_norm(&w) > target || (graded && !relatively_converged(&w))) {
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = w[(p, q)];
                let mag = apq.norm();
                if mag == 0.0 {
                    continue;
                }
                let app = w[(p, p)].re;
                let aqq = w[(q, q)].re;
                // Negligible pivot relative to both diagonal entries.
                if graded && mag <= 0.1 * GRADED_RTOL * (app * aqq).abs().sqrt() {
                    continue;
                }
                if !graded && sweeps > 3 && app.abs() + 100.0 * mag == app.abs() && aqq.abs() + 100.0 * mag == aqq.abs()
                {
                    w[(p, q)] = Complex64::new(0.0, 0.0);
                    w[(q, p)] = Complex64::new(0.0, 0.0);
                    continue;
                }
                rotate(&mut w, &mut v, p, q, app, aqq, apq, mag);
            }
        }
        sweeps += 1;
    }

    let diag: Vec<f64> = (0..n).map(|i| w[(i, i)].re).collect();
    let mut order: Vec<usize> = (0..n).collect();
    // Stable: exact ties keep the Jacobi output order.
    order.sort_by(|&i, &j| diag[j].total_cmp(&diag[i]));

    let eigenvalues = order.iter().map(|&i| diag[i]).collect();
    let vectors = CMatrix::from_fn(n, |r, c| v[(r, order[c])]);
    Ok(SpectralDecomposition {
        eigenvalues,
        vectors,
        sweeps,
    })
}

fn off_diagonal_norm(w: &CMatrix) -> f64 {
    let n = w.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += w[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

#[allow(clippy::too_many_arguments)]
fn rotate(w: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize, app: f64, aqq: f64, apq: Complex64, mag: f64) {
    let n = w.dim();
    let phase = apq / mag;
    let phase_c = phase.conj();

    let theta = (aqq - app) / (2.0 * mag);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    // theta == 0 gives signum 1, i.e. a 45 degree rotation.
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // W <- U* W U with U = [[c, s], [-s conj(g), c conj(g)]] on (p, q).
    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let akp = w[(k, p)];
        let akq = w[(k, q)];
        let new_kp = akp * c - akq * phase_c * s;
        let new_kq = akp * s + akq * phase_c * c;
        w[(k, p)] = new_kp;
        w[(k, q)] = new_kq;
        w[(p, k)] = new_kp.conj();
        w[(q, k)] = new_kq.conj();
    }
    w[(p, p)] = Complex64::new(app - t * mag, 0.0);
    w[(q, q)] = Complex64::new(aqq + t * mag, 0.0);
    w[(p, q)] = Complex64::new(0.0, 0.0);
    w[(q, p)] = Complex64::new(0.0, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c - vkq * phase_c * s;
        v[(k, q)] = vkp * s + vkq * phase_c * c;
    }
}
