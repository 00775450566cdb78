use crate::error::{ensure_same_dim, Result};
use crate::linalg::{
    clamped_psd_spectrum, eig_hermitian, hermitized_eigenvalues, power_from_spectrum, HermitianMatrix,
    SpectralDecomposition, ToleranceModel,
};
use crate::norms::{norm, NormSpec};

/// Number of uniformly spaced grid points on `[0, 1]` (step 0.01).
pub const CHERNOFF_GRID_POINTS: usize = 101;
const REFINE_WIDTH: f64 = 1e-8;
/// Grid values within this relative band of the minimum count as ties.
const TIE_RTOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChernoffResult {
    pub alpha_star: f64,
    /// `min_a Tr(A^a B^(1-a))`
    pub q_value: f64,
}

fn objective(ea: &SpectralDecomposition, eb: &SpectralDecomposition, alpha: f64, tol: &ToleranceModel) -> Result<f64> {
    let a_pow = power_from_spectrum(ea, alpha, tol)?;
    let b_half = power_from_spectrum(eb, (1.0 - alpha) / 2.0, tol)?;
    Ok(hermitized_eigenvalues(&b_half, &a_pow)?.iter().sum())
}

/// Minimizes `f(a) = Tr(A^a B^(1-a))` over `[0, 1]`: a 101-point grid scan
/// (ties broken toward `a = 0.5`), then golden-section refinement on the
/// two grid cells around the best point. No convexity is assumed.
pub fn chernoff_exponent(a: &HermitianMatrix, b: &HermitianMatrix, tol: &ToleranceModel) -> Result<ChernoffResult> {
    ensure_same_dim(a.dim(), b.dim())?;
    let ea = eig_hermitian(a)?;
    let eb = eig_hermitian(b)?;
    clamped_psd_spectrum(&ea, tol)?;
    clamped_psd_spectrum(&eb, tol)?;

    let step = 1.0 / (CHERNOFF_GRID_POINTS - 1) as f64;
    let grid: Vec<f64> = (0..CHERNOFF_GRID_POINTS)
        .map(|j| j as f64 / (CHERNOFF_GRID_POINTS - 1) as f64)
        .collect();
    let values = grid
        .iter()
        .map(|&x| objective(&ea, &eb, x, tol))
        .collect::<Result<Vec<f64>>>()?;
    let fmin = values.iter().copied().fold(f64::INFINITY, f64::min);
    let band = TIE_RTOL * fmin.abs().max(1.0);
    let best = (0..grid.len())
        .filter(|&j| values[j] <= fmin + band)
        .min_by(|&i, &j| (grid[i] - 0.5).abs().total_cmp(&(grid[j] - 0.5).abs()))
        .expect("grid is nonempty");

    let lo = (grid[best] - step).max(0.0);
    let hi = (grid[best] + step).min(1.0);
    let mut failure = None;
    let (x, fx) = golden_section_minimize(
        |x| match objective(&ea, &eb, x, tol) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                f64::INFINITY
            }
        },
        lo,
        hi,
        REFINE_WIDTH,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(if fx < values[best] - band {
        ChernoffResult {
            alpha_star: x,
            q_value: fx,
        }
    } else {
        ChernoffResult {
            alpha_star: grid[best],
            q_value: values[best],
        }
    })
}

/// Golden-section search for a minimum of `f` on `[lo, hi]`, stopping when
/// the bracket is narrower than `width`. Returns the best point seen.
pub fn golden_section_minimize(mut f: impl FnMut(f64) -> f64, lo: f64, hi: f64, width: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a) > width {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    if fc <= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// `||A - B||_1 / 2`
pub fn trace_distance(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<f64> {
    ensure_same_dim(a.dim(), b.dim())?;
    Ok(norm(&a.sub(b), NormSpec::Trace)? / 2.0)
}
