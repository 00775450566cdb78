//! Seeded matrix ensembles.
//!
//! All randomness comes from SplitMix64 (Steele, Lea & Flood 2014; the
//! `splitmix64.c` reference by Vigna, as shipped in `rand_xoshiro` 0.7). The
//! generator state is the 64-bit seed itself, read little-endian. Uniform
//! doubles take the top 53 bits of each output. Standard normals use the
//! Box-Muller transform on two uniforms, `u1` mapped into `(0, 1]`:
//! `r = sqrt(-2 ln u1)`, `theta = 2 pi u2`, giving `(r cos theta, r sin theta)`.
//! A standard complex Gaussian is that pair divided by `sqrt(2)`.
//!
//! Per-task generators are derived with [`derive_seed`].

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_same_dim, Error, Result};
use crate::linalg::{eig_hermitian, CMatrix, HermitianMatrix};

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

/// Seed of task `index` under `master`: the first SplitMix64 output from
/// state `master + index * 0x9e3779b97f4a7c15` (wrapping).
pub fn derive_seed(master: u64, index: u64) -> u64 {
    SeededRng::new(master.wrapping_add(index.wrapping_mul(GOLDEN_GAMMA))).next_u64()
}

#[derive(Debug, Clone)]
pub struct SeededRng {
    inner: SplitMix64,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self {
            inner: SplitMix64::from_seed(seed.to_le_bytes()),
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform in `[0, 1)` with 53 random bits.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn normal_pair(&mut self) -> (f64, f64) {
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = 2.0 * std::f64::consts::PI * u2;
        (r * theta.cos(), r * theta.sin())
    }

    pub fn complex_gaussian(&mut self) -> Complex64 {
        let (x, y) = self.normal_pair();
        Complex64::new(x, y) * std::f64::consts::FRAC_1_SQRT_2
    }

    /// `rows x cols` Ginibre block stored as a vector of columns.
    fn ginibre_columns(&mut self, rows: usize, cols: usize) -> Vec<Vec<Complex64>> {
        (0..cols)
            .map(|_| (0..rows).map(|_| self.complex_gaussian()).collect())
            .collect()
    }

    /// `G G*` with `G` a `dim x rank` Ginibre matrix.
    pub fn psd(&mut self, dim: usize, rank: usize) -> Result<HermitianMatrix> {
        check_dim(dim)?;
        if rank == 0 || rank > dim {
            return Err(Error::InvalidInput(format!("rank {rank} outside [1, {dim}]")));
        }
        let cols = self.ginibre_columns(dim, rank);
        let m = CMatrix::from_fn(dim, |i, j| cols.iter().map(|c| c[i] * c[j].conj()).sum());
        Ok(HermitianMatrix::from_hermitian_part(&m))
    }

    pub fn density(&mut self, dim: usize) -> Result<HermitianMatrix> {
        let p = self.psd(dim, dim)?;
        Ok(p.scale(1.0 / p.trace()))
    }

    /// `|psi><psi|` for a uniformly random unit vector, normalized to trace 1.
    pub fn pure_state(&mut self, dim: usize) -> Result<HermitianMatrix> {
        let p = self.psd(dim, 1)?;
        Ok(p.scale(1.0 / p.trace()))
    }

    /// Gaussian Hermitian matrix `(G + G*)/2`.
    pub fn hermitian(&mut self, dim: usize) -> Result<HermitianMatrix> {
        check_dim(dim)?;
        let g = CMatrix::from_fn(dim, |_, _| self.complex_gaussian());
        Ok(HermitianMatrix::from_hermitian_part(&g))
    }

    /// Unitary from the QR factorization of a Ginibre matrix, with the
    /// phases fixed so that `R` has a positive diagonal.
    pub fn unitary(&mut self, dim: usize) -> Result<CMatrix> {
        check_dim(dim)?;
        let mut cols = self.ginibre_columns(dim, dim);
        for j in 0..dim {
            // Two Gram-Schmidt passes for orthogonality at working precision.
            for _ in 0..2 {
                for k in 0..j {
                    let (done, rest) = cols.split_at_mut(j);
                    let q = &done[k];
                    let proj: Complex64 = q.iter().zip(rest[0].iter()).map(|(a, b)| a.conj() * b).sum();
                    for (x, qi) in rest[0].iter_mut().zip(q) {
                        *x -= proj * qi;
                    }
                }
            }
            let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            for x in cols[j].iter_mut() {
                *x /= norm;
            }
        }
        Ok(CMatrix::from_fn(dim, |i, j| cols[j][i]))
    }

    /// `V diag(a) V*`, `V diag(b) V*` with one shared random unitary and
    /// independent exponential(1) spectra.
    pub fn commuting_pair(&mut self, dim: usize) -> Result<(HermitianMatrix, HermitianMatrix)> {
        let v = self.unitary(dim)?;
        let a: Vec<f64> = (0..dim).map(|_| self.complex_gaussian().norm_sqr()).collect();
        let b: Vec<f64> = (0..dim).map(|_| self.complex_gaussian().norm_sqr()).collect();
        let da = HermitianMatrix::diagonal(&a)?.congruence(&v);
        let db = HermitianMatrix::diagonal(&b)?.congruence(&v);
        Ok((da, db))
    }

    /// Hermitian `T` with `T <= A` and `T <= B`: a scaled Gaussian Hermitian
    /// `T0` shifted down by `max(lambda_max(T0 - A), lambda_max(T0 - B), 0)`.
    pub fn dominated(&mut self, a: &HermitianMatrix, b: &HermitianMatrix) -> Result<HermitianMatrix> {
        ensure_same_dim(a.dim(), b.dim())?;
        let n = a.dim();
        let scale = eig_hermitian(a)?.spectral_norm().max(eig_hermitian(b)?.spectral_norm());
        let t0 = self
            .hermitian(n)?
            .scale(scale.max(f64::MIN_POSITIVE) / (n as f64).sqrt());
        let over_a = eig_hermitian(&t0.sub(a))?.lambda_max();
        let over_b = eig_hermitian(&t0.sub(b))?.lambda_max();
        let mu = over_a.max(over_b).max(0.0);
        Ok(t0.shifted(-mu))
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 {
        Err(Error::InvalidInput("dimension must be at least 1".into()))
    } else {
        Ok(())
    }
}

pub fn random_psd(dim: usize, rank: usize, seed: u64) -> Result<HermitianMatrix> {
    SeededRng::new(seed).psd(dim, rank)
}

pub fn random_density(dim: usize, seed: u64) -> Result<HermitianMatrix> {
    SeededRng::new(seed).density(dim)
}

pub fn random_pure_state(dim: usize, seed: u64) -> Result<HermitianMatrix> {
    SeededRng::new(seed).pure_state(dim)
}

pub fn random_unitary(dim: usize, seed: u64) -> Result<CMatrix> {
    SeededRng::new(seed).unitary(dim)
}

pub fn random_commuting_pair(dim: usize, seed: u64) -> Result<(HermitianMatrix, HermitianMatrix)> {
    SeededRng::new(seed).commuting_pair(dim)
}

pub fn random_dominated(a: &HermitianMatrix, b: &HermitianMatrix, seed: u64) -> Result<HermitianMatrix> {
    SeededRng::new(seed).dominated(a, b)
}

/// Shifts PSD `a` by a multiple of the identity so that
/// `lambda_min / lambda_max >= min_ratio`. Returns `a` unchanged when it
/// already satisfies the bound.
pub fn lift_to_condition(a: &HermitianMatrix, min_ratio: f64) -> Result<HermitianMatrix> {
    let e = eig_hermitian(a)?;
    let (lo, hi) = (e.lambda_min(), e.lambda_max());
    if hi > 0.0 && lo >= min_ratio * hi {
        return Ok(a.clone());
    }
    let hi = if hi > 0.0 { hi } else { 1.0 };
    // (lo + s) / (hi + s) = min_ratio, padded slightly so rounding cannot
    // land below the bound.
    let s = (min_ratio * hi - lo) / (1.0 - min_ratio) * (1.0 + 1e-9) + f64::EPSILON * hi;
    Ok(a.shifted(s))
}

/// Positive definite matrix with `lambda_min / lambda_max >= min_ratio`.
pub fn random_pd(dim: usize, seed: u64, min_ratio: f64) -> Result<HermitianMatrix> {
    lift_to_condition(&random_psd(dim, dim, seed)?, min_ratio)
}

/// Rank of the Gram factor used by [`EnsembleKind::GramPsd`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RankSpec {
    Full,
    /// `ceil(dim / 2)`
    Half,
    Fixed(usize),
}

impl RankSpec {
    pub fn resolve(&self, dim: usize) -> usize {
        match *self {
            RankSpec::Full => dim,
            RankSpec::Half => dim.div_ceil(2),
            RankSpec::Fixed(r) => r,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EnsembleKind {
    /// Independent `G G*` factors of the given rank.
    GramPsd(RankSpec),
    /// Independent full-rank density matrices.
    Density,
    /// Independent rank-1 density matrices.
    PureState,
    /// Simultaneously diagonalizable PSD pair.
    CommutingPair,
    /// Full-rank Gram pair; the harness additionally draws a Hermitian matrix
    /// dominated by both.
    DominatedHermitian,
}

impl EnsembleKind {
    pub fn all_default() -> Vec<EnsembleKind> {
        vec![
            EnsembleKind::GramPsd(RankSpec::Full),
            EnsembleKind::GramPsd(RankSpec::Half),
            EnsembleKind::Density,
            EnsembleKind::PureState,
            EnsembleKind::CommutingPair,
            EnsembleKind::DominatedHermitian,
        ]
    }

    /// Checks that the ensemble can be drawn at dimension `dim`.
    pub fn validate(&self, dim: usize) -> Result<()> {
        check_dim(dim)?;
        if let EnsembleKind::GramPsd(RankSpec::Fixed(r)) = self {
            if *r == 0 || *r > dim {
                return Err(Error::InvalidInput(format!("rank {r} outside [1, {dim}]")));
            }
        }
        Ok(())
    }

    /// Draws `(A, B)` from `rng`. `A` is drawn first.
    pub fn sample_pair(&self, dim: usize, rng: &mut SeededRng) -> Result<(HermitianMatrix, HermitianMatrix)> {
        self.validate(dim)?;
        match self {
            EnsembleKind::GramPsd(rank) => {
                let r = rank.resolve(dim);
                let a = rng.psd(dim, r)?;
                Ok((a, rng.psd(dim, r)?))
            }
            EnsembleKind::Density => {
                let a = rng.density(dim)?;
                Ok((a, rng.density(dim)?))
            }
            EnsembleKind::PureState => {
                let a = rng.pure_state(dim)?;
                Ok((a, rng.pure_state(dim)?))
            }
            EnsembleKind::CommutingPair => rng.commuting_pair(dim),
            EnsembleKind::DominatedHermitian => {
                let a = rng.psd(dim, dim)?;
                Ok((a, rng.psd(dim, dim)?))
            }
        }
    }
}

impl fmt::Display for EnsembleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EnsembleKind::GramPsd(RankSpec::Full) => write!(f, "gram"),
            EnsembleKind::GramPsd(RankSpec::Half) => write!(f, "gram:half"),
            EnsembleKind::GramPsd(RankSpec::Fixed(r)) => write!(f, "gram:{r}"),
            EnsembleKind::Density => write!(f, "density"),
            EnsembleKind::PureState => write!(f, "pure"),
            EnsembleKind::CommutingPair => write!(f, "commuting"),
            EnsembleKind::DominatedHermitian => write!(f, "dominated"),
        }
    }
}

impl FromStr for EnsembleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        Ok(match s.as_str() {
            "gram" | "gram:full" => EnsembleKind::GramPsd(RankSpec::Full),
            "gram:half" => EnsembleKind::GramPsd(RankSpec::Half),
            "density" => EnsembleKind::Density,
            "pure" => EnsembleKind::PureState,
            "commuting" => EnsembleKind::CommutingPair,
            "dominated" => EnsembleKind::DominatedHermitian,
            other => match other.strip_prefix("gram:").map(str::parse::<usize>) {
                Some(Ok(r)) if r >= 1 => EnsembleKind::GramPsd(RankSpec::Fixed(r)),
                _ => return Err(Error::InvalidInput(format!("unknown ensemble '{other}'"))),
            },
        })
    }
}

/// One concrete draw: ensemble kind, dimension and seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub kind: EnsembleKind,
    pub dim: usize,
    pub seed: u64,
}

impl EnsembleSpec {
    pub fn generate(&self) -> Result<(HermitianMatrix, HermitianMatrix)> {
        self.kind.sample_pair(self.dim, &mut SeededRng::new(self.seed))
    }
}
