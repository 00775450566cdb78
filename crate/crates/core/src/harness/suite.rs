use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use super::report::{CheckAggregate, Lemma2Probe, ShiftProbe, SuiteReport};
use super::{HarnessError, HarnessResult, TrialConfig};
use crate::decomp::{parallel_min_from_spectra, Pivot};
use crate::inequalities::{InequalityId, PreparedPair, SlackReport};
use crate::linalg::{eig_hermitian, HermitianMatrix};
use crate::randgen::{derive_seed, lift_to_condition, EnsembleKind, SeededRng};

/// Smallest `lambda_min / lambda_max` of the `A` used by the projection-shift
/// check; rank-deficient draws are lifted to this ratio.
pub const PD_MIN_RATIO: f64 = 1e-3;

/// Everything needed to regenerate one trial's matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialDescriptor {
    pub dim: usize,
    pub ensemble: EnsembleKind,
    pub trial: usize,
    pub seed: u64,
    /// Short SHA-256 fingerprint of the generated `(A, B)`.
    pub hash: Option<String>,
    /// Restricts a replay to one exponent.
    pub alpha: Option<f64>,
}

impl fmt::Display for TrialDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "dim={},ensemble={},trial={},seed={}",
            self.dim, self.ensemble, self.trial, self.seed
        )?;
        if let Some(h) = &self.hash {
            write!(f, ",hash={h}")?;
        }
        if let Some(a) = self.alpha {
            write!(f, ",alpha={a}")?;
        }
        Ok(())
    }
}

impl FromStr for TrialDescriptor {
    type Err = HarnessError;

    fn from_str(s: &str) -> HarnessResult<Self> {
        let bad = |m: String| HarnessError::Parse(format!("descriptor '{s}': {m}"));
        let (mut dim, mut ensemble, mut seed) = (None, None, None);
        let mut out = TrialDescriptor {
            dim: 0,
            ensemble: EnsembleKind::Density,
            trial: 0,
            seed: 0,
            hash: None,
            alpha: None,
        };
        for field in s.split(',').map(str::trim).filter(|f| !f.is_empty()) {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| bad(format!("field '{field}' is not key=value")))?;
            let value = value.trim();
            match key.trim() {
                "dim" => dim = Some(value.parse::<usize>().map_err(|e| bad(e.to_string()))?),
                "ensemble" => ensemble = Some(value.parse::<EnsembleKind>().map_err(|e| bad(e.to_string()))?),
                "trial" => out.trial = value.parse().map_err(|e: std::num::ParseIntError| bad(e.to_string()))?,
                "seed" => seed = Some(value.parse::<u64>().map_err(|e| bad(e.to_string()))?),
                "hash" => out.hash = Some(value.to_string()),
                "alpha" => {
                    out.alpha = Some(
                        value
                            .parse()
                            .map_err(|e: std::num::ParseFloatError| bad(e.to_string()))?,
                    )
                }
                other => return Err(bad(format!("unknown key '{other}'"))),
            }
        }
        out.dim = dim.ok_or_else(|| bad("missing dim".into()))?;
        out.ensemble = ensemble.ok_or_else(|| bad("missing ensemble".into()))?;
        out.seed = seed.ok_or_else(|| bad("missing seed".into()))?;
        Ok(out)
    }
}

/// A scheduled trial: its position in the campaign and derived seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialPlan {
    pub dim: usize,
    pub ensemble: EnsembleKind,
    pub trial: usize,
    pub seed: u64,
}

impl TrialPlan {
    pub fn descriptor(&self, hash: Option<String>, alpha: Option<f64>) -> TrialDescriptor {
        TrialDescriptor {
            dim: self.dim,
            ensemble: self.ensemble,
            trial: self.trial,
            seed: self.seed,
            hash,
            alpha,
        }
    }
}

/// Every trial of a campaign in canonical order (dims, then ensembles,
/// then trial index). Seeds are derived from the master seed and the global
/// task index, so they do not depend on scheduling.
pub fn trial_plans(config: &TrialConfig) -> Vec<TrialPlan> {
    let mut plans = Vec::new();
    for &dim in &config.dims {
        for &ensemble in &config.ensembles {
            for trial in 0..config.trials_per_dim {
                let index = plans.len() as u64;
                plans.push(TrialPlan {
                    dim,
                    ensemble,
                    trial,
                    seed: derive_seed(config.master_seed, index),
                });
            }
        }
    }
    plans
}

/// First 16 hex digits of SHA-256 over the little-endian bytes of every
/// entry of `A` then `B`.
pub fn matrix_hash(a: &HermitianMatrix, b: &HermitianMatrix) -> String {
    let mut h = Sha256::new();
    for m in [a, b] {
        h.update((m.dim() as u64).to_le_bytes());
        for z in m.as_matrix().as_slice() {
            h.update(z.re.to_le_bytes());
            h.update(z.im.to_le_bytes());
        }
    }
    h.finalize().iter().take(8).map(|b| format!("{b:02x}")).collect()
}

/// Regenerates a trial's pair and, for dominated-Hermitian trials, the
/// probe matrix `T` drawn from the same stream.
pub fn generate_trial(
    dim: usize,
    ensemble: EnsembleKind,
    seed: u64,
) -> HarnessResult<(HermitianMatrix, HermitianMatrix, Option<HermitianMatrix>)> {
    ensemble.validate(dim)?;
    let mut rng = SeededRng::new(seed);
    let (a, b) = ensemble.sample_pair(dim, &mut rng)?;
    let t = match ensemble {
        EnsembleKind::DominatedHermitian => Some(rng.dominated(&a, &b)?),
        _ => None,
    };
    Ok((a, b, t))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Lemma2Sample {
    pub pivot: Pivot,
    /// `lambda_i(T) - lambda_i(S)`, descending index order.
    pub gaps: Vec<f64>,
    pub max_gap: f64,
    pub violated: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShiftSample {
    pub alpha: f64,
    pub beta: f64,
    pub gamma_n: f64,
    /// Weak-majorization margin of `s(X)` under the shifted non-Hermitian
    /// matrix.
    pub shifted_margin: f64,
    pub exception: bool,
}

#[derive(Debug, Clone)]
pub struct TrialOutcome {
    pub plan: TrialPlan,
    pub hash: String,
    pub scale: f64,
    pub reports: Vec<SlackReport>,
    pub lemma2: Vec<Lemma2Sample>,
    /// Relative Frobenius distance between the two pivots' `S`.
    pub pivot_disagreement: Option<f64>,
    pub shift: Vec<ShiftSample>,
}

/// Runs every configured check for one trial, in canonical order:
/// alphas, then checks, then norms.
pub fn evaluate_trial(config: &TrialConfig, plan: &TrialPlan, alphas: &[f64]) -> HarnessResult<TrialOutcome> {
    let tol = config.tolerances;
    let (a, b, t) = generate_trial(plan.dim, plan.ensemble, plan.seed)?;
    let hash = matrix_hash(&a, &b);
    let pair = PreparedPair::new(&a, &b, &tol)?;
    let checks = config.ordered_checks();
    let norms = config.norms_for(plan.dim);

    let shift_pair = if checks.contains(&InequalityId::ProjectionShift) {
        let ea = &pair.spectrum_a;
        if ea.lambda_min() > PD_MIN_RATIO * ea.lambda_max() {
            Some(pair.clone())
        } else {
            Some(PreparedPair::new(&lift_to_condition(&a, PD_MIN_RATIO)?, &b, &tol)?)
        }
    } else {
        None
    };

    let mut reports = Vec::with_capacity(alphas.len() * config.reports_per_alpha(plan.dim));
    let mut shift = Vec::new();
    for &alpha in alphas {
        let terms = pair.alpha_terms(alpha)?;
        let trace = pair.trace(&terms);
        for &check in &checks {
            match check {
                InequalityId::EigDominance => reports.push(pair.eig_dominance(&terms)),
                InequalityId::TraceLower => reports.push(trace.0.clone()),
                InequalityId::TraceUpper => reports.push(trace.1.clone()),
                InequalityId::PartPlusNorm | InequalityId::PartMinusNorm => {
                    for &spec in &norms {
                        let (plus, minus) = pair.part_norms(&terms, spec)?;
                        reports.push(if check == InequalityId::PartPlusNorm {
                            plus
                        } else {
                            minus
                        });
                    }
                }
                InequalityId::OperatorNorm => reports.push(pair.operator_norm(&terms)),
                InequalityId::ProjectionShift => {
                    let sp = shift_pair.as_ref().expect("prepared when enabled");
                    let (res, report) = sp.projection_shift(alpha)?;
                    shift.push(ShiftSample {
                        alpha,
                        beta: res.beta,
                        gamma_n: res.gamma_n,
                        shifted_margin: res.shifted_margin,
                        exception: res.shifted_margin < -tol.at_scale(sp.scale),
                    });
                    reports.push(report);
                }
            }
        }
    }

    let mut lemma2 = Vec::new();
    let mut pivot_disagreement = None;
    if let Some(t) = t {
        let et = eig_hermitian(&t)?;
        let mut mins = Vec::new();
        for pivot in [Pivot::B, Pivot::A] {
            let pm = parallel_min_from_spectra(&a, &pair.spectrum_a, &b, &pair.spectrum_b, pivot, &tol)?;
            let es = eig_hermitian(&pm.s)?;
            let gaps: Vec<f64> = et.eigenvalues.iter().zip(&es.eigenvalues).map(|(x, y)| x - y).collect();
            let max_gap = gaps.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            lemma2.push(Lemma2Sample {
                pivot,
                violated: max_gap > tol.at_scale(pair.scale),
                gaps,
                max_gap,
            });
            mins.push(pm.s);
        }
        pivot_disagreement = Some(mins[0].sub(&mins[1]).frobenius_norm() / pair.scale.max(f64::MIN_POSITIVE));
    }

    Ok(TrialOutcome {
        plan: *plan,
        hash,
        scale: pair.scale,
        reports,
        lemma2,
        pivot_disagreement,
        shift,
    })
}

/// Runs the whole campaign. Trials are evaluated in parallel, but results
/// are folded in canonical order, so the report is independent of thread
/// count and scheduling.
pub fn run_suite(config: &TrialConfig) -> HarnessResult<SuiteReport> {
    config.validate()?;
    let started = std::time::Instant::now();
    let plans = trial_plans(config);
    let mut cells: Vec<CheckAggregate> = Vec::new();
    let mut lemma2 = Lemma2Probe::default();
    let mut shift = ShiftProbe::default();

    for group in plans.chunks(config.trials_per_dim) {
        let outcomes: Vec<HarnessResult<TrialOutcome>> = group
            .par_iter()
            .map(|p| evaluate_trial(config, p, &config.alpha_grid))
            .collect();
        let base = cells.len();
        for outcome in outcomes {
            let outcome = outcome?;
            if cells.len() == base {
                cells.extend(outcome.reports.iter().map(|r| CheckAggregate::empty(&outcome.plan, r)));
            }
            for (cell, report) in cells[base..].iter_mut().zip(&outcome.reports) {
                cell.absorb(&outcome, report);
            }
            lemma2.absorb(&outcome);
            shift.absorb(&outcome);
        }
    }
    Ok(SuiteReport::new(
        config.clone(),
        cells,
        lemma2,
        shift,
        started.elapsed(),
    ))
}
