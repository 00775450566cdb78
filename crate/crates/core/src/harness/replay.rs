use std::fmt::Write as _;

use super::matrix_io::format_matrix;
use super::suite::{evaluate_trial, generate_trial, matrix_hash, TrialDescriptor, TrialOutcome, TrialPlan};
use super::{HarnessResult, TrialConfig};
use crate::decomp::{parallel_min, ParallelMinResult, Pivot};
use crate::linalg::HermitianMatrix;

#[derive(Debug, Clone)]
pub struct ReplayOutput {
    pub descriptor: TrialDescriptor,
    pub hash: String,
    /// `None` when the descriptor carried no hash.
    pub hash_matches: Option<bool>,
    pub a: HermitianMatrix,
    pub b: HermitianMatrix,
    /// The dominated probe matrix, for dominated-Hermitian trials.
    pub t: Option<HermitianMatrix>,
    pub outcome: TrialOutcome,
    /// Parallel minimum under pivot `B`, then pivot `A`.
    pub parallel_mins: Vec<ParallelMinResult>,
    pub text: String,
}

/// The same shortest round-trip formatting as the JSON report, so replayed
/// values can be compared digit for digit.
pub fn format_f64(x: f64) -> String {
    serde_json::to_string(&x).unwrap_or_else(|_| x.to_string())
}

fn format_list(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|&x| format_f64(x)).collect();
    format!("[{}]", parts.join(", "))
}

/// Regenerates a trial from its descriptor and re-runs the configured
/// checks, at the descriptor's alpha if it has one.
pub fn replay(descriptor: &TrialDescriptor, config: &TrialConfig) -> HarnessResult<ReplayOutput> {
    let (a, b, t) = generate_trial(descriptor.dim, descriptor.ensemble, descriptor.seed)?;
    let hash = matrix_hash(&a, &b);
    let hash_matches = descriptor.hash.as_ref().map(|h| *h == hash);
    let alphas = match descriptor.alpha {
        Some(alpha) => vec![alpha],
        None => config.alpha_grid.clone(),
    };
    let plan = TrialPlan {
        dim: descriptor.dim,
        ensemble: descriptor.ensemble,
        trial: descriptor.trial,
        seed: descriptor.seed,
    };
    let outcome = evaluate_trial(config, &plan, &alphas)?;
    let parallel_mins = [Pivot::B, Pivot::A]
        .into_iter()
        .map(|p| parallel_min(&a, &b, p, &config.tolerances))
        .collect::<crate::Result<Vec<_>>>()?;

    let mut text = String::new();
    let _ = writeln!(text, "trial {}", plan.descriptor(Some(hash.clone()), descriptor.alpha));
    if hash_matches == Some(false) {
        let _ = writeln!(
            text,
            "warning: matrix hash {} does not match descriptor hash {}",
            hash,
            descriptor.hash.as_deref().unwrap_or_default()
        );
    }
    let _ = writeln!(text, "A =\n{}", format_matrix(&a));
    let _ = writeln!(text, "B =\n{}", format_matrix(&b));
    if let Some(t) = &t {
        let _ = writeln!(text, "T =\n{}", format_matrix(t));
    }
    for pm in &parallel_mins {
        let _ = writeln!(
            text,
            "parallel_min pivot {:?} (epsilon {}) =\n{}",
            pm.pivot,
            format_f64(pm.regularization_epsilon),
            format_matrix(&pm.s)
        );
    }
    for r in &outcome.reports {
        let norm = r.norm_spec.map(|n| n.to_string()).unwrap_or_else(|| "-".into());
        let _ = writeln!(
            text,
            "{} alpha={} norm={} worst_slack={} passed={} slacks={}",
            r.inequality_id,
            format_f64(r.alpha),
            norm,
            format_f64(r.worst_slack),
            r.passed,
            format_list(&r.slacks)
        );
    }
    for s in &outcome.lemma2 {
        let _ = writeln!(
            text,
            "dominated-T probe pivot {:?}: max gap {} violated={} gaps={}",
            s.pivot,
            format_f64(s.max_gap),
            s.violated,
            format_list(&s.gaps)
        );
    }
    Ok(ReplayOutput {
        descriptor: descriptor.clone(),
        hash,
        hash_matches,
        a,
        b,
        t,
        outcome,
        parallel_mins,
        text,
    })
}
