//! Acceptance suite: one test per criterion, each printing a single
//! PASS/FAIL line with its measured numbers.

mod common;

use std::sync::OnceLock;
use std::time::{Duration, Instant};

use common::{svd_oracle, verdict};
use psineq::decomp::{parallel_min, singular_values, Pivot};
use psineq::harness::{format_f64, replay, run_suite, trial_plans, SuiteReport, TrialConfig, TrialDescriptor};
use psineq::inequalities::{chernoff_exponent, InequalityId, PreparedPair};
use psineq::linalg::{eig_hermitian, CMatrix, HermitianMatrix, ToleranceModel};
use psineq::norms::{weakly_majorized, NormSpec};
use psineq::randgen::{random_commuting_pair, random_pd, random_psd, random_pure_state, SeededRng};

const CAMPAIGN_TOL: f64 = 1e-8;

struct Campaign {
    config: TrialConfig,
    report: SuiteReport,
    elapsed: Duration,
}

fn campaign() -> &'static Campaign {
    static CELL: OnceLock<Campaign> = OnceLock::new();
    CELL.get_or_init(|| {
        let config = TrialConfig::default();
        let started = Instant::now();
        let report = run_suite(&config).expect("default campaign runs");
        Campaign {
            config,
            report,
            elapsed: started.elapsed(),
        }
    })
}

fn failures(report: &SuiteReport, ids: &[InequalityId]) -> (usize, usize, f64) {
    let cells = report.checks.iter().filter(|c| ids.contains(&c.id));
    let (mut failed, mut total, mut worst) = (0, 0, f64::INFINITY);
    for c in cells {
        failed += c.count - c.pass_count;
        total += c.count;
        worst = worst.min(c.worst_relative_slack);
    }
    (failed, total, worst)
}

fn prepared_trials(config: &TrialConfig) -> impl Iterator<Item = PreparedPair> + '_ {
    trial_plans(config).into_iter().map(move |plan| {
        let (a, b, _) = psineq::harness::generate_trial(plan.dim, plan.ensemble, plan.seed).unwrap();
        PreparedPair::new(&a, &b, &config.tolerances).unwrap()
    })
}

#[test]
fn criterion_1_eigensolver_fidelity() {
    let started = Instant::now();
    let mut worst_recon = 0.0f64;
    let mut worst_unit = 0.0f64;
    let mut ok = true;
    for i in 0..500u64 {
        let n = 2 + (i as usize % 63);
        let a = SeededRng::new(0xe16e_0000 + i).hermitian(n).unwrap();
        let e = eig_hermitian(&a).unwrap();
        let recon = e.reconstruct().sub(&a).frobenius_norm() / e.spectral_norm().max(1.0);
        let v = &e.vectors;
        let unit = (&(&v.adjoint() * v) - &CMatrix::identity(n)).frobenius_norm() / n as f64;
        worst_recon = worst_recon.max(recon);
        worst_unit = worst_unit.max(unit);
        ok &= recon <= 1e-10 && unit <= 1e-10;
    }
    let elapsed = started.elapsed();
    let passed = ok && elapsed < Duration::from_secs(30);
    verdict(
        1,
        passed,
        &format!(
            "500 matrices, dims 2-64: max reconstruction {worst_recon:.2e}, max unitarity {worst_unit:.2e} (rel. limit 1e-10), {:.2}s (limit 30s)",
            elapsed.as_secs_f64()
        ),
    );
    assert!(passed);
}

#[test]
fn criterion_2_eigenvalue_dominance_campaign() {
    let c = campaign();
    let (failed, total, worst) = failures(&c.report, &[InequalityId::EigDominance]);
    let mut by_ensemble: Vec<(String, usize)> = Vec::new();
    for cell in c.report.checks.iter().filter(|x| x.id == InequalityId::EigDominance) {
        match by_ensemble.iter_mut().find(|(e, _)| *e == cell.ensemble) {
            Some((_, n)) => *n += cell.count - cell.pass_count,
            None => by_ensemble.push((cell.ensemble.clone(), cell.count - cell.pass_count)),
        }
    }
    let worst_cell = c
        .report
        .checks
        .iter()
        .filter(|x| x.id == InequalityId::EigDominance)
        .min_by(|x, y| x.worst_relative_slack.total_cmp(&y.worst_relative_slack))
        .unwrap();
    let passed = failed == 0 && c.elapsed < Duration::from_secs(60);
    verdict(
        2,
        passed,
        &format!(
            "{failed} of {total} eigenvalue-dominance evaluations violated at tol 1e-8*scale, by ensemble {by_ensemble:?}; worst relative slack {worst:.4e} at {}; campaign {:.2}s (limit 60s)",
            worst_cell.argmin_trial,
            c.elapsed.as_secs_f64()
        ),
    );
    assert!(passed);
}

#[test]
fn criterion_3_trace_campaign_and_slack_identity() {
    let c = campaign();
    let (failed, total, worst) = failures(&c.report, &[InequalityId::TraceLower, InequalityId::TraceUpper]);
    let mut worst_identity = 0.0f64;
    for pair in prepared_trials(&c.config) {
        for &alpha in &c.config.alpha_grid {
            let terms = pair.alpha_terms(alpha).unwrap();
            let eig: f64 = pair.eig_dominance(&terms).slacks.iter().sum();
            let upper = pair.trace(&terms).1.worst_slack;
            worst_identity = worst_identity.max((upper - eig).abs() / pair.scale);
        }
    }
    let passed = failed == 0 && worst_identity <= 1e-9;
    verdict(
        3,
        passed,
        &format!(
            "{failed} of {total} trace evaluations violated (worst relative slack {worst:.4e}); max |upper slack - sum of eigenvalue slacks| = {worst_identity:.2e}*scale (limit 1e-9)"
        ),
    );
    assert!(passed);
}

#[test]
fn criterion_4_norm_campaign_and_ky_fan_consistency() {
    let c = campaign();
    let ids = [
        InequalityId::PartPlusNorm,
        InequalityId::PartMinusNorm,
        InequalityId::OperatorNorm,
    ];
    let (failed, total, worst) = failures(&c.report, &ids);

    // Ky Fan k pass/fail must coincide with prefix k of the weak-majorization
    // predicate, under the same tolerance.
    let mut mismatches = 0usize;
    let mut kyfan_cells = 0usize;
    let mut literal_failures = 0usize;
    let mut literal_total = 0usize;
    for pair in prepared_trials(&c.config) {
        let n = pair.dim();
        let tol = c.config.tolerances.at_scale(pair.scale);
        for &alpha in &c.config.alpha_grid {
            let terms = pair.alpha_terms(alpha).unwrap();
            let rhs: Vec<f64> = terms.hermitized_singular_values.iter().map(|s| 2.0 * s).collect();
            for part in [&pair.jordan_x.plus_eigenvalues, &pair.jordan_x.minus_eigenvalues] {
                let m = weakly_majorized(part, &rhs, 0.0).unwrap();
                for k in 1..=n {
                    let (plus, minus) = pair.part_norms(&terms, NormSpec::KyFan(k)).unwrap();
                    let report = if std::ptr::eq(part, &pair.jordan_x.plus_eigenvalues) {
                        plus
                    } else {
                        minus
                    };
                    kyfan_cells += 1;
                    if report.passed != (m.prefix_margins[k - 1] >= -tol) {
                        mismatches += 1;
                    }
                }
            }
            // Literal non-Hermitian right-hand side, recorded as data.
            let literal = pair.product_singular_values(alpha).unwrap();
            let lhs = pair.jordan_x.plus_eigenvalues[0].max(pair.jordan_x.minus_eigenvalues[0]);
            literal_total += 1;
            if 2.0 * literal[0] - lhs < -tol {
                literal_failures += 1;
            }
        }
    }
    let passed = failed == 0 && mismatches == 0;
    verdict(
        4,
        passed,
        &format!(
            "{failed} of {total} part/operator-norm evaluations violated (worst relative slack {worst:.4e}); Ky Fan vs majorization mismatches {mismatches} of {kyfan_cells}; literal product RHS operator-norm violations {literal_failures} of {literal_total} (data)"
        ),
    );
    assert!(passed);
}

#[test]
fn criterion_5_projection_shift() {
    let tol = ToleranceModel {
        rel: CAMPAIGN_TOL,
        abs: 1e-12,
    };
    let dims = [2usize, 3, 4, 6, 8];
    let alphas: Vec<f64> = (0..=10).map(|k| k as f64 / 10.0).collect();
    let (mut worst_beta, mut worst_trace, mut worst_margin) = (f64::INFINITY, 0.0f64, f64::INFINITY);
    let (mut evaluations, mut failed) = (0usize, 0usize);
    let (mut oracle_evals, mut exceptions) = (0usize, Vec::new());
    for trial in 0..200u64 {
        let n = dims[trial as usize % dims.len()];
        let a = random_pd(n, 0x5ff7_0000 + trial, 1e-3).unwrap();
        let b = random_psd(n, n, 0x5ff7_8000 + trial).unwrap();
        let pair = PreparedPair::new(&a, &b, &tol).unwrap();
        let sx = singular_values(&pair.x).unwrap();
        for &alpha in &alphas {
            let (res, report) = pair.projection_shift(alpha).unwrap();
            let scale = pair.scale;
            let beta_rel = res.beta / scale;
            let trace_rel = (res.t1.trace() - pair.x.trace()).abs() / scale;
            let margin = weakly_majorized(&sx, &res.t1_singular_values, 0.0).unwrap().margin;
            worst_beta = worst_beta.min(beta_rel);
            worst_trace = worst_trace.max(trace_rel);
            worst_margin = worst_margin.min(margin / scale);
            evaluations += 1;
            if beta_rel < -1e-10 || trace_rel > 1e-8 || margin < -1e-8 * scale || !report.passed {
                failed += 1;
            }
            if n <= 6 {
                oracle_evals += 1;
                let shifted = svd_oracle(&res.shifted);
                let m = weakly_majorized(&sx, &shifted, 0.0).unwrap().margin;
                if m < -1e-8 * scale {
                    exceptions.push(format!("n={n} trial={trial} alpha={alpha} margin={:.3e}", m / scale));
                }
            }
        }
    }
    for e in &exceptions {
        eprintln!("shifted-matrix exception: {e}");
    }
    let passed = failed == 0;
    verdict(
        5,
        passed,
        &format!(
            "200 PD trials x 11 alphas: {failed} of {evaluations} failed; min beta {worst_beta:.2e}*scale (limit -1e-10), max trace gap {worst_trace:.2e}*scale (limit 1e-8), min margin {worst_margin:.2e}*scale (limit -1e-8); shifted-matrix SVD exceptions {} of {oracle_evals} (logged, not failing)",
            exceptions.len()
        ),
    );
    assert!(passed);
}

fn lambda_min(m: &HermitianMatrix) -> f64 {
    eig_hermitian(m).unwrap().lambda_min()
}

#[test]
fn criterion_6_parallel_minimum() {
    let tol = ToleranceModel {
        rel: CAMPAIGN_TOL,
        abs: 1e-12,
    };
    let (mut psd_fail, mut worst_rel) = (0usize, f64::INFINITY);
    let (mut commuting_err, mut regularized, mut singular_fail) = (0.0f64, 0usize, 0usize);
    for trial in 0..500u64 {
        let n = 2 + trial as usize % 5;
        let seed = 0x1e33_0000 + trial;
        let (a, b) = match trial % 3 {
            0 => (random_psd(n, n, seed).unwrap(), random_psd(n, n, seed ^ 0xff).unwrap()),
            1 => random_commuting_pair(n, seed).unwrap(),
            _ => (
                random_psd(n, n, seed).unwrap(),
                random_psd(n, n.div_ceil(2), seed ^ 0xff).unwrap(),
            ),
        };
        let scale = eig_hermitian(&a).unwrap().spectral_norm() + eig_hermitian(&b).unwrap().spectral_norm();
        for pivot in [Pivot::B, Pivot::A] {
            let r = parallel_min(&a, &b, pivot, &tol).unwrap();
            let eps = r.regularization_epsilon;
            let (reg_a, reg_b) = match pivot {
                Pivot::A => (eps, 0.0),
                Pivot::B => (0.0, eps),
            };
            let da = lambda_min(&a.shifted(reg_a).sub(&r.s)) / scale;
            let db = lambda_min(&b.shifted(reg_b).sub(&r.s)) / scale;
            worst_rel = worst_rel.min(da.min(db));
            if eps > 0.0 {
                regularized += 1;
                if da.min(db) < -1e-8 {
                    singular_fail += 1;
                }
            } else if da.min(db) < -1e-8 {
                psd_fail += 1;
            }
            if trial % 3 == 1 {
                let ea = eig_hermitian(&a).unwrap();
                let mins: Vec<f64> = (0..n)
                    .map(|j| {
                        let v = ea.vectors.column(j);
                        let bj: f64 = (0..n)
                            .flat_map(|p| (0..n).map(move |q| (p, q)))
                            .map(|(p, q)| (v[p].conj() * b.get(p, q) * v[q]).re)
                            .sum();
                        ea.eigenvalues[j].min(bj)
                    })
                    .collect();
                let expected = ea.recompose(&mins);
                commuting_err = commuting_err.max(expected.sub(&r.s).as_matrix().max_abs());
            }
        }
    }
    let passed = psd_fail == 0 && singular_fail == 0 && commuting_err <= 1e-7;
    verdict(
        6,
        passed,
        &format!(
            "500 trials x 2 pivots: A-S, B-S PSD failures {psd_fail}, regularized runs {regularized} with S <= pivot+eps*I failures {singular_fail}, min eigenvalue {worst_rel:.2e}*scale (limit -1e-8); commuting elementwise-min error {commuting_err:.2e} (limit 1e-7)"
        ),
    );
    assert!(passed);
}

#[test]
fn criterion_7_closed_forms() {
    let tol = ToleranceModel::default();
    let mut chernoff_err = 0.0f64;
    for i in 0..100u64 {
        let n = 2 + i as usize % 2;
        let a = random_pure_state(n, 0xc4e7_0000 + i).unwrap();
        let b = random_pure_state(n, 0xc4e7_8000 + i).unwrap();
        let overlap = (a.as_matrix() * b.as_matrix()).trace().re;
        let r = chernoff_exponent(&a, &b, &tol).unwrap();
        chernoff_err = chernoff_err.max((r.q_value - overlap).abs());
    }

    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let s = singular_values(&HermitianMatrix::from_real_rows(&[&[1.0, 1.0], &[1.0, 0.0]]).unwrap()).unwrap();
    let golden_err = (s[0] - phi).abs().max((s[1] - (5f64.sqrt() - 1.0) / 2.0).abs());

    let a = HermitianMatrix::from_real_rows(&[&[2.0, 1.0], &[1.0, 1.0]]).unwrap();
    let b = HermitianMatrix::identity(2).unwrap();
    let pair = PreparedPair::new(&a, &b, &tol).unwrap();
    let slacks = pair.eig_dominance(&pair.alpha_terms(0.5).unwrap()).slacks;
    // eig(A) = phi^2, phi^-2; slack_i = 2 sqrt(a_i) - 2 min(a_i, 1).
    let expected = [2.0 * phi - 2.0, 2.0 / phi - 2.0 / (phi * phi)];
    let example_err = slacks
        .iter()
        .zip(expected)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);

    let passed = chernoff_err <= 1e-9 && golden_err <= 1e-12 && example_err <= 1e-6;
    verdict(
        7,
        passed,
        &format!(
            "pure-state Chernoff vs overlap {chernoff_err:.2e} (limit 1e-9); golden-ratio singular values {golden_err:.2e} (limit 1e-12); commuting example slacks [{:.4}, {:.4}] error {example_err:.2e} (limit 1e-6)",
            slacks[0], slacks[1]
        ),
    );
    assert!(passed);
}

#[test]
fn criterion_8_reproducibility() {
    let dir = tempfile::tempdir().unwrap();
    let exe = env!("CARGO_BIN_EXE_psineq");
    let run = |name: &str| {
        let path = dir.path().join(name);
        let status = std::process::Command::new(exe)
            .args(["verify", "--out"])
            .arg(&path)
            .stderr(std::process::Stdio::null())
            .status()
            .unwrap();
        assert!(matches!(status.code(), Some(0 | 1)), "verify exit status {status:?}");
        std::fs::read(&path).unwrap()
    };
    let first = run("a.json");
    let second = run("b.json");
    let identical = first == second;

    let json: serde_json::Value = serde_json::from_slice(&first).unwrap();
    let config = TrialConfig::default();
    let cells = json["checks"].as_array().unwrap();
    let mut mismatches = Vec::new();
    for cell in cells {
        let descriptor: TrialDescriptor = cell["argmin_trial"].as_str().unwrap().parse().unwrap();
        let printed = serde_json::to_string(&cell["worst_slack"]).unwrap();
        let norm = cell["norm"].as_str().map(str::to_string);
        let id: InequalityId = cell["id"].as_str().unwrap().parse().unwrap();
        let out = replay(&descriptor, &config).unwrap();
        let hit = out
            .outcome
            .reports
            .iter()
            .find(|r| r.inequality_id == id && r.norm_spec.map(|n| n.to_string()) == norm)
            .unwrap();
        if format_f64(hit.worst_slack) != printed || out.hash_matches != Some(true) {
            mismatches.push(descriptor.to_string());
        }
    }

    // The CLI replay prints the same digits.
    let worst = cells
        .iter()
        .min_by(|x, y| {
            x["worst_slack"]
                .as_f64()
                .unwrap()
                .total_cmp(&y["worst_slack"].as_f64().unwrap())
        })
        .unwrap();
    let printed = serde_json::to_string(&worst["worst_slack"]).unwrap();
    let out = std::process::Command::new(exe)
        .args(["replay", worst["argmin_trial"].as_str().unwrap()])
        .output()
        .unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    let cli_match = text.contains(&format!("worst_slack={printed} "));

    let passed = identical && mismatches.is_empty() && cli_match;
    verdict(
        8,
        passed,
        &format!(
            "two verify runs byte-identical: {identical} ({} bytes); {} of {} argmin replays reproduce worst_slack digit for digit; CLI replay of global argmin prints {printed}: {cli_match}",
            first.len(),
            cells.len() - mismatches.len(),
            cells.len()
        ),
    );
    assert!(
        passed,
        "mismatched replays: {:?}",
        &mismatches[..mismatches.len().min(5)]
    );
}
