use std::path::Path;
use std::time::Duration;

use serde::Serialize;

use super::suite::{TrialOutcome, TrialPlan};
use super::{HarnessError, HarnessResult, OutputFormat, TrialConfig};
use crate::decomp::Pivot;
use crate::inequalities::{InequalityId, SlackReport};

/// Witness lists are capped at this many entries.
const MAX_WITNESSES: usize = 10;

/// One aggregate cell: a check at one `(dim, ensemble, norm, alpha)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckAggregate {
    pub id: InequalityId,
    pub alpha: f64,
    pub norm: Option<String>,
    pub dim: usize,
    pub ensemble: String,
    pub count: usize,
    pub pass_count: usize,
    pub worst_slack: f64,
    /// Smallest `worst_slack / scale` over the cell's trials.
    pub worst_relative_slack: f64,
    pub passed: bool,
    /// Seed of the trial attaining `worst_slack`.
    pub seed: u64,
    /// Replay descriptor of the trial attaining `worst_slack`.
    pub argmin_trial: String,
}

impl CheckAggregate {
    pub(crate) fn empty(plan: &TrialPlan, report: &SlackReport) -> Self {
        Self {
            id: report.inequality_id,
            alpha: report.alpha,
            norm: report.norm_spec.map(|n| n.to_string()),
            dim: plan.dim,
            ensemble: plan.ensemble.to_string(),
            count: 0,
            pass_count: 0,
            worst_slack: f64::INFINITY,
            worst_relative_slack: f64::INFINITY,
            passed: true,
            seed: plan.seed,
            argmin_trial: String::new(),
        }
    }

    pub(crate) fn absorb(&mut self, outcome: &TrialOutcome, report: &SlackReport) {
        debug_assert_eq!(self.id, report.inequality_id);
        self.count += 1;
        if report.passed {
            self.pass_count += 1;
        }
        self.passed = self.pass_count == self.count;
        // A NaN slack is always recorded.
        if self.argmin_trial.is_empty() || report.worst_slack.is_nan() || report.worst_slack < self.worst_slack {
            self.worst_slack = report.worst_slack;
            self.seed = outcome.plan.seed;
            self.argmin_trial = outcome
                .plan
                .descriptor(Some(outcome.hash.clone()), Some(report.alpha))
                .to_string();
        }
        let rel = report.worst_slack / report.scale.max(f64::MIN_POSITIVE);
        if rel.is_nan() || rel < self.worst_relative_slack {
            self.worst_relative_slack = rel;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Lemma2Witness {
    pub trial: String,
    pub pivot: Pivot,
    pub max_gap: f64,
    pub gaps: Vec<f64>,
}

/// Eigenvalue comparison between a dominated Hermitian `T` (`T <= A`,
/// `T <= B`) and the clamp parallel minimum `S`: the conjecture
/// `lambda_i(T) <= lambda_i(S)`. Informational only.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Lemma2Probe {
    /// `(trial, pivot)` evaluations.
    pub draws: usize,
    pub violations: usize,
    /// Largest `lambda_i(T) - lambda_i(S)`, relative to `||A||_2 + ||B||_2`.
    pub max_relative_gap: Option<f64>,
    pub median_relative_gap: Option<f64>,
    pub max_pivot_disagreement: Option<f64>,
    pub witnesses: Vec<Lemma2Witness>,
    #[serde(skip)]
    relative_gaps: Vec<f64>,
}

impl Lemma2Probe {
    pub(crate) fn absorb(&mut self, outcome: &TrialOutcome) {
        for s in &outcome.lemma2 {
            self.draws += 1;
            self.relative_gaps.push(s.max_gap / outcome.scale);
            if s.violated {
                self.violations += 1;
                if self.witnesses.len() < MAX_WITNESSES {
                    self.witnesses.push(Lemma2Witness {
                        trial: outcome.plan.descriptor(Some(outcome.hash.clone()), None).to_string(),
                        pivot: s.pivot,
                        max_gap: s.max_gap,
                        gaps: s.gaps.clone(),
                    });
                }
            }
        }
        if let Some(d) = outcome.pivot_disagreement {
            self.max_pivot_disagreement = Some(self.max_pivot_disagreement.map_or(d, |m| m.max(d)));
        }
    }

    fn finalize(&mut self) {
        if self.relative_gaps.is_empty() {
            return;
        }
        let mut g = self.relative_gaps.clone();
        g.sort_by(f64::total_cmp);
        self.max_relative_gap = g.last().copied();
        self.median_relative_gap = Some(g[g.len() / 2]);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShiftWitness {
    pub trial: String,
    pub shifted_margin: f64,
}

/// Side data of the projection-shift check: the shift size and whether
/// `s(X)` is also weakly majorized by the singular values of the shifted
/// non-Hermitian matrix.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ShiftProbe {
    pub evaluations: usize,
    /// Evaluations where the shifted matrix fails to dominate.
    pub exceptions: usize,
    pub min_relative_margin: Option<f64>,
    /// Smallest `beta / scale`; the shift is non-negative in theory.
    pub min_relative_beta: Option<f64>,
    /// Smallest `(lambda_n(T) - beta) / scale`.
    pub min_relative_gamma_n: Option<f64>,
    pub witnesses: Vec<ShiftWitness>,
}

fn min_opt(slot: &mut Option<f64>, v: f64) {
    *slot = Some(slot.map_or(v, |m| m.min(v)));
}

impl ShiftProbe {
    pub(crate) fn absorb(&mut self, outcome: &TrialOutcome) {
        for s in &outcome.shift {
            self.evaluations += 1;
            min_opt(&mut self.min_relative_margin, s.shifted_margin / outcome.scale);
            min_opt(&mut self.min_relative_beta, s.beta / outcome.scale);
            min_opt(&mut self.min_relative_gamma_n, s.gamma_n / outcome.scale);
            if s.exception {
                self.exceptions += 1;
                if self.witnesses.len() < MAX_WITNESSES {
                    self.witnesses.push(ShiftWitness {
                        trial: outcome
                            .plan
                            .descriptor(Some(outcome.hash.clone()), Some(s.alpha))
                            .to_string(),
                        shifted_margin: s.shifted_margin,
                    });
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    /// Number of check evaluations.
    pub total: usize,
    /// Number of failed evaluations.
    pub failed: usize,
    pub failed_cells: usize,
    pub min_slack: f64,
    pub min_relative_slack: f64,
}

/// Campaign result. The canonical serialization excludes wall time, so
/// identical configurations give byte-identical reports.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub config: TrialConfig,
    pub checks: Vec<CheckAggregate>,
    pub lemma2_probe: Lemma2Probe,
    pub projection_shift_probe: ShiftProbe,
    pub summary: Summary,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl SuiteReport {
    pub(crate) fn new(
        config: TrialConfig,
        checks: Vec<CheckAggregate>,
        mut lemma2_probe: Lemma2Probe,
        projection_shift_probe: ShiftProbe,
        wall_time: Duration,
    ) -> Self {
        lemma2_probe.finalize();
        let summary = Summary {
            total: checks.iter().map(|c| c.count).sum(),
            failed: checks.iter().map(|c| c.count - c.pass_count).sum(),
            failed_cells: checks.iter().filter(|c| !c.passed).count(),
            min_slack: checks.iter().map(|c| c.worst_slack).fold(f64::INFINITY, f64::min),
            min_relative_slack: checks
                .iter()
                .map(|c| c.worst_relative_slack)
                .fold(f64::INFINITY, f64::min),
        };
        Self {
            config,
            checks,
            lemma2_probe,
            projection_shift_probe,
            summary,
            wall_time,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn to_json(&self) -> HarnessResult<String> {
        let mut s = serde_json::to_string_pretty(self).map_err(|e| HarnessError::Parse(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    pub fn to_csv(&self) -> HarnessResult<String> {
        #[derive(Serialize)]
        struct Row<'a> {
            id: InequalityId,
            alpha: f64,
            norm: &'a str,
            dim: usize,
            ensemble: &'a str,
            count: usize,
            pass_count: usize,
            passed: bool,
            worst_slack: f64,
            worst_relative_slack: f64,
            seed: u64,
            argmin_trial: &'a str,
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        for c in &self.checks {
            w.serialize(Row {
                id: c.id,
                alpha: c.alpha,
                norm: c.norm.as_deref().unwrap_or(""),
                dim: c.dim,
                ensemble: &c.ensemble,
                count: c.count,
                pass_count: c.pass_count,
                passed: c.passed,
                worst_slack: c.worst_slack,
                worst_relative_slack: c.worst_relative_slack,
                seed: c.seed,
                argmin_trial: &c.argmin_trial,
            })
            .map_err(|e| HarnessError::Parse(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| HarnessError::Parse(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
    }

    pub fn render(&self, format: OutputFormat) -> HarnessResult<String> {
        match format {
            OutputFormat::Json => self.to_json(),
            OutputFormat::Csv => self.to_csv(),
        }
    }

    pub fn write(&self, path: &Path, format: OutputFormat) -> HarnessResult<()> {
        std::fs::write(path, self.render(format)?).map_err(|e| HarnessError::io(path.display().to_string(), e))
    }

    /// Failing cells, worst first.
    pub fn failures(&self) -> Vec<&CheckAggregate> {
        let mut f: Vec<_> = self.checks.iter().filter(|c| !c.passed).collect();
        f.sort_by(|x, y| x.worst_relative_slack.total_cmp(&y.worst_relative_slack));
        f
    }

    pub fn summary_text(&self) -> String {
        let mut out = format!(
            "{} evaluations, {} failed ({} cells), min slack {}, min relative slack {}, {:.2}s\n",
            self.summary.total,
            self.summary.failed,
            self.summary.failed_cells,
            self.summary.min_slack,
            self.summary.min_relative_slack,
            self.wall_time.as_secs_f64()
        );
        for c in self.failures().iter().take(10) {
            out.push_str(&format!(
                "  FAIL {} alpha={} norm={} dim={} ensemble={}: {}/{} failed, worst {} -> {}\n",
                c.id,
                c.alpha,
                c.norm.as_deref().unwrap_or("-"),
                c.dim,
                c.ensemble,
                c.count - c.pass_count,
                c.count,
                c.worst_slack,
                c.argmin_trial
            ));
        }
        let l = &self.lemma2_probe;
        if l.draws > 0 {
            out.push_str(&format!(
                "  dominated-T probe: {} of {} draws exceed S\n",
                l.violations, l.draws
            ));
        }
        let s = &self.projection_shift_probe;
        if s.evaluations > 0 {
            out.push_str(&format!(
                "  shifted-matrix probe: {} of {} evaluations not dominating\n",
                s.exceptions, s.evaluations
            ));
        }
        out
    }
}
