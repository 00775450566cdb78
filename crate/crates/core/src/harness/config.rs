use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{HarnessError, HarnessResult};
use crate::inequalities::InequalityId;
use crate::linalg::ToleranceModel;
use crate::norms::NormSpec;
use crate::randgen::EnsembleKind;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum NormSelector {
    Spec(NormSpec),
    /// Every Ky Fan norm `k = 1..=dim`.
    KyFanAll,
}

impl NormSelector {
    pub fn expand(&self, dim: usize) -> Vec<NormSpec> {
        match *self {
            NormSelector::Spec(s) => vec![s],
            NormSelector::KyFanAll => (1..=dim).map(NormSpec::KyFan).collect(),
        }
    }
}

impl std::fmt::Display for NormSelector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NormSelector::Spec(s) => write!(f, "{s}"),
            NormSelector::KyFanAll => write!(f, "kyfan:all"),
        }
    }
}

impl FromStr for NormSelector {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        if s.trim().eq_ignore_ascii_case("kyfan:all") {
            Ok(NormSelector::KyFanAll)
        } else {
            s.parse().map(NormSelector::Spec)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OutputFormat {
    Json,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = HarnessError;

    fn from_str(s: &str) -> HarnessResult<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(HarnessError::Config(format!("unknown format '{other}'"))),
        }
    }
}

fn ser_display<T: std::fmt::Display, S: serde::Serializer>(v: &[T], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialConfig {
    pub dims: Vec<usize>,
    pub trials_per_dim: usize,
    pub alpha_grid: Vec<f64>,
    #[serde(serialize_with = "ser_display")]
    pub ensembles: Vec<EnsembleKind>,
    #[serde(serialize_with = "ser_display")]
    pub norms: Vec<NormSelector>,
    pub master_seed: u64,
    pub tolerances: ToleranceModel,
    pub checks: Vec<InequalityId>,
    /// Not part of the canonical report.
    #[serde(skip)]
    pub output_path: Option<PathBuf>,
    pub format: OutputFormat,
}

pub const DEFAULT_MASTER_SEED: u64 = 0x5eed_2024;

impl Default for TrialConfig {
    fn default() -> Self {
        Self {
            dims: vec![2, 3, 4, 6, 8],
            trials_per_dim: 200,
            alpha_grid: parse_alpha_grid("0:1:0.1").expect("default grid"),
            ensembles: EnsembleKind::all_default(),
            norms: vec![
                NormSelector::Spec(NormSpec::Operator),
                NormSelector::Spec(NormSpec::Trace),
                NormSelector::KyFanAll,
                NormSelector::Spec(NormSpec::Schatten(3.0)),
            ],
            master_seed: DEFAULT_MASTER_SEED,
            tolerances: ToleranceModel { rel: 1e-8, abs: 1e-12 },
            checks: InequalityId::ALL.to_vec(),
            output_path: None,
            format: OutputFormat::Json,
        }
    }
}

impl TrialConfig {
    pub fn validate(&self) -> HarnessResult<()> {
        let cfg = |m: String| Err(HarnessError::Config(m));
        if self.dims.is_empty() {
            return cfg("dims must not be empty".into());
        }
        if let Some(d) = self.dims.iter().find(|&&d| d == 0) {
            return cfg(format!("dimension {d} must be at least 1"));
        }
        if self.trials_per_dim == 0 {
            return cfg("trials must be at least 1".into());
        }
        if self.alpha_grid.is_empty() {
            return cfg("alpha grid must not be empty".into());
        }
        if let Some(a) = self.alpha_grid.iter().find(|a| !(0.0..=1.0).contains(*a)) {
            return cfg(format!("alpha {a} outside [0, 1]"));
        }
        if self.ensembles.is_empty() {
            return cfg("at least one ensemble is required".into());
        }
        if self.checks.is_empty() {
            return cfg("at least one check is required".into());
        }
        if self.checks.iter().any(|c| c.is_per_norm()) && self.norms.is_empty() {
            return cfg("norm checks are enabled but no norms are configured".into());
        }
        ToleranceModel::new(self.tolerances.rel, self.tolerances.abs)
            .map_err(|e| HarnessError::Config(e.to_string()))?;
        for &dim in &self.dims {
            for e in &self.ensembles {
                e.validate(dim)
                    .map_err(|err| HarnessError::Config(format!("ensemble {e} at dim {dim}: {err}")))?;
            }
            for sel in &self.norms {
                for spec in sel.expand(dim) {
                    spec.validate(dim)
                        .map_err(|err| HarnessError::Config(format!("norm {sel} at dim {dim}: {err}")))?;
                }
            }
        }
        Ok(())
    }

    /// Enabled checks in canonical order, without duplicates.
    pub fn ordered_checks(&self) -> Vec<InequalityId> {
        InequalityId::ALL
            .into_iter()
            .filter(|c| self.checks.contains(c))
            .collect()
    }

    pub fn norms_for(&self, dim: usize) -> Vec<NormSpec> {
        self.norms.iter().flat_map(|s| s.expand(dim)).collect()
    }

    /// Number of slack reports one trial at `dim` produces per alpha.
    pub fn reports_per_alpha(&self, dim: usize) -> usize {
        let norms = self.norms_for(dim).len();
        self.ordered_checks()
            .iter()
            .map(|c| if c.is_per_norm() { norms } else { 1 })
            .sum()
    }

    /// Total number of check evaluations in a campaign.
    pub fn expected_evaluations(&self) -> usize {
        self.dims
            .iter()
            .map(|&d| self.ensembles.len() * self.trials_per_dim * self.alpha_grid.len() * self.reports_per_alpha(d))
            .sum()
    }
}

/// Comma-separated list parsed element by element.
pub fn parse_list<T: FromStr>(s: &str) -> HarnessResult<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<T>().map_err(|e| HarnessError::Config(format!("'{t}': {e}"))))
        .collect()
}

/// `start:end:step` (inclusive, `k * (end - start) / m` spacing) or a
/// comma-separated list.
pub fn parse_alpha_grid(s: &str) -> HarnessResult<Vec<f64>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    if s.contains(':') {
        let parts: Vec<f64> = parse_colon(s)?;
        let [start, end, step] = parts[..] else {
            return Err(HarnessError::Config(format!(
                "alpha range '{s}' must be start:end:step"
            )));
        };
        if step.is_nan() || step <= 0.0 || end < start {
            return Err(HarnessError::Config(format!(
                "alpha range '{s}' needs step > 0 and end >= start"
            )));
        }
        let m = ((end - start) / step).round();
        if m > 1e6 {
            return Err(HarnessError::Config(format!("alpha range '{s}' has too many points")));
        }
        let m = m as usize;
        if m == 0 {
            return Ok(vec![start]);
        }
        Ok((0..=m).map(|k| start + (end - start) * k as f64 / m as f64).collect())
    } else {
        parse_list(s)
    }
}

fn parse_colon(s: &str) -> HarnessResult<Vec<f64>> {
    s.split(':')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|e| HarnessError::Config(format!("'{t}': {e}")))
        })
        .collect()
}
