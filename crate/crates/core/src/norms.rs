//! Unitarily invariant norms evaluated from singular values, and the weak
//! majorization predicate behind Fan dominance.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::decomp::singular_values;
use crate::error::{ensure_same_dim, Error, Result};
use crate::linalg::HermitianMatrix;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormSpec {
    /// Largest singular value.
    Operator,
    /// Sum of all singular values.
    Trace,
    Frobenius,
    /// Sum of the `k` largest singular values.
    KyFan(usize),
    /// `(sum s_i^p)^(1/p)` for `p >= 1`.
    Schatten(f64),
}

impl NormSpec {
    pub fn validate(&self, dim: usize) -> Result<()> {
        match *self {
            NormSpec::KyFan(k) if k == 0 || k > dim => {
                Err(Error::InvalidInput(format!("Ky Fan index {k} outside [1, {dim}]")))
            }
            NormSpec::Schatten(p) if !(p >= 1.0 && p.is_finite()) => Err(Error::InvalidInput(format!(
                "Schatten exponent {p} must be finite and >= 1"
            ))),
            _ => Ok(()),
        }
    }

    /// Evaluates the symmetric gauge function on singular values sorted in
    /// descending order.
    pub fn gauge(&self, s: &[f64]) -> Result<f64> {
        self.validate(s.len())?;
        Ok(match *self {
            NormSpec::Operator => s.first().copied().unwrap_or(0.0),
            NormSpec::Trace => s.iter().sum(),
            NormSpec::Frobenius => s.iter().map(|x| x * x).sum::<f64>().sqrt(),
            NormSpec::KyFan(k) => s[..k].iter().sum(),
            NormSpec::Schatten(p) => {
                // Factor out s_1 so large entries cannot overflow.
                let top = s.first().copied().unwrap_or(0.0);
                if top == 0.0 {
                    0.0
                } else {
                    top * s.iter().map(|x| (x / top).powf(p)).sum::<f64>().powf(1.0 / p)
                }
            }
        })
    }
}

impl fmt::Display for NormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormSpec::Operator => write!(f, "operator"),
            NormSpec::Trace => write!(f, "trace"),
            NormSpec::Frobenius => write!(f, "frobenius"),
            NormSpec::KyFan(k) => write!(f, "kyfan:{k}"),
            NormSpec::Schatten(p) => write!(f, "schatten:{p}"),
        }
    }
}

impl FromStr for NormSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let spec = match lower.as_str() {
            "operator" | "op" => NormSpec::Operator,
            "trace" => NormSpec::Trace,
            "frobenius" => NormSpec::Frobenius,
            other => {
                let bad = || Error::InvalidInput(format!("unknown norm '{other}'"));
                if let Some(k) = other.strip_prefix("kyfan:") {
                    NormSpec::KyFan(k.parse().map_err(|_| bad())?)
                } else if let Some(p) = other.strip_prefix("schatten:") {
                    NormSpec::Schatten(p.parse().map_err(|_| bad())?)
                } else {
                    return Err(bad());
                }
            }
        };
        if let NormSpec::KyFan(0) = spec {
            return Err(Error::InvalidInput("Ky Fan index must be at least 1".into()));
        }
        if let NormSpec::Schatten(p) = spec {
            spec.validate(1)
                .map_err(|_| Error::InvalidInput(format!("invalid Schatten exponent {p}")))?;
        }
        Ok(spec)
    }
}

impl Serialize for NormSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for NormSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub fn norm(a: &HermitianMatrix, spec: NormSpec) -> Result<f64> {
    spec.validate(a.dim())?;
    spec.gauge(&singular_values(a)?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Majorization {
    pub holds: bool,
    /// `min_k (prefix_y(k) - prefix_x(k))`.
    pub margin: f64,
    /// `prefix_y(k) - prefix_x(k)` for `k = 1..=n`.
    pub prefix_margins: Vec<f64>,
}

/// Prefix sums of a vector, accumulated left to right.
pub fn prefix_sums(x: &[f64]) -> Vec<f64> {
    x.iter()
        .scan(0.0, |acc, v| {
            *acc += v;
            Some(*acc)
        })
        .collect()
}

/// Weak majorization `x <_w y`: every prefix sum of the descending
/// rearrangement of `x` is at most that of `y`, up to
/// `tol * (1 + sum |y|)`. Inputs are re-sorted.
pub fn weakly_majorized(x: &[f64], y: &[f64], tol: f64) -> Result<Majorization> {
    ensure_same_dim(x.len(), y.len())?;
    let mut xs = x.to_vec();
    let mut ys = y.to_vec();
    xs.sort_by(|a, b| b.total_cmp(a));
    ys.sort_by(|a, b| b.total_cmp(a));
    let prefix_margins: Vec<f64> = prefix_sums(&ys)
        .iter()
        .zip(prefix_sums(&xs))
        .map(|(py, px)| py - px)
        .collect();
    let margin = prefix_margins.iter().copied().fold(f64::INFINITY, f64::min);
    let allowance = tol * (1.0 + ys.iter().map(|v| v.abs()).sum::<f64>());
    Ok(Majorization {
        holds: prefix_margins.iter().all(|&m| m >= -allowance),
        margin,
        prefix_margins,
    })
}
