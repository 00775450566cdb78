//! Verification campaigns over seeded ensembles: configuration, the suite
//! runner, report serialization, trial replay, and the text matrix format.

mod config;
mod matrix_io;
mod replay;
mod report;
mod suite;

pub use config::{parse_alpha_grid, parse_list, NormSelector, OutputFormat, TrialConfig};
pub use matrix_io::{format_matrix, parse_matrix, read_matrix_file, write_matrix_file, FILE_HERMITIAN_TOL};
pub use replay::{format_f64, replay, ReplayOutput};
pub use report::{CheckAggregate, Lemma2Probe, Lemma2Witness, ShiftProbe, ShiftWitness, SuiteReport, Summary};
pub use suite::{
    evaluate_trial, generate_trial, matrix_hash, run_suite, trial_plans, Lemma2Sample, ShiftSample, TrialDescriptor,
    TrialOutcome, TrialPlan, PD_MIN_RATIO,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Linalg(#[from] crate::Error),
}

impl HarnessError {
    /// Process exit status: 2 for usage, configuration and input errors,
    /// 3 for I/O errors. A computation error in a check counts as a failed
    /// check (1).
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) | HarnessError::Parse(_) => 2,
            HarnessError::Io { .. } => 3,
            HarnessError::Linalg(crate::Error::InvalidInput(_) | crate::Error::ShapeError { .. }) => 2,
            HarnessError::Linalg(_) => 1,
        }
    }

    pub(crate) fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        HarnessError::Io {
            path: path.into(),
            source,
        }
    }
}

pub type HarnessResult<T> = std::result::Result<T, HarnessError>;
