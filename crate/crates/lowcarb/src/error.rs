use std::path::{Path, PathBuf};

use lowcarb_core::analysis::AnalysisError;
use lowcarb_core::formulation::FeasibilityReport;
use lowcarb_core::milp::MilpStatus;
use thiserror::Error;

/// Everything the command line can fail with, each mapped to an exit code.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0}")]
    Usage(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    /// `line` and `column` are 1-based; 0 means unknown.
    #[error("{}:{line}:{column}: {message}", path.display())]
    Parse { path: PathBuf, line: usize, column: usize, message: String },
    #[error("{}: {message}", path.display())]
    Invalid { path: PathBuf, message: String },
    #[error("the problem is infeasible")]
    Infeasible,
    #[error("the relaxation is unbounded")]
    Unbounded,
    #[error("solver stopped at a limit without a feasible solution ({0:?})")]
    NoIncumbent(MilpStatus),
    #[error("solution fails the feasibility check:\n{0}")]
    Feasibility(FeasibilityReport),
    #[error("every sweep row failed")]
    SweepFailed,
    #[error(transparent)]
    Analysis(AnalysisError),
}

impl Error {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        Error::Io { path: path.to_path_buf(), source }
    }

    pub fn invalid(path: &Path, message: impl Into<String>) -> Self {
        Error::Invalid { path: path.to_path_buf(), message: message.into() }
    }

    /// 2 usage and input errors, 3 infeasible, 4 limit without incumbent,
    /// 5 failed feasibility check.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Usage(_) | Error::Io { .. } | Error::Parse { .. } | Error::Invalid { .. } => 2,
            Error::Infeasible | Error::Unbounded | Error::SweepFailed => 3,
            Error::NoIncumbent(_) => 4,
            Error::Feasibility(_) => 5,
            Error::Analysis(e) => match e {
                AnalysisError::NoIncumbent(MilpStatus::Infeasible | MilpStatus::Unbounded) => 3,
                AnalysisError::NoIncumbent(_) => 4,
                AnalysisError::Formulation(_) | AnalysisError::NegativePrice(_) => 2,
                _ => 1,
            },
        }
    }
}

impl From<AnalysisError> for Error {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::NoIncumbent(MilpStatus::Infeasible) => Error::Infeasible,
            AnalysisError::NoIncumbent(MilpStatus::Unbounded) => Error::Unbounded,
            AnalysisError::NoIncumbent(s) => Error::NoIncumbent(s),
            e => Error::Analysis(e),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
