use std::fmt;
use std::process::ExitCode;

/// Process exit status by failure class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Validation = 1,
    Numerical = 2,
    ComparisonFailed = 3,
}

impl From<ExitStatus> for ExitCode {
    fn from(s: ExitStatus) -> Self {
        ExitCode::from(s as u8)
    }
}

#[derive(Debug)]
pub struct CliError {
    pub code: ExitStatus,
    pub message: String,
}

impl CliError {
    pub fn validation(message: impl Into<String>) -> Self {
        Self {
            code: ExitStatus::Validation,
            message: message.into(),
        }
    }

    pub fn comparison(message: impl Into<String>) -> Self {
        Self {
            code: ExitStatus::ComparisonFailed,
            message: message.into(),
        }
    }

    pub fn context(mut self, what: &str) -> Self {
        self.message = format!("{what}: {}", self.message);
        self
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<dephase::Error> for CliError {
    fn from(e: dephase::Error) -> Self {
        use dephase::Error::*;
        let code = match e {
            QuadratureNonconvergence { .. }
            | DimensionBudgetExceeded { .. }
            | EigendecompositionFailure { .. }
            | InsufficientSamples { .. }
            | NonpositiveGamma { .. } => ExitStatus::Numerical,
            _ => ExitStatus::Validation,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::validation(format!("i/o error: {e}"))
    }
}
