use std::fmt;
use std::path::Path;

use markov_binning::Error;

pub const EXIT_INPUT: i32 = 2;
pub const EXIT_ALGORITHM: i32 = 3;
pub const EXIT_NOT_CONVERGED: i32 = 4;

/// An error message together with the process exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Self {
        Self { code: EXIT_INPUT, message: message.into() }
    }

    pub fn algorithm(message: impl Into<String>) -> Self {
        Self { code: EXIT_ALGORITHM, message: message.into() }
    }

    pub fn not_converged(message: impl Into<String>) -> Self {
        Self { code: EXIT_NOT_CONVERGED, message: message.into() }
    }

    pub fn io(path: &Path, e: impl fmt::Display) -> Self {
        Self::input(format!("{}: {e}", path.display()))
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Undecidable | Error::TargetNotReached { .. } => EXIT_ALGORITHM,
            _ => EXIT_INPUT,
        };
        Self { code, message: e.to_string() }
    }
}
