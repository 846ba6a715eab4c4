use std::fmt;

use pseudocone::Error;

/// A failed command, classified by exit code.
#[derive(Debug)]
pub enum Failure {
    /// Malformed config, bad index sets, unreadable or unwritable files.
    Input(String),
    /// The solver ran out of iterations or its line search stalled.
    NotConverged(String),
    /// A runtime assertion or bound audit failed.
    Internal(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Input(_) => 1,
            Failure::NotConverged(_) => 2,
            Failure::Internal(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Input(m) | Failure::NotConverged(m) | Failure::Internal(m) => f.write_str(m),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let message = e.to_string();
        match e {
            Error::MaxIterations { .. } | Error::LineSearchStalled { .. } => Failure::NotConverged(message),
            e if e.is_internal() => Failure::Internal(message),
            _ => Failure::Input(message),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}
