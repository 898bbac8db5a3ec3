use serde_json::Value;
use symplectic_core::Error;

/// Why a job did not produce a result, and the exit code that goes with it.
#[derive(Debug)]
pub enum Failure {
    /// Malformed document, failed precondition, exceeded bound or I/O trouble.
    Input(String),
    /// Input refused with structured evidence, such as a failing triple.
    Rejected(String, Value),
    /// A mathematical identity that should hold did not.
    Violation(String),
}

impl Failure {
    pub fn input(msg: impl Into<String>) -> Self {
        Failure::Input(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Input(_) | Failure::Rejected(..) => 2,
            Failure::Violation(_) => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Failure::Input(_) | Failure::Rejected(..) => "invalid_input",
            Failure::Violation(_) => "invariant_violation",
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Rejected(m, _) | Failure::Violation(m) => m,
        }
    }

    pub fn details(&self) -> Option<&Value> {
        match self {
            Failure::Rejected(_, v) => Some(v),
            _ => None,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvariantViolation(_) => Failure::Violation(e.to_string()),
            Error::InvalidInput(_) | Error::BoundExceeded { .. } => Failure::Input(e.to_string()),
        }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Input(format!("cannot parse the job document: {e}"))
    }
}
