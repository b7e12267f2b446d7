use std::fmt;

/// Failure classes with distinct exit codes: malformed input (1) versus a
/// well-formed instance that has no solution (2).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Validation,
    Infeasible,
}

#[derive(Debug)]
pub struct CliError {
    pub kind: Kind,
    pub message: String,
}

impl CliError {
    pub fn validation(message: impl Into<String>) -> Self {
        Self {
            kind: Kind::Validation,
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind {
            Kind::Validation => 1,
            Kind::Infeasible => 2,
        }
    }

    pub fn kind_label(&self) -> &'static str {
        match self.kind {
            Kind::Validation => "validation",
            Kind::Infeasible => "infeasible",
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind_label(), self.message)
    }
}

impl From<flexload::Error> for CliError {
    fn from(e: flexload::Error) -> Self {
        use flexload::Error;
        let kind = match e {
            Error::Inadequate { .. }
            | Error::EnergyExceedsCapacity { .. }
            | Error::PopulationTooSmall { .. } => Kind::Infeasible,
            _ => Kind::Validation,
        };
        Self {
            kind,
            message: e.to_string(),
        }
    }
}
