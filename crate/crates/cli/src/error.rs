use std::fmt;
use std::path::Path;

use zonepart::interaction::{GraphError, InteractionError};
use zonepart::lp::LpError;
use zonepart::milp::{MilpError, MilpStatus};
use zonepart::mpc::MpcError;
use zonepart::partition::PartitionError;
use zonepart::thermal::ThermalError;

/// Error class, each with its own process exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Config,
    Infeasible,
    SolverLimit,
}

#[derive(Debug)]
pub struct CliError {
    pub kind: Kind,
    pub message: String,
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        Self { kind: Kind::Config, message: message.into() }
    }

    pub fn infeasible(message: impl Into<String>) -> Self {
        Self { kind: Kind::Infeasible, message: message.into() }
    }

    pub fn solver_limit(message: impl Into<String>) -> Self {
        Self { kind: Kind::SolverLimit, message: message.into() }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind {
            Kind::Config => 2,
            Kind::Infeasible => 3,
            Kind::SolverLimit => 4,
        }
    }

    /// Prefixes the message with the file it came from.
    pub fn in_file(mut self, path: &Path) -> Self {
        self.message = format!("{}: {}", path.display(), self.message);
        self
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<ThermalError> for CliError {
    fn from(e: ThermalError) -> Self {
        match e {
            ThermalError::Topology(_) => Self::infeasible(e.to_string()),
            _ => Self::config(e.to_string()),
        }
    }
}

impl From<LpError> for CliError {
    fn from(e: LpError) -> Self {
        match e {
            LpError::IterationLimit(_) => Self::solver_limit(e.to_string()),
            _ => Self::config(e.to_string()),
        }
    }
}

impl From<MilpError> for CliError {
    fn from(e: MilpError) -> Self {
        match e {
            MilpError::NotOptimal(MilpStatus::Infeasible) => Self::infeasible(e.to_string()),
            MilpError::NotOptimal(MilpStatus::NodeLimit) => Self::solver_limit(e.to_string()),
            MilpError::Lp(lp) => lp.into(),
            _ => Self::config(e.to_string()),
        }
    }
}

impl From<MpcError> for CliError {
    fn from(e: MpcError) -> Self {
        match e {
            MpcError::Thermal(t) => t.into(),
            MpcError::Lp(lp) => lp.into(),
            MpcError::Solver(_) => Self::infeasible(e.to_string()),
            _ => Self::config(e.to_string()),
        }
    }
}

impl From<InteractionError> for CliError {
    fn from(e: InteractionError) -> Self {
        match e {
            InteractionError::Thermal(t) => t.into(),
            _ => Self::config(e.to_string()),
        }
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        Self::config(e.to_string())
    }
}

impl From<PartitionError> for CliError {
    fn from(e: PartitionError) -> Self {
        Self::config(e.to_string())
    }
}
