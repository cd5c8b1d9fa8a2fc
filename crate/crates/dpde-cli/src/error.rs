//! Harness-level errors and their process exit codes.

use std::io;

use thiserror::Error;

use dpde::controls::ControlError;
use dpde::dynamics::SimError;
use dpde::equilibria::EquilibriumError;
use dpde::geometry::GeometryError;
use dpde::planner::PlanError;

#[derive(Debug, Error)]
pub enum HarnessError {
    /// Malformed line in a config or CSV file, anchored to the offending
    /// file and line number.
    #[error("{path}:{line}: {message}")]
    Config {
        path: String,
        line: usize,
        message: String,
    },
    /// A file-level problem without a single offending line, such as a
    /// missing required key.
    #[error("{path}: {message}")]
    ConfigFile { path: String, message: String },
    #[error("no preset or config file named '{0}'")]
    UnknownSource(String),
    #[error("no snapshot at t={t} in {path}")]
    MissingSnapshot { t: f64, path: String },
    #[error("bad argument: {0}")]
    InvalidArgument(String),
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: io::Error,
    },
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Plan(#[from] PlanError),
    #[error(transparent)]
    Equilibrium(#[from] EquilibriumError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Control(#[from] ControlError),
}

impl HarnessError {
    pub fn io(context: impl Into<String>, source: io::Error) -> Self {
        HarnessError::Io {
            context: context.into(),
            source,
        }
    }

    /// Process exit code: 2 for mistakes in configs or arguments that make
    /// the request unrunnable, 3 for failures of a well-formed run.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config { .. }
            | HarnessError::ConfigFile { .. }
            | HarnessError::UnknownSource(_)
            | HarnessError::InvalidArgument(_) => 2,
            HarnessError::Sim(SimError::InvalidConfig(_)) => 2,
            HarnessError::Sim(SimError::Geometry(GeometryError::GridTooCoarse(_))) => 2,
            HarnessError::Geometry(GeometryError::GridTooCoarse(_)) => 2,
            HarnessError::Plan(PlanError::InvalidPlan(_)) => 2,
            _ => 3,
        }
    }
}
