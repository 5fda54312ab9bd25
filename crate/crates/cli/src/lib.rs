//! Distance sweeps and single-point reports for the `cprabi` command.

pub mod report;
pub mod sweep;

use cprabi::{AtomicError, CouplingError, DynamicsError};
use thiserror::Error;

pub use report::{report_point, TimeGrid};
pub use sweep::{
    compute_point, csv_row, format_number, header, load_species_file, run_sweep, PointResult, Spacing, SweepConfig,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration: {0}")]
    Config(String),
    #[error("species data: {0}")]
    Data(AtomicError),
    #[error("numerical failure at Z = {z:e} m: {cause}")]
    Numerical { z: f64, cause: NumericalError },
}

impl From<AtomicError> for CliError {
    fn from(err: AtomicError) -> Self {
        CliError::Data(err)
    }
}

#[derive(Debug, Error)]
pub enum NumericalError {
    #[error(transparent)]
    Coupling(#[from] CouplingError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error("{0}")]
    Other(String),
}

impl CliError {
    pub fn numerical(z: f64, source: impl Into<NumericalError>) -> Self {
        CliError::Numerical {
            z,
            cause: source.into(),
        }
    }

    /// 2 configuration, 3 data, 4 numerical.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Data(_) => 3,
            CliError::Numerical { .. } => 4,
        }
    }
}
