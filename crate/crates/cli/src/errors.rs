//! Error-to-exit-code mapping: 3 for data/validation problems, 4 for
//! numerical failures.

use mfe_core::analysis::AnalysisError;
use mfe_core::basis::BasisError;
use mfe_core::decoder::DecodeError;
use mfe_core::encoder::EncodeError;
use mfe_core::geometry::GeometryError;
use mfe_core::io::IoError;
use mfe_core::neuralop::NetError;

pub const EXIT_DATA: i32 = 3;
pub const EXIT_NUMERICAL: i32 = 4;

pub struct CliError {
    pub message: String,
    pub code: i32,
}

impl CliError {
    pub fn data(message: impl Into<String>) -> Self {
        CliError {
            message: message.into(),
            code: EXIT_DATA,
        }
    }

    pub fn numerical(message: impl Into<String>) -> Self {
        CliError {
            message: message.into(),
            code: EXIT_NUMERICAL,
        }
    }
}

impl From<IoError> for CliError {
    fn from(e: IoError) -> Self {
        CliError::data(e.to_string())
    }
}

impl From<GeometryError> for CliError {
    fn from(e: GeometryError) -> Self {
        CliError::data(e.to_string())
    }
}

impl From<BasisError> for CliError {
    fn from(e: BasisError) -> Self {
        match e {
            BasisError::NotPositiveDefinite => CliError::numerical(e.to_string()),
            _ => CliError::data(e.to_string()),
        }
    }
}

impl From<EncodeError> for CliError {
    fn from(e: EncodeError) -> Self {
        match e {
            EncodeError::Basis(b) => b.into(),
            _ => CliError::data(e.to_string()),
        }
    }
}

impl From<DecodeError> for CliError {
    fn from(e: DecodeError) -> Self {
        match e {
            DecodeError::Basis(b) => b.into(),
            _ => CliError::data(e.to_string()),
        }
    }
}

impl From<AnalysisError> for CliError {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::InsufficientPoints(_) => CliError::numerical(e.to_string()),
            AnalysisError::Encode(inner) => inner.into(),
            AnalysisError::Basis(inner) => inner.into(),
            AnalysisError::Decode(inner) => inner.into(),
            AnalysisError::Geometry(inner) => inner.into(),
            _ => CliError::data(e.to_string()),
        }
    }
}

impl From<NetError> for CliError {
    fn from(e: NetError) -> Self {
        match e {
            NetError::Divergence { .. } => CliError::numerical(e.to_string()),
            NetError::Encode(inner) => inner.into(),
            _ => CliError::data(e.to_string()),
        }
    }
}
