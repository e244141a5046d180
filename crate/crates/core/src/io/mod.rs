//! File formats: mesh documents, encoded-vector containers, datasets,
//! checkpoints, grid CSVs and PGM images.
//!
//! Headers are JSON (inspectable, order-stable); coefficient payloads
//! are raw little-endian `f64` guarded by a SHA-256 digest.  All writers
//! are deterministic: identical inputs produce identical bytes.

use thiserror::Error;

mod checkpoint;
mod dataset;
mod encoded;
mod grid;
mod mesh;
mod tables;

pub use checkpoint::{load_checkpoint, save_checkpoint, Checkpoint, CheckpointMeta};
pub use dataset::{load_dataset, save_dataset};
pub use encoded::{load_encoded, save_encoded};
pub use grid::{write_grid_csv, write_pgm};
pub use mesh::{
    load_manifold, load_point_cloud_csv, save_manifold, LoadedManifold, MANIFOLD_FORMAT_VERSION,
};
pub use tables::{read_rate_csv, write_consistency_csv, write_mc_csv, write_rate_csv, RateCsvRow};

use crate::basis::BasisError;
use crate::encoder::EncodeError;
use crate::geometry::GeometryError;

#[derive(Debug, Error)]
pub enum IoError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },
    #[error("unsupported format version {found} (expected {expected})")]
    UnsupportedVersion { found: u32, expected: u32 },
    #[error("payload digest mismatch; file is corrupt")]
    HashMismatch,
    #[error("payload truncated: expected {expected} bytes, found {got}")]
    TruncatedPayload { expected: usize, got: usize },
    #[error("mesh failed validation: {0}")]
    FatalValidation(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error(transparent)]
    Basis(#[from] BasisError),
}
