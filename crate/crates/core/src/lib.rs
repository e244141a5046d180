//! Spectral encoding of functions defined on simplicial manifolds.
//!
//! A *manifold function* is a pair `(M, f)` of a compact k-dimensional
//! simplicial manifold embedded in the unit box `[0,1]^d` and a
//! square-integrable function on it, given by per-vertex samples.  This
//! crate encodes such pairs into short real vectors by integrating a
//! tensor basis (shifted Legendre or real Fourier) against the manifold's
//! Hausdorff measure, and decodes them by pairing against Sobolev
//! projections of test functions.
//!
//! Subsystems:
//!
//! * [`basis`] — tensor basis construction, evaluation, derivatives,
//!   `H^s` Gram matrices and projections;
//! * [`geometry`] — simplicial manifolds, Hausdorff measure, quadrature;
//! * [`encoder`] — the encoding map in its plain, joint, measure-weighted
//!   and Monte Carlo forms;
//! * [`decoder`] — dual pairing and grid reconstruction;
//! * [`analysis`] — convergence-rate, consistency and Monte Carlo studies;
//! * [`neuralop`] — a small dense-network operator-learning stack
//!   (branch/trunk networks combined by Hadamard product) with an
//!   analytic 1-d Poisson data generator;
//! * [`io`] — file formats for meshes, encoded vectors, datasets,
//!   checkpoints, grids and images.

pub mod analysis;
pub mod basis;
pub mod decoder;
pub mod encoder;
pub mod gauss;
pub mod geometry;
pub mod io;
pub mod neuralop;

pub use basis::{BasisFamily, BasisSpec, GramMatrix, ScalarField};
pub use decoder::DualRepresentation;
pub use encoder::{Block, EncodedVector, JointManifoldFunction, Normalization, Provenance};
pub use geometry::{ManifoldFunction, QuadratureRule, SimplicialManifold};
pub use neuralop::{MioNetParams, MlpSpec, OperatorDataset};
