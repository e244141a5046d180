//! Encoding of manifold functions into coefficient vectors.
//!
//! The plain encoder integrates the constant one and the function
//! against every basis member over the manifold.  The joint variant sums
//! measure-normalized contributions of parts of different dimensions;
//! the measured variant integrates against a discrete probability
//! measure; the point-cloud variant is its Monte Carlo form.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::basis::{BasisError, BasisFamily, BasisSpec};
use crate::geometry::{
    hausdorff_measure, quadrature_nodes_with, validate_manifold, GeometryError, ManifoldFunction,
    QuadratureOptions,
};

#[derive(Debug, Error)]
pub enum EncodeError {
    #[error("manifold lives in dimension {manifold}, basis in {basis}")]
    DimensionMismatch { manifold: usize, basis: usize },
    #[error("periodic basis requires a manifold away from the box boundary ({0} contact vertex(es))")]
    PeriodicBoundaryContact(usize),
    #[error("joint manifold function has no parts")]
    AllPartsEmpty,
    #[error("density masses must be non-negative and sum to 1 (sum deviates by {0:e})")]
    MassNormalization(f64),
    #[error("mass list has {got} entries, expected {expected}")]
    MassCountMismatch { got: usize, expected: usize },
    #[error("point cloud is empty")]
    EmptyCloud,
    #[error("point cloud has {points} points but {values} values")]
    CloudValueMismatch { points: usize, values: usize },
    #[error(transparent)]
    Basis(#[from] BasisError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Coefficient blocks an encoded vector may carry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Block {
    /// Integrals of the constant one (the manifold's own functional).
    Shape,
    /// Integrals of the basis against a discrete probability measure.
    Measure,
    /// Integrals of the function against the carried measure.
    Function,
}

impl Block {
    pub fn name(&self) -> &'static str {
        match self {
            Block::Shape => "shape",
            Block::Measure => "measure",
            Block::Function => "function",
        }
    }

    pub fn from_name(name: &str) -> Option<Block> {
        match name {
            "shape" => Some(Block::Shape),
            "measure" => Some(Block::Measure),
            "function" => Some(Block::Function),
            _ => None,
        }
    }
}

/// Whether per-part `1/H^k` factors were applied to the integrals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Normalization {
    Raw,
    MeasureNormalized,
}

/// How the coefficients were produced.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Provenance {
    /// Deterministic quadrature with the recorded per-axis degree.
    Quadrature { degree: usize },
    /// Weighted sums over discrete measure nodes.
    Measured { nodes: usize },
    /// Monte Carlo averages over a point cloud; the seed tags the cloud's
    /// sampling run for reproducibility.
    MonteCarlo { samples: usize, seed: u64 },
}

/// Output of an encoder: one or more length-kappa coefficient blocks
/// under a single basis, plus bookkeeping needed to interpret them.
#[derive(Debug, Clone, PartialEq)]
pub struct EncodedVector {
    spec: BasisSpec,
    normalization: Normalization,
    provenance: Provenance,
    blocks: Vec<(Block, Vec<f64>)>,
}

impl EncodedVector {
    pub fn new(
        spec: BasisSpec,
        normalization: Normalization,
        provenance: Provenance,
        mut blocks: Vec<(Block, Vec<f64>)>,
    ) -> Result<Self, EncodeError> {
        blocks.sort_by_key(|(b, _)| *b);
        for (block, coeffs) in &blocks {
            if coeffs.len() != spec.len() {
                return Err(BasisError::SpecMismatch(format!(
                    "block {} has {} coefficients, basis has {}",
                    block.name(),
                    coeffs.len(),
                    spec.len()
                ))
                .into());
            }
            if coeffs.iter().any(|c| !c.is_finite()) {
                return Err(BasisError::SpecMismatch(format!(
                    "block {} contains non-finite coefficients",
                    block.name()
                ))
                .into());
            }
        }
        Ok(EncodedVector {
            spec,
            normalization,
            provenance,
            blocks,
        })
    }

    pub fn spec(&self) -> &BasisSpec {
        &self.spec
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn blocks(&self) -> impl Iterator<Item = (Block, &[f64])> {
        self.blocks.iter().map(|(b, c)| (*b, c.as_slice()))
    }

    pub fn block(&self, block: Block) -> Option<&[f64]> {
        self.blocks
            .iter()
            .find(|(b, _)| *b == block)
            .map(|(_, c)| c.as_slice())
    }
}

/// Default per-axis quadrature degree for encoding with a given basis:
/// the integrand (basis times piecewise-linear data) is polynomial of
/// per-axis degree at most `n` on each simplex.
pub fn default_degree(spec: &BasisSpec) -> usize {
    spec.order() + 2
}

/// Quadrature request for a per-axis degree: a tensor-product integrand
/// of per-axis degree `p` restricted to a simplex has total degree `d*p`.
/// Trigonometric integrands are not polynomial, so the Fourier family
/// gets extra nodes on top of the cell-size cap below.
fn rule_degree(spec: &BasisSpec, per_axis: usize) -> usize {
    match spec.family() {
        BasisFamily::LegendreTensor => spec.dimension() * per_axis,
        BasisFamily::FourierTensor => spec.dimension() * (per_axis + 4),
    }
}

fn rule_options(spec: &BasisSpec) -> QuadratureOptions {
    match spec.family() {
        BasisFamily::LegendreTensor => QuadratureOptions::default(),
        // Cap cells at an eighth of the shortest wavelength so the
        // Gauss rules resolve the oscillation to full precision.
        BasisFamily::FourierTensor => QuadratureOptions {
            max_diameter: if spec.order() > 1 {
                Some(0.125 / spec.max_axis_degree() as f64)
            } else {
                None
            },
        },
    }
}

fn check_compatible(mf: &ManifoldFunction, spec: &BasisSpec) -> Result<(), EncodeError> {
    if mf.manifold.ambient_dim() != spec.dimension() {
        return Err(EncodeError::DimensionMismatch {
            manifold: mf.manifold.ambient_dim(),
            basis: spec.dimension(),
        });
    }
    if spec.family() == BasisFamily::FourierTensor {
        let report = validate_manifold(&mf.manifold);
        if !report.boundary_contact.is_empty() {
            return Err(EncodeError::PeriodicBoundaryContact(
                report.boundary_contact.len(),
            ));
        }
    }
    Ok(())
}

/// Quadrature accumulation of shape and function integrals over one
/// manifold function, scaled by `factor`.
fn accumulate(
    mf: &ManifoldFunction,
    spec: &BasisSpec,
    per_axis_degree: usize,
    factor: f64,
    shape: &mut [f64],
    function: &mut [f64],
) -> Result<(), EncodeError> {
    let rule = quadrature_nodes_with(
        &mf.manifold,
        rule_degree(spec, per_axis_degree),
        rule_options(spec),
    )?;
    let mut values = vec![0.0; spec.len()];
    for i in 0..rule.len() {
        spec.eval_all(rule.point(i), &mut values)?;
        let w = factor * rule.weight(i);
        let wf = w * mf.value_at(rule.simplex(i), rule.bary(i));
        for m in 0..values.len() {
            shape[m] += w * values[m];
            function[m] += wf * values[m];
        }
    }
    Ok(())
}

/// Plain encoder: `shape_m = int_M phi_m dH^k`,
/// `function_m = int_M f phi_m dH^k`, no normalization.
pub fn encode(
    mf: &ManifoldFunction,
    spec: &BasisSpec,
    degree: Option<usize>,
) -> Result<EncodedVector, EncodeError> {
    check_compatible(mf, spec)?;
    let per_axis = degree.unwrap_or_else(|| default_degree(spec));
    let k = spec.len();
    let mut shape = vec![0.0; k];
    let mut function = vec![0.0; k];
    accumulate(mf, spec, per_axis, 1.0, &mut shape, &mut function)?;
    EncodedVector::new(
        spec.clone(),
        Normalization::Raw,
        Provenance::Quadrature { degree: per_axis },
        vec![(Block::Shape, shape), (Block::Function, function)],
    )
}

/// A tuple of optional manifold functions, one slot per intrinsic
/// dimension `0..=d`, all sharing the ambient dimension.
#[derive(Debug, Clone)]
pub struct JointManifoldFunction {
    d: usize,
    parts: Vec<Option<ManifoldFunction>>,
}

impl JointManifoldFunction {
    pub fn new(d: usize) -> Self {
        JointManifoldFunction {
            d,
            parts: vec![None; d + 1],
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.d
    }

    /// Installs the part of intrinsic dimension `mf.manifold.intrinsic_dim()`.
    pub fn with_part(mut self, mf: ManifoldFunction) -> Result<Self, EncodeError> {
        if mf.manifold.ambient_dim() != self.d {
            return Err(EncodeError::DimensionMismatch {
                manifold: mf.manifold.ambient_dim(),
                basis: self.d,
            });
        }
        let k = mf.manifold.intrinsic_dim();
        self.parts[k] = Some(mf);
        Ok(self)
    }

    pub fn parts(&self) -> &[Option<ManifoldFunction>] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.iter().all(|p| p.is_none())
    }
}

/// Joint encoder over parts of different dimensions: each present part
/// contributes its integrals scaled by `1/H^k(M_k)`.
pub fn encode_joint(
    jmf: &JointManifoldFunction,
    spec: &BasisSpec,
    degree: Option<usize>,
) -> Result<EncodedVector, EncodeError> {
    if jmf.is_empty() {
        return Err(EncodeError::AllPartsEmpty);
    }
    if jmf.ambient_dim() != spec.dimension() {
        return Err(EncodeError::DimensionMismatch {
            manifold: jmf.ambient_dim(),
            basis: spec.dimension(),
        });
    }
    let per_axis = degree.unwrap_or_else(|| default_degree(spec));
    let k = spec.len();
    let mut shape = vec![0.0; k];
    let mut function = vec![0.0; k];
    for part in jmf.parts().iter().flatten() {
        check_compatible(part, spec)?;
        let measure = hausdorff_measure(&part.manifold)?;
        accumulate(part, spec, per_axis, 1.0 / measure, &mut shape, &mut function)?;
    }
    EncodedVector::new(
        spec.clone(),
        Normalization::MeasureNormalized,
        Provenance::Quadrature { degree: per_axis },
        vec![(Block::Shape, shape), (Block::Function, function)],
    )
}

const MASS_SUM_TOL: f64 = 1e-9;

fn check_masses(masses: &[f64], expected: usize) -> Result<(), EncodeError> {
    if masses.len() != expected {
        return Err(EncodeError::MassCountMismatch {
            got: masses.len(),
            expected,
        });
    }
    if masses.iter().any(|&m| m < 0.0 || !m.is_finite()) {
        return Err(EncodeError::MassNormalization(f64::NAN));
    }
    let sum: f64 = masses.iter().sum();
    if (sum - 1.0).abs() > MASS_SUM_TOL {
        return Err(EncodeError::MassNormalization(sum - 1.0));
    }
    Ok(())
}

/// Measure-weighted encoder: the manifold carries a discrete probability
/// measure with the given per-vertex masses.  Blocks:
/// shape` = (1/H^k) int phi dH^k` (quadrature),
/// `measure_m = sum_i w_i phi_m(v_i)`,
/// `function_m = sum_i w_i f(v_i) phi_m(v_i)`.
pub fn encode_measured(
    mf: &ManifoldFunction,
    masses: &[f64],
    spec: &BasisSpec,
    degree: Option<usize>,
) -> Result<EncodedVector, EncodeError> {
    check_masses(masses, mf.manifold.vertex_count())?;
    let points = mf.manifold.vertices_flat().to_vec();
    encode_measured_at(mf, &points, &mf.values, masses, spec, degree)
}

/// [`encode_measured`] with measure nodes decoupled from the mesh
/// vertices (per-sample masses).
pub fn encode_measured_samples(
    mf: &ManifoldFunction,
    points: &[f64],
    values: &[f64],
    masses: &[f64],
    spec: &BasisSpec,
    degree: Option<usize>,
) -> Result<EncodedVector, EncodeError> {
    let count = points.len() / spec.dimension();
    if values.len() != count {
        return Err(EncodeError::CloudValueMismatch {
            points: count,
            values: values.len(),
        });
    }
    check_masses(masses, count)?;
    encode_measured_at(mf, points, values, masses, spec, degree)
}

fn encode_measured_at(
    mf: &ManifoldFunction,
    points: &[f64],
    values: &[f64],
    masses: &[f64],
    spec: &BasisSpec,
    degree: Option<usize>,
) -> Result<EncodedVector, EncodeError> {
    check_compatible(mf, spec)?;
    let per_axis = degree.unwrap_or_else(|| default_degree(spec));
    let k = spec.len();
    let total = hausdorff_measure(&mf.manifold)?;
    let mut shape = vec![0.0; k];
    let mut discard = vec![0.0; k];
    accumulate(mf, spec, per_axis, 1.0 / total, &mut shape, &mut discard)?;
    let mut measure = vec![0.0; k];
    let mut function = vec![0.0; k];
    let d = spec.dimension();
    let mut basis_values = vec![0.0; k];
    for i in 0..masses.len() {
        spec.eval_all(&points[i * d..(i + 1) * d], &mut basis_values)?;
        let w = masses[i];
        let wf = w * values[i];
        for m in 0..k {
            measure[m] += w * basis_values[m];
            function[m] += wf * basis_values[m];
        }
    }
    EncodedVector::new(
        spec.clone(),
        Normalization::MeasureNormalized,
        Provenance::Measured {
            nodes: masses.len(),
        },
        vec![
            (Block::Shape, shape),
            (Block::Measure, measure),
            (Block::Function, function),
        ],
    )
}

/// Monte Carlo encoder over a bare point cloud: plain averages
/// `measure_m = (1/N) sum_i phi_m(x_i)` and
/// `function_m = (1/N) sum_i f(x_i) phi_m(x_i)`.
///
/// No shape block is produced: estimating the Hausdorff measure from a
/// raw cloud is out of scope, and its absence is visible in the block
/// list and the Monte Carlo provenance.
pub fn encode_pointcloud(
    points: &[f64],
    values: &[f64],
    spec: &BasisSpec,
    seed: u64,
) -> Result<EncodedVector, EncodeError> {
    let d = spec.dimension();
    if points.is_empty() {
        return Err(EncodeError::EmptyCloud);
    }
    let count = points.len() / d;
    if values.len() != count {
        return Err(EncodeError::CloudValueMismatch {
            points: count,
            values: values.len(),
        });
    }
    let k = spec.len();
    let mut measure = vec![0.0; k];
    let mut function = vec![0.0; k];
    let mut basis_values = vec![0.0; k];
    for i in 0..count {
        spec.eval_all(&points[i * d..(i + 1) * d], &mut basis_values)?;
        for m in 0..k {
            measure[m] += basis_values[m];
            function[m] += values[i] * basis_values[m];
        }
    }
    let inv = 1.0 / count as f64;
    for m in 0..k {
        measure[m] *= inv;
        function[m] *= inv;
    }
    EncodedVector::new(
        spec.clone(),
        Normalization::MeasureNormalized,
        Provenance::MonteCarlo {
            samples: count,
            seed,
        },
        vec![(Block::Measure, measure), (Block::Function, function)],
    )
}
