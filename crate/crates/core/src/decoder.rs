//! Dual-space decoding: pairing encoded vectors against test functions,
//! and visualizable reconstruction fields.
//!
//! The decoded object is a functional; it is exposed operationally
//! through [`DualRepresentation::pair`], which computes
//! `sum_m coeff_m * c_m` with `c` the `H^s`-projection coefficients of
//! the test function.  That equals the action of the reconstructed
//! functional on the test function.

use thiserror::Error;

use crate::basis::{project_hs, BasisError, GramMatrix, ScalarField};
use crate::encoder::{Block, EncodedVector};

#[derive(Debug, Error)]
pub enum DecodeError {
    #[error("encoded vector has no '{}' block", .0.name())]
    BlockNotPresent(Block),
    #[error("full grids are only reconstructed for d <= 2; take a slice for d = 3")]
    GridDimensionUnsupported,
    #[error("grid resolution {0} is too small (need >= 2 per axis)")]
    ResolutionTooSmall(usize),
    #[error("slice axis {axis} out of range for dimension {d}")]
    SliceAxisOutOfRange { axis: usize, d: usize },
    #[error(transparent)]
    Basis(#[from] BasisError),
}

/// An encoded vector viewed through a Gram matrix of matching basis.
pub struct DualRepresentation<'a> {
    encoded: &'a EncodedVector,
    gram: &'a GramMatrix,
}

impl<'a> DualRepresentation<'a> {
    pub fn new(encoded: &'a EncodedVector, gram: &'a GramMatrix) -> Result<Self, DecodeError> {
        if encoded.spec() != gram.spec() {
            return Err(DecodeError::Basis(BasisError::SpecMismatch(
                "encoded vector and Gram matrix use different bases".into(),
            )));
        }
        Ok(DualRepresentation { encoded, gram })
    }

    pub fn encoded(&self) -> &EncodedVector {
        self.encoded
    }

    /// Action of the reconstructed functional for `block` on `phi`:
    /// exactly the coefficient vector dotted with the projection
    /// coefficients of `phi`.
    pub fn pair(&self, block: Block, phi: &dyn ScalarField) -> Result<f64, DecodeError> {
        let coeffs = self
            .encoded
            .block(block)
            .ok_or(DecodeError::BlockNotPresent(block))?;
        let c = project_hs(self.encoded.spec(), self.gram, phi)?;
        Ok(coeffs.iter().zip(&c).map(|(a, b)| a * b).sum())
    }

    /// `|pair(block, phi) - reference|` where `reference` is the action
    /// of the original manifold function on `phi`, computed independently.
    pub fn reconstruction_error(
        &self,
        block: Block,
        phi: &dyn ScalarField,
        reference: f64,
    ) -> Result<f64, DecodeError> {
        Ok((self.pair(block, phi)? - reference).abs())
    }
}

/// A reconstruction field sampled on a uniform grid over the unit box.
///
/// `values` is row-major with the last axis fastest: for d = 2,
/// `values[iy * resolution + ix]` sits at `(ix, iy) / (resolution - 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldGrid {
    pub dim: usize,
    pub resolution: usize,
    pub values: Vec<f64>,
}

impl FieldGrid {
    pub fn coordinate(&self, index: usize) -> f64 {
        index as f64 / (self.resolution - 1) as f64
    }
}

/// Samples `r(x) = sum_m coeff_m phi_m(x)` on a uniform grid.  Under the
/// orthonormal Legendre convention this is the `L^2` Riesz representative
/// of the decoded functional; plotting conventions use the raw
/// coefficients rather than dual-basis ones.
pub fn reconstruct_field(
    encoded: &EncodedVector,
    block: Block,
    resolution: usize,
) -> Result<FieldGrid, DecodeError> {
    reconstruct_with_coeffs(encoded, block, resolution, None)
}

/// [`reconstruct_field`] with coefficients premultiplied by the inverse
/// Gram matrix, for visualizing `H^s` duals with `s > 0`.
pub fn reconstruct_field_premultiplied(
    encoded: &EncodedVector,
    block: Block,
    resolution: usize,
    gram: &GramMatrix,
) -> Result<FieldGrid, DecodeError> {
    if gram.spec() != encoded.spec() {
        return Err(DecodeError::Basis(BasisError::SpecMismatch(
            "Gram matrix does not match the encoded basis".into(),
        )));
    }
    reconstruct_with_coeffs(encoded, block, resolution, Some(gram))
}

fn reconstruct_with_coeffs(
    encoded: &EncodedVector,
    block: Block,
    resolution: usize,
    premultiply: Option<&GramMatrix>,
) -> Result<FieldGrid, DecodeError> {
    let spec = encoded.spec();
    if spec.dimension() > 2 {
        return Err(DecodeError::GridDimensionUnsupported);
    }
    if resolution < 2 {
        return Err(DecodeError::ResolutionTooSmall(resolution));
    }
    let raw = encoded
        .block(block)
        .ok_or(DecodeError::BlockNotPresent(block))?;
    let coeffs = match premultiply {
        Some(gram) => gram.solve(raw)?,
        None => raw.to_vec(),
    };
    let mut basis_values = vec![0.0; spec.len()];
    let mut values = Vec::with_capacity(resolution.pow(spec.dimension() as u32));
    match spec.dimension() {
        1 => {
            for ix in 0..resolution {
                let x = [ix as f64 / (resolution - 1) as f64];
                spec.eval_all(&x, &mut basis_values)?;
                values.push(dot(&coeffs, &basis_values));
            }
        }
        2 => {
            for iy in 0..resolution {
                for ix in 0..resolution {
                    let x = [
                        ix as f64 / (resolution - 1) as f64,
                        iy as f64 / (resolution - 1) as f64,
                    ];
                    spec.eval_all(&x, &mut basis_values)?;
                    values.push(dot(&coeffs, &basis_values));
                }
            }
        }
        _ => unreachable!(),
    }
    Ok(FieldGrid {
        dim: spec.dimension(),
        resolution,
        values,
    })
}

/// Planar slice of a 3-d reconstruction: `axis` is held at `level` and
/// the remaining two axes are gridded.
pub fn reconstruct_slice(
    encoded: &EncodedVector,
    block: Block,
    resolution: usize,
    axis: usize,
    level: f64,
) -> Result<FieldGrid, DecodeError> {
    let spec = encoded.spec();
    if spec.dimension() != 3 {
        return Err(DecodeError::GridDimensionUnsupported);
    }
    if axis >= 3 {
        return Err(DecodeError::SliceAxisOutOfRange { axis, d: 3 });
    }
    if resolution < 2 {
        return Err(DecodeError::ResolutionTooSmall(resolution));
    }
    let coeffs = encoded
        .block(block)
        .ok_or(DecodeError::BlockNotPresent(block))?;
    let free: Vec<usize> = (0..3).filter(|&j| j != axis).collect();
    let mut basis_values = vec![0.0; spec.len()];
    let mut values = Vec::with_capacity(resolution * resolution);
    let mut x = [0.0; 3];
    x[axis] = level;
    for iy in 0..resolution {
        for ix in 0..resolution {
            x[free[0]] = ix as f64 / (resolution - 1) as f64;
            x[free[1]] = iy as f64 / (resolution - 1) as f64;
            spec.eval_all(&x, &mut basis_values)?;
            values.push(dot(coeffs, &basis_values));
        }
    }
    Ok(FieldGrid {
        dim: 2,
        resolution,
        values,
    })
}

/// Entrywise `log(max(1, value))`, the compression used when plotting
/// reconstruction fields whose values blow up near the manifold.
pub fn visual_transform(grid: &FieldGrid) -> FieldGrid {
    FieldGrid {
        dim: grid.dim,
        resolution: grid.resolution,
        values: grid.values.iter().map(|&v| v.max(1.0).ln()).collect(),
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
