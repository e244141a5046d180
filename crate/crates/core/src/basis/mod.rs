//! Tensor bases on the unit box and their Sobolev projections.

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub mod fourier;
mod gram;
pub mod legendre;

pub use gram::{gram_hs, gram_hs_dense_quadrature, project_hs, projection_nodes_per_axis, GramMatrix};

/// Highest Sobolev order for which Gram matrices are assembled.
pub const MAX_SOBOLEV_ORDER: usize = 3;

/// Highest supported ambient dimension.
pub const MAX_DIMENSION: usize = 3;

/// Slack allowed when checking that a point lies in `[0,1]^d`.
pub const DOMAIN_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum BasisError {
    #[error("ambient dimension {0} is unsupported (must be 1..={MAX_DIMENSION})")]
    UnsupportedDimension(usize),
    #[error("basis order {0} is invalid (must be >= 1)")]
    InvalidOrder(usize),
    #[error("flat index {index} out of range for basis of size {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("coordinate {value} on axis {axis} lies outside [0,1]")]
    PointOutOfDomain { axis: usize, value: f64 },
    #[error("Sobolev order {0} is unsupported (must be <= {MAX_SOBOLEV_ORDER})")]
    UnsupportedSobolevOrder(usize),
    #[error("derivative multi-order has {got} components, expected {expected}")]
    DerivativeOrderMismatch { got: usize, expected: usize },
    #[error("Gram matrix is not symmetric positive definite; assembly is inconsistent")]
    NotPositiveDefinite,
    #[error("basis metadata mismatch: {0}")]
    SpecMismatch(String),
}

/// Basis family used along every axis of the tensor product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BasisFamily {
    /// Shifted Legendre polynomials, orthonormal in `L^2([0,1]^d)`.
    LegendreTensor,
    /// Real sine/cosine pairs, orthonormal in `L^2` of the torus.
    FourierTensor,
}

impl BasisFamily {
    pub fn name(&self) -> &'static str {
        match self {
            BasisFamily::LegendreTensor => "legendre",
            BasisFamily::FourierTensor => "fourier",
        }
    }
}

/// A tensor basis of per-axis order `n` in ambient dimension `d`.
///
/// Flat indices enumerate multi-indices `(i_1, ..., i_d)` in
/// lexicographic order with `i_1` most significant; each `i_j` ranges
/// over `0..n` for Legendre and `0..2n-1` for Fourier.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisSpec {
    family: BasisFamily,
    n: usize,
    d: usize,
}

impl BasisSpec {
    pub fn new(family: BasisFamily, n: usize, d: usize) -> Result<Self, BasisError> {
        if n < 1 {
            return Err(BasisError::InvalidOrder(n));
        }
        if d < 1 || d > MAX_DIMENSION {
            return Err(BasisError::UnsupportedDimension(d));
        }
        Ok(BasisSpec { family, n, d })
    }

    pub fn family(&self) -> BasisFamily {
        self.family
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn dimension(&self) -> usize {
        self.d
    }

    /// Number of 1-d functions per axis.
    pub fn axis_len(&self) -> usize {
        match self.family {
            BasisFamily::LegendreTensor => self.n,
            BasisFamily::FourierTensor => 2 * self.n - 1,
        }
    }

    /// Total number of basis functions `kappa`.
    pub fn len(&self) -> usize {
        self.axis_len().pow(self.d as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Largest per-axis polynomial degree (Legendre) or frequency (Fourier).
    pub fn max_axis_degree(&self) -> usize {
        self.n - 1
    }

    /// Smallest integer Sobolev order strictly above `d/2`.
    pub fn default_sobolev_order(&self) -> usize {
        self.d / 2 + 1
    }

    /// Multi-index of a flat index.
    pub fn multi_index(&self, m: usize) -> Result<Vec<usize>, BasisError> {
        if m >= self.len() {
            return Err(BasisError::IndexOutOfRange {
                index: m,
                len: self.len(),
            });
        }
        let a = self.axis_len();
        let mut idx = vec![0; self.d];
        let mut rest = m;
        for j in (0..self.d).rev() {
            idx[j] = rest % a;
            rest /= a;
        }
        Ok(idx)
    }

    /// Flat index of a multi-index.
    pub fn flat_index(&self, idx: &[usize]) -> Result<usize, BasisError> {
        if idx.len() != self.d {
            return Err(BasisError::DerivativeOrderMismatch {
                got: idx.len(),
                expected: self.d,
            });
        }
        let a = self.axis_len();
        let mut m = 0;
        for &i in idx {
            if i >= a {
                return Err(BasisError::IndexOutOfRange { index: i, len: a });
            }
            m = m * a + i;
        }
        Ok(m)
    }

    fn check_point(&self, x: &[f64]) -> Result<(), BasisError> {
        if x.len() != self.d {
            return Err(BasisError::DerivativeOrderMismatch {
                got: x.len(),
                expected: self.d,
            });
        }
        for (axis, &v) in x.iter().enumerate() {
            if !(-DOMAIN_TOL..=1.0 + DOMAIN_TOL).contains(&v) {
                return Err(BasisError::PointOutOfDomain { axis, value: v });
            }
        }
        Ok(())
    }

    fn axis_values(&self, q: usize, x: f64, out: &mut [f64]) {
        match self.family {
            BasisFamily::LegendreTensor => legendre::derivatives(self.n, q, x, out),
            BasisFamily::FourierTensor => fourier::derivatives(self.n, q, x, out),
        }
    }

    /// Value of basis function `m` at `x`.
    pub fn eval(&self, m: usize, x: &[f64]) -> Result<f64, BasisError> {
        self.eval_deriv(m, x, &vec![0; self.d])
    }

    /// Mixed partial derivative `d^alpha` of basis function `m` at `x`.
    pub fn eval_deriv(&self, m: usize, x: &[f64], alpha: &[usize]) -> Result<f64, BasisError> {
        self.check_point(x)?;
        if alpha.len() != self.d {
            return Err(BasisError::DerivativeOrderMismatch {
                got: alpha.len(),
                expected: self.d,
            });
        }
        let idx = self.multi_index(m)?;
        let a = self.axis_len();
        let mut buf = vec![0.0; a];
        let mut prod = 1.0;
        for j in 0..self.d {
            self.axis_values(alpha[j], x[j], &mut buf);
            prod *= buf[idx[j]];
        }
        Ok(prod)
    }

    /// Values of every basis function at `x`, written into `out` in flat
    /// index order.  One recurrence pass per axis, then a tensor product.
    pub fn eval_all(&self, x: &[f64], out: &mut [f64]) -> Result<(), BasisError> {
        self.eval_all_deriv(x, &vec![0; self.d], out)
    }

    /// `d^alpha` of every basis function at `x`.
    pub fn eval_all_deriv(
        &self,
        x: &[f64],
        alpha: &[usize],
        out: &mut [f64],
    ) -> Result<(), BasisError> {
        self.check_point(x)?;
        if alpha.len() != self.d {
            return Err(BasisError::DerivativeOrderMismatch {
                got: alpha.len(),
                expected: self.d,
            });
        }
        let a = self.axis_len();
        debug_assert!(out.len() >= self.len());
        let mut tables = vec![0.0; a * self.d];
        for j in 0..self.d {
            self.axis_values(alpha[j], x[j], &mut tables[j * a..(j + 1) * a]);
        }
        match self.d {
            1 => out[..a].copy_from_slice(&tables[..a]),
            2 => {
                let (t1, t2) = tables.split_at(a);
                let mut m = 0;
                for &v1 in t1.iter() {
                    for &v2 in t2[..a].iter() {
                        out[m] = v1 * v2;
                        m += 1;
                    }
                }
            }
            3 => {
                let (t1, rest) = tables.split_at(a);
                let (t2, t3) = rest.split_at(a);
                let mut m = 0;
                for &v1 in t1.iter() {
                    for &v2 in t2.iter() {
                        let v12 = v1 * v2;
                        for &v3 in t3[..a].iter() {
                            out[m] = v12 * v3;
                            m += 1;
                        }
                    }
                }
            }
            _ => unreachable!("dimension checked at construction"),
        }
        Ok(())
    }

    /// Supremum of `|phi_m|` over the unit box, in closed form.
    pub fn sup_norm(&self, m: usize) -> Result<f64, BasisError> {
        let idx = self.multi_index(m)?;
        let mut prod = 1.0;
        for &i in &idx {
            prod *= match self.family {
                // |P_i| peaks at 1 on the endpoints.
                BasisFamily::LegendreTensor => ((2 * i + 1) as f64).sqrt(),
                BasisFamily::FourierTensor => {
                    if i == 0 {
                        1.0
                    } else {
                        std::f64::consts::SQRT_2
                    }
                }
            };
        }
        Ok(prod)
    }
}

/// A deterministic scalar-valued function on the unit box.
///
/// Implementations may supply analytic mixed partials; when `deriv`
/// returns `None`, callers that need derivatives fall back to central
/// finite differences (see [`deriv_or_fd`]).
pub trait ScalarField: Sync {
    fn eval(&self, x: &[f64]) -> f64;

    /// Analytic mixed partial `d^alpha`, if available.
    fn deriv(&self, _x: &[f64], _alpha: &[usize]) -> Option<f64> {
        None
    }
}

/// Wraps a closure as a derivative-free [`ScalarField`].
pub struct FnField<F: Fn(&[f64]) -> f64 + Sync>(pub F);

impl<F: Fn(&[f64]) -> f64 + Sync> ScalarField for FnField<F> {
    fn eval(&self, x: &[f64]) -> f64 {
        self.0(x)
    }
}

/// Step used by the finite-difference fallback for missing derivatives.
pub const FD_STEP: f64 = 1e-5;

/// `d^alpha f(x)`, analytic when the field provides it, otherwise by
/// nested central differences of width [`FD_STEP`] (with the matching
/// accuracy loss for orders above one).
pub fn deriv_or_fd(field: &dyn ScalarField, x: &[f64], alpha: &[usize]) -> f64 {
    if alpha.iter().all(|&a| a == 0) {
        return field.eval(x);
    }
    if let Some(v) = field.deriv(x, alpha) {
        return v;
    }
    fd_deriv(field, x, alpha)
}

fn fd_deriv(field: &dyn ScalarField, x: &[f64], alpha: &[usize]) -> f64 {
    match alpha.iter().position(|&a| a > 0) {
        None => field.eval(x),
        Some(j) => {
            let mut lower = alpha.to_vec();
            lower[j] -= 1;
            let mut xp = x.to_vec();
            let mut xm = x.to_vec();
            xp[j] += FD_STEP;
            xm[j] -= FD_STEP;
            (fd_deriv(field, &xp, &lower) - fd_deriv(field, &xm, &lower)) / (2.0 * FD_STEP)
        }
    }
}

/// All derivative multi-orders `alpha` with `|alpha| <= s`, in a fixed
/// lexicographic order.
pub fn multi_orders(d: usize, s: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0usize; d];
    loop {
        if cur.iter().sum::<usize>() <= s {
            out.push(cur.clone());
        }
        // Odometer over 0..=s per component.
        let mut j = d;
        loop {
            if j == 0 {
                return out;
            }
            j -= 1;
            if cur[j] < s {
                cur[j] += 1;
                break;
            }
            cur[j] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kappa_counts() {
        let spec = BasisSpec::new(BasisFamily::LegendreTensor, 1, 2).unwrap();
        assert_eq!(spec.len(), 1);
        let spec = BasisSpec::new(BasisFamily::LegendreTensor, 12, 3).unwrap();
        assert_eq!(spec.len(), 1728);
        let spec = BasisSpec::new(BasisFamily::FourierTensor, 3, 1).unwrap();
        assert_eq!(spec.len(), 5);
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(
            BasisSpec::new(BasisFamily::LegendreTensor, 0, 2),
            Err(BasisError::InvalidOrder(0))
        ));
        assert!(matches!(
            BasisSpec::new(BasisFamily::LegendreTensor, 3, 4),
            Err(BasisError::UnsupportedDimension(4))
        ));
    }

    #[test]
    fn index_round_trip() {
        for family in [BasisFamily::LegendreTensor, BasisFamily::FourierTensor] {
            let spec = BasisSpec::new(family, 3, 3).unwrap();
            for m in 0..spec.len() {
                let idx = spec.multi_index(m).unwrap();
                assert_eq!(spec.flat_index(&idx).unwrap(), m);
            }
        }
    }

    #[test]
    fn lexicographic_order() {
        let spec = BasisSpec::new(BasisFamily::LegendreTensor, 3, 2).unwrap();
        assert_eq!(spec.multi_index(0).unwrap(), vec![0, 0]);
        assert_eq!(spec.multi_index(1).unwrap(), vec![0, 1]);
        assert_eq!(spec.multi_index(3).unwrap(), vec![1, 0]);
    }

    #[test]
    fn constant_mode_is_one() {
        for family in [BasisFamily::LegendreTensor, BasisFamily::FourierTensor] {
            let spec = BasisSpec::new(family, 4, 2).unwrap();
            for &x in &[[0.1, 0.9], [0.5, 0.5], [1.0, 0.0]] {
                assert!((spec.eval(0, &x).unwrap() - 1.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn linear_mode_values() {
        let spec = BasisSpec::new(BasisFamily::LegendreTensor, 2, 1).unwrap();
        // Odd about the midpoint.
        assert!(spec.eval(1, &[0.5]).unwrap().abs() < 1e-14);
        // Normalization: integral of (2x-1)^2 over [0,1] is 1/3.
        assert!((spec.eval(1, &[1.0]).unwrap() - 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn deriv_matches_eval_at_order_zero() {
        let spec = BasisSpec::new(BasisFamily::LegendreTensor, 4, 2).unwrap();
        let x = [0.3, 0.8];
        for m in 0..spec.len() {
            let v = spec.eval(m, &x).unwrap();
            let d = spec.eval_deriv(m, &x, &[0, 0]).unwrap();
            assert_eq!(v, d);
        }
    }

    #[test]
    fn derivative_edge_cases() {
        let spec = BasisSpec::new(BasisFamily::LegendreTensor, 3, 1).unwrap();
        // Derivative of the constant vanishes everywhere.
        for &x in &[0.0, 0.4, 1.0] {
            assert_eq!(spec.eval_deriv(0, &[x], &[1]).unwrap(), 0.0);
        }
        // l_2 is even about the midpoint, so its derivative is odd.
        assert!(spec.eval_deriv(2, &[0.5], &[1]).unwrap().abs() < 1e-13);
    }

    #[test]
    fn eval_all_agrees_with_eval() {
        for family in [BasisFamily::LegendreTensor, BasisFamily::FourierTensor] {
            for d in 1..=3 {
                let spec = BasisSpec::new(family, 3, d).unwrap();
                let x = vec![0.37; d];
                let mut all = vec![0.0; spec.len()];
                spec.eval_all(&x, &mut all).unwrap();
                for m in 0..spec.len() {
                    assert_eq!(all[m], spec.eval(m, &x).unwrap(), "family {family:?} d={d} m={m}");
                }
            }
        }
    }

    #[test]
    fn out_of_domain_rejected() {
        let spec = BasisSpec::new(BasisFamily::LegendreTensor, 2, 2).unwrap();
        assert!(matches!(
            spec.eval(0, &[1.2, 0.5]),
            Err(BasisError::PointOutOfDomain { axis: 0, .. })
        ));
        assert!(matches!(
            spec.eval(4, &[0.5, 0.5]),
            Err(BasisError::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn finite_difference_consistency_at_random_points() {
        // First derivatives of eval match central differences of eval.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for family in [BasisFamily::LegendreTensor, BasisFamily::FourierTensor] {
            let spec = BasisSpec::new(family, 5, 2).unwrap();
            for _ in 0..100 {
                let x = [rng.gen_range(0.05..0.95), rng.gen_range(0.05..0.95)];
                let m = rng.gen_range(0..spec.len());
                for axis in 0..2 {
                    let mut alpha = [0usize; 2];
                    alpha[axis] = 1;
                    let d = spec.eval_deriv(m, &x, &alpha).unwrap();
                    let h = 1e-6;
                    let mut xp = x;
                    let mut xm = x;
                    xp[axis] += h;
                    xm[axis] -= h;
                    let fd =
                        (spec.eval(m, &xp).unwrap() - spec.eval(m, &xm).unwrap()) / (2.0 * h);
                    let scale = d.abs().max(1.0);
                    assert!((d - fd).abs() / scale < 1e-6, "{family:?} m={m} {d} vs {fd}");
                }
            }
        }
    }

    #[test]
    fn multi_order_enumeration() {
        let orders = multi_orders(2, 2);
        assert_eq!(orders.len(), 6);
        assert!(orders.contains(&vec![1, 1]));
        assert_eq!(multi_orders(3, 0), vec![vec![0, 0, 0]]);
    }

    #[test]
    fn sup_norm_closed_form() {
        let spec = BasisSpec::new(BasisFamily::LegendreTensor, 4, 2).unwrap();
        let m = spec.flat_index(&[3, 1]).unwrap();
        assert!((spec.sup_norm(m).unwrap() - (7f64 * 3.0).sqrt()).abs() < 1e-14);
    }
}
