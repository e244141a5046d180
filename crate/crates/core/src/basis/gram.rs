//! `H^s` Gram matrices and orthogonal projections onto the basis span.

use nalgebra::{DMatrix, DVector, Dyn};

use super::{
    deriv_or_fd, fourier, multi_orders, BasisError, BasisFamily, BasisSpec, ScalarField,
    MAX_SOBOLEV_ORDER,
};
use crate::gauss::gauss_legendre_unit;

/// Gram matrix `G_{ml} = <phi_m, phi_l>_{H^s}` of a basis, together with
/// a factorization for repeated solves.
///
/// The inner product is the full lower-order sum
/// `sum_{|alpha| <= s} <d^alpha u, d^alpha v>_{L^2}`.
pub struct GramMatrix {
    spec: BasisSpec,
    s: usize,
    data: GramData,
}

enum GramData {
    Dense {
        matrix: DMatrix<f64>,
        chol: nalgebra::linalg::Cholesky<f64, Dyn>,
    },
    Diagonal(Vec<f64>),
}

impl GramMatrix {
    pub fn spec(&self) -> &BasisSpec {
        &self.spec
    }

    pub fn sobolev_order(&self) -> usize {
        self.s
    }

    pub fn is_diagonal(&self) -> bool {
        matches!(self.data, GramData::Diagonal(_))
    }

    pub fn entry(&self, m: usize, l: usize) -> f64 {
        match &self.data {
            GramData::Dense { matrix, .. } => matrix[(m, l)],
            GramData::Diagonal(diag) => {
                if m == l {
                    diag[m]
                } else {
                    0.0
                }
            }
        }
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let k = self.spec.len();
        match &self.data {
            GramData::Dense { matrix, .. } => matrix.clone(),
            GramData::Diagonal(diag) => DMatrix::from_fn(k, k, |m, l| {
                if m == l {
                    diag[m]
                } else {
                    0.0
                }
            }),
        }
    }

    /// Solves `G c = b`.
    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>, BasisError> {
        if b.len() != self.spec.len() {
            return Err(BasisError::SpecMismatch(format!(
                "right-hand side has length {}, basis has {}",
                b.len(),
                self.spec.len()
            )));
        }
        match &self.data {
            GramData::Dense { chol, .. } => {
                let rhs = DVector::from_column_slice(b);
                Ok(chol.solve(&rhs).as_slice().to_vec())
            }
            GramData::Diagonal(diag) => {
                Ok(b.iter().zip(diag).map(|(bi, di)| bi / di).collect())
            }
        }
    }
}

/// Assembles the `H^s` Gram matrix of a basis.
///
/// Legendre: the inner product factorizes per axis, so 1-d derivative
/// Grams are built by Gauss quadrature (exact for these integrands) and
/// combined as tensor products over every multi-order.  Fourier: the
/// basis diagonalizes every `H^s` inner product; the diagonal entry of a
/// mode with frequencies `k_j` is `sum_{|alpha|<=s} prod_j (2 pi k_j)^(2 alpha_j)`.
pub fn gram_hs(spec: &BasisSpec, s: usize) -> Result<GramMatrix, BasisError> {
    if s > MAX_SOBOLEV_ORDER {
        return Err(BasisError::UnsupportedSobolevOrder(s));
    }
    match spec.family() {
        BasisFamily::FourierTensor => {
            let mut diag = vec![0.0; spec.len()];
            let orders = multi_orders(spec.dimension(), s);
            for (m, entry) in diag.iter_mut().enumerate() {
                let idx = spec.multi_index(m)?;
                let mut sum = 0.0;
                for alpha in &orders {
                    let mut prod = 1.0;
                    for (j, &a) in alpha.iter().enumerate() {
                        let omega = 2.0 * std::f64::consts::PI * fourier::frequency(idx[j]) as f64;
                        prod *= omega.powi(2 * a as i32);
                    }
                    sum += prod;
                }
                *entry = sum;
            }
            Ok(GramMatrix {
                spec: spec.clone(),
                s,
                data: GramData::Diagonal(diag),
            })
        }
        BasisFamily::LegendreTensor => {
            let n = spec.order();
            let d = spec.dimension();
            let axis_grams = legendre_axis_grams(n, s);
            let orders = multi_orders(d, s);
            let k = spec.len();
            let mut g = DMatrix::<f64>::zeros(k, k);
            let indices: Vec<Vec<usize>> = (0..k).map(|m| spec.multi_index(m).unwrap()).collect();
            for m in 0..k {
                for l in m..k {
                    let mut sum = 0.0;
                    for alpha in &orders {
                        let mut prod = 1.0;
                        for j in 0..d {
                            prod *= axis_grams[alpha[j]][(indices[m][j], indices[l][j])];
                        }
                        sum += prod;
                    }
                    g[(m, l)] = sum;
                    g[(l, m)] = sum;
                }
            }
            let chol = nalgebra::linalg::Cholesky::new(g.clone())
                .ok_or(BasisError::NotPositiveDefinite)?;
            Ok(GramMatrix {
                spec: spec.clone(),
                s,
                data: GramData::Dense { matrix: g, chol },
            })
        }
    }
}

/// 1-d matrices `D^(q)_{ij} = int_0^1 l_i^(q) l_j^(q) dx` for `q = 0..=s`.
fn legendre_axis_grams(n: usize, s: usize) -> Vec<DMatrix<f64>> {
    // Integrands have degree at most 2n-2; this rule is exact with margin.
    let (nodes, weights) = gauss_legendre_unit(n + s + 2);
    let mut grams = Vec::with_capacity(s + 1);
    let mut buf = vec![0.0; n];
    for q in 0..=s {
        let mut table = vec![vec![0.0; n]; nodes.len()];
        for (t, &x) in nodes.iter().enumerate() {
            super::legendre::derivatives(n, q, x, &mut buf);
            table[t].copy_from_slice(&buf);
        }
        let mut d = DMatrix::<f64>::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let mut sum = 0.0;
                for (t, &w) in weights.iter().enumerate() {
                    sum += w * table[t][i] * table[t][j];
                }
                d[(i, j)] = sum;
                d[(j, i)] = sum;
            }
        }
        grams.push(d);
    }
    grams
}

/// Dense `H^s` Gram assembled by explicit tensor quadrature over the box,
/// with `nodes_per_axis` Gauss points per axis.
///
/// This is a cross-check route, independent of the per-axis
/// factorization and closed forms used by [`gram_hs`]; it is what the
/// orthogonality and diagonality verifications compare against.
pub fn gram_hs_dense_quadrature(
    spec: &BasisSpec,
    s: usize,
    nodes_per_axis: usize,
) -> Result<DMatrix<f64>, BasisError> {
    let k = spec.len();
    let d = spec.dimension();
    let (nodes, weights) = gauss_legendre_unit(nodes_per_axis);
    let orders = multi_orders(d, s);
    let mut g = DMatrix::<f64>::zeros(k, k);
    let mut values = vec![0.0; k];
    let mut counter = vec![0usize; d];
    let mut x = vec![0.0; d];
    loop {
        let mut w = 1.0;
        for j in 0..d {
            x[j] = nodes[counter[j]];
            w *= weights[counter[j]];
        }
        for alpha in &orders {
            spec.eval_all_deriv(&x, alpha, &mut values)?;
            // Rank-one update G += w * v v^T.
            for m in 0..k {
                let vm = w * values[m];
                if vm == 0.0 {
                    continue;
                }
                for l in 0..k {
                    g[(m, l)] += vm * values[l];
                }
            }
        }
        // Advance the tensor-node odometer.
        let mut j = d;
        loop {
            if j == 0 {
                return Ok(g);
            }
            j -= 1;
            counter[j] += 1;
            if counter[j] < nodes.len() {
                break;
            }
            counter[j] = 0;
        }
    }
}

/// Coefficients of the `H^s`-orthogonal projection of `field` onto the
/// span of the basis: solves `G c = b` with
/// `b_m = <field, phi_m>_{H^s}` assembled by tensor Gauss quadrature.
///
/// When `s > 0` and the field does not provide analytic derivatives,
/// central finite differences of width [`super::FD_STEP`] are used, with
/// the matching loss of accuracy.
pub fn project_hs(
    spec: &BasisSpec,
    gram: &GramMatrix,
    field: &dyn ScalarField,
) -> Result<Vec<f64>, BasisError> {
    if gram.spec() != spec {
        return Err(BasisError::SpecMismatch(
            "Gram matrix was built for a different basis".into(),
        ));
    }
    let s = gram.sobolev_order();
    let d = spec.dimension();
    let k = spec.len();
    let q = projection_nodes_per_axis(spec, s);
    let (nodes, weights) = gauss_legendre_unit(q);
    let orders = multi_orders(d, s);
    let mut b = vec![0.0; k];
    let mut values = vec![0.0; k];
    let mut counter = vec![0usize; d];
    let mut x = vec![0.0; d];
    'outer: loop {
        let mut w = 1.0;
        for j in 0..d {
            x[j] = nodes[counter[j]];
            w *= weights[counter[j]];
        }
        for alpha in &orders {
            let fv = deriv_or_fd(field, &x, alpha);
            if fv != 0.0 {
                spec.eval_all_deriv(&x, alpha, &mut values)?;
                let wf = w * fv;
                for m in 0..k {
                    b[m] += wf * values[m];
                }
            }
        }
        let mut j = d;
        loop {
            if j == 0 {
                break 'outer;
            }
            j -= 1;
            counter[j] += 1;
            if counter[j] < nodes.len() {
                break;
            }
            counter[j] = 0;
        }
    }
    gram.solve(&b)
}

/// Per-axis Gauss node count used when projecting a field.
///
/// Exact for polynomial integrands of the Legendre span with room to
/// spare for smooth non-polynomial fields; for Fourier the count scales
/// with the largest frequency so trigonometric integrands are resolved
/// far below coefficient tolerances.
pub fn projection_nodes_per_axis(spec: &BasisSpec, s: usize) -> usize {
    match spec.family() {
        BasisFamily::LegendreTensor => 2 * spec.order() + s + 10,
        BasisFamily::FourierTensor => 6 * spec.order() + 12,
    }
}
