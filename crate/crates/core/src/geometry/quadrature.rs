//! Quadrature rules for integrating over simplicial manifolds.
//!
//! Segments take Gauss-Legendre rules of any degree.  Triangles and
//! tetrahedra use the classical symmetric rules at low degree and
//! collapsed-coordinate tensor Gauss rules above that, which stay exact
//! for the requested total degree with strictly positive weights.

use super::{GeometryError, SimplicialManifold};
use crate::gauss::gauss_legendre_unit;

/// Options for node generation.
#[derive(Debug, Clone, Copy, Default)]
pub struct QuadratureOptions {
    /// Split simplices until no piece is longer than this before placing
    /// nodes.  Polynomial exactness is unaffected; used to resolve
    /// oscillatory (Fourier) integrands on coarse meshes.
    pub max_diameter: Option<f64>,
}

/// Quadrature nodes over a whole manifold.
///
/// Every node stores its ambient point, its barycentric coordinates with
/// respect to the simplex it came from (for PL interpolation of vertex
/// data), its weight, and the simplex index.  Weights sum to the
/// manifold's Hausdorff measure.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    d: usize,
    k: usize,
    degree: usize,
    points: Vec<f64>,
    barys: Vec<f64>,
    weights: Vec<f64>,
    simplex_of: Vec<u32>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i * self.d..(i + 1) * self.d]
    }

    pub fn bary(&self, i: usize) -> &[f64] {
        &self.barys[i * (self.k + 1)..(i + 1) * (self.k + 1)]
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    pub fn simplex(&self, i: usize) -> usize {
        self.simplex_of[i] as usize
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Integrates a pointwise field over the manifold.
    pub fn integrate(&self, mut f: impl FnMut(&[f64]) -> f64) -> f64 {
        let mut sum = 0.0;
        for i in 0..self.len() {
            sum += self.weights[i] * f(self.point(i));
        }
        sum
    }
}

/// Nodes exact for polynomials of the given total degree on each simplex.
pub fn quadrature_nodes(
    manifold: &SimplicialManifold,
    degree: usize,
) -> Result<QuadratureRule, GeometryError> {
    quadrature_nodes_with(manifold, degree, QuadratureOptions::default())
}

/// [`quadrature_nodes`] with explicit [`QuadratureOptions`].
pub fn quadrature_nodes_with(
    manifold: &SimplicialManifold,
    degree: usize,
    opts: QuadratureOptions,
) -> Result<QuadratureRule, GeometryError> {
    let degree = degree.max(1);
    let d = manifold.ambient_dim();
    let k = manifold.intrinsic_dim();
    let reference = reference_rule(k, degree);
    let mut rule = QuadratureRule {
        d,
        k,
        degree,
        points: Vec::new(),
        barys: Vec::new(),
        weights: Vec::new(),
        simplex_of: Vec::new(),
    };
    for s in 0..manifold.simplices().len() {
        let coords = manifold.simplex_coords(s);
        if k >= 1 {
            // Surfaces degenerate simplices early.
            manifold.simplex_measure_at(s)?;
        }
        let pieces = split_simplex(k, manifold.simplex_diameter(s), opts.max_diameter);
        for piece in &pieces {
            emit_piece(&mut rule, s as u32, &coords, piece, &reference);
        }
    }
    Ok(rule)
}

/// A sub-simplex described by the barycentric coordinates of its
/// vertices with respect to the parent simplex.
type Piece = Vec<Vec<f64>>;

fn identity_piece(k: usize) -> Piece {
    (0..=k)
        .map(|i| {
            let mut b = vec![0.0; k + 1];
            b[i] = 1.0;
            b
        })
        .collect()
}

fn split_simplex(k: usize, diameter: f64, max_diameter: Option<f64>) -> Vec<Piece> {
    let whole = identity_piece(k);
    let Some(h) = max_diameter else {
        return vec![whole];
    };
    if k == 0 || diameter <= h {
        return vec![whole];
    }
    if k == 1 {
        let count = (diameter / h).ceil() as usize;
        return (0..count)
            .map(|i| {
                let a = i as f64 / count as f64;
                let b = (i + 1) as f64 / count as f64;
                vec![vec![1.0 - a, a], vec![1.0 - b, b]]
            })
            .collect();
    }
    let levels = (diameter / h).log2().ceil().max(0.0) as usize;
    let mut pieces = vec![whole];
    for _ in 0..levels {
        let mut next = Vec::with_capacity(pieces.len() * (1 << k));
        for p in &pieces {
            subdivide_piece(k, p, &mut next);
        }
        pieces = next;
    }
    pieces
}

fn mid(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| 0.5 * (x + y)).collect()
}

fn subdivide_piece(k: usize, p: &Piece, out: &mut Vec<Piece>) {
    match k {
        2 => {
            let (a, b, c) = (&p[0], &p[1], &p[2]);
            let ab = mid(a, b);
            let bc = mid(b, c);
            let ca = mid(c, a);
            out.push(vec![a.clone(), ab.clone(), ca.clone()]);
            out.push(vec![b.clone(), bc.clone(), ab.clone()]);
            out.push(vec![c.clone(), ca.clone(), bc.clone()]);
            out.push(vec![ab, bc, ca]);
        }
        3 => {
            let (v0, v1, v2, v3) = (&p[0], &p[1], &p[2], &p[3]);
            let m01 = mid(v0, v1);
            let m02 = mid(v0, v2);
            let m03 = mid(v0, v3);
            let m12 = mid(v1, v2);
            let m13 = mid(v1, v3);
            let m23 = mid(v2, v3);
            out.push(vec![v0.clone(), m01.clone(), m02.clone(), m03.clone()]);
            out.push(vec![v1.clone(), m01.clone(), m12.clone(), m13.clone()]);
            out.push(vec![v2.clone(), m02.clone(), m12.clone(), m23.clone()]);
            out.push(vec![v3.clone(), m03.clone(), m13.clone(), m23.clone()]);
            out.push(vec![m01.clone(), m02.clone(), m03.clone(), m13.clone()]);
            out.push(vec![m01, m02.clone(), m12.clone(), m13.clone()]);
            out.push(vec![m02.clone(), m03, m13.clone(), m23.clone()]);
            out.push(vec![m02, m12, m13, m23]);
        }
        _ => unreachable!("only k >= 2 is subdivided"),
    }
}

fn emit_piece(
    rule: &mut QuadratureRule,
    simplex: u32,
    parent_coords: &[f64],
    piece: &Piece,
    reference: &[(Vec<f64>, f64)],
) {
    let d = rule.d;
    let k = rule.k;
    // Ambient coordinates of the piece's vertices.
    let mut piece_coords = vec![0.0; (k + 1) * d];
    for (i, b) in piece.iter().enumerate() {
        for j in 0..d {
            let mut x = 0.0;
            for (v, &bv) in b.iter().enumerate() {
                x += bv * parent_coords[v * d + j];
            }
            piece_coords[i * d + j] = x;
        }
    }
    let measure = super::simplex_measure(d, k, &piece_coords);
    for (ref_bary, ref_w) in reference {
        // Barycentric coordinates with respect to the parent simplex.
        let mut bary = vec![0.0; k + 1];
        for (i, &rb) in ref_bary.iter().enumerate() {
            for v in 0..=k {
                bary[v] += rb * piece[i][v];
            }
        }
        let mut point = vec![0.0; d];
        for j in 0..d {
            let mut x = 0.0;
            for v in 0..=k {
                x += bary[v] * parent_coords[v * d + j];
            }
            point[j] = x;
        }
        rule.points.extend_from_slice(&point);
        rule.barys.extend_from_slice(&bary);
        rule.weights.push(ref_w * measure);
        rule.simplex_of.push(simplex);
    }
}

/// Reference rule on the k-simplex: barycentric nodes with weights
/// normalized to sum to one.
fn reference_rule(k: usize, degree: usize) -> Vec<(Vec<f64>, f64)> {
    match k {
        0 => vec![(vec![1.0], 1.0)],
        1 => {
            let (nodes, weights) = gauss_legendre_unit(degree / 2 + 1);
            nodes
                .iter()
                .zip(&weights)
                .map(|(&t, &w)| (vec![1.0 - t, t], w))
                .collect()
        }
        2 => triangle_rule(degree),
        3 => tetrahedron_rule(degree),
        _ => unreachable!("k <= 3"),
    }
}

fn triangle_rule(degree: usize) -> Vec<(Vec<f64>, f64)> {
    match degree {
        1 => vec![(vec![1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0], 1.0)],
        2 => {
            // Classical symmetric rule: three points, equal weights.
            let (a, b) = (2.0 / 3.0, 1.0 / 6.0);
            vec![
                (vec![a, b, b], 1.0 / 3.0),
                (vec![b, a, b], 1.0 / 3.0),
                (vec![b, b, a], 1.0 / 3.0),
            ]
        }
        3..=5 => {
            // Seven-point degree-5 rule (Strang); exact closed forms.
            let s15 = 15f64.sqrt();
            let a1 = (6.0 - s15) / 21.0;
            let w1 = (155.0 - s15) / 1200.0;
            let a2 = (6.0 + s15) / 21.0;
            let w2 = (155.0 + s15) / 1200.0;
            let mut rule = vec![(vec![1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0], 9.0 / 40.0)];
            for (a, w) in [(a1, w1), (a2, w2)] {
                let c = 1.0 - 2.0 * a;
                rule.push((vec![c, a, a], w));
                rule.push((vec![a, c, a], w));
                rule.push((vec![a, a, c], w));
            }
            rule
        }
        _ => collapsed_triangle_rule(degree),
    }
}

/// Tensor Gauss rule under the collapse map `(u, v) = (x, y(1-x))`,
/// exact for any total degree, all weights positive.
fn collapsed_triangle_rule(degree: usize) -> Vec<(Vec<f64>, f64)> {
    let (nodes, weights) = gauss_legendre_unit((degree + 1) / 2 + 1);
    let mut rule = Vec::with_capacity(nodes.len() * nodes.len());
    for (&x, &wx) in nodes.iter().zip(&weights) {
        for (&y, &wy) in nodes.iter().zip(&weights) {
            let u = x;
            let v = y * (1.0 - x);
            // Jacobian (1-x); reference area 1/2 folds into the factor 2.
            let w = 2.0 * wx * wy * (1.0 - x);
            rule.push((vec![1.0 - u - v, u, v], w));
        }
    }
    rule
}

fn tetrahedron_rule(degree: usize) -> Vec<(Vec<f64>, f64)> {
    match degree {
        1 => vec![(vec![0.25, 0.25, 0.25, 0.25], 1.0)],
        2 => {
            let a = (5.0 - 5f64.sqrt()) / 20.0;
            let b = (5.0 + 3.0 * 5f64.sqrt()) / 20.0;
            let mut rule = Vec::with_capacity(4);
            for i in 0..4 {
                let mut bary = vec![a; 4];
                bary[i] = b;
                rule.push((bary, 0.25));
            }
            rule
        }
        _ => collapsed_tetrahedron_rule(degree),
    }
}

fn collapsed_tetrahedron_rule(degree: usize) -> Vec<(Vec<f64>, f64)> {
    let (nodes, weights) = gauss_legendre_unit((degree + 2) / 2 + 1);
    let q = nodes.len();
    let mut rule = Vec::with_capacity(q * q * q);
    for (&x, &wx) in nodes.iter().zip(&weights) {
        for (&y, &wy) in nodes.iter().zip(&weights) {
            for (&z, &wz) in nodes.iter().zip(&weights) {
                let u = x;
                let v = y * (1.0 - x);
                let w3 = z * (1.0 - x) * (1.0 - y);
                // Jacobian (1-x)^2 (1-y); reference volume 1/6.
                let w = 6.0 * wx * wy * wz * (1.0 - x) * (1.0 - x) * (1.0 - y);
                rule.push((vec![1.0 - u - v - w3, u, v, w3], w));
            }
        }
    }
    rule
}
