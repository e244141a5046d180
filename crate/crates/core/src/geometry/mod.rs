//! Simplicial manifolds in the unit box and their Hausdorff measure.

use thiserror::Error;

pub mod quadrature;
pub mod sampling;
pub mod shapes;

pub use quadrature::{quadrature_nodes, quadrature_nodes_with, QuadratureOptions, QuadratureRule};

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("ambient dimension {0} is unsupported (must be 1..=3)")]
    UnsupportedDimension(usize),
    #[error("intrinsic dimension {k} exceeds ambient dimension {d}")]
    IntrinsicDimensionTooLarge { k: usize, d: usize },
    #[error("simplex {index} has {got} vertices, expected {expected}")]
    BadSimplexArity {
        index: usize,
        got: usize,
        expected: usize,
    },
    #[error("simplex {simplex} references vertex {vertex}, but only {count} vertices exist")]
    VertexIndexOutOfRange {
        simplex: usize,
        vertex: usize,
        count: usize,
    },
    #[error("vertex coordinates must be finite")]
    NonFiniteCoordinate,
    #[error("vertex values must be finite")]
    NonFiniteValue,
    #[error("manifold has {vertices} vertices but {values} values")]
    ValueCountMismatch { vertices: usize, values: usize },
    #[error("manifold has no simplices")]
    EmptyManifold,
    #[error("simplex {0} is degenerate (zero Hausdorff measure)")]
    DegenerateSimplex(usize),
    #[error("vertex list length {0} is not a multiple of the ambient dimension")]
    RaggedVertexData(usize),
}

/// A compact k-dimensional manifold given as a simplicial complex with
/// vertices in `[0,1]^d`.  `k = 0` is a finite point set carrying
/// counting measure.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplicialManifold {
    d: usize,
    k: usize,
    vertices: Vec<f64>,
    simplices: Vec<Vec<usize>>,
}

impl SimplicialManifold {
    /// `vertices` is row-major, `d` coordinates per vertex; every simplex
    /// lists `k+1` vertex indices.  Structural invariants are enforced
    /// here; containment in the unit box and non-degeneracy are checked
    /// by [`validate_manifold`] so that defective meshes can still be
    /// loaded and reported on.
    pub fn new(
        d: usize,
        k: usize,
        vertices: Vec<f64>,
        simplices: Vec<Vec<usize>>,
    ) -> Result<Self, GeometryError> {
        if d < 1 || d > 3 {
            return Err(GeometryError::UnsupportedDimension(d));
        }
        if k > d {
            return Err(GeometryError::IntrinsicDimensionTooLarge { k, d });
        }
        if vertices.len() % d != 0 {
            return Err(GeometryError::RaggedVertexData(vertices.len()));
        }
        if vertices.iter().any(|v| !v.is_finite()) {
            return Err(GeometryError::NonFiniteCoordinate);
        }
        if simplices.is_empty() {
            return Err(GeometryError::EmptyManifold);
        }
        let nv = vertices.len() / d;
        for (i, s) in simplices.iter().enumerate() {
            if s.len() != k + 1 {
                return Err(GeometryError::BadSimplexArity {
                    index: i,
                    got: s.len(),
                    expected: k + 1,
                });
            }
            for &v in s {
                if v >= nv {
                    return Err(GeometryError::VertexIndexOutOfRange {
                        simplex: i,
                        vertex: v,
                        count: nv,
                    });
                }
            }
        }
        Ok(SimplicialManifold {
            d,
            k,
            vertices,
            simplices,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.d
    }

    pub fn intrinsic_dim(&self) -> usize {
        self.k
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len() / self.d
    }

    pub fn vertex(&self, i: usize) -> &[f64] {
        &self.vertices[i * self.d..(i + 1) * self.d]
    }

    pub fn vertices_flat(&self) -> &[f64] {
        &self.vertices
    }

    pub fn simplices(&self) -> &[Vec<usize>] {
        &self.simplices
    }

    /// Coordinates of one simplex's vertices, row-major.
    pub fn simplex_coords(&self, s: usize) -> Vec<f64> {
        let mut out = Vec::with_capacity((self.k + 1) * self.d);
        for &v in &self.simplices[s] {
            out.extend_from_slice(self.vertex(v));
        }
        out
    }

    /// Hausdorff measure of simplex `s`.
    pub fn simplex_measure_at(&self, s: usize) -> Result<f64, GeometryError> {
        let coords = self.simplex_coords(s);
        let m = simplex_measure(self.d, self.k, &coords);
        if self.k >= 1 && !(m > 0.0) {
            return Err(GeometryError::DegenerateSimplex(s));
        }
        Ok(m)
    }

    /// Diameter (longest edge) of simplex `s`.
    pub fn simplex_diameter(&self, s: usize) -> f64 {
        let verts = &self.simplices[s];
        let mut best: f64 = 0.0;
        for i in 0..verts.len() {
            for j in (i + 1)..verts.len() {
                let a = self.vertex(verts[i]);
                let b = self.vertex(verts[j]);
                let d2: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
                best = best.max(d2);
            }
        }
        best.sqrt()
    }
}

/// `H^k` measure of a single k-simplex from its `k+1` vertex coordinates
/// (row-major, `d` per vertex): `sqrt(det(J^T J)) / k!` with `J` the
/// `d x k` edge matrix; `1` for a point (counting measure).
pub fn simplex_measure(d: usize, k: usize, coords: &[f64]) -> f64 {
    debug_assert_eq!(coords.len(), (k + 1) * d);
    if k == 0 {
        return 1.0;
    }
    // Gram matrix of edge vectors.
    let mut g = [[0.0f64; 3]; 3];
    for a in 0..k {
        for b in a..k {
            let mut dot = 0.0;
            for j in 0..d {
                let ea = coords[(a + 1) * d + j] - coords[j];
                let eb = coords[(b + 1) * d + j] - coords[j];
                dot += ea * eb;
            }
            g[a][b] = dot;
            g[b][a] = dot;
        }
    }
    let det = match k {
        1 => g[0][0],
        2 => g[0][0] * g[1][1] - g[0][1] * g[1][0],
        3 => {
            g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1])
                - g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0])
                + g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0])
        }
        _ => unreachable!("k <= 3"),
    };
    let factorial = [1.0, 1.0, 2.0, 6.0][k];
    det.max(0.0).sqrt() / factorial
}

/// Total `H^k` measure: the sum over simplices in index order.
pub fn hausdorff_measure(manifold: &SimplicialManifold) -> Result<f64, GeometryError> {
    let mut total = 0.0;
    for s in 0..manifold.simplices().len() {
        total += manifold.simplex_measure_at(s)?;
    }
    Ok(total)
}

/// A manifold together with one sample of `f` per vertex, interpreted as
/// a piecewise-linear function (a plain value per point when `k = 0`).
#[derive(Debug, Clone, PartialEq)]
pub struct ManifoldFunction {
    pub manifold: SimplicialManifold,
    pub values: Vec<f64>,
}

impl ManifoldFunction {
    pub fn new(manifold: SimplicialManifold, values: Vec<f64>) -> Result<Self, GeometryError> {
        if values.len() != manifold.vertex_count() {
            return Err(GeometryError::ValueCountMismatch {
                vertices: manifold.vertex_count(),
                values: values.len(),
            });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(GeometryError::NonFiniteValue);
        }
        Ok(ManifoldFunction { manifold, values })
    }

    /// Constant-zero function on a manifold.
    pub fn zero(manifold: SimplicialManifold) -> Self {
        let values = vec![0.0; manifold.vertex_count()];
        ManifoldFunction { manifold, values }
    }

    /// Samples a field at every vertex.
    pub fn from_field(
        manifold: SimplicialManifold,
        f: impl Fn(&[f64]) -> f64,
    ) -> Self {
        let values = (0..manifold.vertex_count())
            .map(|i| f(manifold.vertex(i)))
            .collect();
        ManifoldFunction { manifold, values }
    }

    /// PL interpolation of `f` at barycentric coordinates inside a simplex.
    pub fn value_at(&self, simplex: usize, bary: &[f64]) -> f64 {
        let verts = &self.manifold.simplices()[simplex];
        verts
            .iter()
            .zip(bary)
            .map(|(&v, &b)| b * self.values[v])
            .sum()
    }
}

/// Diagnostic report from [`validate_manifold`]; nothing here is fatal
/// by itself — loaders decide which findings to reject.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    /// `(vertex, axis, value)` with a coordinate outside `[0,1]`.
    pub containment_violations: Vec<(usize, usize, f64)>,
    /// Simplices with (numerically) zero Hausdorff measure.
    pub degenerate_simplices: Vec<usize>,
    /// Pairs of vertices with identical coordinates.
    pub duplicate_vertices: Vec<(usize, usize)>,
    /// Pairs of simplices over the same vertex set — a certain violation
    /// of the lower-dimensional-intersection condition.  Overlaps that do
    /// not share a full vertex set are not detected; this check is
    /// advisory only.
    pub overlapping_simplices: Vec<(usize, usize)>,
    /// Vertices touching the boundary of the unit box.  Only relevant
    /// for the periodic (Fourier) mode, which requires interior manifolds.
    pub boundary_contact: Vec<usize>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self == &ValidationReport::default()
    }

    /// Containment failures make a mesh unusable for encoding.
    pub fn has_fatal(&self) -> bool {
        !self.containment_violations.is_empty()
    }

    pub fn summary(&self) -> String {
        let mut parts = Vec::new();
        if !self.containment_violations.is_empty() {
            parts.push(format!(
                "{} coordinate(s) outside [0,1]",
                self.containment_violations.len()
            ));
        }
        if !self.degenerate_simplices.is_empty() {
            parts.push(format!(
                "{} degenerate simplex(es)",
                self.degenerate_simplices.len()
            ));
        }
        if !self.duplicate_vertices.is_empty() {
            parts.push(format!(
                "{} duplicate vertex pair(s)",
                self.duplicate_vertices.len()
            ));
        }
        if !self.overlapping_simplices.is_empty() {
            parts.push(format!(
                "{} coincident simplex pair(s)",
                self.overlapping_simplices.len()
            ));
        }
        if !self.boundary_contact.is_empty() {
            parts.push(format!(
                "{} vertex(es) on the box boundary (periodic mode requires interior manifolds)",
                self.boundary_contact.len()
            ));
        }
        if parts.is_empty() {
            "ok".into()
        } else {
            parts.join("; ")
        }
    }
}

const BOUNDARY_TOL: f64 = 1e-12;

/// Checks containment, degeneracy, duplicate vertices, coincident
/// simplices and boundary contact.  Report-only.
pub fn validate_manifold(manifold: &SimplicialManifold) -> ValidationReport {
    let mut report = ValidationReport::default();
    let d = manifold.ambient_dim();
    for i in 0..manifold.vertex_count() {
        let v = manifold.vertex(i);
        for (axis, &c) in v.iter().enumerate() {
            if !(0.0..=1.0).contains(&c) {
                report.containment_violations.push((i, axis, c));
            }
        }
        if v.iter().any(|&c| c < BOUNDARY_TOL || c > 1.0 - BOUNDARY_TOL) {
            report.boundary_contact.push(i);
        }
    }
    if manifold.intrinsic_dim() >= 1 {
        for s in 0..manifold.simplices().len() {
            let coords = manifold.simplex_coords(s);
            let m = simplex_measure(d, manifold.intrinsic_dim(), &coords);
            if m < 1e-14 {
                report.degenerate_simplices.push(s);
            }
        }
    }
    // Exact-duplicate detection keyed on bit patterns; deterministic order.
    let mut seen: std::collections::BTreeMap<Vec<u64>, usize> = std::collections::BTreeMap::new();
    for i in 0..manifold.vertex_count() {
        let key: Vec<u64> = manifold.vertex(i).iter().map(|c| c.to_bits()).collect();
        if let Some(&first) = seen.get(&key) {
            report.duplicate_vertices.push((first, i));
        } else {
            seen.insert(key, i);
        }
    }
    let mut seen_s: std::collections::BTreeMap<Vec<usize>, usize> =
        std::collections::BTreeMap::new();
    for (i, s) in manifold.simplices().iter().enumerate() {
        let mut key = s.clone();
        key.sort_unstable();
        if let Some(&first) = seen_s.get(&key) {
            report.overlapping_simplices.push((first, i));
        } else {
            seen_s.insert(key, i);
        }
    }
    report
}

/// One level of uniform refinement: segments split at midpoints,
/// triangles into four, tetrahedra into eight (Bey's rule).  The point
/// set of the manifold is unchanged and vertex values are interpolated,
/// so the represented manifold function is identical.
pub fn refine(mf: &ManifoldFunction) -> Result<ManifoldFunction, GeometryError> {
    let man = &mf.manifold;
    let d = man.ambient_dim();
    let k = man.intrinsic_dim();
    if k == 0 {
        return Ok(mf.clone());
    }
    let mut vertices = man.vertices_flat().to_vec();
    let mut values = mf.values.clone();
    let mut midpoints: std::collections::BTreeMap<(usize, usize), usize> =
        std::collections::BTreeMap::new();
    let mut midpoint = |a: usize, b: usize, vertices: &mut Vec<f64>, values: &mut Vec<f64>| {
        let key = (a.min(b), a.max(b));
        if let Some(&m) = midpoints.get(&key) {
            return m;
        }
        let idx = vertices.len() / d;
        for j in 0..d {
            let va = vertices[a * d + j];
            let vb = vertices[b * d + j];
            vertices.push(0.5 * (va + vb));
        }
        let v = 0.5 * (values[a] + values[b]);
        values.push(v);
        midpoints.insert(key, idx);
        idx
    };
    let mut simplices = Vec::with_capacity(man.simplices().len() * (1 << k));
    for s in man.simplices() {
        match k {
            1 => {
                let (a, b) = (s[0], s[1]);
                let m = midpoint(a, b, &mut vertices, &mut values);
                simplices.push(vec![a, m]);
                simplices.push(vec![m, b]);
            }
            2 => {
                let (a, b, c) = (s[0], s[1], s[2]);
                let mab = midpoint(a, b, &mut vertices, &mut values);
                let mbc = midpoint(b, c, &mut vertices, &mut values);
                let mca = midpoint(c, a, &mut vertices, &mut values);
                simplices.push(vec![a, mab, mca]);
                simplices.push(vec![b, mbc, mab]);
                simplices.push(vec![c, mca, mbc]);
                simplices.push(vec![mab, mbc, mca]);
            }
            3 => {
                let (v0, v1, v2, v3) = (s[0], s[1], s[2], s[3]);
                let m01 = midpoint(v0, v1, &mut vertices, &mut values);
                let m02 = midpoint(v0, v2, &mut vertices, &mut values);
                let m03 = midpoint(v0, v3, &mut vertices, &mut values);
                let m12 = midpoint(v1, v2, &mut vertices, &mut values);
                let m13 = midpoint(v1, v3, &mut vertices, &mut values);
                let m23 = midpoint(v2, v3, &mut vertices, &mut values);
                simplices.push(vec![v0, m01, m02, m03]);
                simplices.push(vec![v1, m01, m12, m13]);
                simplices.push(vec![v2, m02, m12, m23]);
                simplices.push(vec![v3, m03, m13, m23]);
                simplices.push(vec![m01, m02, m03, m13]);
                simplices.push(vec![m01, m02, m12, m13]);
                simplices.push(vec![m02, m03, m13, m23]);
                simplices.push(vec![m02, m12, m13, m23]);
            }
            _ => unreachable!(),
        }
    }
    let manifold = SimplicialManifold::new(d, k, vertices, simplices)?;
    ManifoldFunction::new(manifold, values)
}

/// `levels` rounds of [`refine`].
pub fn refine_times(mf: &ManifoldFunction, levels: usize) -> Result<ManifoldFunction, GeometryError> {
    let mut out = mf.clone();
    for _ in 0..levels {
        out = refine(&out)?;
    }
    Ok(out)
}
