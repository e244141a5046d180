//! Gauss-Legendre quadrature on intervals.

/// Nodes and weights of the q-point Gauss-Legendre rule on `[0,1]`,
/// exact for polynomials of degree `2q-1`.
///
/// Nodes are computed by Newton iteration on the Legendre polynomial,
/// seeded with the Chebyshev-angle approximation, then mapped from
/// `[-1,1]` to `[0,1]`.
pub fn gauss_legendre_unit(q: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(q >= 1, "quadrature needs at least one node");
    let mut nodes = vec![0.0; q];
    let mut weights = vec![0.0; q];
    for i in 0..q {
        // Tricomi-style initial guess for the i-th root of P_q.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (q as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, d) = legendre_with_deriv(q, x);
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        // One polishing step keeps the roots at machine precision.
        let (p, dp) = legendre_with_deriv(q, x);
        x -= p / dp;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // Roots come out in descending order; store ascending.
        nodes[q - 1 - i] = 0.5 * (x + 1.0);
        weights[q - 1 - i] = 0.5 * w;
    }
    (nodes, weights)
}

/// Smallest Gauss-Legendre rule on `[0,1]` exact for the given degree.
pub fn gauss_legendre_for_degree(degree: usize) -> (Vec<f64>, Vec<f64>) {
    gauss_legendre_unit(degree / 2 + 1)
}

/// `(P_n(x), P_n'(x))` for the classical Legendre polynomial on `[-1,1]`.
fn legendre_with_deriv(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 1..n {
        let p_next = ((2 * k + 1) as f64 * x * p - k as f64 * p_prev) / (k + 1) as f64;
        p_prev = p;
        p = p_next;
    }
    let d = n as f64 * (x * p - p_prev) / (x * x - 1.0);
    (p, d)
}
