//! Shifted Legendre polynomials, orthonormal in `L^2([0,1])`.
//!
//! `l_i(x) = sqrt(2i+1) * P_i(2x - 1)`, so the 1-d mass matrix is the
//! identity and tensor products are orthonormal on the unit box.

/// Values `l_0(x), ..., l_{n-1}(x)` via the three-term recurrence.
pub fn values(n: usize, x: f64, out: &mut [f64]) {
    debug_assert!(out.len() >= n);
    let t = 2.0 * x - 1.0;
    let mut p_prev = 0.0;
    let mut p = 1.0;
    for i in 0..n {
        out[i] = ((2 * i + 1) as f64).sqrt() * p;
        let p_next = ((2 * i + 1) as f64 * t * p - i as f64 * p_prev) / (i + 1) as f64;
        p_prev = p;
        p = p_next;
    }
}

/// q-th derivatives `l_0^(q)(x), ..., l_{n-1}^(q)(x)`.
///
/// Differentiating the recurrence q times with the Leibniz rule gives
/// `(k+1) P_{k+1}^(q) = (2k+1)(t P_k^(q) + q P_k^(q-1)) - k P_{k-1}^(q)`,
/// which is stable at the endpoints where the closed forms are not.
/// Each derivative in x picks up a factor 2 from the shift to `[0,1]`.
pub fn derivatives(n: usize, q: usize, x: f64, out: &mut [f64]) {
    debug_assert!(out.len() >= n);
    if q == 0 {
        values(n, x, out);
        return;
    }
    let t = 2.0 * x - 1.0;
    // rows[r][i] = P_i^(r)(t) for r = q-1, q (rolling pair of rows).
    let mut lower = vec![0.0; n]; // order r-1
    let mut cur = vec![0.0; n]; // order r
    // Order 0 row.
    {
        let mut p_prev = 0.0;
        let mut p = 1.0;
        for i in 0..n {
            cur[i] = p;
            let p_next = ((2 * i + 1) as f64 * t * p - i as f64 * p_prev) / (i + 1) as f64;
            p_prev = p;
            p = p_next;
        }
    }
    for r in 1..=q {
        std::mem::swap(&mut lower, &mut cur);
        // lower now holds order r-1; rebuild cur as order r.
        let mut d_prev = 0.0; // P_{i-1}^(r)
        let mut d = 0.0; // P_0^(r) = 0 for r >= 1
        for i in 0..n {
            cur[i] = d;
            let d_next = ((2 * i + 1) as f64 * (t * d + r as f64 * lower[i]) - i as f64 * d_prev)
                / (i + 1) as f64;
            d_prev = d;
            d = d_next;
        }
    }
    let shift = (2.0f64).powi(q as i32);
    for i in 0..n {
        out[i] = ((2 * i + 1) as f64).sqrt() * shift * cur[i];
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_order_closed_forms() {
        let mut v = [0.0; 4];
        for &x in &[0.0, 0.17, 0.5, 0.83, 1.0] {
            values(4, x, &mut v);
            let t = 2.0 * x - 1.0;
            assert!((v[0] - 1.0).abs() < 1e-14);
            assert!((v[1] - 3f64.sqrt() * t).abs() < 1e-14);
            assert!((v[2] - 5f64.sqrt() * 0.5 * (3.0 * t * t - 1.0)).abs() < 1e-13);
            assert!((v[3] - 7f64.sqrt() * 0.5 * (5.0 * t * t * t - 3.0 * t)).abs() < 1e-13);
        }
    }

    #[test]
    fn first_derivative_closed_forms() {
        let mut d = [0.0; 3];
        for &x in &[0.0, 0.3, 0.5, 1.0] {
            derivatives(3, 1, x, &mut d);
            let t = 2.0 * x - 1.0;
            assert!(d[0].abs() < 1e-14);
            assert!((d[1] - 2.0 * 3f64.sqrt()).abs() < 1e-13);
            assert!((d[2] - 5f64.sqrt() * 6.0 * t).abs() < 1e-12);
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let n = 9;
        let h = 1e-6;
        let mut lo = vec![0.0; n];
        let mut hi = vec![0.0; n];
        let mut d = vec![0.0; n];
        for &x in &[0.21, 0.5, 0.77] {
            values(n, x - h, &mut lo);
            values(n, x + h, &mut hi);
            derivatives(n, 1, x, &mut d);
            for i in 0..n {
                let fd = (hi[i] - lo[i]) / (2.0 * h);
                assert!(
                    (d[i] - fd).abs() < 1e-5 * (1.0 + d[i].abs()),
                    "i={i} x={x}: {} vs {fd}",
                    d[i]
                );
            }
        }
    }

    #[test]
    fn second_derivative_of_quadratic() {
        // l_2'' = sqrt(5) * 12 (constant after the shift).
        let mut d = [0.0; 3];
        derivatives(3, 2, 0.37, &mut d);
        assert!(d[0].abs() < 1e-14);
        assert!(d[1].abs() < 1e-14);
        assert!((d[2] - 5f64.sqrt() * 12.0).abs() < 1e-12);
    }
}
