//! Real Fourier basis on the unit circle `[0,1] mod 1`.
//!
//! Axis index layout for per-axis order `n` (2n-1 functions):
//! index 0 is the constant 1, index `2k-1` is `sqrt(2) cos(2 pi k x)`,
//! index `2k` is `sqrt(2) sin(2 pi k x)`, for `k = 1..n-1`.  All have
//! unit `L^2` norm on the period.

use std::f64::consts::PI;

/// Frequency of the 1-d basis function at `axis_index`.
pub fn frequency(axis_index: usize) -> usize {
    axis_index.div_ceil(2)
}

/// Values of all `2n-1` axis functions at `x`.
pub fn values(n: usize, x: f64, out: &mut [f64]) {
    derivatives(n, 0, x, out);
}

/// q-th derivatives of all `2n-1` axis functions at `x`.
///
/// Differentiation rotates (cos, sin) by a quarter turn and scales by
/// `2 pi k` per order.
pub fn derivatives(n: usize, q: usize, x: f64, out: &mut [f64]) {
    let len = 2 * n - 1;
    debug_assert!(out.len() >= len);
    out[0] = if q == 0 { 1.0 } else { 0.0 };
    let root2 = std::f64::consts::SQRT_2;
    for k in 1..n {
        let omega = 2.0 * PI * k as f64;
        let scale = root2 * omega.powi(q as i32);
        let (s, c) = (omega * x).sin_cos();
        // (cos, sin) after q derivatives, before the omega^q factor.
        let (dc, ds) = match q % 4 {
            0 => (c, s),
            1 => (-s, c),
            2 => (-c, -s),
            _ => (s, -c),
        };
        out[2 * k - 1] = scale * dc;
        out[2 * k] = scale * ds;
    }
}
