//! Stock test fields used by studies and the CLI.

use crate::basis::ScalarField;

/// `exp(x_1 + ... + x_d)`: analytic, every mixed partial equals the
/// function itself.
pub struct ExpSum;

impl ScalarField for ExpSum {
    fn eval(&self, x: &[f64]) -> f64 {
        x.iter().sum::<f64>().exp()
    }
    fn deriv(&self, x: &[f64], _alpha: &[usize]) -> Option<f64> {
        Some(self.eval(x))
    }
}

/// The Runge function `1 / (1 + 25 |x - c|^2)`; derivatives are left to
/// the finite-difference fallback.
pub struct Runge {
    pub center: Vec<f64>,
}

impl ScalarField for Runge {
    fn eval(&self, x: &[f64]) -> f64 {
        let r2: f64 = x
            .iter()
            .zip(&self.center)
            .map(|(xi, ci)| (xi - ci) * (xi - ci))
            .sum();
        1.0 / (1.0 + 25.0 * r2)
    }
}

/// `(x_1 + ... + x_d + 0.3)^k`: a polynomial of exact total degree `k`,
/// with closed-form mixed partials.
pub struct TotalPoly {
    pub degree: usize,
}

impl ScalarField for TotalPoly {
    fn eval(&self, x: &[f64]) -> f64 {
        (x.iter().sum::<f64>() + 0.3).powi(self.degree as i32)
    }
    fn deriv(&self, x: &[f64], alpha: &[usize]) -> Option<f64> {
        let total: usize = alpha.iter().sum();
        if total > self.degree {
            return Some(0.0);
        }
        let mut factor = 1.0;
        for i in 0..total {
            factor *= (self.degree - i) as f64;
        }
        let base = x.iter().sum::<f64>() + 0.3;
        Some(factor * base.powi((self.degree - total) as i32))
    }
}

/// `prod_j exp(sin(2 pi x_j))`: periodic and analytic on the torus, with
/// closed-form per-axis derivatives up to order three.
pub struct PeriodicExpSine;

impl PeriodicExpSine {
    fn axis(x: f64, q: usize) -> Option<f64> {
        let t = 2.0 * std::f64::consts::PI * x;
        let w = 2.0 * std::f64::consts::PI;
        let (s, c) = t.sin_cos();
        let g = s.exp();
        // Derivatives of h = sin(2 pi x), then Faa di Bruno for exp(h).
        let h1 = w * c;
        let h2 = -w * w * s;
        let h3 = -w * w * w * c;
        Some(match q {
            0 => g,
            1 => h1 * g,
            2 => (h2 + h1 * h1) * g,
            3 => (h3 + 3.0 * h1 * h2 + h1 * h1 * h1) * g,
            _ => return None,
        })
    }
}

impl ScalarField for PeriodicExpSine {
    fn eval(&self, x: &[f64]) -> f64 {
        x.iter().map(|&xi| Self::axis(xi, 0).unwrap()).product()
    }
    fn deriv(&self, x: &[f64], alpha: &[usize]) -> Option<f64> {
        let mut prod = 1.0;
        for (&xi, &q) in x.iter().zip(alpha) {
            prod *= Self::axis(xi, q)?;
        }
        Some(prod)
    }
}

/// A linear combination of basis members, with exact derivatives; the
/// stock "function already in the span" test case.
pub struct SpanField {
    spec: crate::basis::BasisSpec,
    coeffs: Vec<f64>,
}

impl SpanField {
    pub fn new(spec: crate::basis::BasisSpec, coeffs: Vec<f64>) -> Self {
        assert_eq!(coeffs.len(), spec.len());
        SpanField { spec, coeffs }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }
}

impl ScalarField for SpanField {
    fn eval(&self, x: &[f64]) -> f64 {
        let mut values = vec![0.0; self.spec.len()];
        self.spec.eval_all(x, &mut values).unwrap();
        values.iter().zip(&self.coeffs).map(|(v, c)| v * c).sum()
    }
    fn deriv(&self, x: &[f64], alpha: &[usize]) -> Option<f64> {
        let mut values = vec![0.0; self.spec.len()];
        self.spec.eval_all_deriv(x, alpha, &mut values).ok()?;
        Some(values.iter().zip(&self.coeffs).map(|(v, c)| v * c).sum())
    }
}

/// A compactly supported smooth bump: `exp(1 - 1/(1 - t^2))` for
/// `t = |x - c| / radius < 1`, zero outside.
pub struct RadialBump {
    pub center: Vec<f64>,
    pub radius: f64,
}

impl ScalarField for RadialBump {
    fn eval(&self, x: &[f64]) -> f64 {
        let r2: f64 = x
            .iter()
            .zip(&self.center)
            .map(|(xi, ci)| (xi - ci) * (xi - ci))
            .sum();
        let t2 = r2 / (self.radius * self.radius);
        if t2 >= 1.0 {
            0.0
        } else {
            (1.0 - 1.0 / (1.0 - t2)).exp()
        }
    }
}

/// Parses a test-function name: `expsum`, `runge`, `periodic`, `poly:k`.
pub fn parse_test_function(name: &str, d: usize) -> Result<Box<dyn ScalarField>, String> {
    if let Some(k) = name.strip_prefix("poly:") {
        let degree: usize = k
            .parse()
            .map_err(|_| format!("bad polynomial degree in '{name}'"))?;
        return Ok(Box::new(TotalPoly { degree }));
    }
    match name {
        "expsum" => Ok(Box::new(ExpSum)),
        "runge" => Ok(Box::new(Runge {
            center: vec![0.5; d],
        })),
        "periodic" => Ok(Box::new(PeriodicExpSine)),
        _ => Err(format!(
            "unknown test function '{name}' (expected expsum, runge, periodic or poly:k)"
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::deriv_or_fd;

    #[test]
    fn expsum_derivatives() {
        let f = ExpSum;
        let x = [0.2, 0.5];
        let v = f.eval(&x);
        assert!((f.deriv(&x, &[1, 2]).unwrap() - v).abs() < 1e-15);
    }

    #[test]
    fn poly_derivative_closed_form() {
        let f = TotalPoly { degree: 3 };
        let x = [0.4, 0.1];
        // d^2/(dx dy) of (x+y+0.3)^3 is 6 (x+y+0.3).
        let got = f.deriv(&x, &[1, 1]).unwrap();
        assert!((got - 6.0 * 0.8).abs() < 1e-12);
        assert_eq!(f.deriv(&x, &[2, 2]).unwrap(), 0.0);
    }

    #[test]
    fn periodic_derivatives_match_finite_differences() {
        let f = PeriodicExpSine;
        for &x in &[[0.13, 0.7], [0.5, 0.25]] {
            for alpha in [[1, 0], [0, 2], [1, 1], [2, 1]] {
                let analytic = f.deriv(&x, &alpha).unwrap();
                struct NoDeriv<'a>(&'a PeriodicExpSine);
                impl ScalarField for NoDeriv<'_> {
                    fn eval(&self, x: &[f64]) -> f64 {
                        self.0.eval(x)
                    }
                }
                let fd = deriv_or_fd(&NoDeriv(&f), &x, &alpha);
                let scale = analytic.abs().max(1.0);
                // Nested central differences lose roughly eps/h per
                // order; third derivatives are only good to ~1e-3.
                let tol = if alpha.iter().sum::<usize>() <= 2 { 2e-5 } else { 5e-3 };
                assert!(
                    (analytic - fd).abs() / scale < tol,
                    "alpha={alpha:?}: {analytic} vs {fd}"
                );
            }
        }
    }

    #[test]
    fn bump_support() {
        let f = RadialBump {
            center: vec![0.5, 0.5],
            radius: 0.2,
        };
        assert_eq!(f.eval(&[0.71, 0.5]), 0.0);
        assert!((f.eval(&[0.5, 0.5]) - 1.0).abs() < 1e-15);
        assert!(f.eval(&[0.6, 0.5]) > 0.0);
    }

    #[test]
    fn parser_accepts_known_names() {
        assert!(parse_test_function("expsum", 2).is_ok());
        assert!(parse_test_function("runge", 2).is_ok());
        assert!(parse_test_function("periodic", 2).is_ok());
        assert!(parse_test_function("poly:4", 2).is_ok());
        assert!(parse_test_function("poly:x", 2).is_err());
        assert!(parse_test_function("mystery", 2).is_err());
    }
}
