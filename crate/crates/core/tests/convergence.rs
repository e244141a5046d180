//! Slower cross-module convergence properties: refinement orders,
//! monotone error envelopes, and pairing consistency across Sobolev
//! orders.

use mfe_core::analysis::fields::ExpSum;
use mfe_core::analysis::{convergence_study, estimate_rate};
use mfe_core::basis::{gram_hs, BasisFamily, BasisSpec, ScalarField};
use mfe_core::decoder::DualRepresentation;
use mfe_core::encoder::{encode, Block};
use mfe_core::geometry::{quadrature_nodes, refine_times, shapes, ManifoldFunction};

fn smooth(x: &[f64]) -> f64 {
    (3.0 * x[0] + x[1]).sin() + 0.5 * x[0] * x[1]
}

#[test]
fn encoding_is_second_order_in_mesh_size() {
    // Sampling a smooth field onto finer polygons drifts each
    // coefficient by O(h^2).
    let spec = BasisSpec::new(BasisFamily::LegendreTensor, 4, 2).unwrap();
    let base = shapes::circle_boundary([0.5, 0.5], 0.3, 64);
    let coeffs_at = |level: usize| {
        let refined = refine_times(&base, level).unwrap();
        let mf = ManifoldFunction::from_field(refined.manifold.clone(), smooth);
        let enc = encode(&mf, &spec, None).unwrap();
        enc.block(Block::Function).unwrap().to_vec()
    };
    let reference = coeffs_at(5);
    let err_at = |level: usize| -> f64 {
        coeffs_at(level)
            .iter()
            .zip(&reference)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max)
    };
    let errors: Vec<f64> = (0..=2).map(err_at).collect();
    for w in errors.windows(2) {
        let ratio = w[0] / w[1];
        assert!((2.5..7.0).contains(&ratio), "ratio {ratio} in {errors:?}");
    }
}

#[test]
fn polygonal_quadrature_converges_at_second_order() {
    // Integral of a fixed smooth field over polygonal circles converges
    // to the line integral at second order in the segment count.
    let oracle = {
        let fine = shapes::circle_boundary([0.5, 0.5], 0.3, 1 << 17);
        let rule = quadrature_nodes(&fine.manifold, 8).unwrap();
        rule.integrate(smooth)
    };
    let segment_counts = [64usize, 128, 256, 512];
    let errors: Vec<f64> = segment_counts
        .iter()
        .map(|&s| {
            let poly = shapes::circle_boundary([0.5, 0.5], 0.3, s);
            let rule = quadrature_nodes(&poly.manifold, 8).unwrap();
            (rule.integrate(smooth) - oracle).abs()
        })
        .collect();
    let slope = estimate_rate(&errors, &segment_counts).unwrap();
    assert!(
        (-2.2..=-1.8).contains(&slope),
        "slope {slope}, errors {errors:?}"
    );
}

#[test]
fn error_envelope_is_monotone_for_smooth_test_function() {
    let mf = ManifoldFunction::from_field(
        shapes::circle_boundary([0.5, 0.5], 0.3, 1024).manifold,
        smooth,
    );
    let phi = ExpSum;
    let study = convergence_study(
        &mf,
        BasisFamily::LegendreTensor,
        1,
        &[("expsum", &phi)],
        &[2, 3, 4, 5, 6, 7, 8],
    )
    .unwrap();
    for block in [Block::Shape, Block::Function] {
        let errors = study.errors_for(block, "expsum");
        let mut best = f64::INFINITY;
        let mut envelope = Vec::new();
        for e in errors {
            best = best.min(e);
            envelope.push(best);
        }
        assert!(
            envelope.windows(2).all(|w| w[1] <= w[0]),
            "{block:?}: {envelope:?}"
        );
    }
}

#[test]
fn pairing_is_independent_of_sobolev_order_on_span() {
    let spec = BasisSpec::new(BasisFamily::LegendreTensor, 5, 2).unwrap();
    let mf = ManifoldFunction::from_field(
        shapes::circle_boundary([0.45, 0.55], 0.2, 256).manifold,
        smooth,
    );
    let enc = encode(&mf, &spec, None).unwrap();
    let j = spec.flat_index(&[3, 2]).unwrap();
    let mut coeffs = vec![0.0; spec.len()];
    coeffs[j] = 2.0;
    coeffs[0] = -0.7;
    let phi = mfe_core::analysis::fields::SpanField::new(spec.clone(), coeffs);
    let mut values = Vec::new();
    for s in [0usize, 1, 2] {
        let gram = gram_hs(&spec, s).unwrap();
        let dual = DualRepresentation::new(&enc, &gram).unwrap();
        values.push(dual.pair(Block::Function, &phi).unwrap());
    }
    for v in &values[1..] {
        assert!(
            (v - values[0]).abs() < 1e-9 * values[0].abs().max(1.0),
            "{values:?}"
        );
    }
}

#[test]
fn pairing_is_bilinear() {
    let spec = BasisSpec::new(BasisFamily::LegendreTensor, 4, 2).unwrap();
    let gram = gram_hs(&spec, 1).unwrap();
    let mf1 = ManifoldFunction::from_field(
        shapes::circle_boundary([0.4, 0.5], 0.2, 128).manifold,
        smooth,
    );
    let mf2 = ManifoldFunction::from_field(
        shapes::disk([0.6, 0.5], 0.15, 3, 24).manifold,
        |x: &[f64]| x[0] - x[1],
    );
    let e1 = encode(&mf1, &spec, None).unwrap();
    let e2 = encode(&mf2, &spec, None).unwrap();
    struct Phi1;
    impl ScalarField for Phi1 {
        fn eval(&self, x: &[f64]) -> f64 {
            (x[0] * 2.1 + 0.3 * x[1]).cos()
        }
    }
    struct Phi2;
    impl ScalarField for Phi2 {
        fn eval(&self, x: &[f64]) -> f64 {
            x[0] * x[0] - x[1]
        }
    }
    let (alpha, beta) = (1.3, -0.4);
    // Linearity in the encoded vector: combine coefficient blocks.
    let combined = {
        let f1 = e1.block(Block::Function).unwrap();
        let f2 = e2.block(Block::Function).unwrap();
        let mixed: Vec<f64> = f1
            .iter()
            .zip(f2)
            .map(|(a, b)| alpha * a + beta * b)
            .collect();
        mfe_core::encoder::EncodedVector::new(
            spec.clone(),
            e1.normalization(),
            e1.provenance(),
            vec![(Block::Function, mixed)],
        )
        .unwrap()
    };
    let d1 = DualRepresentation::new(&e1, &gram).unwrap();
    let d2 = DualRepresentation::new(&e2, &gram).unwrap();
    let dc = DualRepresentation::new(&combined, &gram).unwrap();
    let got = dc.pair(Block::Function, &Phi1).unwrap();
    let want = alpha * d1.pair(Block::Function, &Phi1).unwrap()
        + beta * d2.pair(Block::Function, &Phi1).unwrap();
    assert!((got - want).abs() < 1e-10, "{got} vs {want}");
    // Linearity in the test function.
    struct Mix;
    impl ScalarField for Mix {
        fn eval(&self, x: &[f64]) -> f64 {
            0.8 * Phi1.eval(x) - 1.7 * Phi2.eval(x)
        }
    }
    let got = d1.pair(Block::Function, &Mix).unwrap();
    let want = 0.8 * d1.pair(Block::Function, &Phi1).unwrap()
        - 1.7 * d1.pair(Block::Function, &Phi2).unwrap();
    assert!((got - want).abs() < 1e-10, "{got} vs {want}");
}

#[test]
fn fourier_study_on_interior_manifold_converges() {
    let mf = ManifoldFunction::from_field(
        shapes::circle_boundary([0.5, 0.5], 0.25, 1024).manifold,
        smooth,
    );
    let phi = mfe_core::analysis::fields::PeriodicExpSine;
    let study = convergence_study(
        &mf,
        BasisFamily::FourierTensor,
        1,
        &[("periodic", &phi)],
        &[2, 4, 6, 8],
    )
    .unwrap();
    for slope in &study.slopes {
        let v = slope.slope.expect("errors above floor");
        assert!(v < -2.0, "block {:?}: slope {v}", slope.block);
    }
}
