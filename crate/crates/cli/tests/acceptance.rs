//! Acceptance suite: one test per release criterion, each printing a
//! PASS/FAIL line (run with `--nocapture` to see them).  Tolerances are
//! pinned here, not configurable.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mfe_core::analysis::fields::{ExpSum, PeriodicExpSine, RadialBump, SpanField};
use mfe_core::analysis::{consistency_check, convergence_study, mc_vs_quadrature};
use mfe_core::basis::{gram_hs, gram_hs_dense_quadrature, BasisFamily, BasisSpec};
use mfe_core::decoder::DualRepresentation;
use mfe_core::encoder::{encode, encode_joint, Block, JointManifoldFunction};
use mfe_core::geometry::{
    quadrature_nodes, refine_times, shapes, ManifoldFunction, SimplicialManifold,
};
use mfe_core::neuralop::{self, mionet_gradient, MioNetParams};

fn verdict(criterion: u32, name: &str, pass: bool, details: &str, started: Instant) {
    let elapsed = started.elapsed().as_secs_f64();
    println!(
        "acceptance {criterion} ({name}): {} — {details} [{elapsed:.1}s]",
        if pass { "PASS" } else { "FAIL" },
    );
    assert!(pass, "acceptance {criterion} ({name}) failed: {details}");
}

#[test]
fn criterion_1_orthonormality_and_gram() {
    let started = Instant::now();
    // Legendre L^2 Gram equals the identity, checked through the
    // independent dense-quadrature route.
    let mut worst_legendre: f64 = 0.0;
    for d in 1..=3 {
        for n in 1..=8 {
            let spec = BasisSpec::new(BasisFamily::LegendreTensor, n, d).unwrap();
            let g = gram_hs_dense_quadrature(&spec, 0, n + 2).unwrap();
            for m in 0..spec.len() {
                for l in 0..spec.len() {
                    let want = if m == l { 1.0 } else { 0.0 };
                    worst_legendre = worst_legendre.max((g[(m, l)] - want).abs());
                }
            }
        }
    }
    // Fourier H^s Grams are diagonal; the assembled matrix must be
    // exactly diagonal and the quadrature route must agree, at scale
    // (H^2 entries reach (2 pi k)^4, so absolute comparisons are scaled
    // by the largest diagonal entry).
    let mut worst_fourier: f64 = 0.0;
    let mut worst_diag: f64 = 0.0;
    for (d, n_max) in [(1usize, 8usize), (2, 4), (3, 2)] {
        for n in 1..=n_max {
            let spec = BasisSpec::new(BasisFamily::FourierTensor, n, d).unwrap();
            for s in 0..=2 {
                let gram = gram_hs(&spec, s).unwrap();
                let q = gram_hs_dense_quadrature(&spec, s, 6 * n + 12).unwrap();
                let scale = (0..spec.len())
                    .map(|m| gram.entry(m, m))
                    .fold(1.0f64, f64::max);
                for m in 0..spec.len() {
                    for l in 0..spec.len() {
                        if m != l {
                            worst_fourier = worst_fourier.max(gram.entry(m, l).abs());
                            worst_fourier = worst_fourier.max(q[(m, l)].abs() / scale);
                        } else {
                            worst_diag =
                                worst_diag.max((q[(m, m)] - gram.entry(m, m)).abs() / scale);
                        }
                    }
                }
            }
        }
    }
    let pass = worst_legendre < 1e-10 && worst_fourier < 1e-12 && worst_diag < 1e-10;
    verdict(
        1,
        "orthonormality & Gram",
        pass,
        &format!(
            "Legendre max |G - I| = {worst_legendre:.2e} (tol 1e-10), Fourier max off-diagonal = {worst_fourier:.2e} (tol 1e-12), diagonal cross-check {worst_diag:.2e}"
        ),
        started,
    );
}

/// Direct quadrature of `<M, phi>` and `<f_M, phi>` on a refined mesh at
/// high degree; the independent reference for pairing checks.
fn oracle_pairings(
    mf: &ManifoldFunction,
    phi: &dyn mfe_core::basis::ScalarField,
    per_axis_degree: usize,
) -> (f64, f64) {
    let levels = if mf.manifold.intrinsic_dim() <= 1 { 2 } else { 1 };
    let refined = refine_times(mf, levels).unwrap();
    let degree = 4 * per_axis_degree * mf.manifold.ambient_dim();
    let rule = quadrature_nodes(&refined.manifold, degree).unwrap();
    let mut shape = 0.0;
    let mut function = 0.0;
    for i in 0..rule.len() {
        let w = rule.weight(i);
        let pv = phi.eval(rule.point(i));
        shape += w * pv;
        function += w * refined.value_at(rule.simplex(i), rule.bary(i)) * pv;
    }
    (shape, function)
}

fn random_manifold(rng: &mut ChaCha8Rng, d: usize, k: usize, lo: f64, hi: f64) -> ManifoldFunction {
    let span = hi - lo;
    let mut point = |rng: &mut ChaCha8Rng| -> Vec<f64> {
        (0..d).map(|_| lo + span * rng.gen::<f64>()).collect()
    };
    let manifold = match k {
        0 => {
            let count = rng.gen_range(1..=4);
            let mut vertices = Vec::new();
            for _ in 0..count {
                vertices.extend(point(rng));
            }
            SimplicialManifold::new(d, 0, vertices, (0..count).map(|i| vec![i]).collect()).unwrap()
        }
        1 => {
            let segments = rng.gen_range(1..=4);
            let mut vertices = point(rng);
            let mut simplices = Vec::new();
            for s in 0..segments {
                loop {
                    let cand = point(rng);
                    let prev = &vertices[s * d..(s + 1) * d];
                    let dist: f64 = cand
                        .iter()
                        .zip(prev)
                        .map(|(a, b)| (a - b) * (a - b))
                        .sum::<f64>()
                        .sqrt();
                    if dist > 0.05 {
                        vertices.extend(cand);
                        break;
                    }
                }
                simplices.push(vec![s, s + 1]);
            }
            SimplicialManifold::new(d, 1, vertices, simplices).unwrap()
        }
        _ => {
            // One simplex of dimension k with a non-degeneracy floor.
            loop {
                let mut vertices = Vec::new();
                for _ in 0..=k {
                    vertices.extend(point(rng));
                }
                let man =
                    SimplicialManifold::new(d, k, vertices, vec![(0..=k).collect()]).unwrap();
                if man.simplex_measure_at(0).map(|m| m > 1e-3).unwrap_or(false) {
                    break man;
                }
            }
        }
    };
    let values = (0..manifold.vertex_count())
        .map(|_| rng.gen_range(-2.0..2.0))
        .collect();
    ManifoldFunction::new(manifold, values).unwrap()
}

#[test]
fn criterion_2_pairing_identity() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst: f64 = 0.0;
    let cases = 200;
    for case in 0..cases {
        let d = rng.gen_range(1..=3usize);
        let k = rng.gen_range(0..=d);
        let fourier = d <= 2 && rng.gen_bool(0.2);
        let (family, lo, hi) = if fourier {
            (BasisFamily::FourierTensor, 0.15, 0.85)
        } else {
            (BasisFamily::LegendreTensor, 0.02, 0.98)
        };
        let n = rng.gen_range(2..=5usize);
        let s = rng.gen_range(0..=2usize);
        let mf = random_manifold(&mut rng, d, k, lo, hi);
        let spec = BasisSpec::new(family, n, d).unwrap();
        let coeffs: Vec<f64> = (0..spec.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let phi = SpanField::new(spec.clone(), coeffs);
        let encoded = encode(&mf, &spec, None).unwrap();
        let gram = gram_hs(&spec, s).unwrap();
        let dual = DualRepresentation::new(&encoded, &gram).unwrap();
        let (ref_shape, ref_function) =
            oracle_pairings(&mf, &phi, mfe_core::encoder::default_degree(&spec));
        for (block, reference) in [(Block::Shape, ref_shape), (Block::Function, ref_function)] {
            let got = dual.pair(block, &phi).unwrap();
            let rel = (got - reference).abs() / reference.abs().max(1e-2);
            if rel > worst {
                worst = rel;
            }
            assert!(
                rel < 1e-8,
                "case {case}: d={d} k={k} n={n} s={s} fourier={fourier} block={block:?}: {got} vs {reference} (rel {rel:.2e})"
            );
        }
    }
    verdict(
        2,
        "pairing identity",
        worst < 1e-8,
        &format!("{cases} random cases, worst relative deviation {worst:.2e} (tol 1e-8)"),
        started,
    );
}

#[test]
fn criterion_3_super_algebraic_rate() {
    let started = Instant::now();
    let circle = shapes::circle_boundary([0.5, 0.5], 0.3, 2048);
    let mf = ManifoldFunction::from_field(circle.manifold, |x| (3.0 * x[0] + x[1]).sin() + 0.5);
    let ns = [4usize, 6, 8, 10, 12, 14, 16];
    let phi = ExpSum;
    let legendre = convergence_study(
        &mf,
        BasisFamily::LegendreTensor,
        2,
        &[("expsum", &phi)],
        &ns,
    )
    .unwrap();
    let periodic = PeriodicExpSine;
    let fourier = convergence_study(
        &mf,
        BasisFamily::FourierTensor,
        2,
        &[("periodic", &periodic)],
        &ns,
    )
    .unwrap();
    let mut details = String::new();
    let mut pass = true;
    for (label, study) in [("legendre", &legendre), ("fourier", &fourier)] {
        for slope in &study.slopes {
            let v = slope.slope.unwrap_or(f64::NEG_INFINITY);
            pass &= v <= -4.0;
            details.push_str(&format!("{label}/{} {:.2}; ", slope.block.name(), v));
        }
    }
    verdict(
        3,
        "super-algebraic rate",
        pass,
        &format!("fitted slopes (tol <= -4): {details}"),
        started,
    );
}

#[test]
fn criterion_4_consistency() {
    let started = Instant::now();
    let spec = BasisSpec::new(BasisFamily::LegendreTensor, 6, 2).unwrap();
    let radii = [0.08, 0.04, 0.02, 0.01];
    let deviations = consistency_check(&[0.5, 0.5], &radii, &spec).unwrap();
    let mut pass = true;
    let mut details = String::new();
    for w in deviations.windows(2) {
        let ratio = w[0] / w[1];
        pass &= (3.0..=5.0).contains(&ratio);
        details.push_str(&format!("{ratio:.2} "));
    }
    verdict(
        4,
        "shrinking-ball consistency",
        pass,
        &format!("deviation ratios across r halvings: {details}(window [3, 5])"),
        started,
    );
}

#[test]
fn criterion_5_monte_carlo_rate() {
    let started = Instant::now();
    let circle = shapes::circle_boundary([0.5, 0.5], 0.3, 512);
    let mf = ManifoldFunction::from_field(circle.manifold, |x| (2.0 * x[0] - x[1]).cos());
    let spec = BasisSpec::new(BasisFamily::LegendreTensor, 4, 2).unwrap();
    let study = mc_vs_quadrature(&mf, &spec, &[100, 1000, 10_000, 100_000], 16, 0).unwrap();
    let pass = (-0.65..=-0.35).contains(&study.slope);
    verdict(
        5,
        "Monte Carlo rate",
        pass,
        &format!("fitted slope {:.3} (window -0.5 +/- 0.15)", study.slope),
        started,
    );
}

#[test]
fn criterion_6_gradient_check() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(66);
    let mut worst: f64 = 0.0;
    for config in 0..20u64 {
        let activation = if config % 3 == 2 {
            neuralop::Activation::Relu
        } else {
            neuralop::Activation::Tanh
        };
        let p = rng.gen_range(2..=4usize);
        let out_rows = if rng.gen_bool(0.5) { None } else { Some(2) };
        let branch_count = rng.gen_range(1..=3usize);
        let branches: Vec<neuralop::BranchSpec> = (0..branch_count)
            .map(|b| {
                let width = rng.gen_range(1..=3usize);
                if b == 1 {
                    neuralop::BranchSpec::Linear { rows: p, cols: width }
                } else {
                    neuralop::BranchSpec::Mlp(neuralop::MlpSpec::new(
                        vec![width, rng.gen_range(2..=5), p],
                        activation,
                    ))
                }
            })
            .collect();
        let spec = neuralop::MioNetSpec {
            branches: branches.clone(),
            trunk: neuralop::MlpSpec::new(vec![1, rng.gen_range(2..=5), p], activation),
            output_rows: out_rows,
        };
        let params = MioNetParams::init(&spec, 1000 + config).unwrap();
        let od = out_rows.unwrap_or(1);
        let nq = rng.gen_range(1..=3usize);
        let batch: Vec<neuralop::OperatorSample> = (0..rng.gen_range(1..=2usize))
            .map(|_| neuralop::OperatorSample {
                branch_inputs: branches
                    .iter()
                    .map(|b| {
                        let width = match b {
                            neuralop::BranchSpec::Mlp(m) => m.widths[0],
                            neuralop::BranchSpec::Linear { cols, .. } => *cols,
                        };
                        (0..width).map(|_| rng.gen_range(-1.0..1.0)).collect()
                    })
                    .collect(),
                queries: (0..nq).map(|_| rng.gen_range(0.0..1.0)).collect(),
                targets: (0..nq * od).map(|_| rng.gen_range(-1.0..1.0)).collect(),
                weights: (0..nq).map(|_| rng.gen_range(0.1..1.0)).collect(),
            })
            .collect();
        let refs: Vec<&neuralop::OperatorSample> = batch.iter().collect();
        let (grad, _) = mionet_gradient(&params, &refs, 1, od, refs.len()).unwrap();
        let loss_of =
            |p: &MioNetParams| mionet_gradient(p, &refs, 1, od, refs.len()).unwrap().1;
        let h = 1e-5;
        let grad_slices = grad.param_slices();
        for (si, slice) in params.param_slices().iter().enumerate() {
            for idx in 0..slice.len() {
                let mut plus = params.clone();
                plus.param_slices_mut()[si][idx] += h;
                let mut minus = params.clone();
                minus.param_slices_mut()[si][idx] -= h;
                let fd = (loss_of(&plus) - loss_of(&minus)) / (2.0 * h);
                let an = grad_slices[si][idx];
                let rel = (fd - an).abs() / fd.abs().max(an.abs()).max(1e-3);
                if rel > worst {
                    worst = rel;
                }
            }
        }
    }
    verdict(
        6,
        "gradient check",
        worst < 1e-5,
        &format!("20 configurations, worst relative deviation {worst:.2e} (tol 1e-5)"),
        started,
    );
}

#[test]
fn criterion_7_desk_scale_operator_learning() {
    let started = Instant::now();
    let train_set = neuralop::gen_poisson1d_dataset(2000, 8, 1).unwrap();
    let test_set = neuralop::gen_poisson1d_dataset(500, 8, 2).unwrap();
    let preset = neuralop::poisson::Preset::Desk;
    let spec = neuralop::poisson::poisson_net_spec(preset, test_set.meta.basis.as_ref().unwrap().len());
    let cfg = neuralop::poisson::preset_train_config(preset, 3);
    let mut params = MioNetParams::init(&spec, 3).unwrap();
    let report = neuralop::train(&mut params, &train_set, &cfg).unwrap();
    let eval = neuralop::evaluate_relative_l2(&params, &test_set).unwrap();
    let pass = eval.mean <= 0.10;
    verdict(
        7,
        "desk-scale operator learning",
        pass,
        &format!(
            "mean relative L2 test error {:.4} over {} samples ({} excluded, final train loss {:.2e}; tol <= 0.10)",
            eval.mean,
            eval.per_sample.len(),
            eval.excluded,
            report.loss_history.last().unwrap()
        ),
        started,
    );
}

fn point_segment_distance(p: &[f64], a: &[f64], b: &[f64]) -> f64 {
    let ab: Vec<f64> = a.iter().zip(b).map(|(x, y)| y - x).collect();
    let ap: Vec<f64> = a.iter().zip(p).map(|(x, y)| y - x).collect();
    let denom: f64 = ab.iter().map(|v| v * v).sum();
    let t = if denom > 0.0 {
        (ab.iter().zip(&ap).map(|(x, y)| x * y).sum::<f64>() / denom).clamp(0.0, 1.0)
    } else {
        0.0
    };
    ap.iter()
        .zip(&ab)
        .map(|(apv, abv)| (apv - t * abv) * (apv - t * abv))
        .sum::<f64>()
        .sqrt()
}

fn min_distance_to_edges(man: &SimplicialManifold, point: &[f64]) -> f64 {
    let mut best = f64::INFINITY;
    for simplex in man.simplices() {
        for i in 0..simplex.len() {
            for j in (i + 1)..simplex.len() {
                let d = point_segment_distance(point, man.vertex(simplex[i]), man.vertex(simplex[j]));
                best = best.min(d);
            }
        }
    }
    best
}

#[test]
fn criterion_8_reconstruction_locality() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut pentagon = shapes::regular_polygon_boundary([0.35, 0.65], 0.18, 5, 16);
    for v in pentagon.values.iter_mut() {
        *v = rng.gen_range(0.5..1.5);
    }
    let mut disk = shapes::disk([0.65, 0.3], 0.15, 6, 48);
    for v in disk.values.iter_mut() {
        *v = rng.gen_range(-1.0..1.0);
    }
    let bump_center = [0.17, 0.17];
    let bump_radius = 0.22;
    let clearance = min_distance_to_edges(&pentagon.manifold, &bump_center)
        .min(min_distance_to_edges(&disk.manifold, &bump_center))
        - bump_radius;
    assert!(
        clearance >= 0.1,
        "bump support must sit at least 0.1 away from both manifolds (got {clearance:.3})"
    );
    let bump = RadialBump {
        center: bump_center.to_vec(),
        radius: bump_radius,
    };
    // Decay of the bump pairing with n, through the L^2 decoder.
    let mut pairings = Vec::new();
    for n in [8usize, 12, 16, 20] {
        let spec = BasisSpec::new(BasisFamily::LegendreTensor, n, 2).unwrap();
        let jmf = JointManifoldFunction::new(2)
            .with_part(pentagon.clone())
            .unwrap()
            .with_part(disk.clone())
            .unwrap();
        let encoded = encode_joint(&jmf, &spec, None).unwrap();
        let gram = gram_hs(&spec, 0).unwrap();
        let dual = DualRepresentation::new(&encoded, &gram).unwrap();
        let shape = dual.pair(Block::Shape, &bump).unwrap().abs();
        let function = dual.pair(Block::Function, &bump).unwrap().abs();
        pairings.push((n, shape, function));
    }
    let (_, final_shape, final_function) = *pairings.last().unwrap();
    let decayed = final_shape < 1e-4
        && final_function < 1e-4
        && final_shape < pairings[0].1
        && final_function < pairings[0].2;

    // PGM grids via the CLI for n in {8, 16, 32}.
    let dir = tempfile::tempdir().unwrap();
    let pent_path = dir.path().join("pentagon.json");
    let disk_path = dir.path().join("disk.json");
    mfe_core::io::save_manifold(&pentagon, Some("pentagon"), &pent_path).unwrap();
    mfe_core::io::save_manifold(&disk, Some("disk"), &disk_path).unwrap();
    let mut pgm_ok = true;
    for n in [8usize, 16, 32] {
        let enc_path = dir.path().join(format!("joint{n}.mfe"));
        let out_prefix = dir.path().join(format!("recon{n}"));
        run_ok(&[
            "encode",
            "--mesh",
            pent_path.to_str().unwrap(),
            "--joint",
            disk_path.to_str().unwrap(),
            "--family",
            "legendre",
            "--n",
            &n.to_string(),
            "--out",
            enc_path.to_str().unwrap(),
        ]);
        run_ok(&[
            "reconstruct",
            "--encoded",
            enc_path.to_str().unwrap(),
            "--grid",
            "128",
            "--log-transform",
            "--out",
            out_prefix.to_str().unwrap(),
        ]);
        for block in ["shape", "function"] {
            let pgm = std::fs::read(dir.path().join(format!("recon{n}.{block}.pgm"))).unwrap();
            let header_ok = pgm.starts_with(b"P5\n128 128\n255\n");
            let pixels = &pgm[b"P5\n128 128\n255\n".len()..];
            let distinct = {
                let mut seen = [false; 256];
                for &b in pixels {
                    seen[b as usize] = true;
                }
                seen.iter().filter(|&&s| s).count()
            };
            pgm_ok &= header_ok && pixels.len() == 128 * 128 && distinct >= 2;
        }
    }
    verdict(
        8,
        "reconstruction locality",
        decayed && pgm_ok,
        &format!(
            "bump pairings |shape|, |function| at n=20: {final_shape:.2e}, {final_function:.2e} (tol 1e-4); PGM grids valid: {pgm_ok}"
        ),
        started,
    );
}

fn mfe_bin() -> &'static str {
    env!("CARGO_BIN_EXE_mfe")
}

fn run_ok(args: &[&str]) -> String {
    let output = Command::new(mfe_bin())
        .args(args)
        .output()
        .expect("spawn mfe");
    assert!(
        output.status.success(),
        "mfe {:?} failed: {}",
        args,
        String::from_utf8_lossy(&output.stderr)
    );
    String::from_utf8_lossy(&output.stdout).into_owned()
}

/// Runs a pipeline step twice into separate files and demands identical
/// bytes and identical stdout.
fn assert_deterministic(dir: &Path, args: &[&str], outputs: &[&str]) {
    let patch = |run: usize, s: &str| s.replace("{run}", &run.to_string());
    let mut stdouts = Vec::new();
    for run in 0..2 {
        let args_run: Vec<String> = args.iter().map(|a| patch(run, a)).collect();
        let arg_refs: Vec<&str> = args_run.iter().map(|s| s.as_str()).collect();
        stdouts.push(run_ok(&arg_refs));
    }
    assert_eq!(stdouts[0], stdouts[1], "stdout differs for {args:?}");
    for output in outputs {
        let a = std::fs::read(dir.join(patch(0, output))).unwrap();
        let b = std::fs::read(dir.join(patch(1, output))).unwrap();
        assert_eq!(a, b, "output {output} differs for {args:?}");
    }
}

#[test]
fn criterion_9_cli_determinism() {
    let started = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let base = dir.path();
    let mesh = base.join("circle.json");
    let mf = ManifoldFunction::from_field(
        shapes::circle_boundary([0.5, 0.5], 0.3, 64).manifold,
        |x| (x[0] + 2.0 * x[1]).sin(),
    );
    mfe_core::io::save_manifold(&mf, Some("circle"), &mesh).unwrap();
    let cloud = base.join("cloud.csv");
    std::fs::write(&cloud, "0.21,0.34,1.5\n0.72,0.55,-0.25\n0.4,0.9,0.0\n0.11,0.62,2.25\n").unwrap();
    let p = |name: &str| base.join(name).to_str().unwrap().to_string();

    assert_deterministic(
        base,
        &[
            "encode", "--mesh", &p("circle.json"), "--family", "legendre", "--n", "4", "--out",
            &p("enc{run}.mfe"),
        ],
        &["enc{run}.mfe"],
    );
    assert_deterministic(
        base,
        &[
            "encode", "--pointcloud", &p("cloud.csv"), "--seed", "5", "--family", "legendre",
            "--n", "3", "--out", &p("cloud{run}.mfe"),
        ],
        &["cloud{run}.mfe"],
    );
    assert_deterministic(
        base,
        &[
            "reconstruct", "--encoded", &p("enc0.mfe"), "--grid", "48", "--log-transform",
            "--out", &p("rec{run}"),
        ],
        &[
            "rec{run}.shape.csv",
            "rec{run}.shape.pgm",
            "rec{run}.function.csv",
            "rec{run}.function.pgm",
        ],
    );
    assert_deterministic(
        base,
        &[
            "study", "--mesh", &p("circle.json"), "--family", "legendre", "--s", "1",
            "--n-list", "3,4,5", "--test-fn", "expsum", "--out", &p("rates{run}.csv"),
        ],
        &["rates{run}.csv"],
    );
    assert_deterministic(
        base,
        &[
            "consistency", "--point", "0.5,0.5", "--radii", "0.08,0.04", "--n", "4", "--out",
            &p("cons{run}.csv"),
        ],
        &["cons{run}.csv"],
    );
    assert_deterministic(
        base,
        &[
            "mc-study", "--mesh", &p("circle.json"), "--n", "3", "--N-list", "50,100,200",
            "--seeds", "3", "--seed", "1", "--out", &p("mc{run}.csv"),
        ],
        &["mc{run}.csv"],
    );
    assert_deterministic(
        base,
        &[
            "gen-data", "--problem", "poisson1d", "--count", "6", "--n", "4", "--seed", "5",
            "--out", &p("data{run}.json"),
        ],
        &["data{run}.json"],
    );
    assert_deterministic(
        base,
        &[
            "train", "--data", &p("data0.json"), "--preset", "desk", "--seed", "2", "--out",
            &p("model{run}.json"),
        ],
        &["model{run}.json"],
    );
    assert_deterministic(
        base,
        &["evaluate", "--model", &p("model0.json"), "--data", &p("data0.json")],
        &[],
    );
    verdict(
        9,
        "CLI determinism",
        true,
        "nine pipelines re-run byte-identically under fixed seeds",
        started,
    );
}
