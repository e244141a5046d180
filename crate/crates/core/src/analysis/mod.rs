//! Empirical verification of the encoder's convergence behavior:
//! log-log rate studies against quadrature oracles, shrinking-ball
//! consistency checks, and Monte Carlo vs quadrature comparisons.

use rand::SeedableRng;
use thiserror::Error;

pub mod fields;

use crate::basis::{gram_hs, BasisError, BasisFamily, BasisSpec, ScalarField};
use crate::decoder::{DecodeError, DualRepresentation};
use crate::encoder::{encode, encode_pointcloud, Block, EncodeError};
use crate::geometry::{
    hausdorff_measure, quadrature_nodes, refine_times, sampling::sample_uniform, shapes,
    GeometryError, ManifoldFunction,
};

/// Errors below this are treated as numerical floor and excluded from
/// rate fits.
pub const ERROR_FLOOR: f64 = 1e-13;

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("rate fit needs at least 3 points above the error floor, found {0}")]
    InsufficientPoints(usize),
    #[error("study needs at least 3 basis orders, got {0}")]
    TooFewOrders(usize),
    #[error("basis orders must be strictly increasing")]
    OrdersNotIncreasing,
    #[error("ball of radius {radius} around the point exits the unit box on axis {axis}")]
    BallExitsDomain { axis: usize, radius: f64 },
    #[error("consistency check supports d <= 2 (ball meshes), got d = {0}")]
    BallDimensionUnsupported(usize),
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error(transparent)]
    Basis(#[from] BasisError),
    #[error(transparent)]
    Decode(#[from] DecodeError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// One measured error in a rate study.
#[derive(Debug, Clone)]
pub struct RateRow {
    pub n: usize,
    /// Total encoded length `2 kappa(n)` (both blocks).
    pub encoded_len: usize,
    pub block: Block,
    pub test_fn: String,
    pub error: f64,
}

/// Fitted slope for one (block, test function) series; `None` when too
/// few errors sit above the floor (the test function lies in the span).
#[derive(Debug, Clone)]
pub struct SlopeRow {
    pub block: Block,
    pub test_fn: String,
    pub slope: Option<f64>,
    pub points_used: usize,
}

/// Result of a convergence study over a list of basis orders.
#[derive(Debug)]
pub struct RateStudy {
    pub family: BasisFamily,
    pub s: usize,
    pub ns: Vec<usize>,
    pub rows: Vec<RateRow>,
    pub slopes: Vec<SlopeRow>,
}

impl RateStudy {
    pub fn errors_for(&self, block: Block, test_fn: &str) -> Vec<f64> {
        self.ns
            .iter()
            .map(|&n| {
                self.rows
                    .iter()
                    .find(|r| r.n == n && r.block == block && r.test_fn == test_fn)
                    .map(|r| r.error)
                    .unwrap_or(f64::NAN)
            })
            .collect()
    }
}

/// Quadrature oracle for `<(M, f), phi>`: the same manifold refined
/// fourfold, integrated at four times the study's per-axis degree.
/// Refinement leaves the point set and the PL function unchanged, so
/// this is a pure quadrature cross-check.
fn oracle_references(
    mf: &ManifoldFunction,
    phi: &dyn ScalarField,
    per_axis_degree: usize,
) -> Result<(f64, f64), AnalysisError> {
    let levels = if mf.manifold.intrinsic_dim() <= 1 { 2 } else { 1 };
    let refined = refine_times(mf, levels)?;
    let degree = 4 * per_axis_degree * mf.manifold.ambient_dim();
    let rule = quadrature_nodes(&refined.manifold, degree)?;
    let mut shape = 0.0;
    let mut function = 0.0;
    for i in 0..rule.len() {
        let w = rule.weight(i);
        let pv = phi.eval(rule.point(i));
        shape += w * pv;
        function += w * refined.value_at(rule.simplex(i), rule.bary(i)) * pv;
    }
    Ok((shape, function))
}

/// Runs the encoder at every order in `n_list` and measures the pairing
/// error against quadrature oracles for each test function and block.
pub fn convergence_study(
    mf: &ManifoldFunction,
    family: BasisFamily,
    s: usize,
    test_functions: &[(&str, &dyn ScalarField)],
    n_list: &[usize],
) -> Result<RateStudy, AnalysisError> {
    if n_list.len() < 3 {
        return Err(AnalysisError::TooFewOrders(n_list.len()));
    }
    if n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(AnalysisError::OrdersNotIncreasing);
    }
    let d = mf.manifold.ambient_dim();
    let mut rows = Vec::new();
    // Oracle references are n-independent; compute once per test function
    // at the degree of the largest study order.
    let max_degree = crate::encoder::default_degree(&BasisSpec::new(
        family,
        *n_list.last().unwrap(),
        d,
    )?);
    let mut references = Vec::new();
    for (name, phi) in test_functions {
        references.push((*name, oracle_references(mf, *phi, max_degree)?));
    }
    for &n in n_list {
        let spec = BasisSpec::new(family, n, d)?;
        let encoded = encode(mf, &spec, None)?;
        let gram = gram_hs(&spec, s)?;
        let dual = DualRepresentation::new(&encoded, &gram)?;
        for ((name, phi), (_, (ref_shape, ref_function))) in
            test_functions.iter().zip(&references)
        {
            for (block, reference) in [(Block::Shape, *ref_shape), (Block::Function, *ref_function)]
            {
                let error = dual.reconstruction_error(block, *phi, reference)?;
                rows.push(RateRow {
                    n,
                    encoded_len: 2 * spec.len(),
                    block,
                    test_fn: name.to_string(),
                    error,
                });
            }
        }
    }
    let mut slopes = Vec::new();
    for (name, _) in test_functions {
        for block in [Block::Shape, Block::Function] {
            let errors: Vec<f64> = n_list
                .iter()
                .map(|&n| {
                    rows.iter()
                        .find(|r| r.n == n && r.block == block && r.test_fn == *name)
                        .unwrap()
                        .error
                })
                .collect();
            let points_used = errors.iter().filter(|&&e| e > ERROR_FLOOR).count();
            slopes.push(SlopeRow {
                block,
                test_fn: name.to_string(),
                slope: estimate_rate(&errors, n_list).ok(),
                points_used,
            });
        }
    }
    Ok(RateStudy {
        family,
        s,
        ns: n_list.to_vec(),
        rows,
        slopes,
    })
}

/// Ordinary least-squares slope of `log(error)` against `log(n)`,
/// excluding floor entries.
pub fn estimate_rate(errors: &[f64], ns: &[usize]) -> Result<f64, AnalysisError> {
    let pts: Vec<(f64, f64)> = ns
        .iter()
        .zip(errors)
        .filter(|(_, &e)| e > ERROR_FLOOR)
        .map(|(&n, &e)| ((n as f64).ln(), e.ln()))
        .collect();
    if pts.len() < 3 {
        return Err(AnalysisError::InsufficientPoints(pts.len()));
    }
    let count = pts.len() as f64;
    let mean_x: f64 = pts.iter().map(|p| p.0).sum::<f64>() / count;
    let mean_y: f64 = pts.iter().map(|p| p.1).sum::<f64>() / count;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = pts
        .iter()
        .map(|p| (p.0 - mean_x) * (p.1 - mean_y))
        .sum();
    Ok(sxy / sxx)
}

/// Angular mesh resolution used for consistency-check balls.
const BALL_SEGMENTS: usize = 256;
const BALL_RINGS: usize = 8;

/// For each radius, the worst deviation over basis members between the
/// ball average `(1/H^d(B)) int_B phi_m` and the point value `phi_m(x)`.
/// Smooth members collapse at second order in the radius.
pub fn consistency_check(
    x: &[f64],
    radii: &[f64],
    spec: &BasisSpec,
) -> Result<Vec<f64>, AnalysisError> {
    let d = spec.dimension();
    for &r in radii {
        for (axis, &c) in x.iter().enumerate() {
            if c - r < 0.0 || c + r > 1.0 {
                return Err(AnalysisError::BallExitsDomain { axis, radius: r });
            }
        }
    }
    let k = spec.len();
    let mut point_values = vec![0.0; k];
    spec.eval_all(x, &mut point_values)?;
    let mut deviations = Vec::with_capacity(radii.len());
    for &r in radii {
        let ball = match d {
            1 => shapes::segment(&[x[0] - r], &[x[0] + r]),
            2 => shapes::disk([x[0], x[1]], r, BALL_RINGS, BALL_SEGMENTS),
            _ => return Err(AnalysisError::BallDimensionUnsupported(d)),
        };
        let volume = hausdorff_measure(&ball.manifold)?;
        let degree = d * crate::encoder::default_degree(spec);
        let rule = quadrature_nodes(&ball.manifold, degree)?;
        let mut sums = vec![0.0; k];
        let mut values = vec![0.0; k];
        for i in 0..rule.len() {
            spec.eval_all(rule.point(i), &mut values)?;
            let w = rule.weight(i);
            for m in 0..k {
                sums[m] += w * values[m];
            }
        }
        let mut worst: f64 = 0.0;
        for m in 0..k {
            worst = worst.max((sums[m] / volume - point_values[m]).abs());
        }
        deviations.push(worst);
    }
    Ok(deviations)
}

/// One row of a Monte Carlo vs quadrature comparison.
#[derive(Debug, Clone)]
pub struct McRow {
    pub samples: usize,
    pub rms_measure: f64,
    pub rms_function: f64,
    /// RMS over seeds of the max coefficient error across both blocks.
    pub rms_max: f64,
}

#[derive(Debug)]
pub struct McStudy {
    pub rows: Vec<McRow>,
    /// Slope of `log(rms_max)` vs `log(N)`.
    pub slope: f64,
}

/// Compares [`encode_pointcloud`] on uniform samples with the quadrature
/// reference (measure-normalized integrals) across sample counts, RMS
/// over `seed_count` seeded runs.
pub fn mc_vs_quadrature(
    mf: &ManifoldFunction,
    spec: &BasisSpec,
    sample_counts: &[usize],
    seed_count: usize,
    base_seed: u64,
) -> Result<McStudy, AnalysisError> {
    let reference = encode(mf, spec, None)?;
    let total = hausdorff_measure(&mf.manifold)?;
    let k = spec.len();
    let ref_measure: Vec<f64> = reference.block(Block::Shape).unwrap()[..k]
        .iter()
        .map(|v| v / total)
        .collect();
    let ref_function: Vec<f64> = reference.block(Block::Function).unwrap()[..k]
        .iter()
        .map(|v| v / total)
        .collect();
    let mut rows = Vec::with_capacity(sample_counts.len());
    for &count in sample_counts {
        let mut sq_measure = 0.0;
        let mut sq_function = 0.0;
        let mut sq_max = 0.0;
        for s in 0..seed_count {
            let seed = base_seed.wrapping_add(s as u64);
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let (points, values) = sample_uniform(mf, count, &mut rng)?;
            let cloud = encode_pointcloud(&points, &values, spec, seed)?;
            let em = max_abs_diff(cloud.block(Block::Measure).unwrap(), &ref_measure);
            let ef = max_abs_diff(cloud.block(Block::Function).unwrap(), &ref_function);
            sq_measure += em * em;
            sq_function += ef * ef;
            let m = em.max(ef);
            sq_max += m * m;
        }
        let norm = seed_count as f64;
        rows.push(McRow {
            samples: count,
            rms_measure: (sq_measure / norm).sqrt(),
            rms_function: (sq_function / norm).sqrt(),
            rms_max: (sq_max / norm).sqrt(),
        });
    }
    let errors: Vec<f64> = rows.iter().map(|r| r.rms_max).collect();
    let slope = estimate_rate(&errors, sample_counts)?;
    Ok(McStudy { rows, slope })
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::BasisFamily;

    #[test]
    fn synthetic_power_law_slope() {
        let ns = [4usize, 6, 8, 10, 12];
        let errors: Vec<f64> = ns.iter().map(|&n| (n as f64).powi(-2)).collect();
        let slope = estimate_rate(&errors, &ns).unwrap();
        assert!((slope + 2.0).abs() < 1e-9, "{slope}");
    }

    #[test]
    fn constant_errors_fit_to_zero_slope() {
        let ns = [4usize, 8, 16];
        let errors = [0.25, 0.25, 0.25];
        let slope = estimate_rate(&errors, &ns).unwrap();
        assert!(slope.abs() < 1e-12);
    }

    #[test]
    fn exponential_decay_has_steep_slope() {
        // Independent evaluation of the least-squares formula on
        // (ln n, -n) confirms a slope below -5 on this range.
        let ns = [4usize, 6, 8, 10, 12, 14, 16];
        let errors: Vec<f64> = ns.iter().map(|&n| (-(n as f64)).exp()).collect();
        let slope = estimate_rate(&errors, &ns).unwrap();
        let lx: Vec<f64> = ns.iter().map(|&n| (n as f64).ln()).collect();
        let ly: Vec<f64> = ns.iter().map(|&n| -(n as f64)).collect();
        let mx = lx.iter().sum::<f64>() / lx.len() as f64;
        let my = ly.iter().sum::<f64>() / ly.len() as f64;
        let expect = lx
            .iter()
            .zip(&ly)
            .map(|(x, y)| (x - mx) * (y - my))
            .sum::<f64>()
            / lx.iter().map(|x| (x - mx) * (x - mx)).sum::<f64>();
        assert!((slope - expect).abs() < 1e-9);
        assert!(slope < -5.0, "{slope}");
    }

    #[test]
    fn floor_entries_are_excluded() {
        let ns = [4usize, 6, 8, 10];
        let errors = [1e-2, 1e-14, 1e-3, 1e-4];
        // Only three usable points; fit succeeds on those.
        let slope = estimate_rate(&errors, &ns).unwrap();
        assert!(slope < 0.0);
        let all_floor = [1e-14, 1e-15, 1e-16, 1e-14];
        assert!(matches!(
            estimate_rate(&all_floor, &ns),
            Err(AnalysisError::InsufficientPoints(0))
        ));
    }

    #[test]
    fn polynomial_in_span_hits_floor() {
        let mf = shapes::circle_boundary([0.5, 0.5], 0.3, 512);
        let poly = fields::TotalPoly { degree: 2 };
        let study = convergence_study(
            &mf,
            BasisFamily::LegendreTensor,
            1,
            &[("poly:2", &poly)],
            &[4, 6, 8],
        )
        .unwrap();
        for row in &study.rows {
            assert!(row.error < ERROR_FLOOR * 100.0, "error {}", row.error);
        }
        // Slopes are unavailable: everything at (or near) floor.
        for s in &study.slopes {
            assert!(s.slope.is_none() || s.points_used < 3);
        }
    }

    #[test]
    fn consistency_of_constant_member_is_exact() {
        let spec = BasisSpec::new(BasisFamily::LegendreTensor, 1, 2).unwrap();
        let devs = consistency_check(&[0.5, 0.5], &[0.1, 0.05], &spec).unwrap();
        for d in devs {
            // Exact up to summation roundoff over a few thousand nodes.
            assert!(d < 1e-12, "{d}");
        }
    }

    #[test]
    fn consistency_quadratic_collapse() {
        let spec = BasisSpec::new(BasisFamily::LegendreTensor, 4, 2).unwrap();
        let devs = consistency_check(&[0.5, 0.5], &[0.08, 0.04, 0.02], &spec).unwrap();
        assert!(devs.windows(2).all(|w| w[1] < w[0]), "{devs:?}");
        for w in devs.windows(2) {
            let ratio = w[0] / w[1];
            assert!((3.0..5.0).contains(&ratio), "ratio {ratio}");
        }
    }

    #[test]
    fn ball_domain_check() {
        let spec = BasisSpec::new(BasisFamily::LegendreTensor, 3, 2).unwrap();
        assert!(matches!(
            consistency_check(&[0.05, 0.5], &[0.1], &spec),
            Err(AnalysisError::BallExitsDomain { axis: 0, .. })
        ));
    }

    #[test]
    fn mc_zero_function_has_zero_function_error() {
        let mf = shapes::circle_boundary([0.5, 0.5], 0.25, 64);
        let spec = BasisSpec::new(BasisFamily::LegendreTensor, 3, 2).unwrap();
        let study = mc_vs_quadrature(&mf, &spec, &[50, 100, 200], 4, 0).unwrap();
        for row in &study.rows {
            assert_eq!(row.rms_function, 0.0);
            assert!(row.rms_measure > 0.0);
        }
    }

    #[test]
    fn mc_study_is_seed_deterministic() {
        let mf = shapes::disk([0.5, 0.5], 0.3, 3, 16);
        let spec = BasisSpec::new(BasisFamily::LegendreTensor, 2, 2).unwrap();
        let a = mc_vs_quadrature(&mf, &spec, &[50, 100, 200], 3, 9).unwrap();
        let b = mc_vs_quadrature(&mf, &spec, &[50, 100, 200], 3, 9).unwrap();
        for (ra, rb) in a.rows.iter().zip(&b.rows) {
            assert_eq!(ra.rms_max, rb.rms_max);
        }
        assert_eq!(a.slope, b.slope);
    }
}
