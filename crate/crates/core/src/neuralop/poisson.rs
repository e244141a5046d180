//! Analytic 1-d Poisson data generator.
//!
//! Family: `-u'' = c` on a random interval `[a, b]` inside `[0,1]` with
//! zero boundary values, solved in closed form and zero-extended to the
//! whole interval.  Inputs are the interval's encoded shape vector and
//! the encoded constant source; targets are the extended solution on a
//! fixed uniform query grid with weights restricting the loss to `[a,b]`.

use rand::{Rng, SeedableRng};

use super::{
    Activation, BranchSpec, DatasetMeta, MioNetSpec, MlpSpec, NetError, OperatorDataset,
    OperatorSample, TrainConfig, TrainMode,
};
use crate::basis::{BasisFamily, BasisSpec};
use crate::encoder::{encode, Block, EncodeError};
use crate::geometry::shapes;

/// Number of uniform query points per sample.
pub const QUERY_COUNT: usize = 64;

/// Closed-form solution of `-u'' = c`, `u(a) = u(b) = 0`, zero-extended.
pub fn poisson_solution(a: f64, b: f64, c: f64, x: f64) -> f64 {
    if x < a || x > b {
        0.0
    } else {
        c * (x - a) * (b - x) / 2.0
    }
}

/// One sample for a fixed interval and source strength.
pub fn poisson_sample(
    spec: &BasisSpec,
    a: f64,
    b: f64,
    c: f64,
) -> Result<OperatorSample, NetError> {
    let mut mf = shapes::segment(&[a], &[b]);
    mf.values = vec![c, c];
    let enc = encode(&mf, spec, None).map_err(EncodeError::from)?;
    let shape = enc.block(Block::Shape).unwrap().to_vec();
    let function = enc.block(Block::Function).unwrap().to_vec();
    let dx = 1.0 / (QUERY_COUNT - 1) as f64;
    let mut queries = Vec::with_capacity(QUERY_COUNT);
    let mut targets = Vec::with_capacity(QUERY_COUNT);
    let mut weights = vec![0.0; QUERY_COUNT];
    let mut inside: Vec<usize> = Vec::new();
    for j in 0..QUERY_COUNT {
        let x = j as f64 * dx;
        queries.push(x);
        targets.push(poisson_solution(a, b, c, x));
        if x >= a && x <= b {
            inside.push(j);
        }
    }
    // Trapezoid-style weights restricted to [a, b]: zero outside, halved
    // at the first and last covered grid points.
    for (pos, &j) in inside.iter().enumerate() {
        weights[j] = if pos == 0 || pos == inside.len() - 1 {
            dx / 2.0
        } else {
            dx
        };
    }
    Ok(OperatorSample {
        branch_inputs: vec![shape, function],
        queries,
        targets,
        weights,
    })
}

/// Generates `count` samples: `0.05 <= a < b <= 0.95`, `b - a >= 0.2`,
/// `c` uniform in `[-1, 1]`, encoded with a 1-d Legendre basis of
/// order `n`.
pub fn gen_poisson1d_dataset(
    count: usize,
    n: usize,
    seed: u64,
) -> Result<OperatorDataset, NetError> {
    if count < 1 {
        return Err(NetError::BadConfig("sample count must be >= 1".into()));
    }
    let spec = BasisSpec::new(BasisFamily::LegendreTensor, n, 1)
        .map_err(EncodeError::from)?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut samples = Vec::with_capacity(count);
    for _ in 0..count {
        let a = rng.gen_range(0.05..0.75);
        let b = rng.gen_range(a + 0.2..0.95);
        let c = rng.gen_range(-1.0..1.0);
        samples.push(poisson_sample(&spec, a, b, c)?);
    }
    Ok(OperatorDataset {
        query_dim: 1,
        output_dim: 1,
        meta: DatasetMeta {
            generator: "poisson1d".into(),
            seed,
            basis: Some(spec),
        },
        samples,
    })
}

/// Training scale: `Desk` fits in CI; `Paper` mirrors full-scale
/// operator-learning settings and is far outside desk budgets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Desk,
    Paper,
}

impl Preset {
    pub fn parse(name: &str) -> Result<Preset, String> {
        match name {
            "desk" => Ok(Preset::Desk),
            "paper" => Ok(Preset::Paper),
            _ => Err(format!("unknown preset '{name}' (expected desk or paper)")),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Preset::Desk => "desk",
            Preset::Paper => "paper",
        }
    }
}

/// Network blueprint for the Poisson family: a nonlinear branch on the
/// shape vector, a pure linear branch on the source vector (the operator
/// is linear in the source), and a nonlinear trunk on the query
/// coordinate.
pub fn poisson_net_spec(preset: Preset, n: usize) -> MioNetSpec {
    let (hidden, p) = match preset {
        Preset::Desk => (64usize, 64usize),
        Preset::Paper => (500, 500),
    };
    MioNetSpec {
        branches: vec![
            BranchSpec::Mlp(MlpSpec::new(
                vec![n, hidden, hidden, p],
                Activation::Tanh,
            )),
            BranchSpec::Linear { rows: p, cols: n },
        ],
        trunk: MlpSpec::new(vec![1, hidden, hidden, p], Activation::Tanh),
        output_rows: None,
    }
}

pub fn preset_train_config(preset: Preset, seed: u64) -> TrainConfig {
    match preset {
        Preset::Desk => TrainConfig {
            adam: super::AdamConfig {
                lr: 1e-3,
                ..Default::default()
            },
            schedule: super::train::LrSchedule::Cosine { floor: 0.01 },
            batch_size: 32,
            iterations: 40_000,
            seed,
            mode: TrainMode::Deterministic,
        },
        Preset::Paper => TrainConfig {
            adam: super::AdamConfig {
                lr: 1e-5,
                ..Default::default()
            },
            schedule: super::train::LrSchedule::Constant,
            batch_size: 5,
            iterations: 5_000_000,
            seed,
            mode: TrainMode::Fast,
        },
    }
}
