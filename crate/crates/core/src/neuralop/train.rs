//! Minibatch Adam training and relative-error evaluation.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::adam::{AdamConfig, AdamState};
use super::{mionet_gradient, MioNetParams, NetError, OperatorDataset, OperatorSample};

/// `Deterministic` accumulates gradients single-threaded in sample order
/// (bit-reproducible); `Fast` reduces over parallel chunks, so summation
/// order is unspecified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TrainMode {
    Deterministic,
    Fast,
}

/// Learning-rate schedule over the run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum LrSchedule {
    Constant,
    /// Cosine decay from the base rate down to `floor * base`.
    Cosine { floor: f64 },
}

impl LrSchedule {
    fn rate(&self, base: f64, iteration: usize, total: usize) -> f64 {
        match self {
            LrSchedule::Constant => base,
            LrSchedule::Cosine { floor } => {
                let t = iteration as f64 / total.max(1) as f64;
                let low = floor * base;
                low + 0.5 * (base - low) * (1.0 + (std::f64::consts::PI * t).cos())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub adam: AdamConfig,
    pub schedule: LrSchedule,
    pub batch_size: usize,
    pub iterations: usize,
    pub seed: u64,
    pub mode: TrainMode,
}

#[derive(Debug, Clone)]
pub struct TrainReport {
    pub loss_history: Vec<f64>,
}

/// Minimizes the mean weighted squared error over the dataset.
/// Deterministic given (seed, config, dataset) in deterministic mode.
pub fn train(
    params: &mut MioNetParams,
    dataset: &OperatorDataset,
    cfg: &TrainConfig,
) -> Result<TrainReport, NetError> {
    dataset.validate()?;
    if dataset.samples.is_empty() {
        return Err(NetError::EmptyBatch);
    }
    if cfg.batch_size == 0 {
        return Err(NetError::BadConfig("batch size must be positive".into()));
    }
    let n = dataset.samples.len();
    let batch_size = cfg.batch_size.min(n);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut order: Vec<usize> = (0..n).collect();
    let mut cursor = n; // force an initial shuffle
    let mut state = AdamState::new(params.param_count());
    let mut loss_history = Vec::with_capacity(cfg.iterations);
    for iteration in 0..cfg.iterations {
        if cursor + batch_size > n {
            order.shuffle(&mut rng);
            cursor = 0;
        }
        let batch: Vec<&OperatorSample> = order[cursor..cursor + batch_size]
            .iter()
            .map(|&i| &dataset.samples[i])
            .collect();
        cursor += batch_size;
        let (grad, loss) = match cfg.mode {
            TrainMode::Deterministic => mionet_gradient(
                params,
                &batch,
                dataset.query_dim,
                dataset.output_dim,
                batch.len(),
            )?,
            TrainMode::Fast => {
                let chunk = batch.len().div_ceil(rayon::current_num_threads()).max(1);
                batch
                    .par_chunks(chunk)
                    .map(|part| {
                        mionet_gradient(
                            params,
                            part,
                            dataset.query_dim,
                            dataset.output_dim,
                            batch.len(),
                        )
                    })
                    .try_reduce(
                        || (params.zeros_like(), 0.0),
                        |(mut ga, la), (gb, lb)| {
                            ga.add_assign(&gb);
                            Ok((ga, la + lb))
                        },
                    )?
            }
        };
        if !loss.is_finite() {
            return Err(NetError::Divergence { iteration, loss });
        }
        loss_history.push(loss);
        let step_cfg = AdamConfig {
            lr: cfg.schedule.rate(cfg.adam.lr, iteration, cfg.iterations),
            ..cfg.adam
        };
        let grad_slices = grad.param_slices();
        let mut param_slices = params.param_slices_mut();
        state.step(
            &step_cfg,
            param_slices
                .iter_mut()
                .flat_map(|s| s.iter_mut())
                .zip(grad_slices.iter().flat_map(|s| s.iter()).copied()),
        );
    }
    Ok(TrainReport { loss_history })
}

/// Predictions for every query of one sample.
pub fn predict_sample(
    params: &MioNetParams,
    sample: &OperatorSample,
    query_dim: usize,
) -> Result<Vec<f64>, NetError> {
    if sample.branch_inputs.len() != params.branches.len() {
        return Err(NetError::BranchCountMismatch {
            expected: params.branches.len(),
            got: sample.branch_inputs.len(),
        });
    }
    let p = params.latent_dim();
    let mut combined = vec![1.0; p];
    for (branch, input) in params.branches.iter().zip(&sample.branch_inputs) {
        let b = super::branch_forward(branch, input)?;
        for (c, bi) in combined.iter_mut().zip(&b) {
            *c *= bi;
        }
    }
    let nq = sample.weights.len();
    let out_dim = params.output_dim();
    let mut preds = Vec::with_capacity(nq * out_dim);
    for q in 0..nq {
        let t = params
            .trunk
            .forward(&sample.queries[q * query_dim..(q + 1) * query_dim]);
        let latent: Vec<f64> = (0..p).map(|i| combined[i] * t[i]).collect();
        match &params.output {
            super::OutputHead::Sum => preds.push(latent.iter().sum()),
            super::OutputHead::Matrix(w) => preds.extend(w.matvec(&latent)),
        }
    }
    Ok(preds)
}

/// Targets with weighted norm below this are excluded from relative
/// errors (and counted).
pub const DEGENERATE_TARGET_NORM: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct EvalReport {
    /// Per-sample relative error; `None` marks an excluded sample.
    pub per_sample: Vec<Option<f64>>,
    pub mean: f64,
    pub excluded: usize,
}

/// Mean over samples of `||pred - target||_w / ||target||_w`.
pub fn evaluate_relative_l2(
    params: &MioNetParams,
    dataset: &OperatorDataset,
) -> Result<EvalReport, NetError> {
    dataset.validate()?;
    let mut per_sample = Vec::with_capacity(dataset.samples.len());
    let mut sum = 0.0;
    let mut included = 0usize;
    for sample in &dataset.samples {
        let preds = predict_sample(params, sample, dataset.query_dim)?;
        let mut num = 0.0;
        let mut den = 0.0;
        let od = dataset.output_dim;
        for q in 0..sample.weights.len() {
            let w = sample.weights[q];
            for r in 0..od {
                let p = preds[q * od + r];
                let t = sample.targets[q * od + r];
                num += w * (p - t) * (p - t);
                den += w * t * t;
            }
        }
        if den.sqrt() < DEGENERATE_TARGET_NORM {
            per_sample.push(None);
        } else {
            let rel = (num / den).sqrt();
            per_sample.push(Some(rel));
            sum += rel;
            included += 1;
        }
    }
    if included == 0 {
        return Err(NetError::AllTargetsDegenerate);
    }
    Ok(EvalReport {
        mean: sum / included as f64,
        excluded: per_sample.len() - included,
        per_sample,
    })
}
