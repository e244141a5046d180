//! A small operator-learning stack: branch networks combined with a
//! trunk network by an elementwise product, summed or mixed by an output
//! matrix.  Everything is plain `f64` with hand-rolled reverse-mode
//! gradients, trained by Adam.

use rand::SeedableRng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub mod adam;
pub mod mlp;
pub mod poisson;
pub mod train;

pub use adam::{AdamConfig, AdamState};
pub use mlp::{Activation, Dense, Mlp, MlpCache, MlpSpec};
pub use poisson::gen_poisson1d_dataset;
pub use train::{evaluate_relative_l2, train, EvalReport, LrSchedule, TrainConfig, TrainMode, TrainReport};

use crate::encoder::EncodeError;

#[derive(Debug, Error)]
pub enum NetError {
    #[error("input width mismatch: expected {expected}, got {got}")]
    WidthMismatch { expected: usize, got: usize },
    #[error("branch count mismatch: network has {expected}, sample has {got}")]
    BranchCountMismatch { expected: usize, got: usize },
    #[error("minibatch is empty")]
    EmptyBatch,
    #[error("training diverged at iteration {iteration} (loss {loss})")]
    Divergence { iteration: usize, loss: f64 },
    #[error("every sample has a degenerate (near-zero) target norm")]
    AllTargetsDegenerate,
    #[error("bad configuration: {0}")]
    BadConfig(String),
    #[error(transparent)]
    Encode(#[from] EncodeError),
}

/// A pure matrix `y = W x`, used for branches that must stay exactly
/// linear (no bias) and for the multi-output mixing head.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearMap {
    pub rows: usize,
    pub cols: usize,
    pub weights: Vec<f64>,
}

impl LinearMap {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        LinearMap {
            rows,
            cols,
            weights: vec![0.0; rows * cols],
        }
    }

    pub fn glorot(rows: usize, cols: usize, rng: &mut impl rand::Rng) -> Self {
        let limit = (6.0 / (rows + cols) as f64).sqrt();
        LinearMap {
            rows,
            cols,
            weights: (0..rows * cols)
                .map(|_| rng.gen_range(-limit..limit))
                .collect(),
        }
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.rows];
        for r in 0..self.rows {
            let row = &self.weights[r * self.cols..(r + 1) * self.cols];
            out[r] = row.iter().zip(x).map(|(w, xi)| w * xi).sum();
        }
        out
    }

    pub fn matvec_transposed(&self, up: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.cols];
        for r in 0..self.rows {
            let row = &self.weights[r * self.cols..(r + 1) * self.cols];
            let u = up[r];
            for (o, w) in out.iter_mut().zip(row) {
                *o += u * w;
            }
        }
        out
    }

    pub fn accumulate_grad(&mut self, up: &[f64], x: &[f64]) {
        for r in 0..self.rows {
            let row = &mut self.weights[r * self.cols..(r + 1) * self.cols];
            let u = up[r];
            for (w, xi) in row.iter_mut().zip(x) {
                *w += u * xi;
            }
        }
    }

    pub fn add_assign(&mut self, other: &LinearMap) {
        for (a, b) in self.weights.iter_mut().zip(&other.weights) {
            *a += b;
        }
    }
}

/// One branch: a nonlinear network or a pure linear map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum BranchParams {
    Mlp(Mlp),
    Linear(LinearMap),
}

impl BranchParams {
    pub fn input_dim(&self) -> usize {
        match self {
            BranchParams::Mlp(m) => m.input_dim(),
            BranchParams::Linear(l) => l.cols,
        }
    }

    pub fn output_dim(&self) -> usize {
        match self {
            BranchParams::Mlp(m) => m.output_dim(),
            BranchParams::Linear(l) => l.rows,
        }
    }

    fn zeros_like(&self) -> Self {
        match self {
            BranchParams::Mlp(m) => BranchParams::Mlp(m.zeros_like()),
            BranchParams::Linear(l) => BranchParams::Linear(LinearMap::zeros(l.rows, l.cols)),
        }
    }

    fn add_assign(&mut self, other: &BranchParams) {
        match (self, other) {
            (BranchParams::Mlp(a), BranchParams::Mlp(b)) => a.add_assign(b),
            (BranchParams::Linear(a), BranchParams::Linear(b)) => a.add_assign(b),
            _ => panic!("gradient shape mismatch"),
        }
    }
}

/// Output head: sum the latent components, or mix them with a matrix
/// for multi-component outputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum OutputHead {
    Sum,
    Matrix(LinearMap),
}

/// Branch/trunk product network parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MioNetParams {
    pub branches: Vec<BranchParams>,
    pub trunk: Mlp,
    pub output: OutputHead,
}

/// Blueprint for [`MioNetParams::init`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum BranchSpec {
    Mlp(MlpSpec),
    Linear { rows: usize, cols: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MioNetSpec {
    pub branches: Vec<BranchSpec>,
    pub trunk: MlpSpec,
    /// None: scalar sum head; Some(r): r-by-p mixing matrix.
    pub output_rows: Option<usize>,
}

impl MioNetParams {
    /// Glorot initialization with a recorded seed.
    pub fn init(spec: &MioNetSpec, seed: u64) -> Result<Self, NetError> {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let branches: Vec<BranchParams> = spec
            .branches
            .iter()
            .map(|b| match b {
                BranchSpec::Mlp(m) => BranchParams::Mlp(Mlp::init(m, &mut rng)),
                BranchSpec::Linear { rows, cols } => {
                    BranchParams::Linear(LinearMap::glorot(*rows, *cols, &mut rng))
                }
            })
            .collect();
        let trunk = Mlp::init(&spec.trunk, &mut rng);
        let p = trunk.output_dim();
        for (i, b) in branches.iter().enumerate() {
            if b.output_dim() != p {
                return Err(NetError::BadConfig(format!(
                    "branch {i} outputs {} components, trunk outputs {p}",
                    b.output_dim()
                )));
            }
        }
        let output = match spec.output_rows {
            None => OutputHead::Sum,
            Some(rows) => OutputHead::Matrix(LinearMap::glorot(rows, p, &mut rng)),
        };
        Ok(MioNetParams {
            branches,
            trunk,
            output,
        })
    }

    pub fn latent_dim(&self) -> usize {
        self.trunk.output_dim()
    }

    pub fn output_dim(&self) -> usize {
        match &self.output {
            OutputHead::Sum => 1,
            OutputHead::Matrix(w) => w.rows,
        }
    }

    pub fn zeros_like(&self) -> Self {
        MioNetParams {
            branches: self.branches.iter().map(|b| b.zeros_like()).collect(),
            trunk: self.trunk.zeros_like(),
            output: match &self.output {
                OutputHead::Sum => OutputHead::Sum,
                OutputHead::Matrix(w) => OutputHead::Matrix(LinearMap::zeros(w.rows, w.cols)),
            },
        }
    }

    pub fn add_assign(&mut self, other: &MioNetParams) {
        for (a, b) in self.branches.iter_mut().zip(&other.branches) {
            a.add_assign(b);
        }
        self.trunk.add_assign(&other.trunk);
        if let (OutputHead::Matrix(a), OutputHead::Matrix(b)) = (&mut self.output, &other.output) {
            a.add_assign(b);
        }
    }

    pub fn param_count(&self) -> usize {
        let mut count = 0;
        for b in &self.branches {
            count += match b {
                BranchParams::Mlp(m) => m.param_count(),
                BranchParams::Linear(l) => l.weights.len(),
            };
        }
        count += self.trunk.param_count();
        if let OutputHead::Matrix(w) = &self.output {
            count += w.weights.len();
        }
        count
    }

    /// Parameter storage in a fixed traversal order (branches, trunk,
    /// output head); gradients produced by [`mionet_gradient`] walk the
    /// same order.
    pub fn param_slices_mut(&mut self) -> Vec<&mut [f64]> {
        let mut out = Vec::new();
        for b in &mut self.branches {
            match b {
                BranchParams::Mlp(m) => {
                    for l in &mut m.layers {
                        out.push(l.weights.as_mut_slice());
                        out.push(l.bias.as_mut_slice());
                    }
                }
                BranchParams::Linear(l) => out.push(l.weights.as_mut_slice()),
            }
        }
        for l in &mut self.trunk.layers {
            out.push(l.weights.as_mut_slice());
            out.push(l.bias.as_mut_slice());
        }
        if let OutputHead::Matrix(w) = &mut self.output {
            out.push(w.weights.as_mut_slice());
        }
        out
    }

    pub fn param_slices(&self) -> Vec<&[f64]> {
        let mut out = Vec::new();
        for b in &self.branches {
            match b {
                BranchParams::Mlp(m) => {
                    for l in &m.layers {
                        out.push(l.weights.as_slice());
                        out.push(l.bias.as_slice());
                    }
                }
                BranchParams::Linear(l) => out.push(l.weights.as_slice()),
            }
        }
        for l in &self.trunk.layers {
            out.push(l.weights.as_slice());
            out.push(l.bias.as_slice());
        }
        if let OutputHead::Matrix(w) = &self.output {
            out.push(w.weights.as_slice());
        }
        out
    }
}

fn branch_forward(branch: &BranchParams, x: &[f64]) -> Result<Vec<f64>, NetError> {
    if x.len() != branch.input_dim() {
        return Err(NetError::WidthMismatch {
            expected: branch.input_dim(),
            got: x.len(),
        });
    }
    Ok(match branch {
        BranchParams::Mlp(m) => m.forward(x),
        BranchParams::Linear(l) => l.matvec(x),
    })
}

/// Forward pass: elementwise product of all branch outputs and the
/// trunk output, then the output head.
pub fn mionet_forward(
    params: &MioNetParams,
    branch_inputs: &[Vec<f64>],
    query: &[f64],
) -> Result<Vec<f64>, NetError> {
    if branch_inputs.len() != params.branches.len() {
        return Err(NetError::BranchCountMismatch {
            expected: params.branches.len(),
            got: branch_inputs.len(),
        });
    }
    if query.len() != params.trunk.input_dim() {
        return Err(NetError::WidthMismatch {
            expected: params.trunk.input_dim(),
            got: query.len(),
        });
    }
    let mut combined = vec![1.0; params.latent_dim()];
    for (branch, input) in params.branches.iter().zip(branch_inputs) {
        let b = branch_forward(branch, input)?;
        for (c, bi) in combined.iter_mut().zip(&b) {
            *c *= bi;
        }
    }
    let t = params.trunk.forward(query);
    for (c, ti) in combined.iter_mut().zip(&t) {
        *c *= ti;
    }
    Ok(match &params.output {
        OutputHead::Sum => vec![combined.iter().sum()],
        OutputHead::Matrix(w) => w.matvec(&combined),
    })
}

/// One training sample: encoded branch inputs, query points (flattened),
/// targets (`n_queries * output_dim`) and per-query loss weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorSample {
    pub branch_inputs: Vec<Vec<f64>>,
    pub queries: Vec<f64>,
    pub targets: Vec<f64>,
    pub weights: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetMeta {
    pub generator: String,
    pub seed: u64,
    pub basis: Option<crate::basis::BasisSpec>,
}

/// A collection of samples sharing query/output dimensions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorDataset {
    pub query_dim: usize,
    pub output_dim: usize,
    pub meta: DatasetMeta,
    pub samples: Vec<OperatorSample>,
}

impl OperatorDataset {
    pub fn validate(&self) -> Result<(), NetError> {
        for (i, s) in self.samples.iter().enumerate() {
            let nq = s.weights.len();
            if s.queries.len() != nq * self.query_dim
                || s.targets.len() != nq * self.output_dim
            {
                return Err(NetError::BadConfig(format!(
                    "sample {i} has inconsistent query/target/weight counts"
                )));
            }
            if s.weights.iter().any(|&w| w < 0.0 || !w.is_finite()) {
                return Err(NetError::BadConfig(format!(
                    "sample {i} has negative or non-finite weights"
                )));
            }
        }
        Ok(())
    }

    /// Deterministic head/tail split.
    pub fn split(mut self, head: usize) -> (OperatorDataset, OperatorDataset) {
        let tail = self.samples.split_off(head.min(self.samples.len()));
        let test = OperatorDataset {
            query_dim: self.query_dim,
            output_dim: self.output_dim,
            meta: self.meta.clone(),
            samples: tail,
        };
        (self, test)
    }
}

/// Exact reverse-mode gradient of the weighted squared-error loss over a
/// minibatch: `loss = (1/B) sum_i sum_q w_iq |pred_iq - y_iq|^2`.
///
/// Returns the gradient (congruent to the parameters) and the loss.
/// `normalizer` is the divisor `B` (the full batch size, which may
/// exceed `batch.len()` when summing partial results).
pub fn mionet_gradient(
    params: &MioNetParams,
    batch: &[&OperatorSample],
    query_dim: usize,
    output_dim: usize,
    normalizer: usize,
) -> Result<(MioNetParams, f64), NetError> {
    if batch.is_empty() {
        return Err(NetError::EmptyBatch);
    }
    if output_dim != params.output_dim() {
        return Err(NetError::WidthMismatch {
            expected: params.output_dim(),
            got: output_dim,
        });
    }
    let p = params.latent_dim();
    let inv_batch = 1.0 / normalizer as f64;
    let mut grad = params.zeros_like();
    let mut loss = 0.0;

    // When every sample shares one query grid (the common generator
    // layout), the trunk runs once per grid point and its backward pass
    // uses the gradient summed over samples.
    let shared_queries =
        batch.len() > 1 && batch.iter().all(|s| s.queries == batch[0].queries);
    let mut shared_caches: Vec<MlpCache> = Vec::new();
    let mut shared_outputs: Vec<Vec<f64>> = Vec::new();
    let mut shared_upstream: Vec<Vec<f64>> = Vec::new();
    if shared_queries {
        let nq = batch[0].weights.len();
        for q in 0..nq {
            let mut cache = MlpCache::default();
            let out = params
                .trunk
                .forward_cached(&batch[0].queries[q * query_dim..(q + 1) * query_dim], &mut cache);
            shared_caches.push(cache);
            shared_outputs.push(out);
            shared_upstream.push(vec![0.0; p]);
        }
    }

    for sample in batch {
        if sample.branch_inputs.len() != params.branches.len() {
            return Err(NetError::BranchCountMismatch {
                expected: params.branches.len(),
                got: sample.branch_inputs.len(),
            });
        }
        // Branch forwards with caches for the backward pass.
        let mut branch_caches: Vec<Option<MlpCache>> = Vec::with_capacity(params.branches.len());
        let mut branch_outputs: Vec<Vec<f64>> = Vec::with_capacity(params.branches.len());
        for (branch, input) in params.branches.iter().zip(&sample.branch_inputs) {
            if input.len() != branch.input_dim() {
                return Err(NetError::WidthMismatch {
                    expected: branch.input_dim(),
                    got: input.len(),
                });
            }
            match branch {
                BranchParams::Mlp(m) => {
                    let mut cache = MlpCache::default();
                    let out = m.forward_cached(input, &mut cache);
                    branch_caches.push(Some(cache));
                    branch_outputs.push(out);
                }
                BranchParams::Linear(l) => {
                    branch_caches.push(None);
                    branch_outputs.push(l.matvec(input));
                }
            }
        }
        let mut combined = vec![1.0; p];
        for b in &branch_outputs {
            for (c, bi) in combined.iter_mut().zip(b) {
                *c *= bi;
            }
        }

        let nq = sample.weights.len();
        let mut d_combined = vec![0.0; p];
        let mut local_cache = MlpCache::default();
        let mut local_out: Vec<f64>;
        for q in 0..nq {
            let trunk_out: &[f64] = if shared_queries {
                &shared_outputs[q]
            } else {
                local_out = params.trunk.forward_cached(
                    &sample.queries[q * query_dim..(q + 1) * query_dim],
                    &mut local_cache,
                );
                &local_out
            };
            let mut latent = vec![0.0; p];
            for i in 0..p {
                latent[i] = combined[i] * trunk_out[i];
            }
            let pred: Vec<f64> = match &params.output {
                OutputHead::Sum => vec![latent.iter().sum()],
                OutputHead::Matrix(w) => w.matvec(&latent),
            };
            let w_q = sample.weights[q];
            let target = &sample.targets[q * output_dim..(q + 1) * output_dim];
            let mut upstream_out = vec![0.0; output_dim];
            for r in 0..output_dim {
                let resid = pred[r] - target[r];
                loss += inv_batch * w_q * resid * resid;
                upstream_out[r] = 2.0 * inv_batch * w_q * resid;
            }
            // Through the output head to the latent product.
            let d_latent: Vec<f64> = match (&params.output, &mut grad.output) {
                (OutputHead::Sum, OutputHead::Sum) => vec![upstream_out[0]; p],
                (OutputHead::Matrix(w), OutputHead::Matrix(gw)) => {
                    gw.accumulate_grad(&upstream_out, &latent);
                    w.matvec_transposed(&upstream_out)
                }
                _ => unreachable!(),
            };
            let trunk_up: Vec<f64> = (0..p).map(|i| d_latent[i] * combined[i]).collect();
            if shared_queries {
                for i in 0..p {
                    shared_upstream[q][i] += trunk_up[i];
                    d_combined[i] += d_latent[i] * trunk_out[i];
                }
            } else {
                for i in 0..p {
                    d_combined[i] += d_latent[i] * trunk_out[i];
                }
                params
                    .trunk
                    .backward(&local_cache, &trunk_up, &mut grad.trunk, None);
            }
        }

        // Leave-one-out products distribute d_combined onto each branch.
        let nb = branch_outputs.len();
        let mut prefix = vec![vec![1.0; p]; nb + 1];
        for i in 0..nb {
            for j in 0..p {
                prefix[i + 1][j] = prefix[i][j] * branch_outputs[i][j];
            }
        }
        let mut suffix = vec![1.0; p];
        for i in (0..nb).rev() {
            let upstream: Vec<f64> = (0..p)
                .map(|j| d_combined[j] * prefix[i][j] * suffix[j])
                .collect();
            match (&params.branches[i], &mut grad.branches[i]) {
                (BranchParams::Mlp(m), BranchParams::Mlp(gm)) => {
                    m.backward(branch_caches[i].as_ref().unwrap(), &upstream, gm, None);
                }
                (BranchParams::Linear(l), BranchParams::Linear(gl)) => {
                    let _ = l;
                    gl.accumulate_grad(&upstream, &sample.branch_inputs[i]);
                }
                _ => unreachable!(),
            }
            for j in 0..p {
                suffix[j] *= branch_outputs[i][j];
            }
        }
    }

    if shared_queries {
        for q in 0..shared_caches.len() {
            params
                .trunk
                .backward(&shared_caches[q], &shared_upstream[q], &mut grad.trunk, None);
        }
    }
    Ok((grad, loss))
}
