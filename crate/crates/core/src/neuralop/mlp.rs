//! Dense layers and multilayer perceptrons with hand-rolled
//! reverse-mode differentiation.

use rand::Rng;
use serde::{Deserialize, Serialize};

/// Hidden-layer activation; outputs are always linear.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Activation {
    Tanh,
    Relu,
}

impl Activation {
    #[inline]
    fn apply(&self, x: f64) -> f64 {
        match self {
            Activation::Tanh => x.tanh(),
            Activation::Relu => x.max(0.0),
        }
    }

    /// Derivative as a function of the pre-activation (zero at the ReLU
    /// kink).
    #[inline]
    fn grad(&self, pre: f64) -> f64 {
        match self {
            Activation::Tanh => {
                let t = pre.tanh();
                1.0 - t * t
            }
            Activation::Relu => {
                if pre > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }
}

/// Layer widths from input to output, plus the hidden activation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MlpSpec {
    pub widths: Vec<usize>,
    pub activation: Activation,
}

impl MlpSpec {
    pub fn new(widths: Vec<usize>, activation: Activation) -> Self {
        assert!(widths.len() >= 2, "an MLP needs input and output widths");
        assert!(widths.iter().all(|&w| w >= 1), "layer widths must be >= 1");
        MlpSpec { widths, activation }
    }
}

/// `y = W x + b`, row-major weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dense {
    pub rows: usize,
    pub cols: usize,
    pub weights: Vec<f64>,
    pub bias: Vec<f64>,
}

impl Dense {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Dense {
            rows,
            cols,
            weights: vec![0.0; rows * cols],
            bias: vec![0.0; rows],
        }
    }

    /// Glorot-uniform weights, zero bias.
    pub fn glorot(rows: usize, cols: usize, rng: &mut impl Rng) -> Self {
        let limit = (6.0 / (rows + cols) as f64).sqrt();
        Dense {
            rows,
            cols,
            weights: (0..rows * cols)
                .map(|_| rng.gen_range(-limit..limit))
                .collect(),
            bias: vec![0.0; rows],
        }
    }

    pub fn matvec(&self, x: &[f64], out: &mut [f64]) {
        debug_assert_eq!(x.len(), self.cols);
        debug_assert_eq!(out.len(), self.rows);
        for r in 0..self.rows {
            let row = &self.weights[r * self.cols..(r + 1) * self.cols];
            let mut sum = self.bias[r];
            for (w, xi) in row.iter().zip(x) {
                sum += w * xi;
            }
            out[r] = sum;
        }
    }

    /// `out += W^T up` (gradient with respect to the input).
    pub fn matvec_transposed_into(&self, up: &[f64], out: &mut [f64]) {
        for r in 0..self.rows {
            let row = &self.weights[r * self.cols..(r + 1) * self.cols];
            let u = up[r];
            for (o, w) in out.iter_mut().zip(row) {
                *o += u * w;
            }
        }
    }

    /// Accumulates `dW += up x^T`, `db += up`.
    pub fn accumulate_grad(&mut self, up: &[f64], x: &[f64]) {
        for r in 0..self.rows {
            let row = &mut self.weights[r * self.cols..(r + 1) * self.cols];
            let u = up[r];
            for (w, xi) in row.iter_mut().zip(x) {
                *w += u * xi;
            }
            self.bias[r] += u;
        }
    }

    pub fn add_assign(&mut self, other: &Dense) {
        for (a, b) in self.weights.iter_mut().zip(&other.weights) {
            *a += b;
        }
        for (a, b) in self.bias.iter_mut().zip(&other.bias) {
            *a += b;
        }
    }
}

/// A fully-connected network: hidden layers use the spec's activation,
/// the output layer is linear.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mlp {
    pub layers: Vec<Dense>,
    pub activation: Activation,
}

/// Forward-pass intermediates needed by [`Mlp::backward`].
#[derive(Debug, Clone, Default)]
pub struct MlpCache {
    /// `inputs[l]` is the input to layer `l`; `inputs[0]` is the network
    /// input.
    pub inputs: Vec<Vec<f64>>,
    /// Pre-activations of each layer.
    pub pre: Vec<Vec<f64>>,
}

impl Mlp {
    pub fn init(spec: &MlpSpec, rng: &mut impl Rng) -> Self {
        let layers = spec
            .widths
            .windows(2)
            .map(|w| Dense::glorot(w[1], w[0], rng))
            .collect();
        Mlp {
            layers,
            activation: spec.activation,
        }
    }

    pub fn zeros_like(&self) -> Self {
        Mlp {
            layers: self
                .layers
                .iter()
                .map(|l| Dense::zeros(l.rows, l.cols))
                .collect(),
            activation: self.activation,
        }
    }

    pub fn input_dim(&self) -> usize {
        self.layers.first().map(|l| l.cols).unwrap_or(0)
    }

    pub fn output_dim(&self) -> usize {
        self.layers.last().map(|l| l.rows).unwrap_or(0)
    }

    pub fn param_count(&self) -> usize {
        self.layers
            .iter()
            .map(|l| l.weights.len() + l.bias.len())
            .sum()
    }

    pub fn forward(&self, x: &[f64]) -> Vec<f64> {
        let mut cache = MlpCache::default();
        self.forward_cached(x, &mut cache)
    }

    pub fn forward_cached(&self, x: &[f64], cache: &mut MlpCache) -> Vec<f64> {
        cache.inputs.clear();
        cache.pre.clear();
        let mut cur = x.to_vec();
        let last = self.layers.len() - 1;
        for (l, layer) in self.layers.iter().enumerate() {
            let mut out = vec![0.0; layer.rows];
            layer.matvec(&cur, &mut out);
            cache.inputs.push(cur);
            cache.pre.push(out.clone());
            if l < last {
                for v in out.iter_mut() {
                    *v = self.activation.apply(*v);
                }
            }
            cur = out;
        }
        cur
    }

    /// Accumulates parameter gradients for one forward pass into `grad`
    /// and optionally the gradient with respect to the input.
    pub fn backward(
        &self,
        cache: &MlpCache,
        upstream: &[f64],
        grad: &mut Mlp,
        mut grad_input: Option<&mut [f64]>,
    ) {
        let last = self.layers.len() - 1;
        let mut delta = upstream.to_vec();
        for l in (0..self.layers.len()).rev() {
            if l < last {
                for (d, &p) in delta.iter_mut().zip(&cache.pre[l]) {
                    *d *= self.activation.grad(p);
                }
            }
            grad.layers[l].accumulate_grad(&delta, &cache.inputs[l]);
            if l > 0 {
                let mut below = vec![0.0; self.layers[l].cols];
                self.layers[l].matvec_transposed_into(&delta, &mut below);
                delta = below;
            } else if let Some(gi) = grad_input.as_deref_mut() {
                self.layers[0].matvec_transposed_into(&delta, gi);
            }
        }
    }

    pub fn add_assign(&mut self, other: &Mlp) {
        for (a, b) in self.layers.iter_mut().zip(&other.layers) {
            a.add_assign(b);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn tiny_mlp(seed: u64) -> Mlp {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        Mlp::init(&MlpSpec::new(vec![3, 5, 2], Activation::Tanh), &mut rng)
    }

    #[test]
    fn forward_shapes() {
        let mlp = tiny_mlp(1);
        assert_eq!(mlp.input_dim(), 3);
        assert_eq!(mlp.output_dim(), 2);
        assert_eq!(mlp.forward(&[0.1, -0.2, 0.4]).len(), 2);
        assert_eq!(mlp.param_count(), 3 * 5 + 5 + 5 * 2 + 2);
    }

    #[test]
    fn init_is_seeded() {
        let a = tiny_mlp(5);
        let b = tiny_mlp(5);
        let c = tiny_mlp(6);
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn single_layer_is_linear() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        let mlp = Mlp::init(&MlpSpec::new(vec![2, 2], Activation::Relu), &mut rng);
        let x = [0.3, -0.8];
        let y = mlp.forward(&x);
        let w = &mlp.layers[0];
        for r in 0..2 {
            let want = w.weights[r * 2] * x[0] + w.weights[r * 2 + 1] * x[1] + w.bias[r];
            assert!((y[r] - want).abs() < 1e-15);
        }
    }

    #[test]
    fn backward_matches_finite_differences() {
        let mlp = tiny_mlp(3);
        let x = [0.2, -0.5, 0.9];
        // Scalarize: L = sum of outputs.
        let loss = |m: &Mlp| -> f64 { m.forward(&x).iter().sum() };
        let mut cache = MlpCache::default();
        let out = mlp.forward_cached(&x, &mut cache);
        let mut grad = mlp.zeros_like();
        mlp.backward(&cache, &vec![1.0; out.len()], &mut grad, None);
        let h = 1e-6;
        for l in 0..mlp.layers.len() {
            for idx in 0..mlp.layers[l].weights.len() {
                let mut plus = mlp.clone();
                plus.layers[l].weights[idx] += h;
                let mut minus = mlp.clone();
                minus.layers[l].weights[idx] -= h;
                let fd = (loss(&plus) - loss(&minus)) / (2.0 * h);
                let an = grad.layers[l].weights[idx];
                assert!(
                    (fd - an).abs() < 1e-6 * fd.abs().max(1.0),
                    "layer {l} w[{idx}]: {an} vs {fd}"
                );
            }
        }
    }

    #[test]
    fn input_gradient_matches_finite_differences() {
        let mlp = tiny_mlp(4);
        let x = [0.1, 0.4, -0.3];
        let mut cache = MlpCache::default();
        let out = mlp.forward_cached(&x, &mut cache);
        let mut grad = mlp.zeros_like();
        let mut gi = vec![0.0; 3];
        mlp.backward(&cache, &vec![1.0; out.len()], &mut grad, Some(&mut gi));
        let h = 1e-6;
        for j in 0..3 {
            let mut xp = x;
            let mut xm = x;
            xp[j] += h;
            xm[j] -= h;
            let fd = (mlp.forward(&xp).iter().sum::<f64>()
                - mlp.forward(&xm).iter().sum::<f64>())
                / (2.0 * h);
            assert!((fd - gi[j]).abs() < 1e-6 * fd.abs().max(1.0));
        }
    }
}
