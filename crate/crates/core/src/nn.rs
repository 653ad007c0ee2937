//! Minimal feed-forward networks with exact analytic gradients.
//!
//! Hidden layers use tanh; the output layer is linear. Encoded gridworld
//! states are sparse (a handful of 1-bits plus a trailing scalar), so the
//! first layer has a sparse fast path that produces bit-identical sums to
//! the dense path: active indices are visited in ascending order and the
//! trailing entry is added last, mirroring dense accumulation order.

use rand::Rng;
use serde::{Deserialize, Serialize};

/// Sparse view of an input vector: `x[i] = 1.0` for every `i` in `ones`
/// (ascending), `x[dim-1] = tail`, zero elsewhere.
#[derive(Debug, Clone, Copy)]
pub struct SparseInput<'a> {
    pub ones: &'a [u32],
    pub tail: f64,
    pub dim: usize,
}

impl SparseInput<'_> {
    pub fn to_dense(&self) -> Vec<f64> {
        let mut x = vec![0.0; self.dim];
        for &i in self.ones {
            x[i as usize] = 1.0;
        }
        x[self.dim - 1] = self.tail;
        x
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Dense {
    pub w: Vec<f64>,
    pub b: Vec<f64>,
    pub in_dim: usize,
    pub out_dim: usize,
}

impl Dense {
    fn zeros(in_dim: usize, out_dim: usize) -> Self {
        Dense {
            w: vec![0.0; in_dim * out_dim],
            b: vec![0.0; out_dim],
            in_dim,
            out_dim,
        }
    }

    fn seeded(in_dim: usize, out_dim: usize, rng: &mut impl Rng) -> Self {
        let bound = 1.0 / (in_dim as f64).sqrt();
        let w = (0..in_dim * out_dim)
            .map(|_| rng.random_range(-bound..bound))
            .collect();
        Dense {
            w,
            b: vec![0.0; out_dim],
            in_dim,
            out_dim,
        }
    }

    fn apply(&self, x: &[f64], out: &mut Vec<f64>) {
        out.clear();
        for o in 0..self.out_dim {
            let row = &self.w[o * self.in_dim..(o + 1) * self.in_dim];
            let mut acc = self.b[o];
            for (wi, xi) in row.iter().zip(x) {
                acc += wi * xi;
            }
            out.push(acc);
        }
    }

    fn apply_sparse(&self, input: SparseInput<'_>, out: &mut Vec<f64>) {
        debug_assert_eq!(input.dim, self.in_dim);
        out.clear();
        let last = self.in_dim - 1;
        for o in 0..self.out_dim {
            let row = &self.w[o * self.in_dim..(o + 1) * self.in_dim];
            let mut acc = self.b[o];
            for &i in input.ones {
                acc += row[i as usize];
            }
            acc += row[last] * input.tail;
            out.push(acc);
        }
    }
}

/// Feed-forward network: tanh hidden layers, linear output.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Mlp {
    pub layers: Vec<Dense>,
}

/// Stored input for backprop.
#[derive(Debug, Clone)]
enum CachedInput {
    Dense(Vec<f64>),
    Sparse { ones: Vec<u32>, tail: f64 },
}

/// Forward-pass activations kept for the backward pass.
#[derive(Debug, Clone)]
pub struct Cache {
    input: CachedInput,
    /// Post-activation output of each layer (tanh applied on hidden layers).
    acts: Vec<Vec<f64>>,
}

impl Cache {
    pub fn output(&self) -> &[f64] {
        self.acts.last().expect("at least one layer")
    }
}

/// Per-parameter gradient accumulator, same shapes as the network.
#[derive(Debug, Clone)]
pub struct Grad {
    pub layers: Vec<(Vec<f64>, Vec<f64>)>,
}

impl Grad {
    pub fn zeros_like(net: &Mlp) -> Self {
        Grad {
            layers: net
                .layers
                .iter()
                .map(|l| (vec![0.0; l.w.len()], vec![0.0; l.b.len()]))
                .collect(),
        }
    }

    pub fn scale(&mut self, c: f64) {
        for (dw, db) in &mut self.layers {
            dw.iter_mut().for_each(|v| *v *= c);
            db.iter_mut().for_each(|v| *v *= c);
        }
    }

    pub fn add(&mut self, other: &Grad) {
        for ((dw, db), (ow, ob)) in self.layers.iter_mut().zip(&other.layers) {
            for (a, b) in dw.iter_mut().zip(ow) {
                *a += b;
            }
            for (a, b) in db.iter_mut().zip(ob) {
                *a += b;
            }
        }
    }

    pub fn l2_norm(&self) -> f64 {
        let mut s = 0.0;
        for (dw, db) in &self.layers {
            s += dw.iter().map(|v| v * v).sum::<f64>();
            s += db.iter().map(|v| v * v).sum::<f64>();
        }
        s.sqrt()
    }
}

impl Mlp {
    /// All-zero parameters.
    pub fn zeros(dims: &[usize]) -> Self {
        assert!(dims.len() >= 2);
        Mlp {
            layers: dims.windows(2).map(|d| Dense::zeros(d[0], d[1])).collect(),
        }
    }

    /// Weights uniform in ±fan_in^(-1/2), biases zero.
    pub fn seeded(dims: &[usize], rng: &mut impl Rng) -> Self {
        assert!(dims.len() >= 2);
        Mlp {
            layers: dims
                .windows(2)
                .map(|d| Dense::seeded(d[0], d[1], rng))
                .collect(),
        }
    }

    /// Like [`Mlp::seeded`], but the final layer starts at zero so the
    /// initial output is exactly zero for every input.
    pub fn seeded_zero_head(dims: &[usize], rng: &mut impl Rng) -> Self {
        let mut net = Mlp::seeded(dims, rng);
        let last = net.layers.last_mut().expect("at least one layer");
        *last = Dense::zeros(last.in_dim, last.out_dim);
        net
    }

    pub fn in_dim(&self) -> usize {
        self.layers[0].in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.layers.last().expect("at least one layer").out_dim
    }

    pub fn n_params(&self) -> usize {
        self.layers.iter().map(|l| l.w.len() + l.b.len()).sum()
    }

    fn run(&self, first: Vec<f64>) -> Vec<f64> {
        let n = self.layers.len();
        let mut cur = first;
        let mut next = Vec::new();
        for (li, layer) in self.layers.iter().enumerate().skip(1) {
            if li < n {
                // tanh on the output of the previous layer (hidden layers only)
            }
            cur.iter_mut().for_each(|v| *v = v.tanh());
            layer.apply(&cur, &mut next);
            std::mem::swap(&mut cur, &mut next);
        }
        cur
    }

    /// Plain forward pass on a dense input.
    pub fn forward(&self, x: &[f64]) -> Vec<f64> {
        let mut first = Vec::new();
        self.layers[0].apply(x, &mut first);
        if self.layers.len() == 1 {
            return first;
        }
        self.run(first)
    }

    /// Forward pass on a sparse input.
    pub fn forward_sparse(&self, input: SparseInput<'_>) -> Vec<f64> {
        let mut first = Vec::new();
        self.layers[0].apply_sparse(input, &mut first);
        if self.layers.len() == 1 {
            return first;
        }
        self.run(first)
    }

    fn cache_from(&self, input: CachedInput, first: Vec<f64>) -> Cache {
        let mut acts = Vec::with_capacity(self.layers.len());
        acts.push(first);
        let mut buf = Vec::new();
        for layer in self.layers.iter().skip(1) {
            let prev = acts.last_mut().expect("pushed above");
            prev.iter_mut().for_each(|v| *v = v.tanh());
            layer.apply(prev, &mut buf);
            acts.push(std::mem::take(&mut buf));
        }
        Cache { input, acts }
    }

    /// Forward pass that keeps activations for [`Mlp::backward_into`].
    pub fn forward_cached(&self, x: &[f64]) -> Cache {
        let mut first = Vec::new();
        self.layers[0].apply(x, &mut first);
        self.cache_from(CachedInput::Dense(x.to_vec()), first)
    }

    /// Sparse forward pass that keeps activations for the backward pass.
    pub fn forward_cached_sparse(&self, input: SparseInput<'_>) -> Cache {
        let mut first = Vec::new();
        self.layers[0].apply_sparse(input, &mut first);
        self.cache_from(
            CachedInput::Sparse {
                ones: input.ones.to_vec(),
                tail: input.tail,
            },
            first,
        )
    }

    /// Accumulate dL/dθ into `grad` given dL/doutput. Exact backprop.
    pub fn backward_into(&self, cache: &Cache, dout: &[f64], grad: &mut Grad) {
        let n = self.layers.len();
        let mut delta = dout.to_vec();
        for li in (0..n).rev() {
            let layer = &self.layers[li];
            let (dw, db) = &mut grad.layers[li];
            // Gradient w.r.t. this layer's weights: delta ⊗ layer input.
            if li == 0 {
                match &cache.input {
                    CachedInput::Dense(x) => {
                        for (o, d) in delta.iter().enumerate() {
                            let row = &mut dw[o * layer.in_dim..(o + 1) * layer.in_dim];
                            for (wi, xi) in row.iter_mut().zip(x) {
                                *wi += d * xi;
                            }
                            db[o] += d;
                        }
                    }
                    CachedInput::Sparse { ones, tail } => {
                        let last = layer.in_dim - 1;
                        for (o, d) in delta.iter().enumerate() {
                            let row = &mut dw[o * layer.in_dim..(o + 1) * layer.in_dim];
                            for &i in ones {
                                row[i as usize] += d;
                            }
                            row[last] += d * tail;
                            db[o] += d;
                        }
                    }
                }
                break;
            }
            // acts[li-1] holds tanh(z_{li-1}): the input this layer saw.
            let input = &cache.acts[li - 1];
            for (o, d) in delta.iter().enumerate() {
                let row = &mut dw[o * layer.in_dim..(o + 1) * layer.in_dim];
                for (wi, xi) in row.iter_mut().zip(input) {
                    *wi += d * xi;
                }
                db[o] += d;
            }
            // Propagate: delta_prev = (Wᵀ delta) ⊙ tanh'(z_prev).
            let mut prev = vec![0.0; layer.in_dim];
            for (o, d) in delta.iter().enumerate() {
                let row = &layer.w[o * layer.in_dim..(o + 1) * layer.in_dim];
                for (p, wi) in prev.iter_mut().zip(row) {
                    *p += wi * d;
                }
            }
            for (p, a) in prev.iter_mut().zip(input) {
                *p *= 1.0 - a * a;
            }
            delta = prev;
        }
    }

    /// θ ← θ + alpha·grad (caller handles sign and weight decay).
    pub fn axpy(&mut self, alpha: f64, grad: &Grad) {
        for (layer, (dw, db)) in self.layers.iter_mut().zip(&grad.layers) {
            for (w, g) in layer.w.iter_mut().zip(dw) {
                *w += alpha * g;
            }
            for (b, g) in layer.b.iter_mut().zip(db) {
                *b += alpha * g;
            }
        }
    }

    /// Weight decay on weights only, biases untouched: w ← w·(1 − c).
    pub fn decay_weights(&mut self, c: f64) {
        for layer in &mut self.layers {
            for w in &mut layer.w {
                *w *= 1.0 - c;
            }
        }
    }

    /// Flatten parameters (weights then biases, layer by layer).
    pub fn flat(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.n_params());
        for l in &self.layers {
            out.extend_from_slice(&l.w);
            out.extend_from_slice(&l.b);
        }
        out
    }

    pub fn set_flat(&mut self, flat: &[f64]) {
        assert_eq!(flat.len(), self.n_params());
        let mut k = 0;
        for l in &mut self.layers {
            l.w.copy_from_slice(&flat[k..k + l.w.len()]);
            k += l.w.len();
            l.b.copy_from_slice(&flat[k..k + l.b.len()]);
            k += l.b.len();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    fn sample_net(seed: u64) -> Mlp {
        let mut r = rng::stream(seed);
        Mlp::seeded(&[9, 8, 1], &mut r)
    }

    #[test]
    fn sparse_and_dense_forward_agree_bitwise() {
        let net = sample_net(3);
        let ones = vec![1u32, 4, 6];
        let sp = SparseInput {
            ones: &ones,
            tail: 0.37,
            dim: 9,
        };
        let dense_out = net.forward(&sp.to_dense());
        let sparse_out = net.forward_sparse(sp);
        assert_eq!(dense_out, sparse_out);
    }

    #[test]
    fn backward_matches_central_differences() {
        let net = sample_net(11);
        let x: Vec<f64> = (0..9).map(|i| (i as f64 * 0.71).sin()).collect();
        let cache = net.forward_cached(&x);
        let mut grad = Grad::zeros_like(&net);
        net.backward_into(&cache, &[1.0], &mut grad);

        let flat_grad: Vec<f64> = {
            let mut out = Vec::new();
            for (dw, db) in &grad.layers {
                out.extend_from_slice(dw);
                out.extend_from_slice(db);
            }
            out
        };
        let theta = net.flat();
        let h = 1e-5;
        for k in 0..theta.len() {
            let mut plus = net.clone();
            let mut minus = net.clone();
            let mut tp = theta.clone();
            let mut tm = theta.clone();
            tp[k] += h;
            tm[k] -= h;
            plus.set_flat(&tp);
            minus.set_flat(&tm);
            let fd = (plus.forward(&x)[0] - minus.forward(&x)[0]) / (2.0 * h);
            let denom = fd.abs().max(flat_grad[k].abs()).max(1e-8);
            assert!(
                (fd - flat_grad[k]).abs() / denom < 1e-4,
                "param {k}: analytic {} vs fd {fd}",
                flat_grad[k]
            );
        }
    }

    #[test]
    fn zero_head_outputs_zero() {
        let mut r = rng::stream(5);
        let net = Mlp::seeded_zero_head(&[6, 16, 3], &mut r);
        let x = vec![0.5; 6];
        assert_eq!(net.forward(&x), vec![0.0, 0.0, 0.0]);
    }

    #[test]
    fn flat_roundtrip() {
        let net = sample_net(8);
        let mut other = Mlp::zeros(&[9, 8, 1]);
        other.set_flat(&net.flat());
        assert_eq!(net, other);
    }
}
