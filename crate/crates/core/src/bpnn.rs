//! Feed-forward network trained by backpropagation and mini-batch SGD.
//!
//! Hidden layers use the logistic sigmoid `σ(z) = 1 / (1 + e^{−z})`; the
//! output layer is linear, so the output error term is simply `a^L − y` for
//! the per-sample cost `C_x = ½‖y − a^L‖²`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{check_len, Error, Result};
use crate::linalg::DenseMatrix;
use crate::model::Regressor;
use crate::scalar::Scalar;

/// Default learning rate.
pub const DEFAULT_ETA: f64 = 0.01;
pub const DEFAULT_EPOCHS: usize = 2000;
pub const DEFAULT_BATCH_SIZE: usize = 1;

/// Rule-of-thumb hidden layer width for `outputs` output and `inputs` input
/// neurons: `floor(sqrt(0.43·l·n + 0.12·l² + 2.54·n + 0.77·l + 0.35) + 0.51)`.
pub fn hidden_size_rule(outputs: usize, inputs: usize) -> usize {
    let l = outputs as f64;
    let n = inputs as f64;
    let raw = (0.43 * l * n + 0.12 * l * l + 2.54 * n + 0.77 * l + 0.35).sqrt() + 0.51;
    raw.floor() as usize
}

#[inline]
pub fn sigmoid<T: Scalar>(z: T) -> T {
    T::one() / (T::one() + (-z).exp())
}

#[inline]
fn sigmoid_prime<T: Scalar>(z: T) -> T {
    let s = sigmoid(z);
    s * (T::one() - s)
}

/// Hadamard (elementwise) product.
pub fn hadamard<T: Scalar>(s: &[T], t: &[T]) -> Result<Vec<T>> {
    check_len("hadamard operand", s.len(), t.len())?;
    Ok(s.iter().zip(t).map(|(&a, &b)| a * b).collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SgdConfig {
    pub eta: f64,
    pub batch_size: usize,
    pub epochs: usize,
    pub seed: u64,
}

impl Default for SgdConfig {
    fn default() -> Self {
        Self {
            eta: DEFAULT_ETA,
            batch_size: DEFAULT_BATCH_SIZE,
            epochs: DEFAULT_EPOCHS,
            seed: 0,
        }
    }
}

impl SgdConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.eta >= 0.0) || !self.eta.is_finite() {
            return Err(Error::domain(format!("learning rate must be finite and >= 0, got {}", self.eta)));
        }
        if self.batch_size == 0 {
            return Err(Error::domain("batch size must be >= 1"));
        }
        if self.epochs == 0 {
            return Err(Error::domain("epochs must be >= 1"));
        }
        Ok(())
    }
}

/// One layer's parameters: `weights` is `(size × previous size)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Layer<T> {
    pub weights: DenseMatrix<T>,
    pub biases: Vec<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BpNetwork<T> {
    sizes: Vec<usize>,
    layers: Vec<Layer<T>>,
}

/// Activations and weighted inputs of one forward pass.
///
/// `activations[0]` is the input; `weighted_inputs[l]` and
/// `activations[l + 1]` belong to the `l`-th parameterized layer.
#[derive(Debug, Clone, PartialEq)]
pub struct ForwardPass<T> {
    pub activations: Vec<Vec<T>>,
    pub weighted_inputs: Vec<Vec<T>>,
}

impl<T: Scalar> ForwardPass<T> {
    pub fn output(&self) -> &[T] {
        self.activations.last().expect("input layer is always present")
    }
}

/// Partial derivatives of a cost with respect to every parameter, laid out
/// like the network's layers.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients<T> {
    pub weights: Vec<DenseMatrix<T>>,
    pub biases: Vec<Vec<T>>,
}

impl<T: Scalar> Gradients<T> {
    fn zeros_like(net: &BpNetwork<T>) -> Self {
        Self {
            weights: net
                .layers
                .iter()
                .map(|l| DenseMatrix::zeros(l.weights.rows(), l.weights.cols()))
                .collect(),
            biases: net.layers.iter().map(|l| vec![T::zero(); l.biases.len()]).collect(),
        }
    }

    fn add_assign(&mut self, other: &Self) {
        for (a, b) in self.weights.iter_mut().zip(&other.weights) {
            for (x, &y) in a.as_mut_slice().iter_mut().zip(b.as_slice()) {
                *x += y;
            }
        }
        for (a, b) in self.biases.iter_mut().zip(&other.biases) {
            for (x, &y) in a.iter_mut().zip(b) {
                *x += y;
            }
        }
    }

    fn scale(&mut self, factor: T) {
        for w in &mut self.weights {
            w.as_mut_slice().iter_mut().for_each(|v| *v *= factor);
        }
        for b in &mut self.biases {
            b.iter_mut().for_each(|v| *v *= factor);
        }
    }
}

/// Per-epoch training-set cost; `costs[0]` is the cost before training.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingTrace<T> {
    pub costs: Vec<T>,
}

impl<T: Scalar> BpNetwork<T> {
    /// Weights drawn uniformly from `(−0.5, 0.5)`, biases zero.
    pub fn new(sizes: &[usize], seed: u64) -> Result<Self> {
        Self::check_sizes(sizes)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let layers = sizes
            .windows(2)
            .map(|w| Layer {
                weights: DenseMatrix::from_fn(w[1], w[0], |_, _| {
                    T::lit(rng.random_range(-0.5..0.5))
                }),
                biases: vec![T::zero(); w[1]],
            })
            .collect();
        Ok(Self {
            sizes: sizes.to_vec(),
            layers,
        })
    }

    /// Input width, rule-of-thumb hidden width, one output.
    pub fn with_rule_of_thumb(inputs: usize, seed: u64) -> Result<Self> {
        Self::new(&[inputs, hidden_size_rule(1, inputs), 1], seed)
    }

    pub fn from_layers(layers: Vec<Layer<T>>) -> Result<Self> {
        let first = layers
            .first()
            .ok_or_else(|| Error::domain("network needs at least one layer"))?;
        let mut sizes = vec![first.weights.cols()];
        for (i, l) in layers.iter().enumerate() {
            check_len(&format!("layer {i} input width"), sizes[i], l.weights.cols())?;
            check_len(&format!("layer {i} bias"), l.weights.rows(), l.biases.len())?;
            if l.biases.iter().any(|b| !b.is_finite()) {
                return Err(Error::domain("biases must be finite"));
            }
            sizes.push(l.weights.rows());
        }
        Self::check_sizes(&sizes)?;
        Ok(Self { sizes, layers })
    }

    fn check_sizes(sizes: &[usize]) -> Result<()> {
        if sizes.len() < 2 || sizes.contains(&0) {
            return Err(Error::domain(format!(
                "layer sizes must be at least two positive integers, got {sizes:?}"
            )));
        }
        Ok(())
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn layers(&self) -> &[Layer<T>] {
        &self.layers
    }

    pub fn layers_mut(&mut self) -> &mut [Layer<T>] {
        &mut self.layers
    }

    pub fn forward(&self, x: &[T]) -> Result<ForwardPass<T>> {
        check_len("network input", self.sizes[0], x.len())?;
        let last = self.layers.len() - 1;
        let mut activations = Vec::with_capacity(self.layers.len() + 1);
        let mut weighted_inputs = Vec::with_capacity(self.layers.len());
        activations.push(x.to_vec());
        for (l, layer) in self.layers.iter().enumerate() {
            let mut z = layer.weights.matvec(&activations[l])?;
            for (zj, &bj) in z.iter_mut().zip(&layer.biases) {
                *zj += bj;
            }
            let a = if l == last {
                z.clone()
            } else {
                z.iter().map(|&v| sigmoid(v)).collect()
            };
            weighted_inputs.push(z);
            activations.push(a);
        }
        Ok(ForwardPass {
            activations,
            weighted_inputs,
        })
    }

    pub fn predict_vec(&self, x: &[T]) -> Result<Vec<T>> {
        Ok(self.forward(x)?.activations.pop().expect("output layer"))
    }

    /// Gradients of `C_x = ½‖y − a^L‖²` for one sample.
    pub fn backprop(&self, x: &[T], y: &[T]) -> Result<Gradients<T>> {
        check_len("network target", *self.sizes.last().expect("sizes"), y.len())?;
        let pass = self.forward(x)?;
        let n_layers = self.layers.len();
        let mut grads = Gradients::zeros_like(self);

        let mut delta: Vec<T> = pass.output().iter().zip(y).map(|(&a, &t)| a - t).collect();
        for l in (0..n_layers).rev() {
            let prev = &pass.activations[l];
            let gw = &mut grads.weights[l];
            for (j, &dj) in delta.iter().enumerate() {
                for (g, &ak) in gw.row_mut(j).iter_mut().zip(prev) {
                    *g = ak * dj;
                }
            }
            grads.biases[l].clone_from(&delta);
            if l > 0 {
                let back = self.layers[l].weights.matvec_transposed(&delta)?;
                let sp: Vec<T> = pass.weighted_inputs[l - 1].iter().map(|&z| sigmoid_prime(z)).collect();
                delta = hadamard(&back, &sp)?;
            }
        }
        Ok(grads)
    }

    /// Gradient of the mean cost `(1/n)·Σ C_x` over the given samples.
    pub fn batch_gradient(&self, inputs: &[Vec<T>], targets: &[Vec<T>]) -> Result<Gradients<T>> {
        check_len("batch targets", inputs.len(), targets.len())?;
        if inputs.is_empty() {
            return Err(Error::domain("empty batch"));
        }
        let mut acc = Gradients::zeros_like(self);
        for (x, y) in inputs.iter().zip(targets) {
            acc.add_assign(&self.backprop(x, y)?);
        }
        acc.scale(T::one() / T::from_count(inputs.len()));
        Ok(acc)
    }

    /// `C = (1/2n)·Σ ‖y − a^L‖²`.
    pub fn cost(&self, inputs: &[Vec<T>], targets: &[Vec<T>]) -> Result<T> {
        check_len("cost targets", inputs.len(), targets.len())?;
        if inputs.is_empty() {
            return Err(Error::domain("cost over an empty set"));
        }
        let mut total = T::zero();
        for (x, y) in inputs.iter().zip(targets) {
            let out = self.predict_vec(x)?;
            check_len("cost target", out.len(), y.len())?;
            total += out.iter().zip(y).map(|(&a, &t)| (t - a) * (t - a)).sum::<T>();
        }
        Ok(total / (T::lit(2.0) * T::from_count(inputs.len())))
    }

    /// Subtracts `step · grads` from every parameter.
    pub fn apply_step(&mut self, grads: &Gradients<T>, step: T) {
        for (layer, (gw, gb)) in self.layers.iter_mut().zip(grads.weights.iter().zip(&grads.biases)) {
            for (w, &g) in layer.weights.as_mut_slice().iter_mut().zip(gw.as_slice()) {
                *w -= step * g;
            }
            for (b, &g) in layer.biases.iter_mut().zip(gb) {
                *b -= step * g;
            }
        }
    }

    /// Mini-batch SGD. Each epoch shuffles the samples with the seeded
    /// generator and applies `w ← w − (η/m)·Σ ∂C_X/∂w` per batch of `m`.
    pub fn train(
        &mut self,
        inputs: &[Vec<T>],
        targets: &[Vec<T>],
        cfg: &SgdConfig,
    ) -> Result<TrainingTrace<T>> {
        cfg.validate()?;
        check_len("training targets", inputs.len(), targets.len())?;
        if inputs.is_empty() {
            return Err(Error::domain("training set is empty"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        // keep shuffling independent of the initialization stream
        rng.set_stream(1);
        let eta = T::lit(cfg.eta);
        let mut order: Vec<usize> = (0..inputs.len()).collect();
        let mut costs = Vec::with_capacity(cfg.epochs + 1);
        costs.push(self.cost(inputs, targets)?);

        for epoch in 1..=cfg.epochs {
            order.shuffle(&mut rng);
            for batch in order.chunks(cfg.batch_size) {
                let mut acc = Gradients::zeros_like(self);
                for &i in batch {
                    acc.add_assign(&self.backprop(&inputs[i], &targets[i])?);
                }
                self.apply_step(&acc, eta / T::from_count(batch.len()));
            }
            let c = self.cost(inputs, targets)?;
            if !c.is_finite() {
                return Err(Error::Divergence { epoch });
            }
            costs.push(c);
        }
        Ok(TrainingTrace { costs })
    }
}

impl<T: Scalar> Regressor<T> for BpNetwork<T> {
    fn predict(&self, x: &[T]) -> Result<T> {
        let out = self.predict_vec(x)?;
        check_len("regressor output", 1, out.len())?;
        Ok(out[0])
    }
}
