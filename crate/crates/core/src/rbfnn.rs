//! Normalized radial-basis-function network.
//!
//! The output is the weighted average `Σ w_i ρ_i / Σ ρ_i` with Gaussian unit
//! responses `ρ_i = exp(−β_i‖x − c_i‖²)`. Fitting is two-stage: k-means
//! places the centers, widths come from nearest-sibling spacing, and the unit
//! values `w_i` solve a ridge-stabilized least-squares problem.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{check_len, Error, Result};
use crate::linalg::{solve, squared_distance, DenseMatrix};
use crate::model::Regressor;
use crate::scalar::Scalar;

pub const KMEANS_MAX_ITER: usize = 50;
/// Ridge added to the normal equations of the output weights.
pub const WEIGHT_RIDGE: f64 = 1e-8;
/// Refinement sweeps applied after the ridged solve.
pub const REFINE_STEPS: usize = 10;
/// Lower bound on the sibling spacing used to derive a width.
pub const MIN_SPACING: f64 = 1e-6;

/// `max(3, floor(sqrt(n)))`, capped at `n`.
pub fn default_centers(n_samples: usize) -> usize {
    let k = ((n_samples as f64).sqrt().floor() as usize).max(3);
    k.min(n_samples)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RbfNetwork<T> {
    centers: Vec<Vec<T>>,
    betas: Vec<T>,
    weights: Vec<T>,
}

impl<T: Scalar> RbfNetwork<T> {
    pub fn new(centers: Vec<Vec<T>>, betas: Vec<T>, weights: Vec<T>) -> Result<Self> {
        if centers.is_empty() {
            return Err(Error::domain("rbf network needs at least one neuron"));
        }
        check_len("rbf widths", centers.len(), betas.len())?;
        check_len("rbf weights", centers.len(), weights.len())?;
        let dim = centers[0].len();
        for c in &centers {
            check_len("rbf center", dim, c.len())?;
        }
        if betas.iter().any(|b| !(*b > T::zero()) || !b.is_finite()) {
            return Err(Error::domain("rbf widths must be positive and finite"));
        }
        Ok(Self {
            centers,
            betas,
            weights,
        })
    }

    pub fn fit(inputs: &[Vec<T>], targets: &[T], n_centers: usize, seed: u64) -> Result<Self> {
        check_len("rbf targets", inputs.len(), targets.len())?;
        if n_centers == 0 {
            return Err(Error::domain("number of centers must be positive"));
        }
        if n_centers > inputs.len() {
            return Err(Error::domain(format!(
                "{n_centers} centers requested for {} samples",
                inputs.len()
            )));
        }
        let dim = inputs[0].len();
        for x in inputs {
            check_len("rbf input", dim, x.len())?;
        }

        let centers = kmeans(inputs, n_centers, seed);
        let betas = widths(&centers);
        let mut net = Self {
            centers,
            betas,
            weights: vec![T::zero(); n_centers],
        };

        let k = n_centers;
        let mut gram = DenseMatrix::zeros(k, k);
        let mut rhs = vec![T::zero(); k];
        for (x, &y) in inputs.iter().zip(targets) {
            let phi = net.normalized_activations(x);
            for i in 0..k {
                rhs[i] += phi[i] * y;
                for j in 0..k {
                    gram[(i, j)] += phi[i] * phi[j];
                }
            }
        }
        let ridge = T::lit(WEIGHT_RIDGE);
        let mut ridged = gram.clone();
        for i in 0..k {
            ridged[(i, i)] += ridge;
        }
        let mut w = solve(&ridged, &rhs)?;
        // Iterated Tikhonov: converges to the unregularized normal-equation
        // solution wherever ΦᵀΦ is well determined.
        for _ in 0..REFINE_STEPS {
            let gw = gram.matvec(&w)?;
            let residual: Vec<T> = rhs.iter().zip(&gw).map(|(&b, &g)| b - g).collect();
            let dw = solve(&ridged, &residual)?;
            for (wi, d) in w.iter_mut().zip(dw) {
                *wi += d;
            }
        }
        net.weights = w;
        Ok(net)
    }

    pub fn centers(&self) -> &[Vec<T>] {
        &self.centers
    }

    pub fn betas(&self) -> &[T] {
        &self.betas
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    /// Unit responses divided by their sum, computed with the largest
    /// exponent factored out so a distant query cannot underflow to 0/0.
    fn normalized_activations(&self, x: &[T]) -> Vec<T> {
        let exps: Vec<T> = self
            .centers
            .iter()
            .zip(&self.betas)
            .map(|(c, &b)| -b * squared_distance(x, c))
            .collect();
        let top = exps.iter().copied().fold(T::neg_infinity(), T::max);
        let mut rho: Vec<T> = exps.iter().map(|&e| (e - top).exp()).collect();
        let total: T = rho.iter().copied().sum();
        rho.iter_mut().for_each(|r| *r /= total);
        rho
    }

    /// `C = (1/2n)·Σ (y − φ(x))²`.
    pub fn cost(&self, inputs: &[Vec<T>], targets: &[T]) -> Result<T> {
        check_len("cost targets", inputs.len(), targets.len())?;
        if inputs.is_empty() {
            return Err(Error::domain("cost over an empty set"));
        }
        let mut total = T::zero();
        for (x, &y) in inputs.iter().zip(targets) {
            let r = y - self.predict(x)?;
            total += r * r;
        }
        Ok(total / (T::lit(2.0) * T::from_count(inputs.len())))
    }
}

impl<T: Scalar> Regressor<T> for RbfNetwork<T> {
    fn predict(&self, x: &[T]) -> Result<T> {
        check_len("rbf query", self.centers[0].len(), x.len())?;
        let phi = self.normalized_activations(x);
        Ok(phi.iter().zip(&self.weights).map(|(&p, &w)| p * w).sum())
    }
}

/// Lloyd's algorithm from a seeded k-means++ start. Empty clusters keep their
/// previous center.
pub(crate) fn kmeans<T: Scalar>(xs: &[Vec<T>], k: usize, seed: u64) -> Vec<Vec<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centers: Vec<Vec<T>> = Vec::with_capacity(k);
    centers.push(xs[rng.random_range(0..xs.len())].clone());
    let mut nearest: Vec<f64> = xs
        .iter()
        .map(|x| squared_distance(x, &centers[0]).to_f64_lossy())
        .collect();
    while centers.len() < k {
        let total: f64 = nearest.iter().sum();
        let pick = if total > 0.0 {
            let mut r = rng.random_range(0.0..total);
            let mut idx = xs.len() - 1;
            for (i, &d) in nearest.iter().enumerate() {
                if r < d {
                    idx = i;
                    break;
                }
                r -= d;
            }
            idx
        } else {
            rng.random_range(0..xs.len())
        };
        centers.push(xs[pick].clone());
        let c = centers.last().expect("just pushed");
        for (n, x) in nearest.iter_mut().zip(xs) {
            *n = n.min(squared_distance(x, c).to_f64_lossy());
        }
    }

    let dim = xs[0].len();
    let mut assign = vec![usize::MAX; xs.len()];
    for _ in 0..KMEANS_MAX_ITER {
        let mut changed = false;
        for (a, x) in assign.iter_mut().zip(xs) {
            let best = nearest_center(x, &centers);
            if *a != best {
                *a = best;
                changed = true;
            }
        }
        if !changed {
            break;
        }
        let mut sums = vec![vec![T::zero(); dim]; k];
        let mut counts = vec![0usize; k];
        for (&a, x) in assign.iter().zip(xs) {
            counts[a] += 1;
            for (s, &v) in sums[a].iter_mut().zip(x) {
                *s += v;
            }
        }
        for ((c, s), &n) in centers.iter_mut().zip(sums).zip(&counts) {
            if n > 0 {
                let inv = T::one() / T::from_count(n);
                *c = s.into_iter().map(|v| v * inv).collect();
            }
        }
    }
    centers
}

fn nearest_center<T: Scalar>(x: &[T], centers: &[Vec<T>]) -> usize {
    let mut best = (0, T::infinity());
    for (i, c) in centers.iter().enumerate() {
        let d = squared_distance(x, c);
        if d < best.1 {
            best = (i, d);
        }
    }
    best.0
}

/// `β_i = 1 / (2·d_i²)` with `d_i` the mean distance to the two nearest
/// sibling centers.
fn widths<T: Scalar>(centers: &[Vec<T>]) -> Vec<T> {
    if centers.len() == 1 {
        return vec![T::one()];
    }
    let floor = T::lit(MIN_SPACING);
    centers
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let mut d: Vec<T> = centers
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, o)| squared_distance(c, o).sqrt())
                .collect();
            d.sort_by(|a, b| a.partial_cmp(b).expect("finite distances"));
            let take = d.len().min(2);
            let spacing = (d[..take].iter().copied().sum::<T>() / T::from_count(take)).max(floor);
            T::one() / (T::lit(2.0) * spacing * spacing)
        })
        .collect()
}
