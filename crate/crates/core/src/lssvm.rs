//! Least-squares SVM regression.
//!
//! Equality constraints turn the dual into one linear system:
//!
//! ```text
//! [ 0   1ᵀ          ] [ b ]   [ 0 ]
//! [ 1   Ω + γ⁻¹·I   ] [ λ ] = [ Y ]
//! ```
//!
//! with `Ω_ij = K(x_i, x_j)`; predictions are `Σ λ_i K(x_i, x) + b`.

use crate::error::{check_len, Error, Result};
use crate::kernels::{gram, median_pairwise_distance, KernelSpec};
use crate::linalg::{norm_inf, residual_inf, solve, DenseMatrix};
use crate::model::Regressor;
use crate::scalar::Scalar;

pub const DEFAULT_GAMMA: f64 = 100.0;

/// RBF kernel whose width is the median pairwise distance of `inputs`
/// (falls back to `σ = 1` when all inputs coincide).
pub fn median_rbf<T: Scalar>(inputs: &[Vec<T>]) -> KernelSpec<T> {
    let sigma = median_pairwise_distance(inputs).unwrap_or_else(T::one);
    KernelSpec::Rbf { sigma }
}

/// The bordered KKT matrix `[[0, 1ᵀ], [1, Ω + γ⁻¹I]]`.
pub fn kkt_matrix<T: Scalar>(kernel: &KernelSpec<T>, inputs: &[Vec<T>], gamma: T) -> Result<DenseMatrix<T>> {
    let omega = gram(kernel, inputs)?;
    let n = inputs.len();
    let ridge = T::one() / gamma;
    Ok(DenseMatrix::from_fn(n + 1, n + 1, |i, j| match (i, j) {
        (0, 0) => T::zero(),
        (0, _) | (_, 0) => T::one(),
        _ if i == j => omega[(i - 1, j - 1)] + ridge,
        _ => omega[(i - 1, j - 1)],
    }))
}

#[derive(Debug, Clone, PartialEq)]
pub struct LssvmModel<T> {
    kernel: KernelSpec<T>,
    inputs: Vec<Vec<T>>,
    lambdas: Vec<T>,
    bias: T,
    gamma: T,
    residual: T,
}

impl<T: Scalar> LssvmModel<T> {
    pub fn from_parts(kernel: KernelSpec<T>, inputs: Vec<Vec<T>>, lambdas: Vec<T>, bias: T) -> Result<Self> {
        check_len("lssvm multipliers", inputs.len(), lambdas.len())?;
        Ok(Self {
            kernel,
            inputs,
            lambdas,
            bias,
            gamma: T::infinity(),
            residual: T::zero(),
        })
    }

    pub fn fit(inputs: &[Vec<T>], targets: &[T], kernel: KernelSpec<T>, gamma: T) -> Result<Self> {
        kernel.validate()?;
        check_len("lssvm targets", inputs.len(), targets.len())?;
        if inputs.is_empty() {
            return Err(Error::domain("lssvm needs at least one training sample"));
        }
        if !(gamma > T::zero()) || !gamma.is_finite() {
            return Err(Error::domain(format!("gamma must be positive and finite, got {gamma}")));
        }
        let a = kkt_matrix(&kernel, inputs, gamma)?;
        let mut rhs = Vec::with_capacity(targets.len() + 1);
        rhs.push(T::zero());
        rhs.extend_from_slice(targets);
        let sol = solve(&a, &rhs)?;
        let residual = residual_inf(&a, &sol, &rhs)?;
        Ok(Self {
            kernel,
            inputs: inputs.to_vec(),
            bias: sol[0],
            lambdas: sol[1..].to_vec(),
            gamma,
            residual,
        })
    }

    pub fn kernel(&self) -> &KernelSpec<T> {
        &self.kernel
    }

    pub fn lambdas(&self) -> &[T] {
        &self.lambdas
    }

    pub fn bias(&self) -> T {
        self.bias
    }

    pub fn gamma(&self) -> T {
        self.gamma
    }

    pub fn inputs(&self) -> &[Vec<T>] {
        &self.inputs
    }

    /// `‖A·(b, λ) − (0, Y)‖_∞` of the solved system.
    pub fn kkt_residual(&self) -> T {
        self.residual
    }

    /// Bound the residual is expected to satisfy: `1e-8 · max(1, ‖Y‖_∞)`.
    pub fn residual_bound(targets: &[T]) -> T {
        T::lit(1e-8) * norm_inf(targets).max(T::one())
    }
}

impl<T: Scalar> Regressor<T> for LssvmModel<T> {
    fn predict(&self, x: &[T]) -> Result<T> {
        let mut acc = self.bias;
        for (xi, &l) in self.inputs.iter().zip(&self.lambdas) {
            check_len("lssvm query", xi.len(), x.len())?;
            acc += l * self.kernel.eval_unchecked(xi, x);
        }
        Ok(acc)
    }
}
