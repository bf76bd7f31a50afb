//! ε-insensitive support vector regression solved in the dual with an
//! SMO-style pairwise solver.
//!
//! The dual is written over `2n` variables `β = (α, α*)` with labels
//! `+1` for `α` and `−1` for `α*`:
//!
//! ```text
//! min ½ βᵀQβ + pᵀβ   s.t.  Σ y_t β_t = 0,  0 ≤ β_t ≤ C
//! Q_ts = y_t y_s K(x_t, x_s),  p = (ε − z, ε + z)
//! ```
//!
//! Each step picks the maximal-violating pair (second-order working set
//! selection) and solves the two-variable subproblem analytically. The
//! fitted predictor is `f(x) = Σ (α_i − α_i*) K(x_i, x) + b`.

use crate::error::{check_len, Error, Result};
use crate::kernels::{gram, KernelSpec};
use crate::model::Regressor;
use crate::scalar::Scalar;

pub const DEFAULT_EPSILON: f64 = 0.01;
pub const DEFAULT_C: f64 = 10.0;
pub const DEFAULT_TOL: f64 = 1e-4;
pub const DEFAULT_MAX_PASSES: usize = 200;

const TAU: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvrParams<T> {
    pub kernel: KernelSpec<T>,
    pub epsilon: f64,
    pub c: f64,
    /// Stop once the maximal KKT violation drops to this value.
    pub tol: f64,
    /// Iteration budget, in units of `2n` pair updates.
    pub max_passes: usize,
}

impl<T: Scalar> SvrParams<T> {
    pub fn new(kernel: KernelSpec<T>) -> Self {
        Self {
            kernel,
            epsilon: DEFAULT_EPSILON,
            c: DEFAULT_C,
            tol: DEFAULT_TOL,
            max_passes: DEFAULT_MAX_PASSES,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.kernel.validate()?;
        if !(self.epsilon >= 0.0) || !self.epsilon.is_finite() {
            return Err(Error::domain(format!("epsilon must be >= 0, got {}", self.epsilon)));
        }
        if !(self.c > 0.0) || !self.c.is_finite() {
            return Err(Error::domain(format!("C must be > 0, got {}", self.c)));
        }
        if !(self.tol > 0.0) {
            return Err(Error::domain(format!("tolerance must be > 0, got {}", self.tol)));
        }
        if self.max_passes == 0 {
            return Err(Error::domain("max_passes must be >= 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverStatus {
    Converged,
    /// The iteration budget ran out; the model is usable but not optimal.
    MaxPassesReached,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SvrModel<T> {
    kernel: KernelSpec<T>,
    support_vectors: Vec<Vec<T>>,
    coefficients: Vec<T>,
    bias: T,
    epsilon: T,
    c: T,
    objective: T,
    iterations: usize,
    status: SolverStatus,
}

impl<T: Scalar> SvrModel<T> {
    /// Assembles a model from explicit parameters (no training).
    pub fn from_parts(
        kernel: KernelSpec<T>,
        support_vectors: Vec<Vec<T>>,
        coefficients: Vec<T>,
        bias: T,
    ) -> Result<Self> {
        check_len("svr coefficients", support_vectors.len(), coefficients.len())?;
        if let Some(first) = support_vectors.first() {
            for v in &support_vectors {
                check_len("support vector", first.len(), v.len())?;
            }
        }
        let c = coefficients.iter().fold(T::zero(), |m, v| m.max(v.abs()));
        Ok(Self {
            kernel,
            support_vectors,
            coefficients,
            bias,
            epsilon: T::zero(),
            c,
            objective: T::nan(),
            iterations: 0,
            status: SolverStatus::Converged,
        })
    }

    pub fn fit(inputs: &[Vec<T>], targets: &[T], params: &SvrParams<T>) -> Result<Self> {
        params.validate()?;
        check_len("svr targets", inputs.len(), targets.len())?;
        if inputs.is_empty() {
            return Err(Error::domain("svr needs at least one training sample"));
        }
        let k = gram(&params.kernel, inputs)?;
        let n = inputs.len();
        let l = 2 * n;
        let c = T::lit(params.c);
        let eps = T::lit(params.epsilon);
        let tol = T::lit(params.tol);
        let tau = T::lit(TAU);
        let zero = T::zero();

        let sign = |t: usize| if t < n { T::one() } else { -T::one() };
        let kern = |t: usize, s: usize| k[(t % n, s % n)];
        let q = |t: usize, s: usize| sign(t) * sign(s) * kern(t, s);

        let p: Vec<T> = (0..l)
            .map(|t| if t < n { eps - targets[t] } else { eps + targets[t - n] })
            .collect();
        let mut alpha = vec![zero; l];
        let mut grad = p.clone();

        let in_up = |a: T, y: T| if y > zero { a < c } else { a > zero };
        let in_low = |a: T, y: T| if y > zero { a > zero } else { a < c };

        let max_iter = params.max_passes.saturating_mul(l.max(1));
        let mut iterations = 0;
        let mut status = SolverStatus::MaxPassesReached;

        while iterations < max_iter {
            let mut gmax = T::neg_infinity();
            let mut gmax_idx = None;
            let mut gmin = T::infinity();
            for t in 0..l {
                let v = -sign(t) * grad[t];
                if in_up(alpha[t], sign(t)) && v >= gmax {
                    gmax = v;
                    gmax_idx = Some(t);
                }
                if in_low(alpha[t], sign(t)) && v < gmin {
                    gmin = v;
                }
            }
            let Some(i) = gmax_idx else {
                status = SolverStatus::Converged;
                break;
            };
            if gmax - gmin < tol {
                status = SolverStatus::Converged;
                break;
            }

            let mut best_j = None;
            let mut best_obj = T::infinity();
            for t in 0..l {
                if !in_low(alpha[t], sign(t)) {
                    continue;
                }
                let b = gmax + sign(t) * grad[t];
                if b > zero {
                    let mut a = kern(i, i) + kern(t, t) - T::lit(2.0) * kern(i, t);
                    if a <= zero {
                        a = tau;
                    }
                    let obj = -(b * b) / a;
                    if obj <= best_obj {
                        best_obj = obj;
                        best_j = Some(t);
                    }
                }
            }
            let Some(j) = best_j else {
                status = SolverStatus::Converged;
                break;
            };

            let (old_i, old_j) = (alpha[i], alpha[j]);
            if sign(i) != sign(j) {
                let mut quad = q(i, i) + q(j, j) + T::lit(2.0) * q(i, j);
                if quad <= zero {
                    quad = tau;
                }
                let delta = (-grad[i] - grad[j]) / quad;
                let diff = alpha[i] - alpha[j];
                alpha[i] += delta;
                alpha[j] += delta;
                if diff > zero {
                    if alpha[j] < zero {
                        alpha[j] = zero;
                        alpha[i] = diff;
                    }
                } else if alpha[i] < zero {
                    alpha[i] = zero;
                    alpha[j] = -diff;
                }
                if diff > zero {
                    if alpha[i] > c {
                        alpha[i] = c;
                        alpha[j] = c - diff;
                    }
                } else if alpha[j] > c {
                    alpha[j] = c;
                    alpha[i] = c + diff;
                }
            } else {
                let mut quad = q(i, i) + q(j, j) - T::lit(2.0) * q(i, j);
                if quad <= zero {
                    quad = tau;
                }
                let delta = (grad[i] - grad[j]) / quad;
                let sum = alpha[i] + alpha[j];
                alpha[i] -= delta;
                alpha[j] += delta;
                if sum > c {
                    if alpha[i] > c {
                        alpha[i] = c;
                        alpha[j] = sum - c;
                    }
                } else if alpha[j] < zero {
                    alpha[j] = zero;
                    alpha[i] = sum;
                }
                if sum > c {
                    if alpha[j] > c {
                        alpha[j] = c;
                        alpha[i] = sum - c;
                    }
                } else if alpha[i] < zero {
                    alpha[i] = zero;
                    alpha[j] = sum;
                }
            }

            let di = alpha[i] - old_i;
            let dj = alpha[j] - old_j;
            for (t, g) in grad.iter_mut().enumerate() {
                *g += q(t, i) * di + q(t, j) * dj;
            }
            iterations += 1;
        }

        let bias = -offset(&alpha, &grad, n, c);
        let objective = alpha
            .iter()
            .zip(grad.iter().zip(&p))
            .map(|(&a, (&g, &pt))| a * (g + pt))
            .sum::<T>()
            / T::lit(2.0);
        let coefficients = (0..n).map(|t| alpha[t] - alpha[t + n]).collect();

        Ok(Self {
            kernel: params.kernel,
            support_vectors: inputs.to_vec(),
            coefficients,
            bias,
            epsilon: eps,
            c,
            objective,
            iterations,
            status,
        })
    }

    pub fn kernel(&self) -> &KernelSpec<T> {
        &self.kernel
    }

    /// Per-sample dual differences `α_i − α_i*`.
    pub fn coefficients(&self) -> &[T] {
        &self.coefficients
    }

    pub fn support_vectors(&self) -> &[Vec<T>] {
        &self.support_vectors
    }

    pub fn bias(&self) -> T {
        self.bias
    }

    pub fn epsilon(&self) -> T {
        self.epsilon
    }

    pub fn c(&self) -> T {
        self.c
    }

    /// Final value of the minimized dual objective.
    pub fn objective(&self) -> T {
        self.objective
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    pub fn status(&self) -> SolverStatus {
        self.status
    }

    pub fn n_support(&self) -> usize {
        self.coefficients.iter().filter(|c| **c != T::zero()).count()
    }
}

/// Offset `ρ` with `f(x) = Σ coef·K − ρ`: the mean of `y_t·G_t` over free
/// variables, or the midpoint of the feasible interval when none is free.
fn offset<T: Scalar>(alpha: &[T], grad: &[T], n: usize, c: T) -> T {
    let mut ub = T::infinity();
    let mut lb = T::neg_infinity();
    let mut free_sum = T::zero();
    let mut free = 0usize;
    for (t, (&a, &g)) in alpha.iter().zip(grad).enumerate() {
        let positive = t < n;
        let yg = if positive { g } else { -g };
        if a >= c {
            if positive {
                lb = lb.max(yg);
            } else {
                ub = ub.min(yg);
            }
        } else if a <= T::zero() {
            if positive {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else {
            free += 1;
            free_sum += yg;
        }
    }
    if free > 0 {
        free_sum / T::from_count(free)
    } else {
        (ub + lb) / T::lit(2.0)
    }
}

impl<T: Scalar> Regressor<T> for SvrModel<T> {
    fn predict(&self, x: &[T]) -> Result<T> {
        let mut acc = self.bias;
        for (sv, &coef) in self.support_vectors.iter().zip(&self.coefficients) {
            check_len("svr query", sv.len(), x.len())?;
            if coef != T::zero() {
                acc += coef * self.kernel.eval_unchecked(sv, x);
            }
        }
        Ok(acc)
    }
}
