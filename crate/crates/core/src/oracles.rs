//! Slow reference implementations used to cross-check the fast solvers in
//! tests. Compiled only for tests or with the `oracles` feature.

use crate::kernels::{gram, KernelSpec};

/// Gauss-Jordan elimination with full pivoting on nested vectors.
pub fn gauss_jordan(a: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
    let n = b.len();
    let mut aug: Vec<Vec<f64>> = a
        .iter()
        .zip(b)
        .map(|(r, &bi)| {
            let mut r = r.clone();
            r.push(bi);
            r
        })
        .collect();
    let mut perm: Vec<usize> = (0..n).collect();
    for c in 0..n {
        let mut best = (c, c, 0.0f64);
        for (i, row) in aug.iter().enumerate().skip(c) {
            for (j, v) in row.iter().enumerate().take(n).skip(c) {
                if v.abs() > best.2 {
                    best = (i, j, v.abs());
                }
            }
        }
        aug.swap(c, best.0);
        for row in aug.iter_mut() {
            row.swap(c, best.1);
        }
        perm.swap(c, best.1);
        let p = aug[c][c];
        for v in aug[c].iter_mut() {
            *v /= p;
        }
        let pivot_row = aug[c].clone();
        for (i, row) in aug.iter_mut().enumerate() {
            if i != c {
                let f = row[c];
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
            }
        }
    }
    let mut x = vec![0.0; n];
    for c in 0..n {
        x[perm[c]] = aug[c][n];
    }
    x
}

/// Central-difference gradient of `f` at `x`.
pub fn central_difference(f: impl Fn(&[f64]) -> f64, x: &[f64], h: f64) -> Vec<f64> {
    let mut probe = x.to_vec();
    (0..x.len())
        .map(|i| {
            probe[i] = x[i] + h;
            let up = f(&probe);
            probe[i] = x[i] - h;
            let down = f(&probe);
            probe[i] = x[i];
            (up - down) / (2.0 * h)
        })
        .collect()
}

/// Target of the training input closest to `x` (first one on ties).
pub fn nearest_neighbor(inputs: &[Vec<f64>], targets: &[f64], x: &[f64]) -> f64 {
    let d = |a: &[f64]| a.iter().zip(x).map(|(p, q)| (p - q).powi(2)).sum::<f64>();
    let mut best = (f64::INFINITY, f64::NAN);
    for (xi, &y) in inputs.iter().zip(targets) {
        let di = d(xi);
        if di < best.0 {
            best = (di, y);
        }
    }
    best.1
}

#[derive(Debug, Clone)]
pub struct SvrDualSolution {
    pub alpha: Vec<f64>,
    pub alpha_star: Vec<f64>,
    pub objective: f64,
}

impl SvrDualSolution {
    pub fn coefficients(&self) -> Vec<f64> {
        self.alpha.iter().zip(&self.alpha_star).map(|(a, s)| a - s).collect()
    }
}

/// Minimizes the ε-SVR dual
/// `½ θᵀKθ + ε Σ(α + α*) − Σ z θ`, `θ = α − α*`, over
/// `Σθ = 0, 0 ≤ α, α* ≤ C` by accelerated projected gradient.
pub fn svr_dual(
    kernel: &KernelSpec<f64>,
    inputs: &[Vec<f64>],
    targets: &[f64],
    epsilon: f64,
    c: f64,
    iterations: usize,
) -> SvrDualSolution {
    let n = inputs.len();
    let k = gram(kernel, inputs).expect("oracle kernel");
    let lipschitz = 2.0
        * (0..n)
            .map(|i| k.row(i).iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
            .max(1e-12);
    let step = 1.0 / lipschitz;
    let signs: Vec<f64> = (0..2 * n).map(|i| if i < n { 1.0 } else { -1.0 }).collect();

    let grad = |v: &[f64]| -> Vec<f64> {
        let theta: Vec<f64> = (0..n).map(|i| v[i] - v[n + i]).collect();
        let kt = k.matvec(&theta).expect("oracle matvec");
        let mut g = vec![0.0; 2 * n];
        for i in 0..n {
            g[i] = kt[i] + epsilon - targets[i];
            g[n + i] = -kt[i] + epsilon + targets[i];
        }
        g
    };

    let mut v = vec![0.0; 2 * n];
    let mut w = v.clone();
    let mut t = 1.0f64;
    for _ in 0..iterations {
        let g = grad(&w);
        let u: Vec<f64> = w.iter().zip(&g).map(|(wi, gi)| wi - step * gi).collect();
        let next = project(&u, &signs, c);
        let t_next = (1.0 + (1.0 + 4.0 * t * t).sqrt()) / 2.0;
        let momentum = (t - 1.0) / t_next;
        w = next.iter().zip(&v).map(|(a, b)| a + momentum * (a - b)).collect();
        v = next;
        t = t_next;
    }

    let alpha = v[..n].to_vec();
    let alpha_star = v[n..].to_vec();
    let theta: Vec<f64> = alpha.iter().zip(&alpha_star).map(|(a, s)| a - s).collect();
    let kt = k.matvec(&theta).expect("oracle matvec");
    let quad: f64 = theta.iter().zip(&kt).map(|(a, b)| a * b).sum();
    let linear: f64 = (0..n)
        .map(|i| epsilon * (alpha[i] + alpha_star[i]) - targets[i] * theta[i])
        .sum();
    SvrDualSolution {
        alpha,
        alpha_star,
        objective: 0.5 * quad + linear,
    }
}

/// Euclidean projection onto `{v : aᵀv = 0, 0 ≤ v ≤ C}` with `a ∈ {±1}`,
/// by bisection on the multiplier of the equality.
fn project(u: &[f64], signs: &[f64], c: f64) -> Vec<f64> {
    let at = |mu: f64| -> Vec<f64> {
        u.iter()
            .zip(signs)
            .map(|(ui, ai)| (ui - mu * ai).clamp(0.0, c))
            .collect()
    };
    let balance = |v: &[f64]| v.iter().zip(signs).map(|(x, a)| x * a).sum::<f64>();
    let span = u.iter().map(|x| x.abs()).fold(0.0, f64::max) + c + 1.0;
    let (mut lo, mut hi) = (-span, span);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if balance(&at(mid)) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    at(0.5 * (lo + hi))
}
