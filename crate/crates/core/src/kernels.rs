//! Kernel functions shared by the support-vector models.

use std::fmt;

use crate::error::{check_len, Error, Result};
use crate::linalg::{dot_unchecked, squared_distance, DenseMatrix};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelSpec<T> {
    /// `aᵀb`
    Linear,
    /// `(1 + aᵀb / c)^degree`
    Polynomial { degree: u32, c: T },
    /// `exp(−‖a − b‖² / σ²)`
    Rbf { sigma: T },
    /// `tanh(k·aᵀb + θ)`; not positive semidefinite in general.
    Mlp { k: T, theta: T },
}

impl<T: Scalar> KernelSpec<T> {
    pub fn polynomial(degree: u32, c: T) -> Result<Self> {
        if degree < 1 {
            return Err(Error::domain("polynomial degree must be >= 1"));
        }
        if !(c > T::zero()) {
            return Err(Error::domain("polynomial constant c must be > 0"));
        }
        Ok(Self::Polynomial { degree, c })
    }

    pub fn rbf(sigma: T) -> Result<Self> {
        if !(sigma > T::zero()) || !sigma.is_finite() {
            return Err(Error::domain("rbf sigma must be a positive finite number"));
        }
        Ok(Self::Rbf { sigma })
    }

    pub fn mlp(k: T, theta: T) -> Result<Self> {
        if !k.is_finite() || !theta.is_finite() {
            return Err(Error::domain("mlp kernel constants must be finite"));
        }
        Ok(Self::Mlp { k, theta })
    }

    /// Re-checks the constructor invariants, for values built directly.
    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Linear => Ok(()),
            Self::Polynomial { degree, c } => Self::polynomial(degree, c).map(drop),
            Self::Rbf { sigma } => Self::rbf(sigma).map(drop),
            Self::Mlp { k, theta } => Self::mlp(k, theta).map(drop),
        }
    }

    /// Short stable label used in reports.
    pub fn label(&self) -> &'static str {
        match self {
            Self::Linear => "linear",
            Self::Polynomial { .. } => "poly",
            Self::Rbf { .. } => "rbf",
            Self::Mlp { .. } => "sigmoid-mlp",
        }
    }

    pub fn eval(&self, a: &[T], b: &[T]) -> Result<T> {
        check_len("kernel operand", a.len(), b.len())?;
        Ok(self.eval_unchecked(a, b))
    }

    #[inline]
    pub(crate) fn eval_unchecked(&self, a: &[T], b: &[T]) -> T {
        match *self {
            Self::Linear => dot_unchecked(a, b),
            Self::Polynomial { degree, c } => {
                (T::one() + dot_unchecked(a, b) / c).powi(degree as i32)
            }
            Self::Rbf { sigma } => (-squared_distance(a, b) / (sigma * sigma)).exp(),
            Self::Mlp { k, theta } => (k * dot_unchecked(a, b) + theta).tanh(),
        }
    }
}

impl<T: Scalar> fmt::Display for KernelSpec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Linear => write!(f, "linear"),
            Self::Polynomial { degree, c } => write!(f, "poly(d={degree},c={c})"),
            Self::Rbf { sigma } => write!(f, "rbf(sigma={sigma})"),
            Self::Mlp { k, theta } => write!(f, "mlp(k={k},theta={theta})"),
        }
    }
}

/// Gram matrix `Ω_ij = K(x_i, x_j)`, evaluated once per unordered pair.
pub fn gram<T: Scalar>(spec: &KernelSpec<T>, xs: &[Vec<T>]) -> Result<DenseMatrix<T>> {
    let dim = xs.first().map_or(0, Vec::len);
    for (i, x) in xs.iter().enumerate() {
        check_len(&format!("gram input {i}"), dim, x.len())?;
    }
    let n = xs.len();
    let mut g = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = spec.eval_unchecked(&xs[i], &xs[j]);
            g[(i, j)] = v;
            g[(j, i)] = v;
        }
    }
    Ok(g)
}

/// Median of all pairwise Euclidean distances, skipping zero distances.
///
/// Returns `None` when fewer than two distinct points exist.
pub fn median_pairwise_distance<T: Scalar>(xs: &[Vec<T>]) -> Option<T> {
    let mut d: Vec<T> = Vec::with_capacity(xs.len() * xs.len().saturating_sub(1) / 2);
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            let v = squared_distance(&xs[i], &xs[j]).sqrt();
            if v > T::zero() {
                d.push(v);
            }
        }
    }
    if d.is_empty() {
        return None;
    }
    d.sort_by(|a, b| a.partial_cmp(b).expect("finite distances"));
    let mid = d.len() / 2;
    Some(if d.len() % 2 == 1 {
        d[mid]
    } else {
        (d[mid - 1] + d[mid]) / T::lit(2.0)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn specs() -> Vec<KernelSpec<f64>> {
        vec![
            KernelSpec::Linear,
            KernelSpec::polynomial(3, 2.0).unwrap(),
            KernelSpec::rbf(0.7).unwrap(),
            KernelSpec::mlp(0.5, -0.2).unwrap(),
        ]
    }

    #[test]
    fn formulas() {
        assert_eq!(KernelSpec::Linear.eval(&[1.0, 2.0], &[3.0, 4.0]).unwrap(), 11.0);
        let p = KernelSpec::polynomial(2, 1.0).unwrap();
        assert_eq!(p.eval(&[1.0, 0.0], &[1.0, 0.0]).unwrap(), 4.0);
        for sigma in [0.01, 1.0, 50.0] {
            let r = KernelSpec::rbf(sigma).unwrap();
            assert_eq!(r.eval(&[0.3, -2.0], &[0.3, -2.0]).unwrap(), 1.0);
        }
        // no factor of two in the exponent
        let r = KernelSpec::rbf(2.0).unwrap();
        let v = r.eval(&[0.0], &[2.0]).unwrap();
        assert!((v - (-1.0f64).exp()).abs() < 1e-15);
        let m = KernelSpec::mlp(2.0, 0.5).unwrap();
        assert!((m.eval(&[1.0], &[0.25]).unwrap() - 1.0f64.tanh()).abs() < 1e-15);
    }

    #[test]
    fn invalid_constants() {
        assert!(KernelSpec::polynomial(0, 1.0).is_err());
        assert!(KernelSpec::polynomial(2, 0.0).is_err());
        assert!(KernelSpec::rbf(0.0).is_err());
        assert!(KernelSpec::rbf(-1.0).is_err());
        assert!(KernelSpec::mlp(f64::NAN, 0.0).is_err());
        assert!(KernelSpec::Rbf { sigma: -2.0 }.validate().is_err());
        assert!(KernelSpec::<f64>::Linear.eval(&[1.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn gram_examples() {
        let g = gram(&KernelSpec::Linear, &[vec![0.0], vec![2.0]]).unwrap();
        assert_eq!(g.as_slice(), &[0.0, 0.0, 0.0, 4.0]);

        let xs = vec![vec![0.1, 0.2], vec![0.5, -0.3], vec![1.0, 1.0], vec![-0.4, 0.0]];
        for spec in specs() {
            let g = gram(&spec, &xs).unwrap();
            for i in 0..xs.len() {
                for j in 0..xs.len() {
                    assert_eq!(g[(i, j)], g[(j, i)]);
                }
            }
        }
        let g = gram(&KernelSpec::rbf(0.3).unwrap(), &xs).unwrap();
        assert!((0..xs.len()).all(|i| g[(i, i)] == 1.0));
        assert!(gram(&KernelSpec::Linear, &[vec![1.0], vec![1.0, 2.0]]).is_err());
    }

    #[test]
    fn median_distance() {
        let xs = vec![vec![0.0], vec![1.0], vec![3.0]];
        // distances 1, 2, 3
        assert_eq!(median_pairwise_distance(&xs), Some(2.0));
        assert_eq!(median_pairwise_distance(&[vec![1.0], vec![1.0]]), None::<f64>);
    }

    fn vec3() -> impl Strategy<Value = Vec<f64>> {
        proptest::collection::vec(-3.0..3.0f64, 3)
    }

    proptest! {
        #[test]
        fn symmetric(a in vec3(), b in vec3()) {
            for spec in specs() {
                prop_assert_eq!(spec.eval(&a, &b).unwrap(), spec.eval(&b, &a).unwrap());
            }
        }

        #[test]
        fn rbf_range(a in vec3(), b in vec3(), sigma in 0.5..10.0f64) {
            let v = KernelSpec::rbf(sigma).unwrap().eval(&a, &b).unwrap();
            prop_assert!(v > 0.0 && v <= 1.0);
            if a != b {
                prop_assert!(v < 1.0);
            }
        }

        #[test]
        fn linear_and_rbf_gram_psd(
            xs in proptest::collection::vec(vec3(), 1..8),
            probe in proptest::collection::vec(-1.0..1.0f64, 8),
        ) {
            for spec in [KernelSpec::Linear, KernelSpec::rbf(1.3).unwrap()] {
                let g = gram(&spec, &xs).unwrap();
                let z = &probe[..xs.len()];
                let gz = g.matvec(z).unwrap();
                let q: f64 = z.iter().zip(&gz).map(|(a, b)| a * b).sum();
                prop_assert!(q >= -1e-8);
            }
        }
    }
}
