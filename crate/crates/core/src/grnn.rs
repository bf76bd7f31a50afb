//! General regression neural network: every stored sample is a neuron and
//! the prediction is the kernel-weighted average of stored targets.
//!
//! The dynamic variant keeps growing: [`GrnnModel::observe`] appends each
//! newly revealed observation as another neuron.

use crate::error::{check_len, Error, Result};
use crate::linalg::squared_distance;
use crate::model::Regressor;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct GrnnModel<T> {
    inputs: Vec<Vec<T>>,
    targets: Vec<T>,
    beta: T,
    dynamic: bool,
}

impl<T: Scalar> GrnnModel<T> {
    /// Stores every training sample; no optimization takes place.
    pub fn fit(inputs: &[Vec<T>], targets: &[T], beta: T) -> Result<Self> {
        check_len("grnn targets", inputs.len(), targets.len())?;
        if inputs.is_empty() {
            return Err(Error::domain("grnn needs at least one training sample"));
        }
        if !(beta > T::zero()) || !beta.is_finite() {
            return Err(Error::domain(format!("grnn beta must be positive and finite, got {beta}")));
        }
        let dim = inputs[0].len();
        for x in inputs {
            check_len("grnn input", dim, x.len())?;
        }
        Ok(Self {
            inputs: inputs.to_vec(),
            targets: targets.to_vec(),
            beta,
            dynamic: true,
        })
    }

    /// Static models ignore [`Regressor::observe`] during walk-forward runs.
    pub fn with_dynamic(mut self, dynamic: bool) -> Self {
        self.dynamic = dynamic;
        self
    }

    pub fn beta(&self) -> T {
        self.beta
    }

    pub fn is_dynamic(&self) -> bool {
        self.dynamic
    }

    pub fn neurons(&self) -> usize {
        self.targets.len()
    }

    pub fn dim(&self) -> usize {
        self.inputs[0].len()
    }

    /// Appends `(x, y)` as a new neuron.
    pub fn observe(&mut self, x: &[T], y: T) -> Result<()> {
        check_len("grnn observation", self.dim(), x.len())?;
        self.inputs.push(x.to_vec());
        self.targets.push(y);
        Ok(())
    }

    pub fn predict(&self, x: &[T]) -> Result<T> {
        check_len("grnn query", self.dim(), x.len())?;
        let exps: Vec<T> = self
            .inputs
            .iter()
            .map(|xi| -self.beta * squared_distance(x, xi))
            .collect();
        let top = exps.iter().copied().fold(T::neg_infinity(), T::max);
        let mut num = T::zero();
        let mut den = T::zero();
        for (&e, &y) in exps.iter().zip(&self.targets) {
            let w = (e - top).exp();
            num += w * y;
            den += w;
        }
        Ok(num / den)
    }
}

impl<T: Scalar> Regressor<T> for GrnnModel<T> {
    fn predict(&self, x: &[T]) -> Result<T> {
        GrnnModel::predict(self, x)
    }

    fn observe(&mut self, x: &[T], y: T) -> Result<()> {
        if self.dynamic {
            GrnnModel::observe(self, x, y)
        } else {
            Ok(())
        }
    }

    fn is_online(&self) -> bool {
        self.dynamic
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::{any, prop_assert, prop_assert_eq, proptest};

    fn two_point(beta: f64) -> GrnnModel<f64> {
        GrnnModel::fit(&[vec![0.0], vec![1.0]], &[1.0, 3.0], beta).unwrap()
    }

    #[test]
    fn stores_every_sample() {
        let xs: Vec<Vec<f64>> = (0..339).map(|i| vec![i as f64]).collect();
        let ys: Vec<f64> = (0..339).map(|i| i as f64).collect();
        let m = GrnnModel::fit(&xs, &ys, 0.5).unwrap();
        assert_eq!(m.neurons(), 339);
        assert_eq!(m, GrnnModel::fit(&xs, &ys, 0.5).unwrap());
    }

    #[test]
    fn invalid_fit() {
        assert!(matches!(GrnnModel::fit(&[vec![0.0]], &[1.0], 0.0), Err(Error::Domain(_))));
        assert!(GrnnModel::fit(&[vec![0.0]], &[1.0], -1.0).is_err());
        assert!(GrnnModel::<f64>::fit(&[], &[], 1.0).is_err());
        assert!(GrnnModel::fit(&[vec![0.0], vec![1.0, 2.0]], &[1.0, 2.0], 1.0).is_err());
    }

    #[test]
    fn single_neuron() {
        for beta in [1e-6, 1.0, 1e6] {
            let m = GrnnModel::fit(&[vec![2.0, 2.0]], &[5.0], beta).unwrap();
            assert_eq!(m.predict(&[-30.0, 9.0]).unwrap(), 5.0);
        }
    }

    #[test]
    fn midpoint_symmetry() {
        for beta in [0.01, 1.0, 20.0, 1e4] {
            assert!((two_point(beta).predict(&[0.5]).unwrap() - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn direct_formula_and_large_beta_limit() {
        let w0 = (-10.0f64 * 0.81).exp();
        let w1 = (-10.0f64 * 0.01).exp();
        let expected = (w0 * 1.0 + w1 * 3.0) / (w0 + w1);
        assert!((two_point(10.0).predict(&[0.9]).unwrap() - expected).abs() < 1e-14);
        assert!((two_point(1e4).predict(&[0.9]).unwrap() - 3.0).abs() < 1e-3);
    }

    #[test]
    fn distant_query_is_finite() {
        let p = two_point(20.0).predict(&[1e5]).unwrap();
        assert_eq!(p, 3.0);
    }

    #[test]
    fn observe_grows_and_dominates_at_large_beta() {
        let xs: Vec<Vec<f64>> = (0..339).map(|i| vec![i as f64 * 0.01]).collect();
        let ys: Vec<f64> = (0..339).map(|i| (i as f64 * 0.1).sin()).collect();
        let mut m = GrnnModel::fit(&xs, &ys, 1e6).unwrap();
        m.observe(&[10.0], 42.0).unwrap();
        assert_eq!(m.neurons(), 340);
        assert!((m.predict(&[10.0]).unwrap() - 42.0).abs() < 1e-6);
        assert!(matches!(m.observe(&[1.0, 2.0], 0.0), Err(Error::Shape(_))));
    }

    #[test]
    fn duplicate_observation_is_neutral() {
        // symmetric neighbors make the prediction at 0 equal to its own target
        let mut m = GrnnModel::fit(&[vec![-1.0f64], vec![0.0], vec![1.0]], &[1.0, 2.0, 3.0], 0.7).unwrap();
        let before = m.predict(&[0.0]).unwrap();
        m.observe(&[0.0], 2.0).unwrap();
        assert_eq!(m.neurons(), 4);
        assert!((m.predict(&[0.0]).unwrap() - before).abs() < 1e-15f64);
    }

    #[test]
    fn static_mode_ignores_observe() {
        let mut m: Box<dyn Regressor<f64>> = Box::new(two_point(1.0).with_dynamic(false));
        m.observe(&[0.5], 100.0).unwrap();
        assert!((m.predict(&[0.5]).unwrap() - 2.0).abs() < 1e-12);
        assert!(!m.is_online());
    }

    fn nearest_oracle(xs: &[Vec<f64>], ys: &[f64], q: &[f64]) -> f64 {
        let mut best = (0usize, f64::INFINITY);
        for (i, x) in xs.iter().enumerate() {
            let d: f64 = x.iter().zip(q).map(|(a, b)| (a - b).powi(2)).sum();
            if d < best.1 {
                best = (i, d);
            }
        }
        ys[best.0]
    }

    proptest! {
        #[test]
        fn prediction_within_target_range(
            seed in any::<u64>(),
            beta in 1e-3..1e3f64,
            q in proptest::collection::vec(-5.0..5.0f64, 3),
        ) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let xs: Vec<Vec<f64>> = (0..15).map(|_| (0..3).map(|_| rng.random_range(-1.0..1.0)).collect()).collect();
            let ys: Vec<f64> = (0..15).map(|_| rng.random_range(-2.0..2.0)).collect();
            let m = GrnnModel::fit(&xs, &ys, beta).unwrap();
            let p = m.predict(&q).unwrap();
            let lo = ys.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = ys.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            prop_assert!(p >= lo - 1e-12 && p <= hi + 1e-12);

            let near = GrnnModel::fit(&xs, &ys, 1e6).unwrap();
            let p = near.predict(&q).unwrap();
            let oracle = nearest_oracle(&xs, &ys, &q);
            // only assert the limit when the nearest neighbor is well separated
            let mut d: Vec<f64> = xs.iter().map(|x| x.iter().zip(&q).map(|(a, b)| (a - b).powi(2)).sum()).collect();
            d.sort_by(|a, b| a.partial_cmp(b).unwrap());
            if d[1] - d[0] > 1e-3 {
                prop_assert_eq!(p, oracle);
            }
        }
    }
}
