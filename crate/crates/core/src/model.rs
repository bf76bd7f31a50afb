//! The uniform contract every fitted model satisfies.

use crate::error::Result;
use crate::scalar::Scalar;

/// A fitted single-output regressor.
///
/// Models are fitted by their own constructors; this trait covers what the
/// evaluation harness needs afterwards.
pub trait Regressor<T: Scalar>: Send + Sync {
    fn predict(&self, x: &[T]) -> Result<T>;

    /// Assimilates a newly observed `(x, y)` pair during walk-forward
    /// evaluation. Models without online updates ignore it.
    fn observe(&mut self, _x: &[T], _y: T) -> Result<()> {
        Ok(())
    }

    /// Whether [`observe`](Self::observe) changes the model.
    fn is_online(&self) -> bool {
        false
    }

    fn predict_all(&self, xs: &[Vec<T>]) -> Result<Vec<T>> {
        xs.iter().map(|x| self.predict(x)).collect()
    }
}

impl<T: Scalar, R: Regressor<T> + ?Sized> Regressor<T> for Box<R> {
    fn predict(&self, x: &[T]) -> Result<T> {
        (**self).predict(x)
    }

    fn observe(&mut self, x: &[T], y: T) -> Result<()> {
        (**self).observe(x, y)
    }

    fn is_online(&self) -> bool {
        (**self).is_online()
    }
}
