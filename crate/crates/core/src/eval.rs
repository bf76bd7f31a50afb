//! Forecast accuracy metrics and the experiment drivers built on them:
//! the multi-model benchmark, the seeded stability study and the lag-one
//! error analysis.

use rayon::prelude::*;

use crate::bpnn::{hidden_size_rule, BpNetwork, SgdConfig};
use crate::error::{check_len, Error, Result};
use crate::grnn::GrnnModel;
use crate::kernels::KernelSpec;
use crate::lssvm::{median_rbf, LssvmModel, DEFAULT_GAMMA};
use crate::model::Regressor;
use crate::rbfnn::{default_centers, RbfNetwork};
use crate::scalar::Scalar;
use crate::svr::{SvrModel, SvrParams};
use crate::timeseries::{MinMaxScaler, WindowedDataset};

/// Default GRNN smoothing for raw price inputs.
pub const DEFAULT_GRNN_BETA: f64 = 0.5;

/// Mean squared error.
pub fn mse<T: Scalar>(actual: &[T], predicted: &[T]) -> Result<T> {
    check_len("predictions", actual.len(), predicted.len())?;
    if actual.is_empty() {
        return Err(Error::shape("metrics need at least one observation"));
    }
    let total: T = actual
        .iter()
        .zip(predicted)
        .map(|(&y, &p)| (y - p) * (y - p))
        .sum();
    Ok(total / T::from_count(actual.len()))
}

/// Mean absolute percentage error as a fraction (0.019 means 1.9 %).
pub fn mape<T: Scalar>(actual: &[T], predicted: &[T]) -> Result<T> {
    check_len("predictions", actual.len(), predicted.len())?;
    if actual.is_empty() {
        return Err(Error::shape("metrics need at least one observation"));
    }
    let mut total = T::zero();
    for (i, (&y, &p)) in actual.iter().zip(predicted).enumerate() {
        if y == T::zero() {
            return Err(Error::domain(format!("actual value at position {i} is zero")));
        }
        total += ((y - p) / y).abs();
    }
    Ok(total / T::from_count(actual.len()))
}

fn mean_and_sample_std<T: Scalar>(values: &[T]) -> (T, T) {
    let n = T::from_count(values.len());
    let mean = values.iter().copied().sum::<T>() / n;
    if values.len() < 2 {
        return (mean, T::zero());
    }
    let ss: T = values.iter().map(|&v| (v - mean) * (v - mean)).sum();
    (mean, (ss / (n - T::one())).sqrt())
}

/// How one model is built from a training split.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelSpec<T> {
    Bp {
        /// Hidden width; `None` applies the rule of thumb.
        hidden: Option<usize>,
        sgd: SgdConfig,
    },
    Rbf {
        /// Number of centers; `None` uses `max(3, floor(sqrt(n)))`.
        centers: Option<usize>,
        seed: u64,
    },
    Grnn {
        beta: f64,
        /// Grow the neuron set with each revealed test observation.
        dynamic: bool,
        /// Operate on min-max scaled prices instead of raw prices.
        scaled: bool,
    },
    Svr {
        /// `None` picks an RBF kernel with the median-distance width.
        kernel: Option<KernelSpec<T>>,
        epsilon: f64,
        c: f64,
        tol: f64,
        max_passes: usize,
    },
    Lssvm {
        /// `None` picks an RBF kernel with the median-distance width.
        kernel: Option<KernelSpec<T>>,
        gamma: f64,
    },
}

impl<T: Scalar> ModelSpec<T> {
    pub fn bp(seed: u64) -> Self {
        Self::Bp {
            hidden: None,
            sgd: SgdConfig {
                seed,
                ..SgdConfig::default()
            },
        }
    }

    pub fn rbf(seed: u64) -> Self {
        Self::Rbf { centers: None, seed }
    }

    pub fn grnn(beta: f64) -> Self {
        Self::Grnn {
            beta,
            dynamic: true,
            scaled: false,
        }
    }

    pub fn svr(kernel: Option<KernelSpec<T>>) -> Self {
        Self::Svr {
            kernel,
            epsilon: crate::svr::DEFAULT_EPSILON,
            c: crate::svr::DEFAULT_C,
            tol: crate::svr::DEFAULT_TOL,
            max_passes: crate::svr::DEFAULT_MAX_PASSES,
        }
    }

    pub fn lssvm(kernel: Option<KernelSpec<T>>) -> Self {
        Self::Lssvm {
            kernel,
            gamma: DEFAULT_GAMMA,
        }
    }

    /// The five models with default settings.
    pub fn all_defaults(seed: u64) -> Vec<Self> {
        vec![
            Self::bp(seed),
            Self::rbf(seed),
            Self::grnn(DEFAULT_GRNN_BETA),
            Self::svr(None),
            Self::lssvm(None),
        ]
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Bp { .. } => "bp",
            Self::Rbf { .. } => "rbf",
            Self::Grnn { .. } => "grnn",
            Self::Svr { .. } => "svr",
            Self::Lssvm { .. } => "lssvm",
        }
    }

    /// Whether the model sees min-max scaled prices.
    pub fn uses_scaling(&self) -> bool {
        match self {
            Self::Grnn { scaled, .. } => *scaled,
            _ => true,
        }
    }

    /// Fits the model on (already transformed) training samples.
    pub fn fit(&self, inputs: &[Vec<T>], targets: &[T]) -> Result<Box<dyn Regressor<T>>> {
        if inputs.is_empty() {
            return Err(Error::domain("empty training set"));
        }
        let dim = inputs[0].len();
        Ok(match self {
            Self::Bp { hidden, sgd } => {
                let width = hidden.unwrap_or_else(|| hidden_size_rule(1, dim));
                let mut net = BpNetwork::new(&[dim, width, 1], sgd.seed)?;
                let vec_targets: Vec<Vec<T>> = targets.iter().map(|&y| vec![y]).collect();
                net.train(inputs, &vec_targets, sgd)?;
                Box::new(net)
            }
            Self::Rbf { centers, seed } => {
                let k = centers.unwrap_or_else(|| default_centers(inputs.len()));
                Box::new(RbfNetwork::fit(inputs, targets, k, *seed)?)
            }
            Self::Grnn { beta, dynamic, .. } => {
                Box::new(GrnnModel::fit(inputs, targets, T::lit(*beta))?.with_dynamic(*dynamic))
            }
            Self::Svr {
                kernel,
                epsilon,
                c,
                tol,
                max_passes,
            } => {
                let params = SvrParams {
                    kernel: kernel.unwrap_or_else(|| median_rbf(inputs)),
                    epsilon: *epsilon,
                    c: *c,
                    tol: *tol,
                    max_passes: *max_passes,
                };
                Box::new(SvrModel::fit(inputs, targets, &params)?)
            }
            Self::Lssvm { kernel, gamma } => {
                let kernel = kernel.unwrap_or_else(|| median_rbf(inputs));
                Box::new(LssvmModel::fit(inputs, targets, kernel, T::lit(*gamma))?)
            }
        })
    }
}

/// Predicts each test sample in order. Online models assimilate the true
/// target of step `t` only after predicting step `t`.
pub fn walk_forward<T: Scalar, R: Regressor<T> + ?Sized>(
    model: &mut R,
    inputs: &[Vec<T>],
    targets: &[T],
) -> Result<Vec<T>> {
    check_len("walk-forward targets", inputs.len(), targets.len())?;
    let online = model.is_online();
    let mut out = Vec::with_capacity(inputs.len());
    for (x, &y) in inputs.iter().zip(targets) {
        out.push(model.predict(x)?);
        if online {
            model.observe(x, y)?;
        }
    }
    Ok(out)
}

/// Test-split actuals and predictions, in raw price units.
#[derive(Debug, Clone, PartialEq)]
pub struct Forecast<T> {
    pub model: String,
    pub actual: Vec<T>,
    pub predicted: Vec<T>,
}

impl<T: Scalar> Forecast<T> {
    pub fn report(&self) -> Result<EvalReport<T>> {
        Ok(EvalReport {
            model: self.model.clone(),
            mse: mse(&self.actual, &self.predicted)?,
            mape: mape(&self.actual, &self.predicted)?,
            n_test: self.actual.len(),
        })
    }
}

/// Trains on the train split and forecasts the test split.
pub fn forecast<T: Scalar>(ds: &WindowedDataset<T>, spec: &ModelSpec<T>) -> Result<Forecast<T>> {
    let train = ds.train()?;
    let test = ds.test()?;
    let predicted = if spec.uses_scaling() {
        let scaler = MinMaxScaler::fit_samples(&train).or_else(|_| degenerate_scaler(&train))?;
        let train_x = scaler.transform_inputs(train.inputs);
        let train_y = scaler.transform_all(train.targets);
        let test_x = scaler.transform_inputs(test.inputs);
        let test_y = scaler.transform_all(test.targets);
        let mut model = spec.fit(&train_x, &train_y)?;
        walk_forward(&mut model, &test_x, &test_y)?
            .into_iter()
            .map(|p| scaler.inverse(p))
            .collect()
    } else {
        let mut model = spec.fit(train.inputs, train.targets)?;
        walk_forward(&mut model, test.inputs, test.targets)?
    };
    Ok(Forecast {
        model: spec.name().to_string(),
        actual: test.targets.to_vec(),
        predicted,
    })
}

/// A training split holding one repeated price gets a unit-width shift.
fn degenerate_scaler<T: Scalar>(train: &crate::timeseries::Samples<'_, T>) -> Result<MinMaxScaler<T>> {
    let v = train
        .targets
        .first()
        .copied()
        .ok_or_else(|| Error::domain("empty training split"))?;
    MinMaxScaler::fit([v, v + T::one()])
}

/// Predicts each target as the last price of its input window.
pub fn naive_forecast<T: Scalar>(ds: &WindowedDataset<T>) -> Result<Forecast<T>> {
    let test = ds.test()?;
    let predicted = test
        .inputs
        .iter()
        .map(|x| x.last().copied().ok_or_else(|| Error::shape("empty input window")))
        .collect::<Result<_>>()?;
    Ok(Forecast {
        model: "naive".to_string(),
        actual: test.targets.to_vec(),
        predicted,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport<T> {
    pub model: String,
    pub mse: T,
    pub mape: T,
    pub n_test: usize,
}

#[derive(Debug)]
pub struct BenchmarkEntry<T> {
    pub model: String,
    pub outcome: Result<EvalReport<T>>,
}

/// Trains and scores every model independently. A failing model yields an
/// error entry; results keep the order of `specs`.
pub fn benchmark<T: Scalar>(ds: &WindowedDataset<T>, specs: &[ModelSpec<T>]) -> Result<Vec<BenchmarkEntry<T>>> {
    if specs.is_empty() {
        return Err(Error::domain("benchmark needs at least one model"));
    }
    ds.test()?;
    Ok(specs
        .par_iter()
        .map(|spec| BenchmarkEntry {
            model: spec.name().to_string(),
            outcome: forecast(ds, spec).and_then(|f| f.report()),
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport<T> {
    pub runs: usize,
    pub mse_mean: T,
    pub mse_std: T,
    pub mape_mean: T,
    pub mape_std: T,
}

/// Trains BP with seeds `base_seed .. base_seed + runs` and summarizes the
/// spread of the test metrics (sample standard deviation).
pub fn stability<T: Scalar>(
    ds: &WindowedDataset<T>,
    hidden: Option<usize>,
    sgd: &SgdConfig,
    runs: usize,
    base_seed: u64,
) -> Result<StabilityReport<T>> {
    let seeds: Vec<u64> = (0..runs as u64).map(|i| base_seed.wrapping_add(i)).collect();
    stability_with_seeds(ds, hidden, sgd, &seeds)
}

pub fn stability_with_seeds<T: Scalar>(
    ds: &WindowedDataset<T>,
    hidden: Option<usize>,
    sgd: &SgdConfig,
    seeds: &[u64],
) -> Result<StabilityReport<T>> {
    if seeds.len() < 2 {
        return Err(Error::domain(format!("stability needs at least 2 runs, got {}", seeds.len())));
    }
    let reports = seeds
        .par_iter()
        .map(|&seed| {
            let spec = ModelSpec::Bp {
                hidden,
                sgd: SgdConfig { seed, ..*sgd },
            };
            forecast(ds, &spec)?.report()
        })
        .collect::<Result<Vec<_>>>()?;
    let mses: Vec<T> = reports.iter().map(|r| r.mse).collect();
    let mapes: Vec<T> = reports.iter().map(|r| r.mape).collect();
    let (mse_mean, mse_std) = mean_and_sample_std(&mses);
    let (mape_mean, mape_std) = mean_and_sample_std(&mapes);
    Ok(StabilityReport {
        runs: seeds.len(),
        mse_mean,
        mse_std,
        mape_mean,
        mape_std,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct LagOneReport<T> {
    /// `e_t = y_t − ŷ_{t+1}`.
    pub errors: Vec<T>,
    pub mean: T,
    pub std: T,
    pub frac_negative: T,
}

/// Compares each actual with the next step's prediction. A predictor that
/// merely echoes the previous price gives `e_t = 0` throughout.
pub fn lag_one_analysis<T: Scalar>(actual: &[T], predicted: &[T]) -> Result<LagOneReport<T>> {
    check_len("predictions", actual.len(), predicted.len())?;
    if actual.len() < 2 {
        return Err(Error::shape("lag-one analysis needs at least two observations"));
    }
    let errors: Vec<T> = actual
        .iter()
        .zip(&predicted[1..])
        .map(|(&y, &p)| y - p)
        .collect();
    let (mean, std) = mean_and_sample_std(&errors);
    let negative = errors.iter().filter(|e| **e < T::zero()).count();
    Ok(LagOneReport {
        frac_negative: T::from_count(negative) / T::from_count(errors.len()),
        errors,
        mean,
        std,
    })
}
