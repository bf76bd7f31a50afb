//! Price series ingestion, sliding-window samples, chronological split and
//! min-max scaling.

use std::fs::File;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use chrono::{Days, NaiveDate};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Ordered `(date, close)` observations for one instrument.
#[derive(Debug, Clone, PartialEq)]
pub struct PriceSeries<T> {
    ticker: String,
    dates: Vec<NaiveDate>,
    prices: Vec<T>,
}

impl<T: Scalar> PriceSeries<T> {
    /// Validates strictly increasing dates and positive prices.
    pub fn new(ticker: impl Into<String>, dates: Vec<NaiveDate>, prices: Vec<T>) -> Result<Self> {
        if dates.len() != prices.len() {
            return Err(Error::shape(format!(
                "{} dates but {} prices",
                dates.len(),
                prices.len()
            )));
        }
        if prices.is_empty() {
            return Err(Error::domain("price series is empty"));
        }
        for (i, w) in dates.windows(2).enumerate() {
            if w[1] <= w[0] {
                return Err(Error::Order {
                    row: i + 3,
                    date: w[1].to_string(),
                    previous: w[0].to_string(),
                });
            }
        }
        if let Some(i) = prices.iter().position(|p| !(*p > T::zero()) || !p.is_finite()) {
            return Err(Error::domain(format!(
                "price at row {} must be positive and finite, got {}",
                i + 2,
                prices[i]
            )));
        }
        Ok(Self {
            ticker: ticker.into(),
            dates,
            prices,
        })
    }

    /// Convenience constructor that assigns weekly dates starting 2006-01-03.
    pub fn weekly(ticker: impl Into<String>, prices: Vec<T>) -> Result<Self> {
        let start = NaiveDate::from_ymd_opt(2006, 1, 3).expect("valid date");
        let dates = (0..prices.len())
            .map(|i| start + Days::new(7 * i as u64))
            .collect();
        Self::new(ticker, dates, prices)
    }

    pub fn ticker(&self) -> &str {
        &self.ticker
    }

    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    pub fn prices(&self) -> &[T] {
        &self.prices
    }

    pub fn len(&self) -> usize {
        self.prices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prices.is_empty()
    }

    pub fn min_price(&self) -> T {
        self.prices.iter().copied().fold(T::infinity(), T::min)
    }

    pub fn max_price(&self) -> T {
        self.prices.iter().copied().fold(T::neg_infinity(), T::max)
    }
}

/// Reads a `date,close` CSV. The ticker is taken from the file stem.
pub fn load_csv<T: Scalar>(path: impl AsRef<Path>) -> Result<PriceSeries<T>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let ticker = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    read_csv(ticker, file)
}

/// Parses `date,close` CSV content from any reader.
pub fn read_csv<T: Scalar, R: Read>(ticker: impl Into<String>, reader: R) -> Result<PriceSeries<T>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);

    let headers = rdr.headers().map_err(|e| Error::Parse {
        row: 1,
        message: e.to_string(),
    })?;
    if headers.len() != 2 || &headers[0] != "date" || &headers[1] != "close" {
        return Err(Error::Parse {
            row: 1,
            message: format!("expected header `date,close`, found `{}`", headers.iter().collect::<Vec<_>>().join(",")),
        });
    }

    let mut dates = Vec::new();
    let mut prices = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let row = i + 2;
        let rec = rec.map_err(|e| Error::Parse {
            row,
            message: e.to_string(),
        })?;
        if rec.len() != 2 {
            return Err(Error::Parse {
                row,
                message: format!("expected 2 fields, found {}", rec.len()),
            });
        }
        let date = NaiveDate::parse_from_str(&rec[0], "%Y-%m-%d").map_err(|e| Error::Parse {
            row,
            message: format!("bad date `{}`: {e}", &rec[0]),
        })?;
        let close: f64 = rec[1].parse().map_err(|_| Error::Parse {
            row,
            message: format!("bad close price `{}`", &rec[1]),
        })?;
        if !close.is_finite() {
            return Err(Error::Parse {
                row,
                message: format!("close price `{}` is not finite", &rec[1]),
            });
        }
        if let Some(&prev) = dates.last() {
            if date <= prev {
                return Err(Error::Order {
                    row,
                    date: date.to_string(),
                    previous: prev.to_string(),
                });
            }
        }
        if close <= 0.0 {
            return Err(Error::domain(format!("close price at row {row} must be positive, got {close}")));
        }
        dates.push(date);
        prices.push(T::lit(close));
    }
    PriceSeries::new(ticker, dates, prices)
}

/// Writes the series as `date,close` CSV. Prices use the shortest
/// representation that parses back to the same value.
pub fn write_csv<T: Scalar, W: Write>(series: &PriceSeries<T>, writer: W) -> Result<()> {
    let io = |e: csv::Error| Error::Io {
        path: PathBuf::from(series.ticker()),
        source: e.into(),
    };
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["date", "close"]).map_err(io)?;
    for (d, p) in series.dates().iter().zip(series.prices()) {
        w.write_record([d.format("%Y-%m-%d").to_string(), p.to_string()])
            .map_err(io)?;
    }
    w.flush().map_err(|source| Error::Io {
        path: PathBuf::from(series.ticker()),
        source,
    })
}

/// Sliding-window supervised samples: `inputs[i]` holds `lags` consecutive
/// prices starting at `i` and `targets[i]` the price that follows them.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowedDataset<T> {
    inputs: Vec<Vec<T>>,
    targets: Vec<T>,
    split_index: Option<usize>,
}

/// Borrowed inputs and targets of one part of a dataset.
#[derive(Debug, Clone, Copy)]
pub struct Samples<'a, T> {
    pub inputs: &'a [Vec<T>],
    pub targets: &'a [T],
}

impl<T> Samples<'_, T> {
    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }
}

pub fn make_windows<T: Scalar>(series: &PriceSeries<T>, lags: usize) -> Result<WindowedDataset<T>> {
    if lags == 0 {
        return Err(Error::domain("lags must be positive"));
    }
    let prices = series.prices();
    if prices.len() <= lags {
        return Err(Error::domain(format!(
            "{} prices cannot form a sample with {lags} lags",
            prices.len()
        )));
    }
    let inputs = prices.windows(lags + 1).map(|w| w[..lags].to_vec()).collect();
    let targets = prices[lags..].to_vec();
    Ok(WindowedDataset {
        inputs,
        targets,
        split_index: None,
    })
}

impl<T: Scalar> WindowedDataset<T> {
    /// Builds a dataset from explicit samples (no split).
    pub fn from_samples(inputs: Vec<Vec<T>>, targets: Vec<T>) -> Result<Self> {
        if inputs.len() != targets.len() {
            return Err(Error::shape(format!(
                "{} inputs but {} targets",
                inputs.len(),
                targets.len()
            )));
        }
        let dim = inputs.first().map_or(0, Vec::len);
        if inputs.iter().any(|x| x.len() != dim) {
            return Err(Error::shape("inputs of differing dimension"));
        }
        Ok(Self {
            inputs,
            targets,
            split_index: None,
        })
    }

    /// Chronological split: the first `floor(train_fraction · n)` samples train.
    pub fn split(mut self, train_fraction: f64) -> Result<Self> {
        if !(train_fraction > 0.0 && train_fraction < 1.0) {
            return Err(Error::domain(format!(
                "train fraction must lie in (0, 1), got {train_fraction}"
            )));
        }
        let n = self.len();
        let k = (train_fraction * n as f64).floor() as usize;
        if k == 0 || k >= n {
            return Err(Error::domain(format!(
                "split of {n} samples at {train_fraction} leaves an empty part"
            )));
        }
        self.split_index = Some(k);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.inputs.first().map_or(0, Vec::len)
    }

    pub fn inputs(&self) -> &[Vec<T>] {
        &self.inputs
    }

    pub fn targets(&self) -> &[T] {
        &self.targets
    }

    pub fn split_index(&self) -> Option<usize> {
        self.split_index
    }

    fn require_split(&self) -> Result<usize> {
        self.split_index
            .ok_or_else(|| Error::domain("dataset has not been split into train and test"))
    }

    pub fn train(&self) -> Result<Samples<'_, T>> {
        let k = self.require_split()?;
        Ok(Samples {
            inputs: &self.inputs[..k],
            targets: &self.targets[..k],
        })
    }

    pub fn test(&self) -> Result<Samples<'_, T>> {
        let k = self.require_split()?;
        Ok(Samples {
            inputs: &self.inputs[k..],
            targets: &self.targets[k..],
        })
    }
}

/// Affine map of `[lo, hi]` onto `[0, 1]`, extended linearly outside it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinMaxScaler<T> {
    lo: T,
    hi: T,
}

impl<T: Scalar> MinMaxScaler<T> {
    pub fn fit(values: impl IntoIterator<Item = T>) -> Result<Self> {
        let (lo, hi) = values
            .into_iter()
            .fold((T::infinity(), T::neg_infinity()), |(lo, hi), v| (lo.min(v), hi.max(v)));
        if !(hi > lo) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::domain("scaler needs at least two distinct finite values"));
        }
        Ok(Self { lo, hi })
    }

    /// Fits on every price that appears in the training samples.
    pub fn fit_samples(train: &Samples<'_, T>) -> Result<Self> {
        Self::fit(
            train
                .inputs
                .iter()
                .flat_map(|x| x.iter().copied())
                .chain(train.targets.iter().copied()),
        )
    }

    pub fn lo(&self) -> T {
        self.lo
    }

    pub fn hi(&self) -> T {
        self.hi
    }

    #[inline]
    pub fn transform(&self, v: T) -> T {
        (v - self.lo) / (self.hi - self.lo)
    }

    #[inline]
    pub fn inverse(&self, v: T) -> T {
        self.lo + v * (self.hi - self.lo)
    }

    pub fn transform_inputs(&self, inputs: &[Vec<T>]) -> Vec<Vec<T>> {
        inputs
            .iter()
            .map(|x| x.iter().map(|&v| self.transform(v)).collect())
            .collect()
    }

    pub fn transform_all(&self, values: &[T]) -> Vec<T> {
        values.iter().map(|&v| self.transform(v)).collect()
    }
}

/// Seeded mean-reverting series `S_{t+1} = φ·S_t + (1 − φ)·μ + N(0, noise_sd²)`
/// starting at `S_0 = μ`, with weekly dates.
pub fn synthetic_ar_series<T: Scalar>(
    n: usize,
    mu: f64,
    phi: f64,
    noise_sd: f64,
    seed: u64,
) -> Result<PriceSeries<T>> {
    let noise = Normal::new(0.0, noise_sd)
        .map_err(|e| Error::domain(format!("noise standard deviation: {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = mu;
    let mut prices = Vec::with_capacity(n);
    for _ in 0..n {
        prices.push(T::lit(s));
        s = phi * s + (1.0 - phi) * mu + noise.sample(&mut rng);
    }
    PriceSeries::weekly(format!("synthetic-ar-{seed}"), prices)
}
