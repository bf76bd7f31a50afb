//! Five regression models for sliding-window price forecasting, with the
//! evaluation harness used to compare them.
//!
//! Every numerical type is generic over [`Scalar`] (`f32` or `f64`); the
//! `*F64` / `*F32` aliases below name the common instantiations.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bpnn;
pub mod error;
pub mod eval;
pub mod grnn;
pub mod kernels;
pub mod linalg;
pub mod lssvm;
pub mod model;
#[cfg(any(test, feature = "oracles"))]
pub mod oracles;
pub mod rbfnn;
pub mod scalar;
pub mod svr;
pub mod timeseries;

pub use error::{Error, Result};
pub use model::Regressor;
pub use scalar::Scalar;

pub type PriceSeriesF64 = timeseries::PriceSeries<f64>;
pub type PriceSeriesF32 = timeseries::PriceSeries<f32>;
pub type DatasetF64 = timeseries::WindowedDataset<f64>;
pub type DatasetF32 = timeseries::WindowedDataset<f32>;
pub type BpNetworkF64 = bpnn::BpNetwork<f64>;
pub type BpNetworkF32 = bpnn::BpNetwork<f32>;
pub type RbfNetworkF64 = rbfnn::RbfNetwork<f64>;
pub type RbfNetworkF32 = rbfnn::RbfNetwork<f32>;
pub type GrnnModelF64 = grnn::GrnnModel<f64>;
pub type GrnnModelF32 = grnn::GrnnModel<f32>;
pub type SvrModelF64 = svr::SvrModel<f64>;
pub type SvrModelF32 = svr::SvrModel<f32>;
pub type LssvmModelF64 = lssvm::LssvmModel<f64>;
pub type LssvmModelF32 = lssvm::LssvmModel<f32>;
pub type ModelSpecF64 = eval::ModelSpec<f64>;
pub type ModelSpecF32 = eval::ModelSpec<f32>;
