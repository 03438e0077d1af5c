//! Emergency-department occupancy forecasting toolkit.
//!
//! The crate covers the whole desk-scale pipeline: hourly series handling
//! and calendar/technical-analysis features, statistical benchmark
//! forecasters (seasonal naive, additive and damped Holt-Winters, a
//! least-squares seasonal AR), a midnight-anchored rolling backtest, point,
//! interval and next-day-crowding metrics, nonparametric model comparison,
//! and a synthetic occupancy generator for testing without patient data.
//!
//! Numeric code is generic over [`Scalar`] (`f32`/`f64`); the aliases at the
//! crate root fix it to `f64`, which is what the CLI uses.

pub mod backtest;
pub mod calendar;
pub mod error;
pub mod evaluation;
pub mod indicators;
pub mod io;
pub mod models;
pub mod scalar;
pub mod series;
pub mod synth;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Series = series::HourlySeries<f64>;
pub type Splits = series::DatasetSplits<f64>;
pub type Scaler = series::MinMaxScaler<f64>;
pub type Forecast = models::Forecast<f64>;
pub type FitState = models::FitState<f64>;
pub type SeasonalArModel = models::SeasonalArModel<f64>;
pub type Matrix = backtest::ForecastMatrix<f64>;
pub type TaMatrix = indicators::TaMatrix<f64>;
pub type EvaluationReport = evaluation::EvaluationReport;
