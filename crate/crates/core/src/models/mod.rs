//! Benchmark forecasters behind a common [`Forecaster`] contract.

mod holt_winters;
mod naive;
pub mod nelder_mead;
mod sar;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Scalar, Z_975};

pub use holt_winters::{hw_fit, hw_forecast, hw_sse, FitState, HoltWinters, HwParams};
pub use naive::{seasonal_naive, SeasonalNaive};
pub use nelder_mead::{nelder_mead, Bounds, Minimum, NelderMeadOptions};
pub use sar::{seasonal_ar_fit, seasonal_ar_forecast, SeasonalAr, SeasonalArModel, DEFAULT_LAGS};

/// Point forecasts with 95% prediction-interval bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct Forecast<T> {
    pub point: Vec<T>,
    pub lower: Vec<T>,
    pub upper: Vec<T>,
    pub level: f64,
}

impl<T: Scalar> Forecast<T> {
    /// Symmetric Gaussian intervals `point ± z₀.₉₇₅ · sigma_k`.
    pub fn gaussian(point: Vec<T>, sigmas: impl IntoIterator<Item = T>) -> Self {
        let z = T::lit(Z_975);
        let mut lower = Vec::with_capacity(point.len());
        let mut upper = Vec::with_capacity(point.len());
        for (p, s) in point.iter().zip(sigmas) {
            let half = z * s.abs();
            lower.push(*p - half);
            upper.push(*p + half);
        }
        Self {
            point,
            lower,
            upper,
            level: 0.95,
        }
    }

    pub fn horizon(&self) -> usize {
        self.point.len()
    }

    /// Checks `lower <= point <= upper` elementwise.
    pub fn is_ordered(&self) -> bool {
        self.point
            .iter()
            .zip(&self.lower)
            .zip(&self.upper)
            .all(|((p, l), u)| l <= p && p <= u)
    }
}

/// A model refit from scratch on every history window it is given.
///
/// Implementations must be pure: the same window and horizon always give
/// the same forecast, and no state is shared between calls.
pub trait Forecaster<T: Scalar>: Send + Sync {
    fn name(&self) -> String;

    /// Fits on `history` (oldest first) and forecasts `horizon` steps ahead.
    fn forecast(&self, history: &[T], horizon: usize) -> Result<Forecast<T>>;

    /// Shortest history this model can be fit on.
    fn min_history(&self) -> usize;
}

/// Model selection as it appears in run configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    /// Holt-Winters additive.
    Hwam,
    /// Holt-Winters additive with damped trend.
    Hwdm,
    /// Seasonal naive.
    Snaive,
    /// Least-squares seasonal AR (ARIMA stand-in).
    Sar,
}

impl ModelKind {
    pub const ALL: [ModelKind; 4] = [
        ModelKind::Hwam,
        ModelKind::Hwdm,
        ModelKind::Snaive,
        ModelKind::Sar,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::Hwam => "hwam",
            ModelKind::Hwdm => "hwdm",
            ModelKind::Snaive => "snaive",
            ModelKind::Sar => "sar",
        }
    }

    /// Instantiates the forecaster for seasonal `period` and AR `lags`.
    pub fn build<T: Scalar>(self, period: usize, lags: &[usize]) -> Result<Box<dyn Forecaster<T>>> {
        Ok(match self {
            ModelKind::Hwam => Box::new(HoltWinters::additive(period)?),
            ModelKind::Hwdm => Box::new(HoltWinters::damped(period)?),
            ModelKind::Snaive => Box::new(SeasonalNaive::new(period)?),
            ModelKind::Sar => Box::new(SeasonalAr::new(lags.to_vec())?),
        })
    }
}

impl std::str::FromStr for ModelKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "unknown model {s:?} (expected hwam, hwdm, snaive or sar)"
                ))
            })
    }
}

impl std::fmt::Display for ModelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

pub(crate) fn check_finite<T: Scalar>(xs: &[T]) -> Result<()> {
    match xs.iter().position(|v| !v.is_finite()) {
        None => Ok(()),
        Some(i) => Err(Error::InvalidParameter(format!(
            "non-finite value at window position {i}"
        ))),
    }
}
