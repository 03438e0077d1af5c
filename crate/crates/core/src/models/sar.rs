//! Least-squares autoregression on a sparse seasonal lag set, used as the
//! ARIMA stand-in.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::{check_finite, Forecast, Forecaster};

/// Lags 1–3 plus one and two days back. Lag 168 would leave no training
/// rows inside a 168-hour window.
pub const DEFAULT_LAGS: [usize; 5] = [1, 2, 3, 24, 48];

#[derive(Debug, Clone, PartialEq)]
pub struct SeasonalArModel<T> {
    pub lags: Vec<usize>,
    /// One coefficient per lag; all zero in the intercept-only fallback.
    pub coefficients: Vec<T>,
    pub intercept: T,
    /// RMSE of the in-sample residuals.
    pub sigma: T,
    /// True when the design was singular and only the mean was fit.
    pub intercept_only: bool,
}

impl<T: Scalar> SeasonalArModel<T> {
    pub fn max_lag(&self) -> usize {
        self.lags.iter().copied().max().unwrap_or(0)
    }

    fn predict_at(&self, buf: &[T], t: usize) -> T {
        self.lags
            .iter()
            .zip(&self.coefficients)
            .fold(self.intercept, |acc, (l, c)| acc + *c * buf[t - l])
    }
}

fn normalize_lags(lags: &[usize]) -> Result<Vec<usize>> {
    let mut lags = lags.to_vec();
    lags.sort_unstable();
    lags.dedup();
    if lags.is_empty() || lags[0] == 0 {
        return Err(Error::InvalidParameter(
            "lags must be non-empty and >= 1".into(),
        ));
    }
    Ok(lags)
}

/// Solves `A x = b` by Gaussian elimination with partial pivoting.
/// Returns `None` when a pivot is negligible relative to the matrix scale.
pub(crate) fn solve<T: Scalar>(mut a: Vec<Vec<T>>, mut b: Vec<T>) -> Option<Vec<T>> {
    let n = b.len();
    let scale = a
        .iter()
        .flat_map(|r| r.iter())
        .fold(T::zero(), |m, v| m.max(v.abs()));
    if scale == T::zero() {
        return None;
    }
    let tol = scale * T::epsilon() * T::lit(1e3) * T::from_usize_lossy(n);
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| {
            a[i][col]
                .abs()
                .partial_cmp(&a[j][col].abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if a[piv][col].abs() <= tol {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            if f == T::zero() {
                continue;
            }
            let (upper, lower) = a.split_at_mut(row);
            for (dst, src) in lower[0][col..].iter_mut().zip(&upper[col][col..]) {
                *dst -= f * *src;
            }
            let v = b[col];
            b[row] -= f * v;
        }
    }
    let mut x = vec![T::zero(); n];
    for i in (0..n).rev() {
        let s = (i + 1..n).fold(b[i], |acc, k| acc - a[i][k] * x[k]);
        x[i] = s / a[i][i];
    }
    Some(x)
}

/// Fits `y[t] = c + Σ φ_l y[t-l]` by ordinary least squares.
///
/// A singular design (for example a constant window) falls back to an
/// intercept-only model predicting the window mean.
pub fn seasonal_ar_fit<T: Scalar>(window: &[T], lags: &[usize]) -> Result<SeasonalArModel<T>> {
    let lags = normalize_lags(lags)?;
    let max_lag = *lags.last().expect("non-empty");
    let needed = max_lag + lags.len() + 2;
    if window.len() < needed {
        return Err(Error::TooShort {
            needed,
            have: window.len(),
        });
    }
    check_finite(window)?;

    let p = lags.len() + 1;
    let mut xtx = vec![vec![T::zero(); p]; p];
    let mut xty = vec![T::zero(); p];
    let mut row = vec![T::zero(); p];
    for t in max_lag..window.len() {
        row[0] = T::one();
        for (j, l) in lags.iter().enumerate() {
            row[j + 1] = window[t - l];
        }
        for i in 0..p {
            xty[i] += row[i] * window[t];
            for j in 0..p {
                xtx[i][j] += row[i] * row[j];
            }
        }
    }

    let rows = T::from_usize_lossy(window.len() - max_lag);
    let (intercept, coefficients, intercept_only) = match solve(xtx, xty) {
        Some(beta) => (beta[0], beta[1..].to_vec(), false),
        None => {
            let mean = window.iter().copied().sum::<T>() / T::from_usize_lossy(window.len());
            (mean, vec![T::zero(); lags.len()], true)
        }
    };
    let mut model = SeasonalArModel {
        lags,
        coefficients,
        intercept,
        sigma: T::zero(),
        intercept_only,
    };
    let sse: T = (max_lag..window.len())
        .map(|t| (window[t] - model.predict_at(window, t)).powi(2))
        .sum();
    model.sigma = (sse / rows).sqrt();
    Ok(model)
}

/// Recursive multi-step forecast, feeding predictions back as lagged inputs.
pub fn seasonal_ar_forecast<T: Scalar>(
    model: &SeasonalArModel<T>,
    history: &[T],
    h: usize,
) -> Result<Forecast<T>> {
    if h < 1 {
        return Err(Error::InvalidParameter("horizon must be >= 1".into()));
    }
    let max_lag = model.max_lag();
    if history.len() < max_lag {
        return Err(Error::TooShort {
            needed: max_lag,
            have: history.len(),
        });
    }
    let mut buf = history[history.len() - max_lag..].to_vec();
    let mut point = Vec::with_capacity(h);
    for _ in 0..h {
        let t = buf.len();
        let y = model.predict_at(&buf, t);
        buf.push(y);
        point.push(y);
    }
    let sigmas = (1..=h).map(|k| model.sigma * T::from_usize_lossy(k).sqrt());
    Ok(Forecast::gaussian(point, sigmas))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeasonalAr {
    lags: Vec<usize>,
}

impl SeasonalAr {
    pub fn new(lags: Vec<usize>) -> Result<Self> {
        Ok(Self {
            lags: normalize_lags(&lags)?,
        })
    }
}

impl Default for SeasonalAr {
    fn default() -> Self {
        Self {
            lags: DEFAULT_LAGS.to_vec(),
        }
    }
}

impl<T: Scalar> Forecaster<T> for SeasonalAr {
    fn name(&self) -> String {
        "sar".into()
    }

    fn forecast(&self, history: &[T], horizon: usize) -> Result<Forecast<T>> {
        let model = seasonal_ar_fit(history, &self.lags)?;
        seasonal_ar_forecast(&model, history, horizon)
    }

    fn min_history(&self) -> usize {
        self.lags.iter().max().copied().unwrap_or(0) + self.lags.len() + 2
    }
}
