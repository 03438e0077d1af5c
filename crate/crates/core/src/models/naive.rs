use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::{check_finite, Forecast, Forecaster};

/// Repeats the last observed season.
///
/// Intervals are `point ± z·σₘ·√⌈k/m⌉` with σₘ the (population) standard
/// deviation of the in-window seasonal differences `y[t] - y[t-m]`.
pub fn seasonal_naive<T: Scalar>(history: &[T], m: usize, h: usize) -> Result<Forecast<T>> {
    if m == 0 || h == 0 {
        return Err(Error::InvalidParameter(
            "period and horizon must be >= 1".into(),
        ));
    }
    if history.len() < m {
        return Err(Error::TooShort {
            needed: m,
            have: history.len(),
        });
    }
    check_finite(history)?;
    let n = history.len();
    let point: Vec<T> = (0..h).map(|k| history[n - m + k % m]).collect();

    let diffs: Vec<T> = (m..n).map(|t| history[t] - history[t - m]).collect();
    let sigma = if diffs.is_empty() {
        T::zero()
    } else {
        let cnt = T::from_usize_lossy(diffs.len());
        let mean = diffs.iter().copied().sum::<T>() / cnt;
        (diffs.iter().map(|d| (*d - mean).powi(2)).sum::<T>() / cnt).sqrt()
    };
    let sigmas = (1..=h).map(|k| sigma * T::from_usize_lossy(k.div_ceil(m)).sqrt());
    Ok(Forecast::gaussian(point, sigmas))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeasonalNaive {
    period: usize,
}

impl SeasonalNaive {
    pub fn new(period: usize) -> Result<Self> {
        if period == 0 {
            return Err(Error::InvalidParameter("period must be >= 1".into()));
        }
        Ok(Self { period })
    }
}

impl<T: Scalar> Forecaster<T> for SeasonalNaive {
    fn name(&self) -> String {
        "snaive".into()
    }

    fn forecast(&self, history: &[T], horizon: usize) -> Result<Forecast<T>> {
        seasonal_naive(history, self.period, horizon)
    }

    fn min_history(&self) -> usize {
        self.period
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn repeats_last_cycle() {
        let hist: Vec<f64> = (0..72).map(|t| ((t % 24) * 3) as f64).collect();
        let f = seasonal_naive(&hist, 24, 24).unwrap();
        assert_eq!(f.point, hist[48..].to_vec());
        // Exactly periodic: zero spread, zero-width intervals.
        assert_eq!(f.lower, f.point);
    }

    #[test]
    fn longer_horizon_wraps() {
        let hist = [1.0f64, 2.0, 3.0];
        let f = seasonal_naive(&hist, 2, 5).unwrap();
        assert_eq!(f.point, vec![2.0, 3.0, 2.0, 3.0, 2.0]);
    }

    #[test]
    fn width_grows_by_sqrt2_per_season() {
        let hist: Vec<f64> = (0..96)
            .map(|t| (t as f64 * 0.37).sin() * 5.0 + (t % 24) as f64)
            .collect();
        let f = seasonal_naive(&hist, 24, 48).unwrap();
        let width = |k: usize| f.upper[k - 1] - f.lower[k - 1];
        assert!(width(1) > 0.0);
        assert!((width(25) / width(1) - 2f64.sqrt()).abs() < 1e-12);
        assert!((width(24) - width(1)).abs() < 1e-12);
        assert!(f.is_ordered());
    }

    #[test]
    fn too_short() {
        assert_eq!(
            seasonal_naive(&[1.0f64; 10], 24, 24),
            Err(Error::TooShort {
                needed: 24,
                have: 10
            })
        );
    }
}
