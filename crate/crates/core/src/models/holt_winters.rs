//! Additive Holt-Winters with optional damped trend.
//!
//! ```text
//! level:    l[t] = α (y[t] - s[t-m]) + (1 - α)(l[t-1] + φ b[t-1])
//! trend:    b[t] = β (l[t] - l[t-1]) + (1 - β) φ b[t-1]
//! season:   s[t] = γ (y[t] - l[t-1] - φ b[t-1]) + (1 - γ) s[t-m]
//! forecast: y[t+k] = l[t] + (φ + φ² + … + φᵏ) b[t] + s[t+k-m]
//! ```
//!
//! φ = 1 for the undamped model. Parameters are chosen by Nelder-Mead on
//! the in-window one-step-ahead SSE, from three fixed starting points.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::nelder_mead::{nelder_mead, Bounds, NelderMeadOptions};
use super::{check_finite, Forecast, Forecaster};

const SMOOTHING_BOUNDS: (f64, f64) = (1e-4, 0.9999);
const DAMPING_BOUNDS: (f64, f64) = (0.8001, 0.998);

/// Starting points for (α, β, γ, φ); the best fit over all starts wins.
const STARTS: [[f64; 4]; 3] = [
    [0.3, 0.05, 0.1, 0.95],
    [0.1, 0.01, 0.3, 0.9],
    [0.6, 0.1, 0.05, 0.98],
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HwParams<T> {
    pub alpha: T,
    pub beta: T,
    pub gamma: T,
    /// 1 for the undamped model.
    pub phi: T,
}

/// Fitted Holt-Winters state at the end of the fitting window.
#[derive(Debug, Clone, PartialEq)]
pub struct FitState<T> {
    pub level: T,
    pub trend: T,
    /// Seasonal ring indexed by `t mod period`.
    pub seasonals: Vec<T>,
    pub params: HwParams<T>,
    /// RMSE of the in-window one-step residuals.
    pub sigma: T,
    pub sse: T,
    pub period: usize,
    /// Window index of the last observation.
    pub last_index: usize,
}

struct Init<T> {
    level: T,
    seasonals: Vec<T>,
}

fn initial_state<T: Scalar>(window: &[T], m: usize) -> Init<T> {
    let n = T::from_usize_lossy(window.len());
    let mean = window.iter().copied().sum::<T>() / n;
    let mut sums = vec![T::zero(); m];
    let mut counts = vec![0usize; m];
    for (t, y) in window.iter().enumerate() {
        sums[t % m] += *y;
        counts[t % m] += 1;
    }
    let seasonals = sums
        .iter()
        .zip(&counts)
        .map(|(s, c)| *s / T::from_usize_lossy(*c) - mean)
        .collect();
    Init {
        level: mean,
        seasonals,
    }
}

fn run<T: Scalar>(window: &[T], m: usize, p: HwParams<T>, init: &Init<T>) -> (T, T, Vec<T>, T) {
    let one = T::one();
    let mut level = init.level;
    let mut trend = T::zero();
    let mut season = init.seasonals.clone();
    let mut sse = T::zero();
    for (t, &y) in window.iter().enumerate() {
        let j = t % m;
        let damped = p.phi * trend;
        let fitted = level + damped + season[j];
        let e = y - fitted;
        sse += e * e;
        let new_level = p.alpha * (y - season[j]) + (one - p.alpha) * (level + damped);
        trend = p.beta * (new_level - level) + (one - p.beta) * damped;
        season[j] = p.gamma * (y - level - damped) + (one - p.gamma) * season[j];
        level = new_level;
    }
    (level, trend, season, sse)
}

/// One-step SSE of `params` on `window` from the standard initial state.
pub fn hw_sse<T: Scalar>(window: &[T], m: usize, params: HwParams<T>) -> T {
    let init = initial_state(window, m);
    run(window, m, params, &init).3
}

/// Fits additive Holt-Winters (damped when `damped`) on `window`.
pub fn hw_fit<T: Scalar>(window: &[T], m: usize, damped: bool) -> Result<FitState<T>> {
    if m < 1 {
        return Err(Error::InvalidParameter("period must be >= 1".into()));
    }
    if window.len() < 2 * m {
        return Err(Error::TooShort {
            needed: 2 * m,
            have: window.len(),
        });
    }
    check_finite(window)?;
    let init = initial_state(window, m);
    let dim = if damped { 4 } else { 3 };
    let unpack = |x: &[T]| HwParams {
        alpha: x[0],
        beta: x[1],
        gamma: x[2],
        phi: if damped { x[3] } else { T::one() },
    };
    let (slo, shi) = (T::lit(SMOOTHING_BOUNDS.0), T::lit(SMOOTHING_BOUNDS.1));
    let mut lo = vec![slo; 3];
    let mut hi = vec![shi; 3];
    if damped {
        lo.push(T::lit(DAMPING_BOUNDS.0));
        hi.push(T::lit(DAMPING_BOUNDS.1));
    }
    let bounds = Bounds::new(lo, hi)?;
    let opts = NelderMeadOptions {
        max_iter: 400,
        f_tol: T::lit(1e-10),
        x_tol: T::lit(1e-6),
        ..NelderMeadOptions::default()
    };

    let mut best: Option<(Vec<T>, T)> = None;
    for start in STARTS {
        let x0: Vec<T> = start[..dim].iter().map(|v| T::lit(*v)).collect();
        let res = nelder_mead(
            |x| run(window, m, unpack(x), &init).3,
            &x0,
            Some(&bounds),
            opts,
        )?;
        if best.as_ref().is_none_or(|(_, f)| res.fx < *f) {
            best = Some((res.x, res.fx));
        }
    }
    let (x, _) = best.ok_or(Error::NonFiniteObjective)?;
    let params = unpack(&x);
    let (level, trend, seasonals, sse) = run(window, m, params, &init);
    let sigma = (sse / T::from_usize_lossy(window.len())).sqrt();
    Ok(FitState {
        level,
        trend,
        seasonals,
        params,
        sigma,
        sse,
        period: m,
        last_index: window.len() - 1,
    })
}

/// Forecasts `h` steps from a fitted state with `± z·σ·√k` intervals.
pub fn hw_forecast<T: Scalar>(state: &FitState<T>, h: usize) -> Result<Forecast<T>> {
    if h < 1 {
        return Err(Error::InvalidParameter("horizon must be >= 1".into()));
    }
    let m = state.period;
    if state.seasonals.len() != m {
        return Err(Error::InvalidParameter(
            "seasonal state length != period".into(),
        ));
    }
    let phi = state.params.phi;
    let mut damp_sum = T::zero();
    let mut phi_k = T::one();
    let mut point = Vec::with_capacity(h);
    for k in 1..=h {
        phi_k *= phi;
        damp_sum += phi_k;
        let s = state.seasonals[(state.last_index + k) % m];
        point.push(state.level + damp_sum * state.trend + s);
    }
    let sigmas = (1..=h).map(|k| state.sigma * T::from_usize_lossy(k).sqrt());
    Ok(Forecast::gaussian(point, sigmas))
}

/// Holt-Winters as a [`Forecaster`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HoltWinters {
    period: usize,
    damped: bool,
}

impl HoltWinters {
    pub fn additive(period: usize) -> Result<Self> {
        Self::new(period, false)
    }

    pub fn damped(period: usize) -> Result<Self> {
        Self::new(period, true)
    }

    fn new(period: usize, damped: bool) -> Result<Self> {
        if period == 0 {
            return Err(Error::InvalidParameter("period must be >= 1".into()));
        }
        Ok(Self { period, damped })
    }
}

impl<T: Scalar> Forecaster<T> for HoltWinters {
    fn name(&self) -> String {
        if self.damped { "hwdm" } else { "hwam" }.into()
    }

    fn forecast(&self, history: &[T], horizon: usize) -> Result<Forecast<T>> {
        let state = hw_fit(history, self.period, self.damped)?;
        hw_forecast(&state, horizon)
    }

    fn min_history(&self) -> usize {
        2 * self.period
    }
}
