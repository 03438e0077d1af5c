use crate::scalar::Scalar;

use super::rolling::{rolling_extremes, Extremes};
use super::{pad, window_counts, window_sums, Column, WindowSpec};

/// KAMA fast smoothing constant, 2 / (2 + 1).
pub const KAMA_FAST: f64 = 2.0 / 3.0;
/// KAMA slow smoothing constant, 2 / (30 + 1).
pub const KAMA_SLOW: f64 = 2.0 / 31.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MovingAverage {
    /// Mean of the last `n` values.
    Sma,
    /// Linear weights `n, n-1, ..., 1`, newest heaviest.
    Wma,
    /// Mean of the last `n` SMA values.
    Trima,
    /// Half the range of the `n + 1` most recent values, `(max - min) / 2`.
    Midpoint,
    /// Kaufman adaptive moving average, seeded with the first SMA.
    Kama,
}

pub fn moving_average<T: Scalar>(ys: &[T], n: WindowSpec, kind: MovingAverage) -> Column<T> {
    let n = n.get();
    match kind {
        MovingAverage::Sma => sma(ys, n),
        MovingAverage::Wma => wma(ys, n),
        MovingAverage::Trima => trima(ys, n),
        MovingAverage::Midpoint => midpoint(ys, n),
        MovingAverage::Kama => kama(ys, n),
    }
}

pub(crate) fn sma_values<T: Scalar>(ys: &[T], n: usize) -> Vec<T> {
    let nn = T::from_usize_lossy(n);
    window_sums(ys, n).into_iter().map(|s| s / nn).collect()
}

pub(crate) fn sma<T: Scalar>(ys: &[T], n: usize) -> Column<T> {
    pad(ys.len(), n - 1, sma_values(ys, n).into_iter().map(Some))
}

fn wma<T: Scalar>(ys: &[T], n: usize) -> Column<T> {
    if ys.len() < n {
        return vec![None; ys.len()];
    }
    let nn = T::from_usize_lossy(n);
    let norm = T::from_usize_lossy(n * (n + 1) / 2);
    let direct = |end: usize| -> T {
        (0..n)
            .map(|k| T::from_usize_lossy(n - k) * ys[end - k])
            .sum()
    };
    let sums = window_sums(ys, n);
    let mut out = Vec::with_capacity(ys.len() + 1 - n);
    let mut w = direct(n - 1);
    out.push(Some(w / norm));
    for t in n..ys.len() {
        if (t + 1 - n).is_multiple_of(n) {
            w = direct(t);
        } else {
            // Every older value loses one unit of weight.
            w += nn * ys[t] - sums[t - n];
        }
        out.push(Some(w / norm));
    }
    pad(ys.len(), n - 1, out)
}

fn trima<T: Scalar>(ys: &[T], n: usize) -> Column<T> {
    let smas = sma_values(ys, n);
    pad(
        ys.len(),
        2 * n - 2,
        sma_values(&smas, n).into_iter().map(Some),
    )
}

fn midpoint<T: Scalar>(ys: &[T], n: usize) -> Column<T> {
    let two = T::lit(2.0);
    let Extremes { max, min, .. } = rolling_extremes(ys, n + 1);
    pad(
        ys.len(),
        n,
        max.into_iter()
            .zip(min)
            .map(|(hi, lo)| Some((hi - lo) / two)),
    )
}

fn kama<T: Scalar>(ys: &[T], n: usize) -> Column<T> {
    if ys.len() <= n {
        return vec![None; ys.len()];
    }
    let diffs: Vec<T> = ys.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    let moving: Vec<bool> = diffs.iter().map(|d| *d > T::zero()).collect();
    // volatility[k] and active[k] cover the n differences ending at ys[k + n].
    let volatility = window_sums(&diffs, n);
    let active = window_counts(&moving, n);

    let fast = T::lit(KAMA_FAST);
    let slow = T::lit(KAMA_SLOW);
    let mut k: T = ys[..n].iter().copied().sum::<T>() / T::from_usize_lossy(n);
    let mut out = Vec::with_capacity(ys.len() - n);
    for t in n..ys.len() {
        let change = (ys[t] - ys[t - n]).abs();
        let v = volatility[t - n];
        // A flat window has zero volatility (and zero change): slowest smoothing.
        let er = if active[t - n] == 0 || v <= T::zero() {
            T::zero()
        } else {
            (change / v).min(T::one())
        };
        let sc = (er * (fast - slow) + slow).powi(2);
        k += sc * (ys[t] - k);
        out.push(Some(k));
    }
    pad(ys.len(), n, out)
}
