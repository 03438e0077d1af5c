use crate::scalar::Scalar;

use super::overlap::sma;
use super::{pad, window_counts, window_sums, Column, WindowSpec};

pub const AO_FAST: usize = 12;
pub const AO_SLOW: usize = 16;
pub const PO_FAST: usize = 12;
pub const PO_SLOW: usize = 26;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Momentum {
    /// Absolute oscillator, `SMA12 - SMA16` (fixed windows).
    Ao,
    /// Chande momentum oscillator on lagged values below/above the current one.
    Cmo,
    /// `y[t] - y[t-n]`.
    Mom,
    /// Percentage oscillator, `100 * (SMA12 - SMA26) / SMA26` (fixed windows).
    Po,
    /// `(y[t] - y[t-n]) / y[t-n]`, undefined for a zero base.
    Roc,
    /// Relative strength index over the last `n` differences.
    Rsi,
}

pub fn momentum<T: Scalar>(ys: &[T], kind: Momentum, n: WindowSpec) -> Column<T> {
    let n = n.get();
    match kind {
        Momentum::Ao => oscillator(ys, AO_FAST, AO_SLOW, |fast, slow| Some(fast - slow)),
        Momentum::Po => oscillator(ys, PO_FAST, PO_SLOW, |fast, slow| {
            (slow != T::zero()).then(|| T::lit(100.0) * (fast - slow) / slow)
        }),
        Momentum::Mom => lagged(ys, n, |now, then| Some(now - then)),
        Momentum::Roc => lagged(ys, n, |now, then| {
            (then != T::zero()).then(|| (now - then) / then)
        }),
        Momentum::Cmo => cmo(ys, n),
        Momentum::Rsi => rsi(ys, n),
    }
}

fn oscillator<T: Scalar>(
    ys: &[T],
    fast: usize,
    slow: usize,
    f: impl Fn(T, T) -> Option<T>,
) -> Column<T> {
    sma(ys, fast)
        .into_iter()
        .zip(sma(ys, slow))
        .map(|(a, b)| match (a, b) {
            (Some(a), Some(b)) => f(a, b),
            _ => None,
        })
        .collect()
}

fn lagged<T: Scalar>(ys: &[T], n: usize, f: impl Fn(T, T) -> Option<T>) -> Column<T> {
    pad(ys.len(), n, (n..ys.len()).map(|t| f(ys[t], ys[t - n])))
}

fn cmo<T: Scalar>(ys: &[T], n: usize) -> Column<T> {
    let hundred = T::lit(100.0);
    pad(
        ys.len(),
        n,
        (n..ys.len()).map(|t| {
            let now = ys[t];
            let (mut up, mut down) = (T::zero(), T::zero());
            let (mut any_up, mut any_down) = (false, false);
            for &past in &ys[t - n..t] {
                if past < now {
                    up += past;
                    any_up = true;
                } else if past > now {
                    down += past;
                    any_down = true;
                }
            }
            let total = up + down;
            let v = if !any_down && any_up {
                hundred
            } else if (!any_up && !any_down) || total == T::zero() {
                T::zero()
            } else {
                (hundred * (up - down) / total).min(hundred).max(-hundred)
            };
            Some(v)
        }),
    )
}

fn rsi<T: Scalar>(ys: &[T], n: usize) -> Column<T> {
    if ys.len() <= n {
        return vec![None; ys.len()];
    }
    let diffs: Vec<T> = ys.windows(2).map(|w| w[1] - w[0]).collect();
    let ups: Vec<T> = diffs.iter().map(|d| d.max(T::zero())).collect();
    let downs: Vec<T> = diffs.iter().map(|d| (-*d).max(T::zero())).collect();
    let up_flags: Vec<bool> = diffs.iter().map(|d| *d > T::zero()).collect();
    let down_flags: Vec<bool> = diffs.iter().map(|d| *d < T::zero()).collect();
    let ud = window_sums(&ups, n);
    let dd = window_sums(&downs, n);
    let n_up = window_counts(&up_flags, n);
    let n_down = window_counts(&down_flags, n);

    let hundred = T::lit(100.0);
    let vals = (0..ud.len()).map(|k| {
        let v = match (n_up[k], n_down[k]) {
            (0, 0) => T::lit(50.0),
            (_, 0) => hundred,
            (0, _) => T::zero(),
            _ => (hundred * ud[k] / (ud[k] + dd[k]))
                .min(hundred)
                .max(T::zero()),
        };
        Some(v)
    });
    pad(ys.len(), n, vals)
}
