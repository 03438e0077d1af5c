use std::collections::VecDeque;

use crate::scalar::Scalar;

use super::{pad, window_sums, Column, WindowSpec};

/// Statistics over the `n + 1` most recent values `y[t-n..=t]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RollingStat {
    Max,
    Min,
    /// Lag `i` in `0..=n` of the window maximum; ties go to the most recent.
    MaxIndex,
    /// Lag `i` in `0..=n` of the window minimum; ties go to the most recent.
    MinIndex,
    Sum,
    /// Population standard deviation.
    StdDev,
    /// Population variance.
    Var,
}

pub(crate) struct Extremes<T> {
    pub max: Vec<T>,
    pub min: Vec<T>,
    pub max_lag: Vec<usize>,
    pub min_lag: Vec<usize>,
}

/// Sliding max/min over length-`w` windows with monotone deques.
pub(crate) fn rolling_extremes<T: Scalar>(ys: &[T], w: usize) -> Extremes<T> {
    let cap = ys.len().saturating_sub(w - 1);
    let mut ex = Extremes {
        max: Vec::with_capacity(cap),
        min: Vec::with_capacity(cap),
        max_lag: Vec::with_capacity(cap),
        min_lag: Vec::with_capacity(cap),
    };
    let mut hi: VecDeque<usize> = VecDeque::new();
    let mut lo: VecDeque<usize> = VecDeque::new();
    for (t, &y) in ys.iter().enumerate() {
        // Dropping equal older entries makes the front the most recent extreme.
        while hi.back().is_some_and(|&j| ys[j] <= y) {
            hi.pop_back();
        }
        hi.push_back(t);
        while lo.back().is_some_and(|&j| ys[j] >= y) {
            lo.pop_back();
        }
        lo.push_back(t);
        if t + 1 < w {
            continue;
        }
        let oldest = t + 1 - w;
        while hi.front().is_some_and(|&j| j < oldest) {
            hi.pop_front();
        }
        while lo.front().is_some_and(|&j| j < oldest) {
            lo.pop_front();
        }
        let (h, l) = (hi[0], lo[0]);
        ex.max.push(ys[h]);
        ex.min.push(ys[l]);
        ex.max_lag.push(t - h);
        ex.min_lag.push(t - l);
    }
    ex
}

pub fn rolling_stat<T: Scalar>(ys: &[T], n: WindowSpec, stat: RollingStat) -> Column<T> {
    let n = n.get();
    let w = n + 1;
    let len = ys.len();
    match stat {
        RollingStat::Max | RollingStat::Min | RollingStat::MaxIndex | RollingStat::MinIndex => {
            let ex = rolling_extremes(ys, w);
            let vals: Vec<T> = match stat {
                RollingStat::Max => ex.max,
                RollingStat::Min => ex.min,
                RollingStat::MaxIndex => ex.max_lag.into_iter().map(T::from_usize_lossy).collect(),
                _ => ex.min_lag.into_iter().map(T::from_usize_lossy).collect(),
            };
            pad(len, n, vals.into_iter().map(Some))
        }
        RollingStat::Sum => pad(len, n, window_sums(ys, w).into_iter().map(Some)),
        RollingStat::Var | RollingStat::StdDev => {
            let var = rolling_variance(ys, w);
            let f = if stat == RollingStat::Var {
                |v: T| v
            } else {
                |v: T| v.sqrt()
            };
            pad(len, n, var.into_iter().map(|v| Some(f(v))))
        }
    }
}

fn series_mean<T: Scalar>(ys: &[T]) -> T {
    if ys.is_empty() {
        T::zero()
    } else {
        ys.iter().copied().sum::<T>() / T::from_usize_lossy(ys.len())
    }
}

/// Population variance of every length-`w` window, from shifted power sums.
fn rolling_variance<T: Scalar>(ys: &[T], w: usize) -> Vec<T> {
    let shift = series_mean(ys);
    let centred: Vec<T> = ys.iter().map(|y| *y - shift).collect();
    let squares: Vec<T> = centred.iter().map(|d| *d * *d).collect();
    let ww = T::from_usize_lossy(w);
    window_sums(&centred, w)
        .into_iter()
        .zip(window_sums(&squares, w))
        .map(|(s1, s2)| {
            let m = s1 / ww;
            (s2 / ww - m * m).max(T::zero())
        })
        .collect()
}

/// Least-squares fit of each `n + 1` window against time index `0..=n`
/// (0 = oldest). The intercept is the fitted value at the oldest point.
#[derive(Debug, Clone, PartialEq)]
pub struct LinReg<T> {
    pub slope: Column<T>,
    pub intercept: Column<T>,
    /// `atan(slope)` in radians.
    pub angle: Column<T>,
}

pub fn linreg<T: Scalar>(ys: &[T], n: WindowSpec) -> LinReg<T> {
    let n = n.get();
    let w = n + 1;
    let len = ys.len();
    if len < w {
        let none = vec![None; len];
        return LinReg {
            slope: none.clone(),
            intercept: none.clone(),
            angle: none,
        };
    }
    let shift = series_mean(ys);
    let d: Vec<T> = ys.iter().map(|y| *y - shift).collect();
    let nn = T::from_usize_lossy(n);
    let wf = T::from_usize_lossy(w);
    let sx = T::from_usize_lossy(n * w / 2);
    let sxx = T::from_usize_lossy(n * w * (2 * n + 1) / 6);
    let denom = wf * sxx - sx * sx;

    let sums = window_sums(&d, w);
    let direct_sxy = |k: usize| -> T { (0..w).map(|j| T::from_usize_lossy(j) * d[k + j]).sum() };

    let mut slope = Vec::with_capacity(sums.len());
    let mut intercept = Vec::with_capacity(sums.len());
    let mut sxy = direct_sxy(0);
    for (k, &sy) in sums.iter().enumerate() {
        if k > 0 {
            if k % w == 0 {
                sxy = direct_sxy(k);
            } else {
                // Shift every index down by one and append the newest at x = n.
                sxy += d[k - 1] - sums[k - 1] + nn * d[k + n];
            }
        }
        let b = (wf * sxy - sx * sy) / denom;
        let a = (sy - b * sx) / wf + shift;
        slope.push(b);
        intercept.push(a);
    }
    let angle: Vec<T> = slope.iter().map(|b| b.atan()).collect();
    LinReg {
        slope: pad(len, n, slope.into_iter().map(Some)),
        intercept: pad(len, n, intercept.into_iter().map(Some)),
        angle: pad(len, n, angle.into_iter().map(Some)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(n: usize) -> WindowSpec {
        WindowSpec::new(n).unwrap()
    }

    #[test]
    fn hand_case_extremes() {
        let ys = [1.0f64, 5.0, 2.0];
        let at = |s| rolling_stat(&ys, w(2), s)[2].unwrap();
        assert_eq!(at(RollingStat::Max), 5.0);
        assert_eq!(at(RollingStat::MaxIndex), 1.0);
        assert_eq!(at(RollingStat::Min), 1.0);
        assert_eq!(at(RollingStat::MinIndex), 2.0);
        assert_eq!(at(RollingStat::Sum), 8.0);
    }

    #[test]
    fn ties_pick_most_recent() {
        let ys = [3.0f64, 1.0, 3.0, 1.0];
        assert_eq!(rolling_stat(&ys, w(3), RollingStat::MaxIndex)[3], Some(1.0));
        assert_eq!(rolling_stat(&ys, w(3), RollingStat::MinIndex)[3], Some(0.0));
    }

    #[test]
    fn constant_series() {
        let c = 4.0f64;
        let ys = vec![c; 30];
        let n = 5;
        let last = |s| rolling_stat(&ys, w(n), s)[29].unwrap();
        assert_eq!(last(RollingStat::Var), 0.0);
        assert_eq!(last(RollingStat::StdDev), 0.0);
        assert_eq!(last(RollingStat::Max), c);
        assert_eq!(last(RollingStat::Min), c);
        assert_eq!(last(RollingStat::Sum), (n as f64 + 1.0) * c);
        let lr = linreg(&ys, w(n));
        assert!(lr.slope[29].unwrap().abs() < 1e-12);
        assert!(lr.angle[29].unwrap().abs() < 1e-12);
        assert!((lr.intercept[29].unwrap() - c).abs() < 1e-12);
    }

    #[test]
    fn exact_line() {
        // Every window of y = 2x + 1 has slope 2; the window starting at x0
        // has intercept 2*x0 + 1.
        let ys: Vec<f64> = (0..40).map(|x| 2.0 * x as f64 + 1.0).collect();
        let lr = linreg(&ys, w(6));
        assert_eq!(lr.slope[5], None);
        for t in 6..40 {
            assert!((lr.slope[t].unwrap() - 2.0).abs() < 1e-10);
            let x0 = (t - 6) as f64;
            assert!((lr.intercept[t].unwrap() - (2.0 * x0 + 1.0)).abs() < 1e-9);
            assert!((lr.angle[t].unwrap() - 2.0f64.atan()).abs() < 1e-10);
        }
    }

    #[test]
    fn variance_population() {
        let ys = [1.0f64, 2.0, 3.0, 4.0];
        // window of 4: mean 2.5, var = 1.25
        let v = rolling_stat(&ys, w(3), RollingStat::Var)[3].unwrap();
        assert!((v - 1.25).abs() < 1e-12);
    }
}
