//! Forecast evaluation: point metrics, interval scoring, horizon-stratified
//! error and next-day-crowding discrimination.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::backtest::ForecastMatrix;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::CrowdingThreshold;

pub const SCHEMA_VERSION: u32 = 1;

/// Mean absolute error over every cell.
pub fn mae<T: Scalar>(m: &ForecastMatrix<T>) -> T {
    let n = T::from_usize_lossy(m.truth().len());
    m.abs_errors().into_iter().sum::<T>() / n
}

/// Root mean squared error over every cell.
pub fn rmse<T: Scalar>(m: &ForecastMatrix<T>) -> T {
    let n = T::from_usize_lossy(m.truth().len());
    let sse: T = m
        .truth()
        .iter()
        .zip(m.point())
        .map(|(y, p)| (*y - *p).powi(2))
        .sum();
    (sse / n).sqrt()
}

/// MAE of each horizon column.
pub fn horizon_mae<T: Scalar>(m: &ForecastMatrix<T>) -> Vec<T> {
    let h = m.horizon();
    let d = T::from_usize_lossy(m.n_origins());
    let mut acc = vec![T::zero(); h];
    for (i, e) in m.abs_errors().into_iter().enumerate() {
        acc[i % h] += e;
    }
    acc.into_iter().map(|s| s / d).collect()
}

/// In-sample seasonal-naive MAE, `1/(n-m) Σ |y[t] - y[t-m]|`.
pub fn seasonal_naive_scale<T: Scalar>(history: &[T], m: usize) -> Result<T> {
    if m == 0 || history.len() <= m {
        return Err(Error::TooShort {
            needed: m + 1,
            have: history.len(),
        });
    }
    let n = history.len() - m;
    let s: T = (m..history.len())
        .map(|t| (history[t] - history[t - m]).abs())
        .sum();
    let scale = s / T::from_usize_lossy(n);
    if scale == T::zero() {
        return Err(Error::ZeroScale);
    }
    Ok(scale)
}

/// Interval score of one cell: width plus `2/α` times the distance by
/// which the truth falls outside the interval.
#[inline]
pub fn interval_score<T: Scalar>(lower: T, upper: T, y: T, alpha: T) -> T {
    let k = T::lit(2.0) / alpha;
    let mut s = upper - lower;
    if y < lower {
        s += k * (lower - y);
    }
    if y > upper {
        s += k * (y - upper);
    }
    s
}

/// Mean scaled interval score, averaged over origins.
///
/// Each origin's summed interval score is divided by `h` times the
/// seasonal-naive in-sample MAE of `train_history`.
pub fn msis<T: Scalar>(
    m: &ForecastMatrix<T>,
    train_history: &[T],
    alpha: T,
    period: usize,
) -> Result<T> {
    if !(alpha > T::zero() && alpha < T::one()) {
        return Err(Error::InvalidParameter(format!(
            "alpha {alpha} outside (0, 1)"
        )));
    }
    let scale = seasonal_naive_scale(train_history, period)?;
    let h = T::from_usize_lossy(m.horizon());
    let total: T = (0..m.n_origins())
        .map(|d| {
            let s: T = m
                .lower_row(d)
                .iter()
                .zip(m.upper_row(d))
                .zip(m.truth_row(d))
                .map(|((l, u), y)| interval_score(*l, *u, *y, alpha))
                .sum();
            s / (h * scale)
        })
        .sum();
    Ok(total / T::from_usize_lossy(m.n_origins()))
}

/// Percentage improvement of `model_mae` over `benchmark_mae`; positive is better.
pub fn improvement_pct(model_mae: f64, benchmark_mae: f64) -> Result<f64> {
    if benchmark_mae.is_nan() || benchmark_mae <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "benchmark MAE must be positive, got {benchmark_mae}"
        )));
    }
    Ok(100.0 * (benchmark_mae - model_mae) / benchmark_mae)
}

/// How a day's forecasts are reduced to one crowding score.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DailyScore {
    /// Maximum point forecast of the day.
    #[default]
    Max,
    /// Maximum upper interval bound of the day.
    Upper,
}

/// Per-origin crowding score: the maximum of the day's point forecasts.
pub fn daily_score<T: Scalar>(m: &ForecastMatrix<T>) -> Vec<T> {
    daily_score_with(m, DailyScore::Max)
}

pub fn daily_score_with<T: Scalar>(m: &ForecastMatrix<T>, kind: DailyScore) -> Vec<T> {
    (0..m.n_origins())
        .map(|d| {
            let row = match kind {
                DailyScore::Max => m.point_row(d),
                DailyScore::Upper => m.upper_row(d),
            };
            row.iter().copied().fold(T::neg_infinity(), T::max)
        })
        .collect()
}

/// True crowding label per origin: any truth value at or above `threshold`.
pub fn daily_labels<T: Scalar>(m: &ForecastMatrix<T>, threshold: CrowdingThreshold) -> Vec<bool> {
    (0..m.n_origins())
        .map(|d| m.truth_row(d).iter().any(|y| threshold.is_crowded(*y)))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RocCurve {
    /// `(fpr, tpr)` from `(0, 0)` to `(1, 1)`.
    pub points: Vec<[f64; 2]>,
    pub auc: f64,
}

fn class_counts(labels: &[bool]) -> Result<(usize, usize)> {
    let pos = labels.iter().filter(|l| **l).count();
    let neg = labels.len() - pos;
    if pos == 0 || neg == 0 {
        return Err(Error::SingleClass);
    }
    Ok((pos, neg))
}

/// ROC curve from sweeping every distinct score threshold (high to low),
/// and its trapezoidal area. Tied scores move the curve diagonally, which
/// credits ties with one half.
pub fn roc_auc<T: Scalar>(scores: &[T], labels: &[bool]) -> Result<RocCurve> {
    if scores.len() != labels.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} scores vs {} labels",
            scores.len(),
            labels.len()
        )));
    }
    let (pos, neg) = class_counts(labels)?;
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| {
        scores[b]
            .partial_cmp(&scores[a])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let (p, n) = (pos as f64, neg as f64);
    let mut points = vec![[0.0, 0.0]];
    let (mut tp, mut fp) = (0usize, 0usize);
    let mut area = 0.0;
    let mut i = 0;
    while i < order.len() {
        let s = scores[order[i]];
        let (tp0, fp0) = (tp, fp);
        while i < order.len() && scores[order[i]] == s {
            if labels[order[i]] {
                tp += 1;
            } else {
                fp += 1;
            }
            i += 1;
        }
        area += (fp - fp0) as f64 * (tp + tp0) as f64 / 2.0;
        points.push([fp as f64 / n, tp as f64 / p]);
    }
    Ok(RocCurve {
        points,
        auc: area / (p * n),
    })
}

/// Randomly reduces the majority class to the minority count. Returns
/// retained indices in ascending order; deterministic per seed.
pub fn balanced_downsample(labels: &[bool], seed: u64) -> Result<Vec<usize>> {
    let (pos, neg) = class_counts(labels)?;
    let (minority, mut majority): (Vec<usize>, Vec<usize>) = {
        let (p, n): (Vec<usize>, Vec<usize>) = (0..labels.len()).partition(|&i| labels[i]);
        if pos <= neg {
            (p, n)
        } else {
            (n, p)
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    majority.shuffle(&mut rng);
    majority.truncate(minority.len());
    let mut keep = minority;
    keep.extend(majority);
    keep.sort_unstable();
    Ok(keep)
}

/// Linear-interpolation percentile of sorted data, `q` in `[0, 1]`.
pub(crate) fn percentile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

/// 95% percentile-bootstrap interval for the AUC.
///
/// Each iteration resamples days with replacement from its own RNG stream
/// (seed, iteration), redrawing resamples that lack a class, so the result
/// does not depend on thread scheduling.
pub fn bootstrap_auc_ci<T: Scalar>(
    scores: &[T],
    labels: &[bool],
    iters: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    class_counts(labels)?;
    if iters == 0 {
        return Err(Error::InvalidParameter(
            "bootstrap needs >= 1 iteration".into(),
        ));
    }
    let n = scores.len();
    let mut aucs: Vec<f64> = (0..iters)
        .into_par_iter()
        .map(|it| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(it as u64);
            loop {
                let idx: Vec<usize> = (0..n).map(|_| rng.random_range(0..n)).collect();
                let lab: Vec<bool> = idx.iter().map(|&i| labels[i]).collect();
                if class_counts(&lab).is_err() {
                    continue;
                }
                let sc: Vec<T> = idx.iter().map(|&i| scores[i]).collect();
                return roc_auc(&sc, &lab).map(|r| r.auc);
            }
        })
        .collect::<Result<_>>()?;
    aucs.sort_by(|a, b| a.total_cmp(b));
    Ok((percentile(&aucs, 0.025), percentile(&aucs, 0.975)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalOptions {
    pub alpha: f64,
    pub msis_period: usize,
    pub threshold: CrowdingThreshold,
    pub bootstrap_iters: usize,
    pub seed: u64,
    pub score: DailyScore,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self {
            alpha: 0.05,
            msis_period: 24,
            threshold: CrowdingThreshold::default(),
            bootstrap_iters: 250,
            seed: 0,
            score: DailyScore::Max,
        }
    }
}

/// Metrics for one model's forecast matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub model: String,
    pub mae: f64,
    pub rmse: f64,
    pub msis: f64,
    pub horizon_mae: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub improvement_vs_benchmark: Option<f64>,
    pub auc: Option<f64>,
    pub auc_ci: Option<[f64; 2]>,
    pub roc: Vec<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub auc_error: Option<String>,
    pub n_origins: usize,
    pub n_days_downsampled: usize,
}

/// Evaluates `m` against the training history used for MSIS scaling.
///
/// The binary metrics use one seeded downsampling to balance classes; the
/// bootstrap runs on the downsampled days. When only one class is present
/// the AUC fields are empty and `auc_error` says why.
pub fn evaluate<T: Scalar>(
    model: &str,
    m: &ForecastMatrix<T>,
    train_history: &[T],
    opts: &EvalOptions,
) -> Result<EvaluationReport> {
    let msis = msis(m, train_history, T::lit(opts.alpha), opts.msis_period)?.as_f64();
    let scores = daily_score_with(m, opts.score);
    let labels = daily_labels(m, opts.threshold);

    let (auc, auc_ci, roc, auc_error, kept) = match balanced_downsample(&labels, opts.seed) {
        Ok(keep) => {
            let s: Vec<T> = keep.iter().map(|&i| scores[i]).collect();
            let l: Vec<bool> = keep.iter().map(|&i| labels[i]).collect();
            let curve = roc_auc(&s, &l)?;
            let (lo, hi) = bootstrap_auc_ci(&s, &l, opts.bootstrap_iters, opts.seed)?;
            (
                Some(curve.auc),
                Some([lo, hi]),
                curve.points,
                None,
                keep.len(),
            )
        }
        Err(Error::SingleClass) => (None, None, vec![], Some("single-class".to_string()), 0),
        Err(e) => return Err(e),
    };

    Ok(EvaluationReport {
        model: model.to_string(),
        mae: mae(m).as_f64(),
        rmse: rmse(m).as_f64(),
        msis,
        horizon_mae: horizon_mae(m).into_iter().map(Scalar::as_f64).collect(),
        improvement_vs_benchmark: None,
        auc,
        auc_ci,
        roc,
        auc_error,
        n_origins: m.n_origins(),
        n_days_downsampled: kept,
    })
}
