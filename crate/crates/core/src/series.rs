//! Hourly time-series container and the preprocessing steps applied to it
//! before modelling: alignment, zero imputation, chronological splitting,
//! min-max scaling and crowding labels.

use std::collections::BTreeMap;

use chrono::{DateTime, Duration, DurationRound, NaiveDate, Timelike, Utc};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Occupancy (or covariate) values on a gap-free hourly grid.
///
/// Index `i` corresponds to `start + i` hours. Gaps in the source data are
/// kept as explicit `missing` entries; their stored value is zero.
#[derive(Debug, Clone, PartialEq)]
pub struct HourlySeries<T> {
    start: DateTime<Utc>,
    values: Vec<T>,
    missing: Vec<bool>,
}

impl<T: Scalar> HourlySeries<T> {
    /// Builds a series from parallel value/mask vectors.
    pub fn new(start: DateTime<Utc>, values: Vec<T>, missing: Vec<bool>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Empty);
        }
        if values.len() != missing.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} values but {} mask entries",
                values.len(),
                missing.len()
            )));
        }
        if start.minute() != 0 || start.second() != 0 || start.nanosecond() != 0 {
            return Err(Error::InvalidParameter(format!(
                "series start {start} is not on a whole hour"
            )));
        }
        let start_ts = start;
        for (i, (v, m)) in values.iter().zip(&missing).enumerate() {
            if !*m && !v.is_finite() {
                return Err(Error::NonFinite(start_ts + Duration::hours(i as i64)));
            }
        }
        Ok(Self {
            start,
            values,
            missing,
        })
    }

    /// A series with no missing entries.
    pub fn from_values(start: DateTime<Utc>, values: Vec<T>) -> Result<Self> {
        let missing = vec![false; values.len()];
        Self::new(start, values, missing)
    }

    pub fn start(&self) -> DateTime<Utc> {
        self.start
    }

    /// First hour after the last entry.
    pub fn end(&self) -> DateTime<Utc> {
        self.timestamp(self.len())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn missing(&self) -> &[bool] {
        &self.missing
    }

    pub fn missing_count(&self) -> usize {
        self.missing.iter().filter(|m| **m).count()
    }

    pub fn timestamp(&self, i: usize) -> DateTime<Utc> {
        self.start + Duration::hours(i as i64)
    }

    /// Index of `ts` on this series' grid, which may lie outside `0..len`.
    pub fn offset_of(&self, ts: DateTime<Utc>) -> Result<i64> {
        let d = ts - self.start;
        if d.num_seconds() % 3600 != 0 {
            return Err(Error::InvalidParameter(format!(
                "{ts} is not on the hourly grid"
            )));
        }
        Ok(d.num_hours())
    }

    /// Value at `i`, or `None` when missing.
    pub fn get(&self, i: usize) -> Option<T> {
        if self.missing[i] {
            None
        } else {
            Some(self.values[i])
        }
    }

    /// Sub-series over index range `lo..hi`.
    pub fn slice(&self, lo: usize, hi: usize) -> Result<Self> {
        if lo >= hi || hi > self.len() {
            return Err(Error::InvalidSplit(format!(
                "slice {lo}..{hi} out of range for length {}",
                self.len()
            )));
        }
        Ok(Self {
            start: self.timestamp(lo),
            values: self.values[lo..hi].to_vec(),
            missing: self.missing[lo..hi].to_vec(),
        })
    }

    /// Same values on a shifted grid.
    pub fn with_start(&self, start: DateTime<Utc>) -> Result<Self> {
        Self::new(start, self.values.clone(), self.missing.clone())
    }

    /// Applies `f` to every non-missing value.
    pub fn map_values(&self, f: impl Fn(T) -> T) -> Self {
        let values = self
            .values
            .iter()
            .zip(&self.missing)
            .map(|(v, m)| if *m { *v } else { f(*v) })
            .collect();
        Self {
            start: self.start,
            values,
            missing: self.missing.clone(),
        }
    }

    /// Errors unless every value is present.
    pub fn require_complete(&self) -> Result<()> {
        match self.missing.iter().position(|m| *m) {
            None => Ok(()),
            Some(first) => Err(Error::MissingValues {
                count: self.missing_count(),
                first,
            }),
        }
    }

    /// Checks the occupancy-specific invariant `values >= 0`.
    pub fn validate_occupancy(&self) -> Result<()> {
        for (i, (v, m)) in self.values.iter().zip(&self.missing).enumerate() {
            if !*m && *v < T::zero() {
                return Err(Error::NegativeOccupancy {
                    at: self.timestamp(i),
                    value: v.as_f64(),
                });
            }
        }
        Ok(())
    }
}

/// Normalizes raw `(timestamp, value)` records onto an hourly grid.
///
/// Timestamps are truncated to the hour, later records overwrite earlier
/// ones for the same hour, and hours without a record (or with a `None`
/// value) become missing entries.
pub fn align_and_validate<T: Scalar>(
    records: impl IntoIterator<Item = (DateTime<Utc>, Option<T>)>,
) -> Result<HourlySeries<T>> {
    let mut by_hour: BTreeMap<DateTime<Utc>, Option<T>> = BTreeMap::new();
    for (ts, value) in records {
        if let Some(v) = value {
            if !v.is_finite() {
                return Err(Error::NonFinite(ts));
            }
        }
        let hour = ts
            .duration_trunc(Duration::hours(1))
            .map_err(|e| Error::InvalidParameter(e.to_string()))?;
        by_hour.insert(hour, value);
    }
    let (&start, _) = by_hour.first_key_value().ok_or(Error::Empty)?;
    let (&last, _) = by_hour.last_key_value().ok_or(Error::Empty)?;
    let len = (last - start).num_hours() as usize + 1;
    let mut values = vec![T::zero(); len];
    let mut missing = vec![true; len];
    for (ts, value) in by_hour {
        let i = (ts - start).num_hours() as usize;
        if let Some(v) = value {
            values[i] = v;
            missing[i] = false;
        }
    }
    HourlySeries::new(start, values, missing)
}

/// Replaces every missing entry with zero.
pub fn impute_zero<T: Scalar>(s: &HourlySeries<T>) -> HourlySeries<T> {
    let values = s
        .values
        .iter()
        .zip(&s.missing)
        .map(|(v, m)| if *m { T::zero() } else { *v })
        .collect();
    HourlySeries {
        start: s.start,
        values,
        missing: vec![false; s.len()],
    }
}

/// Train / validation / test partition of one series.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetSplits<T> {
    pub train: HourlySeries<T>,
    pub validation: HourlySeries<T>,
    pub test: HourlySeries<T>,
}

/// Splits at two boundaries: train is `[start, train_end)`, validation
/// `[train_end, val_end)` and test `[val_end, end)`.
pub fn split_chronological<T: Scalar>(
    s: &HourlySeries<T>,
    train_end: DateTime<Utc>,
    val_end: DateTime<Utc>,
) -> Result<DatasetSplits<T>> {
    let a = s.offset_of(train_end)?;
    let b = s.offset_of(val_end)?;
    let n = s.len() as i64;
    if !(0 < a && a < b && b < n) {
        return Err(Error::InvalidSplit(format!(
            "need {} < {train_end} < {val_end} < {}",
            s.start(),
            s.end()
        )));
    }
    let (a, b) = (a as usize, b as usize);
    Ok(DatasetSplits {
        train: s.slice(0, a)?,
        validation: s.slice(a, b)?,
        test: s.slice(b, s.len())?,
    })
}

/// Linear map of `[lo, hi]` onto `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct MinMaxScaler<T> {
    lo: T,
    hi: T,
}

impl<T: Scalar> MinMaxScaler<T> {
    pub fn new(lo: T, hi: T) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidParameter(
                "scaler bounds must be finite".into(),
            ));
        }
        if hi == lo {
            return Err(Error::ConstantSeries(lo.as_f64()));
        }
        if hi < lo {
            return Err(Error::InvalidParameter(format!(
                "scaler hi {hi} below lo {lo}"
            )));
        }
        Ok(Self { lo, hi })
    }

    /// Fits on the non-missing values of `train`.
    pub fn fit(train: &HourlySeries<T>) -> Result<Self> {
        let mut it = train
            .values
            .iter()
            .zip(&train.missing)
            .filter(|(_, m)| !**m)
            .map(|(v, _)| *v);
        let first = it.next().ok_or(Error::Empty)?;
        let (lo, hi) = it.fold((first, first), |(lo, hi), v| (lo.min(v), hi.max(v)));
        Self::new(lo, hi)
    }

    pub fn lo(&self) -> T {
        self.lo
    }

    pub fn hi(&self) -> T {
        self.hi
    }

    #[inline]
    pub fn scale_value(&self, x: T) -> T {
        (x - self.lo) / (self.hi - self.lo)
    }

    #[inline]
    pub fn unscale_value(&self, z: T) -> T {
        z * (self.hi - self.lo) + self.lo
    }

    /// Scales without clipping; out-of-range inputs map outside `[0, 1]`.
    pub fn scale(&self, s: &HourlySeries<T>) -> HourlySeries<T> {
        s.map_values(|v| self.scale_value(v))
    }

    pub fn unscale(&self, s: &HourlySeries<T>) -> HourlySeries<T> {
        s.map_values(|v| self.unscale_value(v))
    }
}

/// Occupancy level at or above which an hour counts as crowded.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct CrowdingThreshold(f64);

impl CrowdingThreshold {
    pub fn new(threshold: f64) -> Result<Self> {
        if threshold.is_finite() && threshold > 0.0 {
            Ok(Self(threshold))
        } else {
            Err(Error::InvalidParameter(format!(
                "crowding threshold must be positive, got {threshold}"
            )))
        }
    }

    pub fn value(&self) -> f64 {
        self.0
    }

    #[inline]
    pub fn is_crowded<T: Scalar>(&self, occupancy: T) -> bool {
        occupancy.as_f64() >= self.0
    }
}

impl Default for CrowdingThreshold {
    fn default() -> Self {
        Self(80.0)
    }
}

/// Per-hour crowded flags, `value >= threshold`.
pub fn hourly_crowding<T: Scalar>(s: &HourlySeries<T>, t: CrowdingThreshold) -> Result<Vec<bool>> {
    s.require_complete()?;
    Ok(s.values.iter().map(|v| t.is_crowded(*v)).collect())
}

/// A day is crowded when any of its 24 hours is.
pub fn daily_crowding(hourly_labels: &[bool], start: DateTime<Utc>) -> Result<Vec<bool>> {
    if start.hour() != 0 || start.minute() != 0 || start.second() != 0 {
        return Err(Error::NotDayAligned);
    }
    if !hourly_labels.len().is_multiple_of(24) {
        return Err(Error::PartialDay {
            len: hourly_labels.len(),
        });
    }
    Ok(hourly_labels
        .chunks_exact(24)
        .map(|day| day.iter().any(|b| *b))
        .collect())
}

/// Midnight UTC of `date`.
pub fn midnight(date: NaiveDate) -> DateTime<Utc> {
    date.and_hms_opt(0, 0, 0)
        .expect("midnight is a valid time")
        .and_utc()
}
