//! Midnight-anchored rolling-origin backtest and the forecast-matrix file
//! format used to exchange results with external models.

use std::io::{BufRead, Write};

use chrono::{DateTime, Duration, NaiveDate, Utc};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::models::Forecaster;
use crate::scalar::Scalar;
use crate::series::{midnight, HourlySeries, MinMaxScaler};

pub const MATRIX_HEADER: &str = "origin,horizon,point,lower,upper,truth";

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct BacktestPlan {
    /// Trailing fit window in hours.
    pub window_len: usize,
    /// Forecast steps per origin.
    pub horizon: usize,
    /// Hour of day at which each origin is placed.
    pub anchor_hour: u32,
}

impl Default for BacktestPlan {
    fn default() -> Self {
        Self {
            window_len: 168,
            horizon: 24,
            anchor_hour: 0,
        }
    }
}

impl BacktestPlan {
    pub fn validate(&self) -> Result<()> {
        if self.window_len < 1 || self.horizon < 1 || self.anchor_hour > 23 {
            return Err(Error::InvalidParameter(format!(
                "invalid plan: window {} horizon {} anchor {}",
                self.window_len, self.horizon, self.anchor_hour
            )));
        }
        Ok(())
    }

    pub fn origin_time(&self, day: NaiveDate) -> DateTime<Utc> {
        midnight(day) + Duration::hours(self.anchor_hour as i64)
    }

    /// Index ranges `(fit window, forecast hours)` on `s` for the origin on `day`.
    pub fn ranges<T: Scalar>(
        &self,
        s: &HourlySeries<T>,
        day: NaiveDate,
    ) -> Result<(std::ops::Range<usize>, std::ops::Range<usize>)> {
        let origin = s.offset_of(self.origin_time(day))?;
        let have = origin.max(0) as usize;
        if origin < self.window_len as i64 {
            return Err(Error::InsufficientHistory {
                origin: day,
                needed: self.window_len,
                have,
            });
        }
        let origin = origin as usize;
        let end = origin + self.horizon;
        if end > s.len() {
            return Err(Error::TooShort {
                needed: end,
                have: s.len(),
            });
        }
        Ok((origin - self.window_len..origin, origin..end))
    }
}

/// D origins × H horizons of forecasts with aligned truth, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ForecastMatrix<T> {
    origins: Vec<NaiveDate>,
    horizon: usize,
    point: Vec<T>,
    lower: Vec<T>,
    upper: Vec<T>,
    truth: Vec<T>,
}

impl<T: Scalar> ForecastMatrix<T> {
    /// Builds a matrix, checking dimensions, daily origins and `lower <= upper`.
    pub fn new(
        origins: Vec<NaiveDate>,
        horizon: usize,
        point: Vec<T>,
        lower: Vec<T>,
        upper: Vec<T>,
        truth: Vec<T>,
    ) -> Result<Self> {
        if origins.is_empty() || horizon == 0 {
            return Err(Error::Empty);
        }
        let cells = origins.len() * horizon;
        for (name, v) in [
            ("point", &point),
            ("lower", &lower),
            ("upper", &upper),
            ("truth", &truth),
        ] {
            if v.len() != cells {
                return Err(Error::DimensionMismatch(format!(
                    "{name} has {} cells, expected {} x {horizon}",
                    v.len(),
                    origins.len()
                )));
            }
        }
        for w in origins.windows(2) {
            if w[0].succ_opt() != Some(w[1]) {
                return Err(Error::UnorderedOrigins {
                    prev: w[0],
                    next: w[1],
                });
            }
        }
        for (i, (l, u)) in lower.iter().zip(&upper).enumerate() {
            if l > u {
                return Err(Error::InvertedInterval {
                    origin: origins[i / horizon],
                    horizon: i % horizon + 1,
                });
            }
        }
        Ok(Self {
            origins,
            horizon,
            point,
            lower,
            upper,
            truth,
        })
    }

    pub fn origins(&self) -> &[NaiveDate] {
        &self.origins
    }

    pub fn n_origins(&self) -> usize {
        self.origins.len()
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn point(&self) -> &[T] {
        &self.point
    }

    pub fn lower(&self) -> &[T] {
        &self.lower
    }

    pub fn upper(&self) -> &[T] {
        &self.upper
    }

    pub fn truth(&self) -> &[T] {
        &self.truth
    }

    fn row_of<'a>(&self, v: &'a [T], d: usize) -> &'a [T] {
        &v[d * self.horizon..(d + 1) * self.horizon]
    }

    pub fn point_row(&self, d: usize) -> &[T] {
        self.row_of(&self.point, d)
    }

    pub fn lower_row(&self, d: usize) -> &[T] {
        self.row_of(&self.lower, d)
    }

    pub fn upper_row(&self, d: usize) -> &[T] {
        self.row_of(&self.upper, d)
    }

    pub fn truth_row(&self, d: usize) -> &[T] {
        self.row_of(&self.truth, d)
    }

    /// `|truth - point|` for every cell, row-major.
    pub fn abs_errors(&self) -> Vec<T> {
        self.truth
            .iter()
            .zip(&self.point)
            .map(|(y, p)| (*y - *p).abs())
            .collect()
    }

    /// Errors unless `other` covers the same origins and horizon.
    pub fn check_aligned(&self, other: &Self) -> Result<()> {
        if self.origins != other.origins || self.horizon != other.horizon {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} from {} vs {}x{} from {}",
                self.n_origins(),
                self.horizon,
                self.origins[0],
                other.n_origins(),
                other.horizon,
                other.origins[0]
            )));
        }
        Ok(())
    }

    /// Writes the `origin,horizon,point,lower,upper,truth` CSV with
    /// shortest round-trip number formatting.
    pub fn write_csv(&self, mut w: impl Write) -> Result<()> {
        writeln!(w, "{MATRIX_HEADER}")?;
        for (d, origin) in self.origins.iter().enumerate() {
            for k in 0..self.horizon {
                let i = d * self.horizon + k;
                writeln!(
                    w,
                    "{},{},{},{},{},{}",
                    origin.format("%Y-%m-%d"),
                    k + 1,
                    self.point[i],
                    self.lower[i],
                    self.upper[i],
                    self.truth[i]
                )?;
            }
        }
        Ok(())
    }

    /// Reads and validates a forecast-matrix CSV.
    pub fn read_csv(r: impl BufRead) -> Result<Self> {
        let mut lines = r.lines().enumerate();
        match lines.next() {
            Some((_, Ok(h))) if h.trim().trim_start_matches('\u{feff}') == MATRIX_HEADER => {}
            Some((_, Ok(h))) => {
                return Err(Error::Parse {
                    line: 1,
                    msg: format!("expected header {MATRIX_HEADER:?}, found {h:?}"),
                })
            }
            Some((_, Err(e))) => return Err(e.into()),
            None => return Err(Error::Empty),
        }

        let mut origins: Vec<NaiveDate> = Vec::new();
        let mut horizon: Option<usize> = None;
        let mut next_k = 1usize;
        let (mut point, mut lower, mut upper, mut truth) = (vec![], vec![], vec![], vec![]);

        for (i, line) in lines {
            let line_no = i + 1;
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let perr = |msg: String| Error::Parse { line: line_no, msg };
            let f: Vec<&str> = line.split(',').map(str::trim).collect();
            if f.len() != 6 {
                return Err(perr(format!("expected 6 fields, found {}", f.len())));
            }
            let origin = NaiveDate::parse_from_str(f[0], "%Y-%m-%d")
                .map_err(|e| perr(format!("bad origin {:?}: {e}", f[0])))?;
            let k: usize = f[1]
                .parse()
                .map_err(|_| perr(format!("bad horizon {:?}", f[1])))?;
            let num = |s: &str, what: &str| -> Result<T> {
                let v: T = s
                    .parse()
                    .map_err(|_| perr(format!("bad {what} value {s:?}")))?;
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(perr(format!("non-finite {what} value")))
                }
            };

            if origins.last() != Some(&origin) {
                if let Some(&prev) = origins.last() {
                    // Close out the previous origin.
                    let h = next_k - 1;
                    match horizon {
                        None => horizon = Some(h),
                        Some(hh) if hh != h => {
                            return Err(Error::DimensionMismatch(format!(
                                "origin {prev} has {h} horizons, expected {hh}"
                            )))
                        }
                        _ => {}
                    }
                }
                origins.push(origin);
                next_k = 1;
            }
            if k != next_k {
                return Err(perr(format!("expected horizon {next_k}, found {k}")));
            }
            next_k += 1;
            point.push(num(f[2], "point")?);
            lower.push(num(f[3], "lower")?);
            upper.push(num(f[4], "upper")?);
            truth.push(num(f[5], "truth")?);
        }
        let last_h = next_k - 1;
        let horizon = match horizon {
            None => last_h,
            Some(h) if h == last_h => h,
            Some(h) => {
                return Err(Error::DimensionMismatch(format!(
                    "last origin has {last_h} horizons, expected {h}"
                )))
            }
        };
        Self::new(origins, horizon, point, lower, upper, truth)
    }
}

/// Runs the rolling-origin backtest over test days `[test_start, test_end)`.
///
/// For each day, `model` is fit on the `window_len` hours before the origin
/// and forecasts `horizon` hours from it. With a scaler, fitting happens on
/// scaled values and forecasts are mapped back; truth is always taken from
/// `series` unchanged.
pub fn run_backtest<T: Scalar>(
    series: &HourlySeries<T>,
    model: &dyn Forecaster<T>,
    plan: &BacktestPlan,
    test_start: NaiveDate,
    test_end: NaiveDate,
    scaler: Option<&MinMaxScaler<T>>,
) -> Result<ForecastMatrix<T>> {
    plan.validate()?;
    if test_end <= test_start {
        return Err(Error::InvalidSplit(format!(
            "empty test span {test_start}..{test_end}"
        )));
    }
    let days: Vec<NaiveDate> = test_start
        .iter_days()
        .take_while(|d| *d < test_end)
        .collect();

    let mut ranges = Vec::with_capacity(days.len());
    for day in &days {
        let (fit, out) = plan.ranges(series, *day)?;
        for i in fit.start..out.end {
            if series.missing()[i] {
                return Err(Error::MissingInWindow(series.timestamp(i)));
            }
        }
        ranges.push((fit, out));
    }

    let values = series.values();
    let rows: Vec<(Vec<T>, Vec<T>, Vec<T>)> = ranges
        .par_iter()
        .map(|(fit, _)| {
            let window: Vec<T> = match scaler {
                Some(sc) => values[fit.clone()]
                    .iter()
                    .map(|v| sc.scale_value(*v))
                    .collect(),
                None => values[fit.clone()].to_vec(),
            };
            let f = model.forecast(&window, plan.horizon)?;
            if f.horizon() != plan.horizon {
                return Err(Error::DimensionMismatch(format!(
                    "model returned {} steps, expected {}",
                    f.horizon(),
                    plan.horizon
                )));
            }
            Ok(match scaler {
                Some(sc) => {
                    let un = |v: Vec<T>| v.into_iter().map(|x| sc.unscale_value(x)).collect();
                    (un(f.point), un(f.lower), un(f.upper))
                }
                None => (f.point, f.lower, f.upper),
            })
        })
        .collect::<Result<_>>()?;

    let cells = days.len() * plan.horizon;
    let (mut point, mut lower, mut upper, mut truth) = (
        Vec::with_capacity(cells),
        Vec::with_capacity(cells),
        Vec::with_capacity(cells),
        Vec::with_capacity(cells),
    );
    for ((p, l, u), (_, out)) in rows.into_iter().zip(&ranges) {
        point.extend(p);
        lower.extend(l);
        upper.extend(u);
        truth.extend_from_slice(&values[out.clone()]);
    }
    ForecastMatrix::new(days, plan.horizon, point, lower, upper, truth)
}
