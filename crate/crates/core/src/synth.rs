//! Synthetic hourly ED occupancy from simulated arrivals and lengths of stay.
//!
//! Arrivals in each hour are Poisson with an intensity built from an
//! hour-of-day profile, a day-of-week multiplier, a holiday multiplier and a
//! lognormal day-level factor. Each patient stays `max(1, ceil(LOS))` hours,
//! LOS lognormal. Occupancy at hour `t` counts patients with
//! `arrival <= t < arrival + stay`. Simulation starts 30 days early so the
//! first reported hour is not empty.

use chrono::{Datelike, Duration, NaiveDate};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, LogNormal, Poisson};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::calendar::HolidayCalendar;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::{daily_crowding, hourly_crowding, midnight, CrowdingThreshold, HourlySeries};

pub const WARM_UP_DAYS: usize = 30;

const DAY_STREAM_BASE: u64 = 1 << 40;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthConfig {
    /// First reported day.
    pub start: NaiveDate,
    /// Expected arrivals per hour of day, midnight first.
    pub hourly_intensity: Vec<f64>,
    /// Monday first.
    pub weekday_multiplier: Vec<f64>,
    pub holiday_multiplier: f64,
    /// Standard deviation of the log day-level intensity factor.
    pub daily_log_sd: f64,
    pub los_log_mean: f64,
    pub los_log_sd: f64,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        default_config()
    }
}

pub fn default_config() -> SynthConfig {
    SynthConfig {
        start: NaiveDate::from_ymd_opt(2017, 1, 1).expect("valid date"),
        hourly_intensity: vec![
            4.48, 3.64, 2.94, 2.52, 2.24, 2.38, 3.36, 5.6, 8.96, 12.04, 13.72, 14.28, //
            14.0, 13.44, 12.88, 12.46, 12.04, 11.76, 11.2, 10.36, 9.24, 7.84, 6.44, 5.32,
        ],
        weekday_multiplier: vec![1.12, 1.04, 1.0, 1.0, 1.0, 0.9, 0.88],
        holiday_multiplier: 0.9,
        daily_log_sd: 0.2,
        los_log_mean: 1.35,
        los_log_sd: 0.55,
        seed: 0,
    }
}

impl SynthConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.hourly_intensity.len() != 24 {
            return bad(format!(
                "hourly_intensity needs 24 entries, got {}",
                self.hourly_intensity.len()
            ));
        }
        if self.weekday_multiplier.len() != 7 {
            return bad(format!(
                "weekday_multiplier needs 7 entries, got {}",
                self.weekday_multiplier.len()
            ));
        }
        let nonneg = |v: f64| v.is_finite() && v >= 0.0;
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !self.hourly_intensity.iter().all(|v| nonneg(*v)) {
            return bad("hourly_intensity entries must be finite and >= 0".into());
        }
        if !self.weekday_multiplier.iter().all(|v| positive(*v))
            || !positive(self.holiday_multiplier)
        {
            return bad("multipliers must be finite and > 0".into());
        }
        if !nonneg(self.daily_log_sd) || !nonneg(self.los_log_sd) || !self.los_log_mean.is_finite()
        {
            return bad("lognormal parameters must be finite with sd >= 0".into());
        }
        Ok(())
    }
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Generates `n_days` of hourly occupancy starting at midnight of `cfg.start`.
///
/// Every random draw comes from a stream keyed by (seed, hour) or
/// (seed, day), so output is identical for any thread count.
pub fn generate<T: Scalar>(
    cfg: &SynthConfig,
    n_days: usize,
    holidays: &HolidayCalendar,
) -> Result<HourlySeries<T>> {
    cfg.validate()?;
    if n_days == 0 {
        return Err(Error::InvalidParameter("n_days must be >= 1".into()));
    }
    let first_day = cfg.start - Duration::days(WARM_UP_DAYS as i64);
    let total_days = n_days + WARM_UP_DAYS;
    let hours = total_days * 24;

    let day_factor: Vec<f64> = if cfg.daily_log_sd > 0.0 {
        let d = LogNormal::new(0.0, cfg.daily_log_sd)
            .map_err(|e| Error::InvalidParameter(e.to_string()))?;
        (0..total_days)
            .map(|i| d.sample(&mut stream_rng(cfg.seed, DAY_STREAM_BASE + i as u64)))
            .collect()
    } else {
        vec![1.0; total_days]
    };
    let los = LogNormal::new(cfg.los_log_mean, cfg.los_log_sd)
        .map_err(|e| Error::InvalidParameter(e.to_string()))?;

    let stays: Vec<Vec<usize>> = (0..hours)
        .into_par_iter()
        .map(|a| {
            let day = a / 24;
            let date = first_day + Duration::days(day as i64);
            let mut rate = cfg.hourly_intensity[a % 24]
                * cfg.weekday_multiplier[date.weekday().num_days_from_monday() as usize]
                * day_factor[day];
            if holidays.contains(date) {
                rate *= cfg.holiday_multiplier;
            }
            if rate <= 0.0 {
                return Ok(Vec::new());
            }
            let mut rng = stream_rng(cfg.seed, a as u64);
            let k = Poisson::new(rate)
                .map_err(|e| Error::InvalidParameter(e.to_string()))?
                .sample(&mut rng) as usize;
            Ok((0..k)
                .map(|_| (los.sample(&mut rng).ceil() as usize).max(1))
                .collect())
        })
        .collect::<Result<_>>()?;

    let mut delta = vec![0i64; hours + 1];
    for (a, ss) in stays.iter().enumerate() {
        for &s in ss {
            delta[a] += 1;
            delta[(a + s).min(hours)] -= 1;
        }
    }
    let mut level = 0i64;
    let occupancy: Vec<T> = delta[..hours]
        .iter()
        .map(|d| {
            level += d;
            T::from_usize_lossy(level as usize)
        })
        .skip(WARM_UP_DAYS * 24)
        .collect();
    HourlySeries::from_values(midnight(cfg.start), occupancy)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationCheck {
    pub name: String,
    pub value: f64,
    pub target: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationReport {
    pub min: f64,
    pub median: f64,
    pub max: f64,
    pub mean: f64,
    pub crowded_hour_fraction: f64,
    pub crowded_day_fraction: f64,
    pub weekday_mean: f64,
    pub weekend_mean: f64,
    pub checks: Vec<CalibrationCheck>,
    pub pass: bool,
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(|a, b| a.total_cmp(b));
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        (xs[n / 2 - 1] + xs[n / 2]) / 2.0
    }
}

/// Summary statistics of a day-aligned occupancy series against the
/// reference calibration bands.
pub fn calibration_report<T: Scalar>(
    s: &HourlySeries<T>,
    threshold: CrowdingThreshold,
) -> Result<CalibrationReport> {
    s.require_complete()?;
    let hourly = hourly_crowding(s, threshold)?;
    let daily = daily_crowding(&hourly, s.start())?;
    let xs: Vec<f64> = s.values().iter().map(|v| v.as_f64()).collect();
    let n = xs.len() as f64;
    let min = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mean = xs.iter().sum::<f64>() / n;
    let med = median(xs.clone());
    let hour_frac = hourly.iter().filter(|c| **c).count() as f64 / n;
    let day_frac = daily.iter().filter(|c| **c).count() as f64 / daily.len() as f64;

    let (mut wk, mut we) = ((0.0, 0usize), (0.0, 0usize));
    for (i, x) in xs.iter().enumerate() {
        let acc = if s.timestamp(i).weekday().num_days_from_monday() >= 5 {
            &mut we
        } else {
            &mut wk
        };
        acc.0 += x;
        acc.1 += 1;
    }
    let avg = |(s, c): (f64, usize)| if c == 0 { f64::NAN } else { s / c as f64 };
    let (weekday_mean, weekend_mean) = (avg(wk), avg(we));

    let check = |name: &str, value: f64, target: &str, pass: bool| CalibrationCheck {
        name: name.into(),
        value,
        target: target.into(),
        pass,
    };
    let checks = vec![
        check("median", med, "[30, 46]", (30.0..=46.0).contains(&med)),
        check(
            "crowded_hour_fraction",
            hour_frac,
            "0.04 +/- 0.02",
            (hour_frac - 0.04).abs() <= 0.02,
        ),
        check(
            "crowded_day_fraction",
            day_frac,
            "0.26 +/- 0.10",
            (day_frac - 0.26).abs() <= 0.10,
        ),
        check("max", max, "<= 200", max <= 200.0),
        check("min", min, "< 10", min < 10.0),
        check(
            "weekend_below_weekday",
            weekend_mean - weekday_mean,
            "< 0",
            weekend_mean < weekday_mean,
        ),
    ];
    let pass = checks.iter().all(|c| c.pass);
    Ok(CalibrationReport {
        min,
        median: med,
        max,
        mean,
        crowded_hour_fraction: hour_frac,
        crowded_day_fraction: day_frac,
        weekday_mean,
        weekend_mean,
        checks,
        pass,
    })
}
