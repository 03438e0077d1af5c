use chrono::NaiveDate;
use edocc_core::backtest::ForecastMatrix;
use edocc_core::series::{midnight, HourlySeries};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

/// Bounded random walk on [0, 150], optionally rounded to integers.
pub fn random_series(len: usize, seed: u64, integer: bool) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut level: f64 = 40.0;
    (0..len)
        .map(|_| {
            level = (level + rng.random_range(-6.0..6.0)).clamp(0.0, 150.0);
            if integer {
                level.round()
            } else {
                level
            }
        })
        .collect()
}

pub fn random_matrix(rng: &mut ChaCha8Rng) -> ForecastMatrix<f64> {
    let d = rng.random_range(1..=30);
    let h = rng.random_range(1..=24);
    let start = NaiveDate::from_ymd_opt(2018, 6, 18).unwrap();
    let origins = start.iter_days().take(d).collect();
    let mut point = Vec::new();
    let (mut lower, mut upper, mut truth) = (Vec::new(), Vec::new(), Vec::new());
    for _ in 0..d * h {
        let p: f64 = rng.random_range(0.0..120.0);
        point.push(p);
        lower.push(p - rng.random_range(0.0..20.0));
        upper.push(p + rng.random_range(0.0..20.0));
        truth.push(rng.random_range(0.0..120.0));
    }
    ForecastMatrix::new(origins, h, point, lower, upper, truth).unwrap()
}

pub fn crowded_series(seed: u64, days: usize) -> HourlySeries<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vals = (0..days * 24)
        .map(|i| {
            let hod = (i % 24) as f64;
            let base = 40.0 + 30.0 * (std::f64::consts::PI * hod / 24.0).sin();
            (base + rng.random_range(-15.0..15.0)).max(0.0).round()
        })
        .collect();
    HourlySeries::from_values(midnight(NaiveDate::from_ymd_opt(2018, 1, 1).unwrap()), vals).unwrap()
}

pub fn perfect_matrix(s: &HourlySeries<f64>) -> ForecastMatrix<f64> {
    let days = s.len() / 24;
    let origins = NaiveDate::from_ymd_opt(2018, 1, 1)
        .unwrap()
        .iter_days()
        .take(days)
        .collect();
    let v = s.values().to_vec();
    ForecastMatrix::new(origins, 24, v.clone(), v.clone(), v.clone(), v).unwrap()
}

pub fn seasonal_trend_noise(seed: u64, days: usize) -> HourlySeries<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = Normal::new(0.0, 4.0).unwrap();
    let ys = (0..days * 24)
        .map(|t| {
            let h = (t % 24) as f64;
            60.0 + 0.02 * t as f64
                + 20.0 * (2.0 * std::f64::consts::PI * h / 24.0).sin()
                + noise.sample(&mut rng)
        })
        .collect();
    HourlySeries::from_values(midnight(NaiveDate::from_ymd_opt(2018, 1, 1).unwrap()), ys).unwrap()
}
