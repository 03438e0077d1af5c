use std::time::Instant;

use edocc_core::calendar::HolidayCalendar;
use edocc_core::series::CrowdingThreshold;
use edocc_core::synth::{calibration_report, default_config, generate, SynthConfig};
use statrs::distribution::{ContinuousCDF, LogNormal};

fn flat(intensity: f64, log_mean: f64, log_sd: f64) -> SynthConfig {
    SynthConfig {
        hourly_intensity: vec![intensity; 24],
        weekday_multiplier: vec![1.0; 7],
        holiday_multiplier: 1.0,
        daily_log_sd: 0.0,
        los_log_mean: log_mean,
        los_log_sd: log_sd,
        ..default_config()
    }
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// E[max(1, ceil(X))] for lognormal X, as Σ_{k>=0} P(stay > k).
fn expected_stay(log_mean: f64, log_sd: f64) -> f64 {
    let d = LogNormal::new(log_mean, log_sd).unwrap();
    1.0 + (1..2000).map(|k| d.sf(k as f64)).sum::<f64>()
}

#[test]
fn default_config_meets_calibration_bands() {
    let t0 = Instant::now();
    let s = generate::<f64>(&default_config(), 900, &HolidayCalendar::default()).unwrap();
    assert!(t0.elapsed().as_secs_f64() < 5.0);
    assert_eq!(s.len(), 21_600);
    let r = calibration_report(&s, CrowdingThreshold::default()).unwrap();
    for c in &r.checks {
        assert!(c.pass, "{} = {} (target {})", c.name, c.value, c.target);
    }
    assert!(r.min < 10.0);
    assert!(r.weekend_mean < r.weekday_mean);
    assert!(s.values().iter().all(|v| *v >= 0.0 && v.fract() == 0.0));
}

#[test]
fn littles_law_long_run_mean() {
    let (lambda, lm, ls) = (6.0, 1.2, 0.5);
    let cfg = flat(lambda, lm, ls);
    let s = generate::<f64>(&cfg, 10_000 / 24 + 1, &HolidayCalendar::default()).unwrap();
    let want = lambda * expected_stay(lm, ls);
    let got = mean(s.values());
    assert!((got / want - 1.0).abs() < 0.05, "{got} vs {want}");
}

#[test]
fn littles_law_fixed_stay() {
    // Zero spread: every stay is ceil(e^ln 4.5) = 5 hours.
    let cfg = flat(3.0, 4.5f64.ln(), 0.0);
    let s = generate::<f64>(&cfg, 420, &HolidayCalendar::default()).unwrap();
    assert!((mean(s.values()) / 15.0 - 1.0).abs() < 0.05);
}

#[test]
fn intensity_scaling_is_proportional() {
    let base = generate::<f64>(&flat(4.0, 1.3, 0.6), 420, &HolidayCalendar::default()).unwrap();
    let doubled = generate::<f64>(&flat(8.0, 1.3, 0.6), 420, &HolidayCalendar::default()).unwrap();
    let ratio = mean(doubled.values()) / mean(base.values());
    assert!((ratio - 2.0).abs() < 0.1, "{ratio}");
}

#[test]
fn thread_count_does_not_change_output() {
    let cfg = default_config();
    let cal = HolidayCalendar::default();
    let one = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let many = rayon::ThreadPoolBuilder::new()
        .num_threads(4)
        .build()
        .unwrap();
    let a = one.install(|| generate::<f64>(&cfg, 60, &cal).unwrap());
    let b = many.install(|| generate::<f64>(&cfg, 60, &cal).unwrap());
    assert_eq!(a, b);
}

#[test]
fn holidays_lower_intensity() {
    let cfg = SynthConfig {
        holiday_multiplier: 0.3,
        ..flat(6.0, 0.5, 0.3)
    };
    let start = cfg.start;
    let cal = HolidayCalendar::new(start.iter_days().take(60).step_by(2));
    let s = generate::<f64>(&cfg, 60, &cal).unwrap();
    let (mut hol, mut work) = (Vec::new(), Vec::new());
    for (i, v) in s.values().iter().enumerate() {
        if (i / 24) % 2 == 0 {
            hol.push(*v)
        } else {
            work.push(*v)
        }
    }
    assert!(mean(&hol) < 0.6 * mean(&work));
}
