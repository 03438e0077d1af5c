use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use edocc_core::evaluation::DailyScore;
use edocc_core::models::{ModelKind, DEFAULT_LAGS};
use edocc_core::synth::{default_config, SynthConfig};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::args::{BacktestArgs, DataArgs, EvaluateArgs, FeatureArgs, SplitArgs, SynthArgs};
use crate::Failure;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub seed: u64,
    /// Patients at or above which an hour is crowded.
    pub threshold: f64,
    pub data: DataConfig,
    pub split: SplitConfig,
    pub model: ModelConfig,
    pub plan: PlanConfig,
    pub metrics: MetricsConfig,
    pub features: FeatureConfig,
    pub synth: SynthSection,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            threshold: 80.0,
            data: DataConfig::default(),
            split: SplitConfig::default(),
            model: ModelConfig::default(),
            plan: PlanConfig::default(),
            metrics: MetricsConfig::default(),
            features: FeatureConfig::default(),
            synth: SynthSection::default(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DataConfig {
    pub input: Option<PathBuf>,
    pub holidays: Option<PathBuf>,
    pub impute_zero: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SplitConfig {
    pub train_end: NaiveDate,
    pub val_end: NaiveDate,
    pub test_days: usize,
}

impl Default for SplitConfig {
    fn default() -> Self {
        Self {
            train_end: NaiveDate::from_ymd_opt(2017, 12, 31).expect("valid date"),
            val_end: NaiveDate::from_ymd_opt(2018, 6, 18).expect("valid date"),
            test_days: 364,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelConfig {
    pub name: ModelKind,
    pub period: usize,
    pub lags: Vec<usize>,
    pub scale: bool,
}

impl Default for ModelConfig {
    fn default() -> Self {
        Self {
            name: ModelKind::Hwam,
            period: 24,
            lags: DEFAULT_LAGS.to_vec(),
            scale: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PlanConfig {
    pub window: usize,
    pub horizon: usize,
}

impl Default for PlanConfig {
    fn default() -> Self {
        Self {
            window: 168,
            horizon: 24,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MetricsConfig {
    pub alpha: f64,
    pub msis_period: usize,
    pub bootstrap_iters: usize,
    pub score: DailyScore,
}

impl Default for MetricsConfig {
    fn default() -> Self {
        Self {
            alpha: 0.05,
            msis_period: 24,
            bootstrap_iters: 250,
            score: DailyScore::Max,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FeatureConfig {
    pub ta: bool,
    pub per_holiday: bool,
    pub window: usize,
}

impl Default for FeatureConfig {
    fn default() -> Self {
        Self {
            ta: false,
            per_holiday: false,
            window: 168,
        }
    }
}

/// Generator parameters; the seed comes from the top-level `seed`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SynthSection {
    pub days: usize,
    pub start: NaiveDate,
    pub hourly_intensity: Vec<f64>,
    pub weekday_multiplier: Vec<f64>,
    pub holiday_multiplier: f64,
    pub daily_log_sd: f64,
    pub los_log_mean: f64,
    pub los_log_sd: f64,
}

impl Default for SynthSection {
    fn default() -> Self {
        let d = default_config();
        Self {
            days: 900,
            start: d.start,
            hourly_intensity: d.hourly_intensity,
            weekday_multiplier: d.weekday_multiplier,
            holiday_multiplier: d.holiday_multiplier,
            daily_log_sd: d.daily_log_sd,
            los_log_mean: d.los_log_mean,
            los_log_sd: d.los_log_sd,
        }
    }
}

impl SynthSection {
    pub fn to_core(&self, seed: u64) -> SynthConfig {
        SynthConfig {
            start: self.start,
            hourly_intensity: self.hourly_intensity.clone(),
            weekday_multiplier: self.weekday_multiplier.clone(),
            holiday_multiplier: self.holiday_multiplier,
            daily_log_sd: self.daily_log_sd,
            los_log_mean: self.los_log_mean,
            los_log_sd: self.los_log_sd,
            seed,
        }
    }
}

impl RunConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, Failure> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::usage(format!("reading config {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| Failure::usage(format!("config {}: {e}", path.display())))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Hex SHA-256 of the effective configuration.
    pub fn digest(&self) -> String {
        Sha256::digest(self.to_toml().as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }

    pub fn input(&self) -> Result<&Path, Failure> {
        self.data
            .input
            .as_deref()
            .ok_or_else(|| Failure::usage("no input: pass --input or set data.input"))
    }

    fn apply_data(&mut self, a: &DataArgs) {
        if let Some(p) = &a.input {
            self.data.input = Some(p.clone());
        }
        self.data.impute_zero |= a.impute_zero;
    }

    fn apply_split(&mut self, a: &SplitArgs) {
        if let Some(d) = a.train_end {
            self.split.train_end = d;
        }
        if let Some(d) = a.val_end {
            self.split.val_end = d;
        }
    }

    pub fn apply_synth(&mut self, a: &SynthArgs) {
        if let Some(d) = a.days {
            self.synth.days = d as usize;
        }
        if let Some(s) = a.start {
            self.synth.start = s;
        }
        if let Some(h) = &a.holidays {
            self.data.holidays = Some(h.clone());
        }
    }

    pub fn apply_features(&mut self, a: &FeatureArgs) {
        self.apply_data(&a.data);
        if let Some(h) = &a.holidays {
            self.data.holidays = Some(h.clone());
        }
        self.features.ta |= a.ta;
        self.features.per_holiday |= a.per_holiday;
        if let Some(w) = a.window {
            self.features.window = w as usize;
        }
    }

    pub fn apply_backtest(&mut self, a: &BacktestArgs) {
        self.apply_data(&a.data);
        self.apply_split(&a.split);
        if let Some(m) = a.model {
            self.model.name = m;
        }
        if let Some(w) = a.window {
            self.plan.window = w as usize;
        }
        if let Some(h) = a.horizon {
            self.plan.horizon = h as usize;
        }
        if let Some(p) = a.period {
            self.model.period = p as usize;
        }
        if let Some(l) = &a.lags {
            self.model.lags = l.clone();
        }
        if let Some(d) = a.test_days {
            self.split.test_days = d as usize;
        }
        if a.no_scale {
            self.model.scale = false;
        }
    }

    pub fn apply_evaluate(&mut self, a: &EvaluateArgs) -> Result<(), Failure> {
        self.apply_data(&a.data);
        self.apply_split(&a.split);
        if let Some(x) = a.alpha {
            self.metrics.alpha = x;
        }
        if let Some(m) = a.msis_period {
            self.metrics.msis_period = m as usize;
        }
        if let Some(t) = a.threshold {
            self.threshold = t;
        }
        if let Some(n) = a.bootstrap_iters {
            self.metrics.bootstrap_iters = n as usize;
        }
        if let Some(s) = &a.score {
            self.metrics.score = match s.as_str() {
                "max" => DailyScore::Max,
                "upper" => DailyScore::Upper,
                other => {
                    return Err(Failure::usage(format!(
                        "unknown score {other:?} (expected max or upper)"
                    )))
                }
            };
        }
        Ok(())
    }

    /// Rejects values outside the library preconditions before any work starts.
    pub fn validate(&self) -> Result<(), Failure> {
        let bad = |m: String| Err(Failure::usage(m));
        if !(self.threshold.is_finite() && self.threshold > 0.0) {
            return bad(format!(
                "threshold must be positive, got {}",
                self.threshold
            ));
        }
        if self.split.train_end >= self.split.val_end {
            return bad(format!(
                "split.train_end {} must precede split.val_end {}",
                self.split.train_end, self.split.val_end
            ));
        }
        if self.split.test_days == 0 || self.synth.days == 0 {
            return bad("test_days and synth.days must be >= 1".into());
        }
        if self.plan.window == 0 || self.plan.horizon == 0 || self.model.period == 0 {
            return bad("plan.window, plan.horizon and model.period must be >= 1".into());
        }
        if self.features.window < 2 {
            return bad("features.window must be >= 2".into());
        }
        if !(self.metrics.alpha > 0.0 && self.metrics.alpha < 1.0) {
            return bad(format!(
                "metrics.alpha must lie in (0, 1), got {}",
                self.metrics.alpha
            ));
        }
        if self.metrics.msis_period == 0 || self.metrics.bootstrap_iters == 0 {
            return bad("metrics.msis_period and metrics.bootstrap_iters must be >= 1".into());
        }
        if let (Some(a), Some(b)) = (&self.data.input, &self.data.holidays) {
            if a == b {
                return bad("data.input and data.holidays point at the same file".into());
            }
        }
        self.synth
            .to_core(self.seed)
            .validate()
            .map_err(|e| Failure::usage(format!("synth: {e}")))
    }
}
