//! Technical-analysis indicators computed over rolling windows of the
//! target series.
//!
//! Every function returns one entry per input position; `None` marks
//! warm-up positions (the window reaches before the series start) and
//! undefined values such as a rate of change against a zero base.

mod matrix;
mod momentum;
mod overlap;
mod rolling;
mod transform;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub use matrix::{ta_feature_matrix, TaConfig, TaMatrix};
pub use momentum::{momentum, Momentum, AO_FAST, AO_SLOW, PO_FAST, PO_SLOW};
pub use overlap::{moving_average, MovingAverage, KAMA_FAST, KAMA_SLOW};
pub use rolling::{linreg, rolling_stat, LinReg, RollingStat};
pub use transform::{elementwise, Transform};

/// Indicator output aligned with its input.
pub type Column<T> = Vec<Option<T>>;

/// Rolling window length in hours.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct WindowSpec(usize);

impl WindowSpec {
    pub const DEFAULT: WindowSpec = WindowSpec(168);

    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!(
                "indicator window must be >= 2, got {n}"
            )));
        }
        Ok(Self(n))
    }

    pub fn get(self) -> usize {
        self.0
    }
}

impl Default for WindowSpec {
    fn default() -> Self {
        Self::DEFAULT
    }
}

impl TryFrom<usize> for WindowSpec {
    type Error = Error;
    fn try_from(n: usize) -> Result<Self> {
        Self::new(n)
    }
}

impl From<WindowSpec> for usize {
    fn from(w: WindowSpec) -> usize {
        w.0
    }
}

/// The 30 technical-analysis features, in output column order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Indicator {
    Ao,
    Cmo,
    Mom,
    Po,
    Roc,
    Rsi,
    Atan,
    Cos,
    Cosh,
    Exp,
    Sin,
    Sinh,
    Sqrt,
    Tan,
    Tanh,
    Midpoint,
    Sma,
    Wma,
    Kama,
    Trima,
    LinearRegAngle,
    LinearRegIntercept,
    LinearRegSlope,
    StdDev,
    Var,
    Max,
    MaxIndex,
    Min,
    MinIndex,
    Sum,
}

impl Indicator {
    pub const ALL: [Indicator; 30] = [
        Indicator::Ao,
        Indicator::Cmo,
        Indicator::Mom,
        Indicator::Po,
        Indicator::Roc,
        Indicator::Rsi,
        Indicator::Atan,
        Indicator::Cos,
        Indicator::Cosh,
        Indicator::Exp,
        Indicator::Sin,
        Indicator::Sinh,
        Indicator::Sqrt,
        Indicator::Tan,
        Indicator::Tanh,
        Indicator::Midpoint,
        Indicator::Sma,
        Indicator::Wma,
        Indicator::Kama,
        Indicator::Trima,
        Indicator::LinearRegAngle,
        Indicator::LinearRegIntercept,
        Indicator::LinearRegSlope,
        Indicator::StdDev,
        Indicator::Var,
        Indicator::Max,
        Indicator::MaxIndex,
        Indicator::Min,
        Indicator::MinIndex,
        Indicator::Sum,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Indicator::Ao => "AO",
            Indicator::Cmo => "CMO",
            Indicator::Mom => "MOM",
            Indicator::Po => "PO",
            Indicator::Roc => "ROC",
            Indicator::Rsi => "RSI",
            Indicator::Atan => "ATAN",
            Indicator::Cos => "COS",
            Indicator::Cosh => "COSH",
            Indicator::Exp => "EXP",
            Indicator::Sin => "SIN",
            Indicator::Sinh => "SINH",
            Indicator::Sqrt => "SQRT",
            Indicator::Tan => "TAN",
            Indicator::Tanh => "TANH",
            Indicator::Midpoint => "MIDPOINT",
            Indicator::Sma => "SMA",
            Indicator::Wma => "WMA",
            Indicator::Kama => "KAMA",
            Indicator::Trima => "TRIMA",
            Indicator::LinearRegAngle => "LINEARREGANGLE",
            Indicator::LinearRegIntercept => "LINEARREGINTERCEPT",
            Indicator::LinearRegSlope => "LINEARREGSLOPE",
            Indicator::StdDev => "STDDEV",
            Indicator::Var => "VAR",
            Indicator::Max => "MAX",
            Indicator::MaxIndex => "MAXINDEX",
            Indicator::Min => "MIN",
            Indicator::MinIndex => "MININDEX",
            Indicator::Sum => "SUM",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL
            .iter()
            .copied()
            .find(|i| i.name().eq_ignore_ascii_case(s))
    }

    /// Whether the indicator depends on a configurable window length.
    pub fn is_windowed(self) -> bool {
        !matches!(
            self,
            Indicator::Ao
                | Indicator::Po
                | Indicator::Atan
                | Indicator::Cos
                | Indicator::Cosh
                | Indicator::Exp
                | Indicator::Sin
                | Indicator::Sinh
                | Indicator::Sqrt
                | Indicator::Tan
                | Indicator::Tanh
        )
    }

    /// Index of the first defined output for window `n`.
    pub fn warm_up(self, n: usize) -> usize {
        match self {
            Indicator::Ao => AO_SLOW - 1,
            Indicator::Po => PO_SLOW - 1,
            Indicator::Sma | Indicator::Wma => n - 1,
            Indicator::Trima => 2 * n - 2,
            i if !i.is_windowed() => 0,
            _ => n,
        }
    }

    /// Computes this indicator's column over `ys` with window `n`.
    pub fn compute<T: Scalar>(self, ys: &[T], n: WindowSpec) -> Column<T> {
        match self {
            Indicator::Ao => momentum(ys, Momentum::Ao, n),
            Indicator::Cmo => momentum(ys, Momentum::Cmo, n),
            Indicator::Mom => momentum(ys, Momentum::Mom, n),
            Indicator::Po => momentum(ys, Momentum::Po, n),
            Indicator::Roc => momentum(ys, Momentum::Roc, n),
            Indicator::Rsi => momentum(ys, Momentum::Rsi, n),
            Indicator::Atan => elementwise(ys, Transform::Atan),
            Indicator::Cos => elementwise(ys, Transform::Cos),
            Indicator::Cosh => elementwise(ys, Transform::Cosh),
            Indicator::Exp => elementwise(ys, Transform::Exp),
            Indicator::Sin => elementwise(ys, Transform::Sin),
            Indicator::Sinh => elementwise(ys, Transform::Sinh),
            Indicator::Sqrt => elementwise(ys, Transform::Sqrt),
            Indicator::Tan => elementwise(ys, Transform::Tan),
            Indicator::Tanh => elementwise(ys, Transform::Tanh),
            Indicator::Midpoint => moving_average(ys, n, MovingAverage::Midpoint),
            Indicator::Sma => moving_average(ys, n, MovingAverage::Sma),
            Indicator::Wma => moving_average(ys, n, MovingAverage::Wma),
            Indicator::Kama => moving_average(ys, n, MovingAverage::Kama),
            Indicator::Trima => moving_average(ys, n, MovingAverage::Trima),
            Indicator::LinearRegAngle => linreg(ys, n).angle,
            Indicator::LinearRegIntercept => linreg(ys, n).intercept,
            Indicator::LinearRegSlope => linreg(ys, n).slope,
            Indicator::StdDev => rolling_stat(ys, n, RollingStat::StdDev),
            Indicator::Var => rolling_stat(ys, n, RollingStat::Var),
            Indicator::Max => rolling_stat(ys, n, RollingStat::Max),
            Indicator::MaxIndex => rolling_stat(ys, n, RollingStat::MaxIndex),
            Indicator::Min => rolling_stat(ys, n, RollingStat::Min),
            Indicator::MinIndex => rolling_stat(ys, n, RollingStat::MinIndex),
            Indicator::Sum => rolling_stat(ys, n, RollingStat::Sum),
        }
    }
}

/// Sums of every length-`w` window of `xs` (entry `k` covers `xs[k..k + w]`).
///
/// Running update with a full recomputation once per window length, which
/// keeps drift bounded at O(len) total cost.
pub(crate) fn window_sums<T: Scalar>(xs: &[T], w: usize) -> Vec<T> {
    if xs.len() < w || w == 0 {
        return Vec::new();
    }
    let mut out = Vec::with_capacity(xs.len() - w + 1);
    let mut s: T = xs[..w].iter().copied().sum();
    out.push(s);
    for i in w..xs.len() {
        let lo = i + 1 - w;
        if lo.is_multiple_of(w) {
            s = xs[lo..=i].iter().copied().sum();
        } else {
            s += xs[i] - xs[i - w];
        }
        out.push(s);
    }
    out
}

/// Number of `true` flags in every length-`w` window.
pub(crate) fn window_counts(flags: &[bool], w: usize) -> Vec<usize> {
    if flags.len() < w || w == 0 {
        return Vec::new();
    }
    let mut c = flags[..w].iter().filter(|f| **f).count();
    let mut out = vec![c];
    for i in w..flags.len() {
        c += flags[i] as usize;
        c -= flags[i - w] as usize;
        out.push(c);
    }
    out
}

/// Places `vals` (one per window ending at `first..`) into a full-length column.
pub(crate) fn pad<T: Copy>(
    len: usize,
    first: usize,
    vals: impl IntoIterator<Item = Option<T>>,
) -> Column<T> {
    let mut col = vec![None; len];
    for (slot, v) in col.iter_mut().skip(first).zip(vals) {
        *slot = v;
    }
    col
}
