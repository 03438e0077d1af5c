use edocc_core::backtest::ForecastMatrix;
use edocc_core::indicators::{Indicator, WindowSpec};

pub const TOL: f64 = 1e-9;

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

pub fn sma_at(ys: &[f64], t: usize, w: usize) -> Option<f64> {
    (t + 1 >= w).then(|| mean(&ys[t + 1 - w..=t]))
}

/// Window S = y[t-n..=t], oldest first.
pub fn window(ys: &[f64], t: usize, n: usize) -> Option<&[f64]> {
    (t >= n).then(|| &ys[t - n..=t])
}

pub fn linreg(s: &[f64]) -> (f64, f64) {
    let k = s.len() as f64;
    let xbar = (k - 1.0) / 2.0;
    let ybar = mean(s);
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (x, y) in s.iter().enumerate() {
        sxy += (x as f64 - xbar) * (y - ybar);
        sxx += (x as f64 - xbar).powi(2);
    }
    let slope = sxy / sxx;
    (slope, ybar - slope * xbar)
}

pub fn kama_naive(ys: &[f64], n: usize) -> Vec<Option<f64>> {
    let (f, s) = (2.0 / 3.0, 2.0 / 31.0);
    let mut out = vec![None; ys.len()];
    if ys.len() <= n {
        return out;
    }
    let mut k = mean(&ys[..n]);
    for t in n..ys.len() {
        let change = (ys[t] - ys[t - n]).abs();
        let vol: f64 = (t - n + 1..=t).map(|i| (ys[i] - ys[i - 1]).abs()).sum();
        let er = if vol == 0.0 { 0.0 } else { change / vol };
        let sc = (er * (f - s) + s).powi(2);
        k += sc * (ys[t] - k);
        out[t] = Some(k);
    }
    out
}

pub fn oracle(ind: Indicator, ys: &[f64], n: usize, t: usize) -> Option<f64> {
    let y = ys[t];
    match ind {
        Indicator::Ao => Some(sma_at(ys, t, 12)? - sma_at(ys, t, 16)?),
        Indicator::Po => {
            let slow = sma_at(ys, t, 26)?;
            (slow != 0.0).then(|| 100.0 * (sma_at(ys, t, 12).unwrap() - slow) / slow)
        }
        Indicator::Mom => window(ys, t, n).map(|s| y - s[0]),
        Indicator::Roc => window(ys, t, n).and_then(|s| (s[0] != 0.0).then(|| (y - s[0]) / s[0])),
        Indicator::Cmo => {
            let s = window(ys, t, n)?;
            let up: Vec<f64> = s[..n].iter().copied().filter(|v| *v < y).collect();
            let down: Vec<f64> = s[..n].iter().copied().filter(|v| *v > y).collect();
            let (su, sd) = (up.iter().sum::<f64>(), down.iter().sum::<f64>());
            Some(if down.is_empty() && !up.is_empty() {
                100.0
            } else if su + sd == 0.0 {
                0.0
            } else {
                100.0 * (su - sd) / (su + sd)
            })
        }
        Indicator::Rsi => {
            let s = window(ys, t, n)?;
            let d: Vec<f64> = s.windows(2).map(|w| w[1] - w[0]).collect();
            let up: f64 = d.iter().filter(|x| **x > 0.0).sum();
            let down: f64 = -d.iter().filter(|x| **x < 0.0).sum::<f64>();
            Some(if up == 0.0 && down == 0.0 {
                50.0
            } else {
                100.0 * up / (up + down)
            })
        }
        Indicator::Atan => Some(y.atan()),
        Indicator::Cos => Some(y.cos()),
        Indicator::Cosh => Some(y.cosh()),
        Indicator::Exp => Some(y.exp()),
        Indicator::Sin => Some(y.sin()),
        Indicator::Sinh => Some(y.sinh()),
        Indicator::Sqrt => (y >= 0.0).then(|| y.sqrt()),
        Indicator::Tan => Some(y.tan()),
        Indicator::Tanh => Some(y.tanh()),
        Indicator::Sma => sma_at(ys, t, n),
        Indicator::Wma => {
            if t + 1 < n {
                return None;
            }
            let s = &ys[t + 1 - n..=t];
            let num: f64 = s.iter().enumerate().map(|(i, v)| (i + 1) as f64 * v).sum();
            Some(num / (n * (n + 1) / 2) as f64)
        }
        Indicator::Trima => {
            if t + 2 < 2 * n {
                return None;
            }
            let smas: Vec<f64> = (t + 1 - n..=t).map(|u| sma_at(ys, u, n).unwrap()).collect();
            Some(mean(&smas))
        }
        Indicator::Midpoint => {
            let s = window(ys, t, n)?;
            let hi = s.iter().copied().fold(f64::MIN, f64::max);
            let lo = s.iter().copied().fold(f64::MAX, f64::min);
            Some((hi - lo) / 2.0)
        }
        Indicator::Kama => kama_naive(ys, n)[t],
        Indicator::LinearRegSlope => window(ys, t, n).map(|s| linreg(s).0),
        Indicator::LinearRegIntercept => window(ys, t, n).map(|s| linreg(s).1),
        Indicator::LinearRegAngle => window(ys, t, n).map(|s| linreg(s).0.atan()),
        Indicator::Sum => window(ys, t, n).map(|s| s.iter().sum()),
        Indicator::Var | Indicator::StdDev => {
            let s = window(ys, t, n)?;
            let m = mean(s);
            let var = s.iter().map(|v| (v - m).powi(2)).sum::<f64>() / s.len() as f64;
            Some(if ind == Indicator::Var {
                var
            } else {
                var.sqrt()
            })
        }
        Indicator::Max | Indicator::Min | Indicator::MaxIndex | Indicator::MinIndex => {
            let s = window(ys, t, n)?;
            // Lag i = 0 is the current value; scan newest first so the first
            // strict improvement keeps the most recent tie.
            let mut best = (0usize, y);
            for i in 1..=n {
                let v = s[n - i];
                let better = match ind {
                    Indicator::Max | Indicator::MaxIndex => v > best.1,
                    _ => v < best.1,
                };
                if better {
                    best = (i, v);
                }
            }
            Some(match ind {
                Indicator::Max | Indicator::Min => best.1,
                _ => best.0 as f64,
            })
        }
    }
}

pub fn check_all(ys: &[f64], n: usize, kama_cache: bool) {
    let w = WindowSpec::new(n).unwrap();
    for ind in Indicator::ALL {
        let got = ind.compute(ys, w);
        assert_eq!(got.len(), ys.len());
        let kama = kama_cache.then(|| kama_naive(ys, n));
        let mut compared = 0;
        for t in 0..ys.len() {
            let want = match (&kama, ind) {
                (Some(k), Indicator::Kama) => k[t],
                _ => oracle(ind, ys, n, t),
            };
            match (got[t], want) {
                (Some(g), Some(o)) => {
                    // exp/sinh/cosh reach 1e65 on occupancy-sized inputs.
                    let tol = match ind {
                        Indicator::Exp | Indicator::Cosh | Indicator::Sinh => {
                            TOL * o.abs().max(1.0)
                        }
                        _ => TOL,
                    };
                    assert!(
                        (g - o).abs() <= tol,
                        "{} n={n} t={t}: {g} vs {o}",
                        ind.name()
                    );
                    compared += 1;
                }
                (None, None) => {}
                (g, o) => panic!("{} n={n} t={t}: definedness {g:?} vs {o:?}", ind.name()),
            }
        }
        assert!(compared >= 500, "{}: only {compared} positions", ind.name());
    }
}

pub fn brute_msis(m: &ForecastMatrix<f64>, hist: &[f64], alpha: f64, period: usize) -> f64 {
    let mut denom = 0.0;
    for t in period..hist.len() {
        denom += (hist[t] - hist[t - period]).abs();
    }
    denom /= (hist.len() - period) as f64;
    let h = m.horizon();
    let mut total = 0.0;
    for d in 0..m.n_origins() {
        let mut s = 0.0;
        for k in 0..h {
            let i = d * h + k;
            let (l, u, y) = (m.lower()[i], m.upper()[i], m.truth()[i]);
            s += u - l;
            if y < l {
                s += 2.0 / alpha * (l - y);
            }
            if y > u {
                s += 2.0 / alpha * (y - u);
            }
        }
        total += s / (h as f64 * denom);
    }
    total / m.n_origins() as f64
}

pub fn pair_count_auc(scores: &[f64], labels: &[bool]) -> f64 {
    let (mut wins, mut pairs) = (0.0, 0.0);
    for i in 0..scores.len() {
        for j in 0..scores.len() {
            if labels[i] && !labels[j] {
                pairs += 1.0;
                if scores[i] > scores[j] {
                    wins += 1.0;
                } else if scores[i] == scores[j] {
                    wins += 0.5;
                }
            }
        }
    }
    wins / pairs
}

/// Output of a windowed or smoothing indicator on a constant series `c`,
/// window `n`; `None` for the pointwise transforms.
pub fn constant_value(ind: Indicator, c: f64, n: usize) -> Option<f64> {
    Some(match ind {
        Indicator::Sma | Indicator::Wma | Indicator::Trima | Indicator::Kama => c,
        Indicator::Max | Indicator::Min => c,
        Indicator::LinearRegIntercept => c,
        Indicator::Sum => (n + 1) as f64 * c,
        Indicator::Rsi => 50.0,
        Indicator::Midpoint
        | Indicator::Var
        | Indicator::StdDev
        | Indicator::Mom
        | Indicator::Roc
        | Indicator::Ao
        | Indicator::Po
        | Indicator::Cmo
        | Indicator::LinearRegSlope
        | Indicator::LinearRegAngle
        | Indicator::MaxIndex
        | Indicator::MinIndex => 0.0,
        _ => return None,
    })
}
