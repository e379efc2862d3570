//! Shared helpers for the integration suites: naive full-window indicator
//! oracles (kept independent of the library's rolling implementations) and
//! closeness assertions.

#![allow(dead_code)]

use cumret::indicators::{DmiConvention, EmaAlpha};
use cumret::marketdata::PriceSeries;

/// `|got - want| <= 1e-10 * (scale + |want|)`.
///
/// Pure pointwise-relative comparison is meaningless where an indicator
/// passes through zero (MACD, CCI, BIAS all do), so closeness is measured
/// against the indicator's natural scale plus the local magnitude.
pub fn assert_close(got: f64, want: f64, scale: f64, context: &str) {
    let tol = 1e-10 * (scale + want.abs());
    assert!(
        (got - want).abs() <= tol,
        "{context}: got {got}, naive oracle {want} (tol {tol})"
    );
}

/// Mean over the trailing window, recomputed from scratch.
pub fn naive_sma(values: &[f64], n: usize, t: usize) -> Option<f64> {
    if t + 1 < n {
        return None;
    }
    Some(values[t + 1 - n..=t].iter().sum::<f64>() / n as f64)
}

/// EMA by its closed form: an exponentially weighted sum over the whole
/// prefix, rather than the recurrence.
pub fn naive_ema(values: &[f64], n: usize, mode: EmaAlpha, t: usize) -> Option<f64> {
    let alpha = match mode {
        EmaAlpha::OneOverNPlusOne => 1.0 / (n as f64 + 1.0),
        EmaAlpha::TwoOverNPlusOne => 2.0 / (n as f64 + 1.0),
    };
    let keep = 1.0 - alpha;
    let mut acc = keep.powi(t as i32) * values[0];
    for (j, &v) in values.iter().enumerate().take(t + 1).skip(1) {
        acc += alpha * keep.powi((t - j) as i32) * v;
    }
    Some(acc)
}

pub fn naive_mom(values: &[f64], n: usize, t: usize) -> Option<f64> {
    if t < n {
        return None;
    }
    Some(100.0 * values[t] / values[t - n])
}

pub fn naive_roc(values: &[f64], n: usize, t: usize) -> Option<f64> {
    if t < n {
        return None;
    }
    Some(100.0 * (values[t] / values[t - n] - 1.0))
}

pub fn naive_stoch_k(series: &PriceSeries, n: usize, t: usize) -> Option<f64> {
    if t + 1 < n {
        return None;
    }
    let bars = &series.bars()[t + 1 - n..=t];
    let h_max = bars.iter().map(|b| b.high).fold(f64::NEG_INFINITY, f64::max);
    let l_min = bars.iter().map(|b| b.low).fold(f64::INFINITY, f64::min);
    if h_max == l_min {
        return Some(50.0);
    }
    Some(100.0 * (series.bars()[t].close - l_min) / (h_max - l_min))
}

pub fn naive_stoch_d(series: &PriceSeries, n: usize, m: usize, t: usize) -> Option<f64> {
    if t + 1 < n + m - 1 {
        return None;
    }
    let sum: f64 = (t + 1 - m..=t)
        .map(|u| naive_stoch_k(series, n, u).expect("inside warm-up"))
        .sum();
    Some(sum / m as f64)
}

pub fn naive_macd(
    values: &[f64],
    n_fast: usize,
    m_slow: usize,
    mode: EmaAlpha,
    t: usize,
) -> Option<f64> {
    Some(naive_ema(values, n_fast, mode, t)? - naive_ema(values, m_slow, mode, t)?)
}

pub fn naive_rsi(values: &[f64], n: usize, t: usize) -> Option<f64> {
    if t < n {
        return None;
    }
    let mut up = 0.0;
    let mut down = 0.0;
    for u in t + 1 - n..=t {
        let change = values[u] - values[u - 1];
        up += change.max(0.0);
        down += (-change).max(0.0);
    }
    Some(if down == 0.0 && up == 0.0 {
        50.0
    } else if down == 0.0 {
        100.0
    } else {
        100.0 - 100.0 / (1.0 + up / down)
    })
}

pub fn naive_psy(values: &[f64], n: usize, t: usize) -> Option<f64> {
    if t < n {
        return None;
    }
    let ups = (t + 1 - n..=t)
        .filter(|&u| values[u] > values[u - 1])
        .count();
    Some(ups as f64 / n as f64)
}

pub fn naive_cci(series: &PriceSeries, n: usize, t: usize) -> Option<f64> {
    if t + 1 < n {
        return None;
    }
    let typical: Vec<f64> = series.bars()[t + 1 - n..=t]
        .iter()
        .map(|b| (b.high + b.low + b.close) / 3.0)
        .collect();
    let mean = typical.iter().sum::<f64>() / n as f64;
    let mad = typical.iter().map(|m| (m - mean).abs()).sum::<f64>() / n as f64;
    Some(if mad <= 1e-12 * mean.abs() {
        0.0
    } else {
        (typical[n - 1] - mean) / (0.015 * mad)
    })
}

pub fn naive_bias(values: &[f64], n: usize, t: usize) -> Option<f64> {
    let ma = naive_sma(values, n, t)?;
    Some((values[t] - ma) / ma)
}

pub fn naive_dmi(
    series: &PriceSeries,
    n: usize,
    convention: DmiConvention,
    t: usize,
) -> Option<(f64, f64)> {
    if t < n || series.len() < n + 1 {
        return None;
    }
    let bars = series.bars();
    let mut sum_plus = 0.0;
    let mut sum_minus = 0.0;
    let mut sum_tr = 0.0;
    for u in t + 1 - n..=t {
        let (h, l) = (bars[u].high, bars[u].low);
        let (h_prev, l_prev, c_prev) = (bars[u - 1].high, bars[u - 1].low, bars[u - 1].close);
        sum_plus += (h - h_prev).max(0.0);
        match convention {
            DmiConvention::Wilder => {
                sum_minus += (l_prev - l).max(0.0);
                sum_tr += (h - l).max((h - c_prev).abs()).max((l - c_prev).abs());
            }
            DmiConvention::Literal => {
                sum_minus += (l - l_prev).max(0.0);
                sum_tr += (h - l).max(h - c_prev).max(l - c_prev);
            }
        }
    }
    Some(if sum_tr == 0.0 {
        (0.0, 0.0)
    } else {
        (100.0 * sum_plus / sum_tr, 100.0 * sum_minus / sum_tr)
    })
}
