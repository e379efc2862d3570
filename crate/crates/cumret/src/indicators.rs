//! The twelve technical-indicator kernels behind the trading rules, with the
//! rule-table parameters as defaults.
//!
//! Every kernel returns an [`IndicatorSeries`] of the same length as its
//! source, with an explicit warm-up boundary. Values before the boundary are
//! undefined and only reachable through [`IndicatorSeries::get`], which
//! returns `None` for them — there is no silent zero.
//!
//! Kernels with a rolling implementation (SMA, RSI, stochastic, DMI) are
//! required by tests to agree with a naive per-window recomputation to 1e-10
//! relative at every defined index.

use crate::error::{Error, Result};
use crate::marketdata::PriceSeries;
use std::collections::VecDeque;

/// Indicator values aligned to a source series, with a warm-up boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct IndicatorSeries {
    pub name: String,
    values: Vec<f64>,
    valid_from: usize,
    pub params: Vec<(&'static str, f64)>,
}

impl IndicatorSeries {
    fn new(
        name: impl Into<String>,
        values: Vec<f64>,
        valid_from: usize,
        params: Vec<(&'static str, f64)>,
    ) -> Self {
        Self {
            name: name.into(),
            values,
            valid_from,
            params,
        }
    }

    /// Value at index `t`, or `None` during warm-up / at undefined points.
    pub fn get(&self, t: usize) -> Option<f64> {
        if t < self.valid_from {
            return None;
        }
        match self.values.get(t) {
            Some(v) if v.is_finite() => Some(*v),
            _ => None,
        }
    }

    pub fn defined(&self, t: usize) -> bool {
        self.get(t).is_some()
    }

    /// First index at which the indicator is nominally defined. Equal to the
    /// series length when the source was too short to define anything.
    pub fn valid_from(&self) -> usize {
        self.valid_from
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Primary/secondary lookbacks for a rule, in bars.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndicatorParams {
    pub n: usize,
    pub m: Option<usize>,
}

impl IndicatorParams {
    pub fn single(n: usize) -> Self {
        Self { n, m: None }
    }

    pub fn pair(n: usize, m: usize) -> Self {
        Self { n, m: Some(m) }
    }
}

/// EMA smoothing factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EmaAlpha {
    /// α = 1/(n+1), the rule-table default.
    #[default]
    OneOverNPlusOne,
    /// α = 2/(n+1), the conventional EMA smoothing.
    TwoOverNPlusOne,
}

impl EmaAlpha {
    fn alpha(self, n: usize) -> f64 {
        match self {
            EmaAlpha::OneOverNPlusOne => 1.0 / (n as f64 + 1.0),
            EmaAlpha::TwoOverNPlusOne => 2.0 / (n as f64 + 1.0),
        }
    }
}

/// Directional-movement sign convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DmiConvention {
    /// Wilder's definition: -DM counts falling lows; TR is the true range.
    #[default]
    Wilder,
    /// The rule table taken literally: -DM counts rising lows and TR omits
    /// the absolute values.
    Literal,
}

/// Momentum-family variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentumKind {
    /// 100 * C_t / C_{t-n}
    Mom,
    /// 100 * (C_t / C_{t-n} - 1)
    Roc,
}

fn check_lookback(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::arg("lookback n must be >= 1"));
    }
    Ok(())
}

/// Simple moving average over the trailing `n` values.
pub fn sma(values: &[f64], n: usize) -> Result<IndicatorSeries> {
    check_lookback(n)?;
    let len = values.len();
    let mut out = vec![f64::NAN; len];
    let valid_from = if len >= n { n - 1 } else { len };
    let mut sum = 0.0;
    for t in 0..len {
        sum += values[t];
        if t >= n {
            sum -= values[t - n];
        }
        if t + 1 >= n {
            out[t] = sum / n as f64;
        }
    }
    Ok(IndicatorSeries::new(
        format!("SMA({n})"),
        out,
        valid_from,
        vec![("n", n as f64)],
    ))
}

/// Exponential moving average, seeded with the first value.
///
/// `EMA_t = EMA_{t-1} + alpha * (C_t - EMA_{t-1})`; defined from index 0.
pub fn ema(values: &[f64], n: usize, alpha_mode: EmaAlpha) -> Result<IndicatorSeries> {
    check_lookback(n)?;
    if values.is_empty() {
        return Err(Error::arg("ema of an empty series"));
    }
    let alpha = alpha_mode.alpha(n);
    let mut out = Vec::with_capacity(values.len());
    let mut prev = values[0];
    out.push(prev);
    for &v in &values[1..] {
        prev += alpha * (v - prev);
        out.push(prev);
    }
    Ok(IndicatorSeries::new(
        format!("EMA({n})"),
        out,
        0,
        vec![("n", n as f64), ("alpha", alpha)],
    ))
}

/// MOM or ROC: the price level `n` bars back, as a ratio.
pub fn momentum_family(values: &[f64], n: usize, kind: MomentumKind) -> Result<IndicatorSeries> {
    check_lookback(n)?;
    let len = values.len();
    let mut out = vec![f64::NAN; len];
    let valid_from = if len > n { n } else { len };
    for t in n..len {
        let past = values[t - n];
        if past <= 0.0 {
            continue; // undefined at this t
        }
        let ratio = values[t] / past;
        out[t] = match kind {
            MomentumKind::Mom => 100.0 * ratio,
            MomentumKind::Roc => 100.0 * (ratio - 1.0),
        };
    }
    let name = match kind {
        MomentumKind::Mom => format!("MOM({n})"),
        MomentumKind::Roc => format!("ROC({n})"),
    };
    Ok(IndicatorSeries::new(
        name,
        out,
        valid_from,
        vec![("n", n as f64)],
    ))
}

/// Rolling extremum over a trailing window, by monotonic deque. Exact: no
/// float arithmetic, only comparisons.
struct RollingExtremum<'a> {
    values: &'a [f64],
    window: usize,
    deque: VecDeque<usize>,
    take_max: bool,
}

impl<'a> RollingExtremum<'a> {
    fn new(values: &'a [f64], window: usize, take_max: bool) -> Self {
        Self {
            values,
            window,
            deque: VecDeque::new(),
            take_max,
        }
    }

    /// Push index `t`; returns the extremum over `[t+1-window, t]` once the
    /// window is full.
    fn push(&mut self, t: usize) -> Option<f64> {
        let v = self.values[t];
        while let Some(&back) = self.deque.back() {
            let keep = if self.take_max {
                self.values[back] > v
            } else {
                self.values[back] < v
            };
            if keep {
                break;
            }
            self.deque.pop_back();
        }
        self.deque.push_back(t);
        if let Some(&front) = self.deque.front() {
            if front + self.window <= t {
                self.deque.pop_front();
            }
        }
        if t + 1 >= self.window {
            self.deque.front().map(|&i| self.values[i])
        } else {
            None
        }
    }
}

/// Stochastic oscillator: raw %K over `n` bars and its `m`-bar mean D.
///
/// `K = 100 * (C - L_min) / (H_max - L_min)`; a flat window (H_max == L_min)
/// gives K = 50 by convention.
pub fn stochastic_kd(
    series: &PriceSeries,
    n: usize,
    m: usize,
) -> Result<(IndicatorSeries, IndicatorSeries)> {
    check_lookback(n)?;
    check_lookback(m)?;
    let bars = series.bars();
    let len = bars.len();
    let highs: Vec<f64> = bars.iter().map(|b| b.high).collect();
    let lows: Vec<f64> = bars.iter().map(|b| b.low).collect();

    let mut k_values = vec![f64::NAN; len];
    let k_valid_from = if len >= n { n - 1 } else { len };
    let mut max_tracker = RollingExtremum::new(&highs, n, true);
    let mut min_tracker = RollingExtremum::new(&lows, n, false);
    for t in 0..len {
        let h_max = max_tracker.push(t);
        let l_min = min_tracker.push(t);
        if let (Some(h), Some(l)) = (h_max, l_min) {
            k_values[t] = if h == l {
                50.0
            } else {
                100.0 * (bars[t].close - l) / (h - l)
            };
        }
    }

    // D: m-bar simple mean of K, defined once m K-values exist.
    let mut d_values = vec![f64::NAN; len];
    let d_valid_from = if len >= n + m - 1 { n + m - 2 } else { len };
    let mut sum = 0.0;
    for t in k_valid_from..len {
        sum += k_values[t];
        if t >= k_valid_from + m {
            sum -= k_values[t - m];
        }
        if t + 1 >= k_valid_from + m {
            d_values[t] = sum / m as f64;
        }
    }

    let k = IndicatorSeries::new(
        format!("K({n})"),
        k_values,
        k_valid_from,
        vec![("n", n as f64)],
    );
    let d = IndicatorSeries::new(
        format!("D({n},{m})"),
        d_values,
        d_valid_from,
        vec![("n", n as f64), ("m", m as f64)],
    );
    Ok((k, d))
}

/// MACD line: fast EMA minus slow EMA, defined from index 0.
pub fn macd_line(
    values: &[f64],
    n_fast: usize,
    m_slow: usize,
    alpha_mode: EmaAlpha,
) -> Result<IndicatorSeries> {
    if n_fast >= m_slow {
        return Err(Error::arg(format!(
            "macd fast lookback {n_fast} must be < slow lookback {m_slow}"
        )));
    }
    let fast = ema(values, n_fast, alpha_mode)?;
    let slow = ema(values, m_slow, alpha_mode)?;
    let out: Vec<f64> = (0..values.len())
        .map(|t| fast.get(t).unwrap() - slow.get(t).unwrap())
        .collect();
    Ok(IndicatorSeries::new(
        format!("MACD({n_fast},{m_slow})"),
        out,
        0,
        vec![("n_fast", n_fast as f64), ("m_slow", m_slow as f64)],
    ))
}

/// Relative strength index over the last `n` daily changes.
///
/// Zero-denominator conventions: all-up windows read 100, windows with no
/// movement at all read 50.
pub fn rsi(values: &[f64], n: usize) -> Result<IndicatorSeries> {
    check_lookback(n)?;
    let len = values.len();
    let mut out = vec![f64::NAN; len];
    let valid_from = if len > n { n } else { len };
    let mut up_sum = 0.0;
    let mut down_sum = 0.0;
    for t in 1..len {
        let change = values[t] - values[t - 1];
        up_sum += change.max(0.0);
        down_sum += (-change).max(0.0);
        if t > n {
            let old = values[t - n] - values[t - n - 1];
            up_sum -= old.max(0.0);
            down_sum -= (-old).max(0.0);
        }
        if t >= n {
            // Rolling sums of non-negatives can dip epsilon-negative; clamp
            // before the zero-denominator branches.
            let up = up_sum.max(0.0);
            let down = down_sum.max(0.0);
            out[t] = if down == 0.0 && up == 0.0 {
                50.0
            } else if down == 0.0 {
                100.0
            } else {
                let rs = up / down;
                100.0 - 100.0 / (1.0 + rs)
            };
        }
    }
    Ok(IndicatorSeries::new(
        format!("RSI({n})"),
        out,
        valid_from,
        vec![("n", n as f64)],
    ))
}

/// Fraction of the last `n` daily changes that were strictly up, in [0, 1].
pub fn psy(values: &[f64], n: usize) -> Result<IndicatorSeries> {
    check_lookback(n)?;
    let len = values.len();
    let mut out = vec![f64::NAN; len];
    let valid_from = if len > n { n } else { len };
    let mut ups: u32 = 0;
    for t in 1..len {
        if values[t] > values[t - 1] {
            ups += 1;
        }
        if t > n && values[t - n] > values[t - n - 1] {
            ups -= 1;
        }
        if t >= n {
            out[t] = f64::from(ups) / n as f64;
        }
    }
    Ok(IndicatorSeries::new(
        format!("PSY({n})"),
        out,
        valid_from,
        vec![("n", n as f64)],
    ))
}

/// Commodity channel index over typical price `M = (H + L + C) / 3`.
///
/// `CCI = (M - mean(M)) / (0.015 * d)` with `d` the mean absolute deviation
/// over the window; a window flat to within rounding reads 0.
pub fn cci(series: &PriceSeries, n: usize) -> Result<IndicatorSeries> {
    check_lookback(n)?;
    let bars = series.bars();
    let len = bars.len();
    let typical: Vec<f64> = bars.iter().map(|b| (b.high + b.low + b.close) / 3.0).collect();
    let mut out = vec![f64::NAN; len];
    let valid_from = if len >= n { n - 1 } else { len };
    let mut sum = 0.0;
    for t in 0..len {
        sum += typical[t];
        if t >= n {
            sum -= typical[t - n];
        }
        if t + 1 >= n {
            let mean = sum / n as f64;
            let window = &typical[t + 1 - n..=t];
            let mad = window.iter().map(|m| (m - mean).abs()).sum::<f64>() / n as f64;
            // Zero-deviation convention, robust to rolling-sum rounding: a
            // deviation negligible against the price level counts as zero.
            out[t] = if mad <= 1e-12 * mean.abs() {
                0.0
            } else {
                (typical[t] - mean) / (0.015 * mad)
            };
        }
    }
    Ok(IndicatorSeries::new(
        format!("CCI({n})"),
        out,
        valid_from,
        vec![("n", n as f64)],
    ))
}

/// Deviation of the close from its own `n`-bar moving average, as a fraction.
pub fn bias(values: &[f64], n: usize) -> Result<IndicatorSeries> {
    check_lookback(n)?;
    let ma = sma(values, n)?;
    let out: Vec<f64> = (0..values.len())
        .map(|t| match ma.get(t) {
            Some(m) if m != 0.0 => (values[t] - m) / m,
            _ => f64::NAN,
        })
        .collect();
    Ok(IndicatorSeries::new(
        format!("BIAS({n})"),
        out,
        ma.valid_from(),
        vec![("n", n as f64)],
    ))
}

/// Directional movement: +DI and -DI over a trailing `n`-bar window.
///
/// Per-bar movements and ranges are summed over the window and the indices
/// are `100 * sum(DM) / sum(TR)`; a zero total range gives both DIs = 0.
pub fn dmi(
    series: &PriceSeries,
    n: usize,
    convention: DmiConvention,
) -> Result<(IndicatorSeries, IndicatorSeries)> {
    check_lookback(n)?;
    let bars = series.bars();
    let len = bars.len();
    if len < n + 1 {
        let empty = |name: &str| {
            IndicatorSeries::new(
                format!("{name}({n})"),
                vec![f64::NAN; len],
                len,
                vec![("n", n as f64)],
            )
        };
        return Ok((empty("+DI"), empty("-DI")));
    }

    // Per-bar +DM, -DM, TR, defined from t = 1.
    let mut dm_plus = vec![0.0; len];
    let mut dm_minus = vec![0.0; len];
    let mut tr = vec![0.0; len];
    for t in 1..len {
        let (h, l) = (bars[t].high, bars[t].low);
        let (h_prev, l_prev, c_prev) = (bars[t - 1].high, bars[t - 1].low, bars[t - 1].close);
        dm_plus[t] = (h - h_prev).max(0.0);
        match convention {
            DmiConvention::Wilder => {
                dm_minus[t] = (l_prev - l).max(0.0);
                tr[t] = (h - l).max((h - c_prev).abs()).max((l - c_prev).abs());
            }
            DmiConvention::Literal => {
                dm_minus[t] = (l - l_prev).max(0.0);
                tr[t] = (h - l).max(h - c_prev).max(l - c_prev);
            }
        }
    }

    let mut plus = vec![f64::NAN; len];
    let mut minus = vec![f64::NAN; len];
    let (mut sum_plus, mut sum_minus, mut sum_tr) = (0.0, 0.0, 0.0);
    for t in 1..len {
        sum_plus += dm_plus[t];
        sum_minus += dm_minus[t];
        sum_tr += tr[t];
        if t > n {
            sum_plus -= dm_plus[t - n];
            sum_minus -= dm_minus[t - n];
            sum_tr -= tr[t - n];
        }
        if t >= n {
            let total_range = sum_tr.max(0.0);
            if total_range == 0.0 {
                plus[t] = 0.0;
                minus[t] = 0.0;
            } else {
                plus[t] = 100.0 * sum_plus.max(0.0) / total_range;
                minus[t] = 100.0 * sum_minus.max(0.0) / total_range;
            }
        }
    }

    let params = vec![("n", n as f64)];
    Ok((
        IndicatorSeries::new(format!("+DI({n})"), plus, n, params.clone()),
        IndicatorSeries::new(format!("-DI({n})"), minus, n, params),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::marketdata::{Bar, Date, PriceSeries};

    fn series_from_ohlc(rows: &[(f64, f64, f64, f64)]) -> PriceSeries {
        let bars = rows
            .iter()
            .enumerate()
            .map(|(i, &(o, h, l, c))| Bar {
                date: Date::parse(&format!("2020-{:02}-{:02}", i / 28 + 1, i % 28 + 1)).unwrap(),
                open: o,
                high: h,
                low: l,
                close: c,
                adj_close: c,
                volume: 100,
            })
            .collect();
        PriceSeries::new("TEST", bars).unwrap()
    }

    fn series_from_closes(closes: &[f64]) -> PriceSeries {
        let rows: Vec<(f64, f64, f64, f64)> = closes.iter().map(|&c| (c, c, c, c)).collect();
        series_from_ohlc(&rows)
    }

    #[test]
    fn sma_of_constant_is_the_constant() {
        let s = sma(&[7.0; 10], 4).unwrap();
        assert_eq!(s.valid_from(), 3);
        assert_eq!(s.get(2), None);
        for t in 3..10 {
            assert!((s.get(t).unwrap() - 7.0).abs() < 1e-12);
        }
    }

    #[test]
    fn sma_small_example() {
        let s = sma(&[1.0, 2.0, 3.0, 4.0, 5.0], 3).unwrap();
        assert_eq!(s.get(0), None);
        assert_eq!(s.get(1), None);
        assert_eq!(s.get(2), Some(2.0));
        assert_eq!(s.get(3), Some(3.0));
        assert_eq!(s.get(4), Some(4.0));
    }

    #[test]
    fn sma_shorter_than_lookback_is_all_undefined() {
        let s = sma(&[1.0, 2.0], 5).unwrap();
        assert_eq!(s.valid_from(), 2);
        assert_eq!(s.get(0), None);
        assert_eq!(s.get(1), None);
    }

    #[test]
    fn ema_constant_is_fixed_point_in_both_modes() {
        for mode in [EmaAlpha::OneOverNPlusOne, EmaAlpha::TwoOverNPlusOne] {
            let s = ema(&[3.25; 40], 5, mode).unwrap();
            for t in 0..40 {
                assert_eq!(s.get(t), Some(3.25));
            }
        }
    }

    #[test]
    fn ema_hand_recurrence() {
        // alpha = 1/(3+1) = 0.25; EMA_1 = 10 + 0.25 * (14 - 10) = 11.
        let s = ema(&[10.0, 14.0], 3, EmaAlpha::OneOverNPlusOne).unwrap();
        assert_eq!(s.get(0), Some(10.0));
        assert_eq!(s.get(1), Some(11.0));
    }

    #[test]
    fn slow_alpha_lags_conventional_on_a_ramp() {
        let ramp: Vec<f64> = (0..100).map(|i| 100.0 + i as f64).collect();
        let slow = ema(&ramp, 10, EmaAlpha::OneOverNPlusOne).unwrap();
        let fast = ema(&ramp, 10, EmaAlpha::TwoOverNPlusOne).unwrap();
        for t in 1..100 {
            assert!(slow.get(t).unwrap() < fast.get(t).unwrap());
        }
    }

    #[test]
    fn momentum_of_constant() {
        let mom = momentum_family(&[5.0; 30], 10, MomentumKind::Mom).unwrap();
        let roc = momentum_family(&[5.0; 30], 10, MomentumKind::Roc).unwrap();
        assert_eq!(mom.valid_from(), 10);
        assert_eq!(mom.get(9), None);
        for t in 10..30 {
            assert_eq!(mom.get(t), Some(100.0));
            assert_eq!(roc.get(t), Some(0.0));
        }
    }

    #[test]
    fn momentum_direct_substitution() {
        let mut values = vec![100.0; 20];
        values[15] = 110.0;
        let mom = momentum_family(&values, 10, MomentumKind::Mom).unwrap();
        let roc = momentum_family(&values, 10, MomentumKind::Roc).unwrap();
        assert!((mom.get(15).unwrap() - 110.0).abs() < 1e-12);
        assert!((roc.get(15).unwrap() - 10.0).abs() < 1e-12);
    }

    #[test]
    fn roc_is_mom_minus_100() {
        let values: Vec<f64> = (0..60).map(|i| 100.0 + (i as f64 * 0.7).sin() * 5.0).collect();
        let mom = momentum_family(&values, 13, MomentumKind::Mom).unwrap();
        let roc = momentum_family(&values, 13, MomentumKind::Roc).unwrap();
        for t in 0..60 {
            match (mom.get(t), roc.get(t)) {
                (Some(m), Some(r)) => assert!((r - (m - 100.0)).abs() < 1e-10),
                (None, None) => {}
                other => panic!("definedness mismatch at {t}: {other:?}"),
            }
        }
    }

    #[test]
    fn stochastic_k_extremes() {
        // Closes walking up: last close equals the window high -> K = 100.
        let rows: Vec<(f64, f64, f64, f64)> =
            (0..10).map(|i| {
                let c = 100.0 + i as f64;
                (c, c, c, c)
            }).collect();
        let s = series_from_ohlc(&rows);
        let (k, _) = stochastic_kd(&s, 5, 3).unwrap();
        for t in 4..10 {
            assert_eq!(k.get(t), Some(100.0));
        }

        // Walking down: last close equals the window low -> K = 0.
        let rows: Vec<(f64, f64, f64, f64)> =
            (0..10).map(|i| {
                let c = 100.0 - i as f64;
                (c, c, c, c)
            }).collect();
        let s = series_from_ohlc(&rows);
        let (k, _) = stochastic_kd(&s, 5, 3).unwrap();
        for t in 4..10 {
            assert_eq!(k.get(t), Some(0.0));
        }
    }

    #[test]
    fn stochastic_flat_window_is_50() {
        let s = series_from_closes(&[42.0; 12]);
        let (k, d) = stochastic_kd(&s, 5, 3).unwrap();
        assert_eq!(k.get(6), Some(50.0));
        assert_eq!(d.valid_from(), 6);
        assert_eq!(d.get(5), None);
        assert_eq!(d.get(6), Some(50.0));
    }

    #[test]
    fn macd_of_constant_is_zero() {
        let s = macd_line(&[9.0; 50], 12, 26, EmaAlpha::default()).unwrap();
        for t in 0..50 {
            assert_eq!(s.get(t), Some(0.0));
        }
    }

    #[test]
    fn macd_positive_on_rising_ramp() {
        let ramp: Vec<f64> = (0..120).map(|i| 100.0 + i as f64).collect();
        let s = macd_line(&ramp, 12, 26, EmaAlpha::default()).unwrap();
        for t in 30..120 {
            assert!(s.get(t).unwrap() > 0.0, "macd not positive at {t}");
        }
    }

    #[test]
    fn macd_is_fast_minus_slow() {
        let values: Vec<f64> = (0..200).map(|i| 100.0 + (i as f64 * 0.3).sin() * 8.0).collect();
        let m = macd_line(&values, 12, 26, EmaAlpha::default()).unwrap();
        let fast = ema(&values, 12, EmaAlpha::default()).unwrap();
        let slow = ema(&values, 26, EmaAlpha::default()).unwrap();
        for t in 0..200 {
            let want = fast.get(t).unwrap() - slow.get(t).unwrap();
            assert!((m.get(t).unwrap() - want).abs() <= 1e-12);
        }
    }

    #[test]
    fn macd_rejects_inverted_lookbacks() {
        assert!(macd_line(&[1.0; 10], 26, 12, EmaAlpha::default()).is_err());
        assert!(macd_line(&[1.0; 10], 12, 12, EmaAlpha::default()).is_err());
    }

    #[test]
    fn rsi_strictly_rising_is_100() {
        let values: Vec<f64> = (0..30).map(|i| 100.0 + i as f64).collect();
        let s = rsi(&values, 14).unwrap();
        assert_eq!(s.valid_from(), 14);
        for t in 14..30 {
            assert_eq!(s.get(t), Some(100.0));
        }
    }

    #[test]
    fn rsi_alternating_unit_changes_is_50() {
        let values: Vec<f64> = (0..30)
            .map(|i| if i % 2 == 0 { 100.0 } else { 101.0 })
            .collect();
        let s = rsi(&values, 14).unwrap();
        for t in 14..30 {
            assert_eq!(s.get(t), Some(50.0));
        }
    }

    #[test]
    fn rsi_constant_is_50() {
        let s = rsi(&[77.0; 30], 14).unwrap();
        for t in 14..30 {
            assert_eq!(s.get(t), Some(50.0));
        }
    }

    #[test]
    fn psy_counts_strict_up_moves() {
        let rising: Vec<f64> = (0..20).map(|i| 100.0 + i as f64).collect();
        let s = psy(&rising, 10).unwrap();
        for t in 10..20 {
            assert_eq!(s.get(t), Some(1.0));
        }

        let flat = vec![100.0; 20];
        let s = psy(&flat, 10).unwrap();
        for t in 10..20 {
            assert_eq!(s.get(t), Some(0.0));
        }

        // 5 up among 10 changes.
        let mixed: Vec<f64> = (0..21)
            .map(|i| if i % 2 == 0 { 100.0 } else { 101.0 })
            .collect();
        let s = psy(&mixed, 10).unwrap();
        assert_eq!(s.get(20), Some(0.5));
    }

    #[test]
    fn cci_flat_window_is_zero() {
        let s = series_from_closes(&[55.5; 15]);
        let c = cci(&s, 9).unwrap();
        assert_eq!(c.valid_from(), 8);
        for t in 8..15 {
            assert_eq!(c.get(t), Some(0.0));
        }
    }

    #[test]
    fn cci_unit_case() {
        // 8 bars at typical price 100 and one at 100.9: the last bar sits
        // 0.8 above the window mean of 100.1, mad = (8*0.1 + 0.8)/9, and
        // CCI = 0.8 / (0.015 * mad) = 300.
        let mut rows: Vec<(f64, f64, f64, f64)> = vec![(100.0, 100.0, 100.0, 100.0); 9];
        rows[8] = (100.9, 100.9, 100.9, 100.9);
        let s = series_from_ohlc(&rows);
        let c = cci(&s, 9).unwrap();
        let mean = (8.0 * 100.0 + 100.9) / 9.0;
        let mad = ((0..8).map(|_| (100.0f64 - mean).abs()).sum::<f64>() + (100.9 - mean).abs()) / 9.0;
        let want = (100.9 - mean) / (0.015 * mad);
        assert!((c.get(8).unwrap() - want).abs() < 1e-10);
    }

    #[test]
    fn bias_of_constant_is_zero() {
        let b = bias(&[88.0; 20], 10).unwrap();
        for t in 9..20 {
            assert!(b.get(t).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn bias_direct_substitution() {
        // 10 bars averaging 100 with the last at 110 -> BIAS = (110 - 101)/101.
        let mut values = vec![100.0; 10];
        values[9] = 110.0;
        let b = bias(&values, 10).unwrap();
        let ma = (9.0 * 100.0 + 110.0) / 10.0;
        assert!((b.get(9).unwrap() - (110.0 - ma) / ma).abs() < 1e-12);
    }

    #[test]
    fn dmi_rising_market_has_zero_minus_di() {
        let rows: Vec<(f64, f64, f64, f64)> = (0..20)
            .map(|i| {
                let base = 100.0 + i as f64;
                (base, base + 1.0, base - 1.0, base)
            })
            .collect();
        let s = series_from_ohlc(&rows);
        let (plus, minus) = dmi(&s, 14, DmiConvention::Wilder).unwrap();
        assert_eq!(plus.valid_from(), 14);
        for t in 14..20 {
            assert!(plus.get(t).unwrap() > 0.0);
            assert_eq!(minus.get(t), Some(0.0));
        }
    }

    #[test]
    fn dmi_identical_bars_read_zero() {
        let s = series_from_closes(&[64.0; 20]);
        for convention in [DmiConvention::Wilder, DmiConvention::Literal] {
            let (plus, minus) = dmi(&s, 14, convention).unwrap();
            for t in 14..20 {
                assert_eq!(plus.get(t), Some(0.0));
                assert_eq!(minus.get(t), Some(0.0));
            }
        }
    }

    #[test]
    fn dmi_conventions_differ_on_rising_lows() {
        let rows: Vec<(f64, f64, f64, f64)> = (0..20)
            .map(|i| {
                let base = 100.0 + i as f64;
                (base, base + 1.0, base - 1.0, base)
            })
            .collect();
        let s = series_from_ohlc(&rows);
        let (_, minus_wilder) = dmi(&s, 14, DmiConvention::Wilder).unwrap();
        let (_, minus_literal) = dmi(&s, 14, DmiConvention::Literal).unwrap();
        // Lows rise every bar: Wilder sees none of it, the literal form all.
        assert_eq!(minus_wilder.get(15), Some(0.0));
        assert!(minus_literal.get(15).unwrap() > 0.0);
    }

    #[test]
    fn dmi_too_short_series_is_all_undefined() {
        let s = series_from_closes(&[1.0, 2.0, 3.0]);
        let (plus, minus) = dmi(&s, 14, DmiConvention::Wilder).unwrap();
        for t in 0..3 {
            assert_eq!(plus.get(t), None);
            assert_eq!(minus.get(t), None);
        }
    }

    #[test]
    fn zero_lookback_is_rejected() {
        assert!(sma(&[1.0], 0).is_err());
        assert!(rsi(&[1.0], 0).is_err());
        assert!(psy(&[1.0], 0).is_err());
    }
}
