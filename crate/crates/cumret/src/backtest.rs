//! Signal pairing, per-trade returns, cost-adjusted cumulative return, and
//! CAGR.
//!
//! Positions are long/flat only: a Buy opens at that bar's close, a Sell
//! closes at that bar's close, redundant events are ignored, and a position
//! still open at the window's exit bar is force-closed there.

use crate::error::{Error, Result};
use crate::marketdata::PriceSeries;
use crate::returns::{self, ReturnSeries};
use crate::signals::{
    self, random_signals, Rule, RuleSpec, SignalKind, SignalSeries, RND_MAX_GAP, RND_MIN_GAP,
};
use rand::Rng;
use serde::Serialize;

pub use crate::returns::cumulative_return;

pub const DEFAULT_BARS_PER_YEAR: usize = 252;

/// One matched round trip.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Trade {
    pub buy_index: usize,
    pub sell_index: usize,
    pub buy_price: f64,
    pub sell_price: f64,
    /// Closed by the window's exit bar rather than a Sell signal.
    pub forced: bool,
}

/// Everything a single backtest produces.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BacktestResult {
    pub rule: String,
    pub symbol: String,
    pub trades: Vec<Trade>,
    pub returns: Vec<f64>,
    /// Trade count.
    pub n: usize,
    /// Mean per-trade return; 0 when there were no trades.
    pub r_bar: f64,
    /// Product of (1 - k)(1 + r_i) over all trades; 1 when there were none.
    pub cumulative_return: f64,
    pub k: f64,
    pub cagr: f64,
    pub window: (usize, usize),
    pub bars_per_year: usize,
}

/// Walk the long/flat state machine over the events inside `[enter, exit]`.
///
/// Buys while long and Sells while flat are ignored; a Buy on the exit bar
/// cannot open (it would have nowhere to close); an open position at exit is
/// force-closed at the exit bar's close.
pub fn pair_trades(
    signals: &SignalSeries,
    series: &PriceSeries,
    window: (usize, usize),
) -> Result<Vec<Trade>> {
    let (enter, exit) = check_window(series, window)?;
    let bars = series.bars();
    let mut trades = Vec::new();
    let mut open_at: Option<usize> = None;
    for event in signals.events() {
        if event.index < enter {
            continue;
        }
        if event.index > exit {
            break;
        }
        match (event.kind, open_at) {
            (SignalKind::Buy, None) if event.index < exit => open_at = Some(event.index),
            (SignalKind::Sell, Some(buy_index)) => {
                trades.push(Trade {
                    buy_index,
                    sell_index: event.index,
                    buy_price: bars[buy_index].close,
                    sell_price: bars[event.index].close,
                    forced: false,
                });
                open_at = None;
            }
            _ => {}
        }
    }
    if let Some(buy_index) = open_at {
        trades.push(Trade {
            buy_index,
            sell_index: exit,
            buy_price: bars[buy_index].close,
            sell_price: bars[exit].close,
            forced: true,
        });
    }
    Ok(trades)
}

/// Per-trade return `(sell - buy) / buy`; always > -1 for positive prices.
pub fn trade_return(trade: &Trade) -> f64 {
    (trade.sell_price - trade.buy_price) / trade.buy_price
}

/// Compound annual growth rate: `R^(1/Y) - 1` with `Y = bars / bars_per_year`.
pub fn cagr(cumulative: f64, bars: usize, bars_per_year: usize) -> Result<f64> {
    if cumulative <= 0.0 || !cumulative.is_finite() {
        return Err(Error::arg(format!(
            "cagr needs a positive finite cumulative return, got {cumulative}"
        )));
    }
    if bars == 0 || bars_per_year == 0 {
        return Err(Error::arg("cagr needs bars >= 1 and bars_per_year >= 1"));
    }
    let years = bars as f64 / bars_per_year as f64;
    Ok(cumulative.powf(1.0 / years) - 1.0)
}

/// CAGR of simply holding the index across the window (the market benchmark).
pub fn buy_and_hold_cagr(
    series: &PriceSeries,
    window: (usize, usize),
    bars_per_year: usize,
) -> Result<f64> {
    let (enter, exit) = check_window(series, window)?;
    let bars = series.bars();
    cagr(
        bars[exit].close / bars[enter].close,
        exit - enter,
        bars_per_year,
    )
}

/// Run one rule over one window: signals, pairing, returns, R, CAGR.
///
/// The rng is consulted only by the RND rule.
pub fn run_backtest(
    spec: &RuleSpec,
    series: &PriceSeries,
    window: (usize, usize),
    k: f64,
    bars_per_year: usize,
    rng: &mut impl Rng,
) -> Result<BacktestResult> {
    let (enter, exit) = check_window(series, window)?;
    let signals = match spec.rule {
        Rule::Rnd => rnd_signals_in_window(rng, enter, exit)?,
        _ => signals::generate_signals(spec, series)?,
    };
    run_backtest_with_signals(spec, &signals, series, (enter, exit), k, bars_per_year)
}

/// As [`run_backtest`], with the signal stream already generated. Used by the
/// bootstrap harness so deterministic rules are signalled once per series.
pub fn run_backtest_with_signals(
    spec: &RuleSpec,
    signals: &SignalSeries,
    series: &PriceSeries,
    window: (usize, usize),
    k: f64,
    bars_per_year: usize,
) -> Result<BacktestResult> {
    let (enter, exit) = check_window(series, window)?;
    let trades = pair_trades(signals, series, (enter, exit))?;
    let return_values: Vec<f64> = trades.iter().map(trade_return).collect();
    let rs = ReturnSeries::new(return_values.clone())?;
    let n = rs.len();
    let r_bar = if n == 0 {
        0.0
    } else {
        returns::mean_return(&rs)?
    };
    let cumulative = returns::cumulative_return(&rs, k)?;
    let growth = cagr(cumulative, exit - enter, bars_per_year)?;
    Ok(BacktestResult {
        rule: spec.rule.name().to_string(),
        symbol: series.symbol.clone(),
        trades,
        returns: return_values,
        n,
        r_bar,
        cumulative_return: cumulative,
        k,
        cagr: growth,
        window: (enter, exit),
        bars_per_year,
    })
}

/// Random-strategy events for a window: gaps drawn from the default uniform
/// range, offset so indices are absolute.
pub fn rnd_signals_in_window(
    rng: &mut impl Rng,
    enter: usize,
    exit: usize,
) -> Result<SignalSeries> {
    let relative = random_signals(rng, exit - enter + 1, RND_MIN_GAP, RND_MAX_GAP)?;
    Ok(relative.offset(enter))
}

fn check_window(series: &PriceSeries, (enter, exit): (usize, usize)) -> Result<(usize, usize)> {
    if enter >= exit {
        return Err(Error::arg(format!(
            "window enter {enter} must be < exit {exit}"
        )));
    }
    if exit >= series.len() {
        return Err(Error::arg(format!(
            "window exit {exit} out of range (series has {} bars)",
            series.len()
        )));
    }
    Ok((enter, exit))
}
