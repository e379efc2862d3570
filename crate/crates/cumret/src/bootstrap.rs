//! Resampled backtesting: many random windows per (rule, series), with
//! deterministic per-replica random streams.
//!
//! Replica `i` draws everything from a generator keyed by
//! `(seed, rule name, i)`, so a summary is bit-identical however many workers
//! run it and in whatever order replicas are scheduled. Aggregation is a
//! sequential fold over the replica list in index order.

use crate::backtest::{
    self, buy_and_hold_cagr, run_backtest_with_signals, BacktestResult, DEFAULT_BARS_PER_YEAR,
};
use crate::boundcheck::{check_bound, DEFAULT_BOUND_TOLERANCE};
use crate::error::{Error, Result};
use crate::marketdata::PriceSeries;
use crate::returns::{self, ReturnSeries};
use crate::rng::keyed_rng;
use crate::signals::{generate_signals, Rule, RuleSpec};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

/// Domain tag for the market-benchmark replica streams.
const MARKET_DOMAIN: &str = "CMV";

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BootstrapConfig {
    /// Number of resampled windows per (rule, series).
    pub replicas: usize,
    /// Minimum window span in bars (exit - enter). Roughly one trading year
    /// by default: shorter windows than the indicator lookbacks would yield
    /// mostly no-trade replicas and bias means toward R = 1.
    pub min_window: usize,
    /// Transaction cost rate per round trip.
    pub k: f64,
    pub seed: u64,
    pub bars_per_year: usize,
}

impl Default for BootstrapConfig {
    fn default() -> Self {
        Self {
            replicas: 1000,
            min_window: 260,
            k: 0.003,
            seed: 42,
            bars_per_year: DEFAULT_BARS_PER_YEAR,
        }
    }
}

impl BootstrapConfig {
    fn validate(&self, series_len: usize) -> Result<()> {
        if self.replicas == 0 {
            return Err(Error::arg("bootstrap needs at least 1 replica"));
        }
        if self.min_window < 2 {
            return Err(Error::arg("min_window must be >= 2 bars"));
        }
        returns::check_rate(self.k)?;
        if series_len <= self.min_window {
            return Err(Error::arg(format!(
                "series of {series_len} bars cannot host windows of span >= {}",
                self.min_window
            )));
        }
        Ok(())
    }
}

/// What one resampled window produced.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReplicaStats {
    pub enter: usize,
    pub exit: usize,
    pub n_trades: usize,
    /// Mean per-trade return; 0 when the replica made no trades.
    pub r_bar: f64,
    pub sum_returns: f64,
    pub cumulative_return: f64,
    pub cagr: f64,
    /// Whether the replica's product stayed under its upper bound (it always
    /// should; this is the harness's internal audit).
    pub bound_holds: bool,
}

/// Distribution summary over all replicas of one (rule, series) pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BootstrapSummary {
    pub rule: String,
    pub symbol: String,
    /// Mean over trading replicas of the per-replica mean return
    /// (no-trade replicas have no mean return to contribute).
    pub mean_r_bar: f64,
    /// Grand mean over all trades of all replicas pooled together.
    pub pooled_r_bar: f64,
    /// Mean cumulative return over all replicas; no-trade replicas count 1.
    pub mean_cumulative_return: f64,
    /// Mean CAGR over all replicas; no-trade replicas count 0.
    pub mean_cagr: f64,
    /// 5/25/50/75/95 percentiles of the replica CAGR distribution.
    pub cagr_quantiles: [f64; 5],
    pub mean_trades: f64,
    pub replicas_with_no_trades: usize,
    pub bound_audit_failures: usize,
    #[serde(skip)]
    pub replicas: Vec<ReplicaStats>,
}

/// Buy-and-hold benchmark over the same kind of resampled windows.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MarketBenchmark {
    pub symbol: String,
    pub mean_cagr: f64,
    pub cagr_quantiles: [f64; 5],
}

/// Draw a window: enter uniform over the prefix that leaves room, then exit
/// uniform over `[enter + min_window, len - 1]`. Consumes exactly two draws.
pub fn sample_window(
    rng: &mut impl Rng,
    series_len: usize,
    min_window: usize,
) -> Result<(usize, usize)> {
    if series_len <= min_window {
        return Err(Error::arg(format!(
            "series of {series_len} bars cannot host windows of span >= {min_window}"
        )));
    }
    let enter = rng.random_range(0..=series_len - 1 - min_window);
    let exit = rng.random_range(enter + min_window..=series_len - 1);
    Ok((enter, exit))
}

/// Run the full resampling harness for one rule on one series.
pub fn run_bootstrap(
    config: &BootstrapConfig,
    series: &PriceSeries,
    spec: &RuleSpec,
) -> Result<BootstrapSummary> {
    config.validate(series.len())?;
    // Indicators and crosses depend only on the full series, so deterministic
    // rules are signalled once; windows select which events count.
    let signals = match spec.rule {
        Rule::Rnd => None,
        _ => Some(generate_signals(spec, series)?),
    };

    let replicas: Vec<ReplicaStats> = (0..config.replicas as u64)
        .into_par_iter()
        .map(|i| -> Result<ReplicaStats> {
            let mut rng = keyed_rng(config.seed, spec.rule.name(), i);
            let window = sample_window(&mut rng, series.len(), config.min_window)?;
            let result = match &signals {
                Some(s) => run_backtest_with_signals(
                    spec,
                    s,
                    series,
                    window,
                    config.k,
                    config.bars_per_year,
                )?,
                None => {
                    let s = backtest::rnd_signals_in_window(&mut rng, window.0, window.1)?;
                    run_backtest_with_signals(
                        spec,
                        &s,
                        series,
                        window,
                        config.k,
                        config.bars_per_year,
                    )?
                }
            };
            replica_stats(&result, config.k)
        })
        .collect::<Result<_>>()?;

    Ok(summarize_replicas(
        spec.rule.name(),
        &series.symbol,
        replicas,
    ))
}

fn replica_stats(result: &BacktestResult, k: f64) -> Result<ReplicaStats> {
    let rs = ReturnSeries::new(result.returns.clone())?;
    let audit = check_bound(&rs, k, DEFAULT_BOUND_TOLERANCE)?;
    Ok(ReplicaStats {
        enter: result.window.0,
        exit: result.window.1,
        n_trades: result.n,
        r_bar: result.r_bar,
        sum_returns: result.returns.iter().sum(),
        cumulative_return: result.cumulative_return,
        cagr: result.cagr,
        bound_holds: audit.holds,
    })
}

fn summarize_replicas(rule: &str, symbol: &str, replicas: Vec<ReplicaStats>) -> BootstrapSummary {
    let m = replicas.len();
    let mut no_trades = 0usize;
    let mut audit_failures = 0usize;
    let mut sum_r_bar_trading = 0.0;
    let mut pooled_sum = 0.0;
    let mut pooled_trades = 0usize;
    let mut sum_cumulative = 0.0;
    let mut sum_cagr = 0.0;
    let mut sum_trades = 0usize;
    for r in &replicas {
        if r.n_trades == 0 {
            no_trades += 1;
        } else {
            sum_r_bar_trading += r.r_bar;
        }
        if !r.bound_holds {
            audit_failures += 1;
        }
        pooled_sum += r.sum_returns;
        pooled_trades += r.n_trades;
        sum_cumulative += r.cumulative_return;
        sum_cagr += r.cagr;
        sum_trades += r.n_trades;
    }
    let trading = m - no_trades;
    let mut cagrs: Vec<f64> = replicas.iter().map(|r| r.cagr).collect();
    cagrs.sort_by(f64::total_cmp);
    BootstrapSummary {
        rule: rule.to_string(),
        symbol: symbol.to_string(),
        mean_r_bar: if trading > 0 {
            sum_r_bar_trading / trading as f64
        } else {
            0.0
        },
        pooled_r_bar: if pooled_trades > 0 {
            pooled_sum / pooled_trades as f64
        } else {
            0.0
        },
        mean_cumulative_return: sum_cumulative / m as f64,
        mean_cagr: sum_cagr / m as f64,
        cagr_quantiles: quantiles_5_25_50_75_95(&cagrs),
        mean_trades: sum_trades as f64 / m as f64,
        replicas_with_no_trades: no_trades,
        bound_audit_failures: audit_failures,
        replicas,
    }
}

/// Buy-and-hold CAGR over resampled windows, as the market row of reports.
pub fn market_benchmark(config: &BootstrapConfig, series: &PriceSeries) -> Result<MarketBenchmark> {
    config.validate(series.len())?;
    let mut cagrs: Vec<f64> = (0..config.replicas as u64)
        .into_par_iter()
        .map(|i| -> Result<f64> {
            let mut rng = keyed_rng(config.seed, MARKET_DOMAIN, i);
            let window = sample_window(&mut rng, series.len(), config.min_window)?;
            buy_and_hold_cagr(series, window, config.bars_per_year)
        })
        .collect::<Result<_>>()?;
    let mean = cagrs.iter().sum::<f64>() / cagrs.len() as f64;
    cagrs.sort_by(f64::total_cmp);
    Ok(MarketBenchmark {
        symbol: series.symbol.clone(),
        mean_cagr: mean,
        cagr_quantiles: quantiles_5_25_50_75_95(&cagrs),
    })
}

/// Percentiles by linear interpolation between order statistics.
pub fn quantiles_5_25_50_75_95(sorted: &[f64]) -> [f64; 5] {
    [0.05, 0.25, 0.50, 0.75, 0.95].map(|p| quantile(sorted, p))
}

fn quantile(sorted: &[f64], p: f64) -> f64 {
    assert!(!sorted.is_empty(), "quantile of an empty sample");
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    if lo == hi {
        sorted[lo]
    } else {
        sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
    }
}
