//! Parameter sweeps: cumulative return as a function of the cost rate k, and
//! as a function of the number of trades n.

use crate::backtest::{pair_trades, trade_return};
use crate::bootstrap::{run_bootstrap, BootstrapConfig};
use crate::boundcheck::DEFAULT_BOUND_TOLERANCE;
use crate::error::{Error, Result};
use crate::marketdata::PriceSeries;
use crate::returns::{check_rate, kahan_sum};
use crate::rng::keyed_rng;
use crate::signals::{generate_signals, Rule, RuleSpec};
use crate::backtest::rnd_signals_in_window;
use serde::Serialize;

/// One (rule, k) cell of a cost sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KSweepRow {
    pub rule: String,
    pub k: f64,
    pub mean_cumulative_return: f64,
}

/// Bootstrap each rule at every k in the grid, with the same seed, so the
/// only thing varying across a row is the cost factor.
///
/// Signal streams do not depend on k, so for any rule whose replicas trade
/// at all the mean cumulative return is strictly decreasing in k.
pub fn sweep_k(
    specs: &[RuleSpec],
    series: &PriceSeries,
    k_grid: &[f64],
    base: &BootstrapConfig,
) -> Result<Vec<KSweepRow>> {
    if k_grid.is_empty() {
        return Err(Error::arg("sweep needs at least one k"));
    }
    for &k in k_grid {
        check_rate(k)?;
    }
    let mut rows = Vec::with_capacity(specs.len() * k_grid.len());
    for spec in specs {
        for &k in k_grid {
            let config = BootstrapConfig { k, ..*base };
            let summary = run_bootstrap(&config, series, spec)?;
            rows.push(KSweepRow {
                rule: spec.rule.name().to_string(),
                k,
                mean_cumulative_return: summary.mean_cumulative_return,
            });
        }
    }
    Ok(rows)
}

pub fn render_sweep_k_csv(rows: &[KSweepRow], meta_line: &str) -> String {
    let mut out = String::from(meta_line);
    out.push_str("rule,k,mean_R\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{}\n",
            row.rule, row.k, row.mean_cumulative_return
        ));
    }
    out
}

/// One point of a trade-count sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NSweepRow {
    pub k: f64,
    pub n: usize,
    pub r: f64,
    pub bound: f64,
}

/// Accumulate one rule's trades along the full series and emit the running
/// cumulative return and its upper bound after each trade, for every k.
///
/// Every emitted row satisfies `r <= bound * (1 + 1e-9)`.
pub fn sweep_n(
    spec: &RuleSpec,
    series: &PriceSeries,
    k_list: &[f64],
    n_max: usize,
    seed: u64,
) -> Result<Vec<NSweepRow>> {
    if k_list.is_empty() {
        return Err(Error::arg("sweep needs at least one k"));
    }
    if n_max == 0 {
        return Err(Error::arg("sweep needs n_max >= 1"));
    }
    let window = (0, series.len() - 1);
    let signals = match spec.rule {
        Rule::Rnd => {
            let mut rng = keyed_rng(seed, "sweep-n", 0);
            rnd_signals_in_window(&mut rng, window.0, window.1)?
        }
        _ => generate_signals(spec, series)?,
    };
    let trades = pair_trades(&signals, series, window)?;
    let returns: Vec<f64> = trades.iter().map(trade_return).collect();

    let mut rows = Vec::new();
    for &k in k_list {
        check_rate(k)?;
        let log_keep = (1.0 - k).ln();
        let mut log_r = 0.0;
        let mut sum = 0.0;
        for (i, &r_i) in returns.iter().take(n_max).enumerate() {
            log_r += log_keep + (1.0 + r_i).ln();
            sum += r_i;
            let n = i + 1;
            let r_bar = sum / n as f64;
            let base = (1.0 - k) * (1.0 + r_bar);
            let bound = (n as f64 * base.ln()).exp();
            let r = log_r.exp();
            if r > bound * (1.0 + DEFAULT_BOUND_TOLERANCE) {
                return Err(Error::arg(format!(
                    "internal audit failed: R {r} exceeded bound {bound} at n {n}, k {k}"
                )));
            }
            rows.push(NSweepRow { k, n, r, bound });
        }
    }
    Ok(rows)
}

pub fn render_sweep_n_csv(rows: &[NSweepRow], meta_line: &str) -> String {
    let mut out = String::from(meta_line);
    out.push_str("k,n,R,bound\n");
    for row in rows {
        out.push_str(&format!("{},{},{},{}\n", row.k, row.n, row.r, row.bound));
    }
    out
}

/// Exact restatement of the cost-factor law on a sweep: replica products at
/// k2 are the k1 products times ((1-k2)/(1-k1))^n.
pub fn rescale_mean_cumulative(
    replica_returns: &[(usize, f64)],
    k_from: f64,
    k_to: f64,
) -> f64 {
    let factor = (1.0 - k_to) / (1.0 - k_from);
    kahan_sum(
        replica_returns
            .iter()
            .map(|&(n, r)| r * factor.powi(n as i32)),
    ) / replica_returns.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth;

    fn base_config() -> BootstrapConfig {
        BootstrapConfig {
            replicas: 40,
            min_window: 60,
            seed: 42,
            ..BootstrapConfig::default()
        }
    }

    #[test]
    fn mean_r_strictly_decreases_in_k() {
        let series = synth::random_walk("SYN", 500, 5);
        let specs = [RuleSpec::table_default(Rule::Rnd), RuleSpec::table_default(Rule::Ma)];
        let grid: Vec<f64> = (1..=10).map(|i| i as f64 * 0.001).collect();
        let rows = sweep_k(&specs, &series, &grid, &base_config()).unwrap();
        assert_eq!(rows.len(), 2 * grid.len());
        for chunk in rows.chunks(grid.len()) {
            for pair in chunk.windows(2) {
                assert!(
                    pair[1].mean_cumulative_return < pair[0].mean_cumulative_return,
                    "not decreasing: {pair:?}"
                );
            }
        }
    }

    #[test]
    fn single_point_grid_reduces_to_one_bootstrap() {
        let series = synth::random_walk("SYN", 500, 5);
        let spec = RuleSpec::table_default(Rule::Ma);
        let base = base_config();
        let rows = sweep_k(std::slice::from_ref(&spec), &series, &[0.004], &base).unwrap();
        let config = BootstrapConfig { k: 0.004, ..base };
        let direct = run_bootstrap(&config, &series, &spec).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].mean_cumulative_return, direct.mean_cumulative_return);
    }

    #[test]
    fn rescaling_replica_products_matches_a_rerun() {
        let series = synth::random_walk_with_drift("SYN", 500, 5, 0.002);
        let spec = RuleSpec::table_default(Rule::Rnd);
        let k1 = 0.001;
        let k2 = 0.01;
        let config1 = BootstrapConfig { k: k1, ..base_config() };
        let config2 = BootstrapConfig { k: k2, ..base_config() };
        let run1 = run_bootstrap(&config1, &series, &spec).unwrap();
        let run2 = run_bootstrap(&config2, &series, &spec).unwrap();
        let replica_data: Vec<(usize, f64)> = run1
            .replicas
            .iter()
            .map(|r| (r.n_trades, r.cumulative_return))
            .collect();
        let rescaled = rescale_mean_cumulative(&replica_data, k1, k2);
        assert!(
            (rescaled - run2.mean_cumulative_return).abs()
                <= 1e-12 * run2.mean_cumulative_return,
            "{rescaled} vs {}",
            run2.mean_cumulative_return
        );
    }

    #[test]
    fn sweep_n_rows_respect_the_bound() {
        let series = synth::random_walk("SYN", 2000, 7);
        let spec = RuleSpec::table_default(Rule::Rnd);
        let rows = sweep_n(&spec, &series, &[0.001, 0.003, 0.005, 0.007], 100, 42).unwrap();
        assert!(!rows.is_empty());
        for row in &rows {
            assert!(row.r <= row.bound * (1.0 + DEFAULT_BOUND_TOLERANCE));
        }
    }

    #[test]
    fn sweep_n_zero_cost_zero_returns_is_flat() {
        let series = synth::constant_series("FLAT", 300, 100.0);
        let spec = RuleSpec::table_default(Rule::Rnd);
        let rows = sweep_n(&spec, &series, &[0.0], 50, 1).unwrap();
        for row in &rows {
            assert_eq!(row.r, 1.0);
            assert!((row.bound - 1.0).abs() <= 1e-12);
        }
    }
}
