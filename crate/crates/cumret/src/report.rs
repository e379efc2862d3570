//! Assembly of bootstrap results into the rule-by-index matrices and
//! plot-ready CSV emissions.
//!
//! All emitted text is a pure function of the inputs: floats print in
//! shortest round-trip form, metadata carries only (version, seed, k, M), so
//! two runs with the same seed and data produce byte-identical files
//! regardless of worker count.

use crate::bootstrap::{BootstrapSummary, MarketBenchmark};
use crate::error::{Error, Result};
use crate::reference::{RefTable, ReferenceTables};
use serde::Serialize;

/// Row order used by the emitted matrices.
pub const TABLE_RULE_ORDER: [&str; 13] = [
    "BIAS", "CCI", "DMI", "SMA", "EMA", "KD", "MA", "MACD", "MOM", "PSY", "RND", "ROC", "RSI",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportMeta {
    pub version: String,
    pub seed: u64,
    pub k: f64,
    pub replicas: usize,
}

impl ReportMeta {
    fn comment_line(&self, table: &str) -> String {
        format!(
            "# cumret={} table={} seed={} k={} M={}\n",
            self.version, table, self.seed, self.k, self.replicas
        )
    }
}

/// The assembled rule-by-index matrices plus per-cell distribution data.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TablesReport {
    pub meta: ReportMeta,
    /// Column order; first-seen order of the input summaries.
    pub indices: Vec<String>,
    /// Row order; the subset of [`TABLE_RULE_ORDER`] present in the input.
    pub rules: Vec<String>,
    /// mean_r_bar, rules x indices.
    pub r_bar: Vec<Vec<f64>>,
    /// mean_cagr, rules x indices.
    pub cagr: Vec<Vec<f64>>,
    /// Buy-and-hold benchmark CAGR per index.
    pub cmv: Vec<f64>,
    /// 5/25/50/75/95 CAGR percentiles per (rule, index) cell.
    pub cagr_quantiles: Vec<Vec<[f64; 5]>>,
    pub bound_audit_failures: usize,
}

/// Arrange per-(rule, index) summaries and per-index benchmarks into the
/// report matrices. Every (rule, index) pair must be present exactly once.
pub fn summarize_tables(
    summaries: &[BootstrapSummary],
    benchmarks: &[MarketBenchmark],
    meta: ReportMeta,
) -> Result<TablesReport> {
    if summaries.is_empty() {
        return Err(Error::arg("summarize_tables needs at least one summary"));
    }
    let mut indices: Vec<String> = Vec::new();
    for s in summaries {
        if !indices.contains(&s.symbol) {
            indices.push(s.symbol.clone());
        }
    }
    let rules: Vec<String> = TABLE_RULE_ORDER
        .iter()
        .filter(|r| summaries.iter().any(|s| s.rule == **r))
        .map(|r| r.to_string())
        .collect();

    let cell = |rule: &str, index: &str| -> Result<&BootstrapSummary> {
        summaries
            .iter()
            .find(|s| s.rule == rule && s.symbol == index)
            .ok_or_else(|| {
                Error::arg(format!("missing bootstrap summary for ({rule}, {index})"))
            })
    };

    let mut r_bar = Vec::with_capacity(rules.len());
    let mut cagr = Vec::with_capacity(rules.len());
    let mut quantiles = Vec::with_capacity(rules.len());
    let mut audit_failures = 0;
    for rule in &rules {
        let mut r_bar_row = Vec::with_capacity(indices.len());
        let mut cagr_row = Vec::with_capacity(indices.len());
        let mut q_row = Vec::with_capacity(indices.len());
        for index in &indices {
            let s = cell(rule, index)?;
            r_bar_row.push(s.mean_r_bar);
            cagr_row.push(s.mean_cagr);
            q_row.push(s.cagr_quantiles);
            audit_failures += s.bound_audit_failures;
        }
        r_bar.push(r_bar_row);
        cagr.push(cagr_row);
        quantiles.push(q_row);
    }

    let cmv = indices
        .iter()
        .map(|index| {
            benchmarks
                .iter()
                .find(|b| &b.symbol == index)
                .map(|b| b.mean_cagr)
                .ok_or_else(|| Error::arg(format!("missing market benchmark for {index}")))
        })
        .collect::<Result<Vec<f64>>>()?;

    Ok(TablesReport {
        meta,
        indices,
        rules,
        r_bar,
        cagr,
        cmv,
        cagr_quantiles: quantiles,
        bound_audit_failures: audit_failures,
    })
}

impl TablesReport {
    /// Mean per-trade return matrix as CSV.
    pub fn render_table2_csv(&self) -> String {
        let mut out = self.meta.comment_line("r_bar");
        out.push_str(&matrix_csv(&self.indices, &self.rules, &self.r_bar, None));
        out
    }

    /// Mean CAGR matrix as CSV, with the CMV benchmark row first.
    pub fn render_table3_csv(&self) -> String {
        let mut out = self.meta.comment_line("cagr");
        out.push_str(&matrix_csv(
            &self.indices,
            &self.rules,
            &self.cagr,
            Some(("CMV", &self.cmv)),
        ));
        out
    }

    /// Per-cell CAGR percentiles in long form (box-plot data).
    pub fn render_boxdata_csv(&self) -> String {
        let mut out = self.meta.comment_line("cagr_quantiles");
        out.push_str("rule,index,q05,q25,q50,q75,q95\n");
        for (r, rule) in self.rules.iter().enumerate() {
            for (c, index) in self.indices.iter().enumerate() {
                let q = self.cagr_quantiles[r][c];
                out.push_str(&format!(
                    "{rule},{index},{},{},{},{},{}\n",
                    q[0], q[1], q[2], q[3], q[4]
                ));
            }
        }
        out
    }

    pub fn render_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Side-by-side comparison against the bundled reference tables.
    ///
    /// This is a narrative report, not a test: a bootstrap's numbers depend
    /// on its random streams and data vintage, so only the qualitative
    /// pattern (how many rules beat the buy-and-hold benchmark, how signs
    /// scatter across indices) is worth reading.
    pub fn render_comparison(&self, reference: &ReferenceTables) -> String {
        let mut out = String::new();
        out.push_str(&self.meta.comment_line("comparison"));
        for (c, index) in self.indices.iter().enumerate() {
            let beating = self
                .rules
                .iter()
                .enumerate()
                .filter(|(r, _)| self.cagr[*r][c] > self.cmv[c])
                .count();
            out.push_str(&format!(
                "{index}: {beating} of {} rules beat buy-and-hold (CMV {:.4})\n",
                self.rules.len(),
                self.cmv[c]
            ));
            let ref_cmv = reference.lookup(RefTable::Cmv, "CMV", index).ok();
            match ref_cmv {
                Some(v) => out.push_str(&format!("  reference CMV {v:.4}\n")),
                None => out.push_str("  no bundled reference for this index\n"),
            }
            for (r, rule) in self.rules.iter().enumerate() {
                let our_cagr = self.cagr[r][c];
                let our_r_bar = self.r_bar[r][c];
                let refs = (
                    reference.lookup(RefTable::RBar, rule, index),
                    reference.lookup(RefTable::Cagr, rule, index),
                );
                match refs {
                    (Ok(ref_r_bar), Ok(ref_cagr)) => out.push_str(&format!(
                        "  {rule:<5} r_bar {our_r_bar:+.4} (reference {ref_r_bar:+.4})  \
                         cagr {our_cagr:+.4} (reference {ref_cagr:+.4})\n"
                    )),
                    _ => out.push_str(&format!(
                        "  {rule:<5} r_bar {our_r_bar:+.4}  cagr {our_cagr:+.4}\n"
                    )),
                }
            }
        }
        out
    }
}

fn matrix_csv(
    indices: &[String],
    rules: &[String],
    matrix: &[Vec<f64>],
    lead_row: Option<(&str, &[f64])>,
) -> String {
    let mut out = String::from("rule");
    for index in indices {
        out.push(',');
        out.push_str(index);
    }
    out.push('\n');
    if let Some((name, cells)) = lead_row {
        out.push_str(name);
        for v in cells {
            out.push_str(&format!(",{v}"));
        }
        out.push('\n');
    }
    for (r, rule) in rules.iter().enumerate() {
        out.push_str(rule);
        for v in &matrix[r] {
            out.push_str(&format!(",{v}"));
        }
        out.push('\n');
    }
    out
}
