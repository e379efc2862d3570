//! Daily OHLCV series in Yahoo-Finance CSV format: parsing, validation,
//! canonical emission, and windowing.
//!
//! Dates are opaque ordering keys (ISO `YYYY-MM-DD`, so lexicographic order
//! is chronological); there is no calendar arithmetic anywhere in the crate.

use crate::error::{Error, Result};
use serde::Serialize;
use std::fmt;

const HEADER: &str = "Date,Open,High,Low,Close,Adj Close,Volume";

/// Calendar day in `YYYY-MM-DD` form, ordered lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Date(String);

impl Date {
    /// Parse and validate a `YYYY-MM-DD` string.
    pub fn parse(s: &str) -> Result<Self> {
        let bytes = s.as_bytes();
        let well_formed = bytes.len() == 10
            && bytes[4] == b'-'
            && bytes[7] == b'-'
            && bytes
                .iter()
                .enumerate()
                .all(|(i, b)| i == 4 || i == 7 || b.is_ascii_digit());
        if !well_formed {
            return Err(Error::InvalidDate(s.to_string()));
        }
        let month: u32 = s[5..7].parse().unwrap();
        let day: u32 = s[8..10].parse().unwrap();
        if !(1..=12).contains(&month) || !(1..=31).contains(&day) {
            return Err(Error::InvalidDate(s.to_string()));
        }
        Ok(Date(s.to_string()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Date {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// One daily bar. Prices are strictly positive; internal OHLC consistency is
/// checked by [`validate`], not at construction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Bar {
    pub date: Date,
    pub open: f64,
    pub high: f64,
    pub low: f64,
    pub close: f64,
    pub adj_close: f64,
    pub volume: u64,
}

/// An ordered daily price series: strictly increasing dates, at least 2 bars.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PriceSeries {
    pub symbol: String,
    bars: Vec<Bar>,
}

impl PriceSeries {
    /// Build a series, enforcing the ordering and length invariants.
    pub fn new(symbol: impl Into<String>, bars: Vec<Bar>) -> Result<Self> {
        if bars.len() < 2 {
            return Err(Error::TooFewRows(bars.len()));
        }
        for (i, pair) in bars.windows(2).enumerate() {
            if pair[0].date >= pair[1].date {
                return Err(Error::NonMonotoneDates {
                    row: i + 1,
                    prev: pair[0].date.to_string(),
                    next: pair[1].date.to_string(),
                });
            }
        }
        Ok(Self {
            symbol: symbol.into(),
            bars,
        })
    }

    pub fn bars(&self) -> &[Bar] {
        &self.bars
    }

    pub fn len(&self) -> usize {
        self.bars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bars.is_empty()
    }

    /// Close prices in series order.
    pub fn closes(&self) -> Vec<f64> {
        self.bars.iter().map(|b| b.close).collect()
    }
}

/// A parsed file: the series plus any row-level warnings (dropped rows).
#[derive(Debug, Clone)]
pub struct Parsed {
    pub series: PriceSeries,
    pub warnings: Vec<String>,
}

/// Outcome of [`validate`]: fatal findings bar a series from downstream use,
/// warnings do not.
#[derive(Debug, Clone, Default, Serialize)]
pub struct ValidationReport {
    pub fatal_errors: Vec<String>,
    pub warnings: Vec<String>,
    pub bar_count: usize,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.fatal_errors.is_empty() && self.warnings.is_empty()
    }

    pub fn is_fatal(&self) -> bool {
        !self.fatal_errors.is_empty()
    }

    /// One JSON object per finding, one per line.
    pub fn to_json_lines(&self) -> String {
        #[derive(Serialize)]
        struct Line<'a> {
            severity: &'static str,
            message: &'a str,
        }
        let mut out = String::new();
        for msg in &self.fatal_errors {
            out.push_str(
                &serde_json::to_string(&Line {
                    severity: "fatal",
                    message: msg,
                })
                .expect("report line serializes"),
            );
            out.push('\n');
        }
        for msg in &self.warnings {
            out.push_str(
                &serde_json::to_string(&Line {
                    severity: "warning",
                    message: msg,
                })
                .expect("report line serializes"),
            );
            out.push('\n');
        }
        out
    }
}

/// Parse a Yahoo-Finance CSV document.
///
/// Rows with any unparseable numeric field (Yahoo emits `null` on missing
/// days) are dropped and reported as warnings. A wrong header, fewer than two
/// surviving rows, or out-of-order dates are fatal.
pub fn parse_ohlcv(text: &str, symbol: impl Into<String>) -> Result<Parsed> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::InvalidHeader {
            expected: HEADER,
            found: String::new(),
        })?;
    if header.trim_end_matches('\r') != HEADER {
        return Err(Error::InvalidHeader {
            expected: HEADER,
            found: header.to_string(),
        });
    }

    let mut bars = Vec::new();
    let mut warnings = Vec::new();
    for (lineno, raw) in lines {
        let line = raw.trim_end_matches('\r');
        if line.is_empty() {
            continue;
        }
        let row = lineno; // 1-based data-row number (header is line 0)
        match parse_row(line) {
            Ok(bar) => bars.push(bar),
            Err(reason) => warnings.push(format!("row {row} dropped: {reason}")),
        }
    }

    if bars.len() < 2 {
        return Err(Error::TooFewRows(bars.len()));
    }
    for (i, pair) in bars.windows(2).enumerate() {
        if pair[0].date >= pair[1].date {
            return Err(Error::NonMonotoneDates {
                row: i + 1,
                prev: pair[0].date.to_string(),
                next: pair[1].date.to_string(),
            });
        }
    }

    Ok(Parsed {
        series: PriceSeries {
            symbol: symbol.into(),
            bars,
        },
        warnings,
    })
}

fn parse_row(line: &str) -> std::result::Result<Bar, String> {
    let fields: Vec<&str> = line.split(',').collect();
    if fields.len() != 7 {
        return Err(format!("expected 7 fields, got {}", fields.len()));
    }
    let date = Date::parse(fields[0]).map_err(|e| e.to_string())?;
    let mut nums = [0.0f64; 5];
    for (slot, (name, raw)) in nums.iter_mut().zip(
        ["Open", "High", "Low", "Close", "Adj Close"]
            .iter()
            .zip(&fields[1..6]),
    ) {
        *slot = raw
            .parse::<f64>()
            .map_err(|_| format!("non-numeric {name} field `{raw}`"))?;
        if !slot.is_finite() {
            return Err(format!("non-finite {name} field `{raw}`"));
        }
    }
    let volume: u64 = fields[6]
        .parse()
        .map_err(|_| format!("non-numeric Volume field `{}`", fields[6]))?;
    Ok(Bar {
        date,
        open: nums[0],
        high: nums[1],
        low: nums[2],
        close: nums[3],
        adj_close: nums[4],
        volume,
    })
}

/// Emit a series in the same CSV layout it was parsed from.
///
/// Floats use the shortest representation that parses back to the same bit
/// pattern, so `parse(emit(s)) == s` for every valid series.
pub fn emit_ohlcv(series: &PriceSeries) -> String {
    let mut out = String::with_capacity(series.len() * 48 + HEADER.len() + 1);
    out.push_str(HEADER);
    out.push('\n');
    for bar in series.bars() {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            bar.date, bar.open, bar.high, bar.low, bar.close, bar.adj_close, bar.volume
        ));
    }
    out
}

/// Check a parsed series for price-sanity problems.
///
/// Non-positive prices are fatal; OHLC inconsistencies (high below open or
/// close, low above them) and zero volume are warnings only.
pub fn validate(series: &PriceSeries) -> ValidationReport {
    let mut report = ValidationReport {
        bar_count: series.len(),
        ..Default::default()
    };
    for (i, bar) in series.bars().iter().enumerate() {
        let d = &bar.date;
        for (name, v) in [
            ("open", bar.open),
            ("high", bar.high),
            ("low", bar.low),
            ("close", bar.close),
        ] {
            if v <= 0.0 {
                report
                    .fatal_errors
                    .push(format!("bar {i} ({d}): non-positive {name} {v}"));
            }
        }
        if bar.high < bar.open.max(bar.close) {
            report.warnings.push(format!(
                "bar {i} ({d}): high {} below max(open, close)",
                bar.high
            ));
        }
        if bar.low > bar.open.min(bar.close) {
            report.warnings.push(format!(
                "bar {i} ({d}): low {} above min(open, close)",
                bar.low
            ));
        }
        if bar.volume == 0 {
            report.warnings.push(format!("bar {i} ({d}): zero volume"));
        }
    }
    report
}

/// Sub-series covering bars `enter..=exit` of the original.
pub fn window(series: &PriceSeries, enter: usize, exit: usize) -> Result<PriceSeries> {
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
    Ok(PriceSeries {
        symbol: series.symbol.clone(),
        bars: series.bars[enter..=exit].to_vec(),
    })
}
