//! Bundled reference tables: per-rule mean return and CAGR figures for the
//! four index datasets (DJIA, FTSE, N225, SCI), plus the buy-and-hold CMV
//! row.
//!
//! These are comparison baselines for eyeballing bootstrap output, never
//! expected values asserted by tests — a bootstrap depends on its random
//! streams and data vintage, so only qualitative agreement is meaningful.
//! The fixture is integrity-checked against a pinned checksum on load.

use crate::error::{Error, Result};
use crate::rng::fnv1a64;

/// The transcription, embedded verbatim.
pub const REFERENCE_FIXTURE: &str = include_str!("../fixtures/reference_tables.csv");

/// FNV-1a of the fixture bytes, pinned when the table was transcribed.
pub const REFERENCE_CHECKSUM: u64 = 0x620752A1370B6DAF;

/// Which bundled table to read.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RefTable {
    /// Mean per-trade return per (rule, index).
    RBar,
    /// CAGR per (rule, index), including the CMV market row.
    Cagr,
    /// The buy-and-hold CAGR row alone, per index.
    Cmv,
}

impl RefTable {
    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "r_bar" | "rbar" => Ok(RefTable::RBar),
            "cagr" => Ok(RefTable::Cagr),
            "cmv" => Ok(RefTable::Cmv),
            _ => Err(Error::arg(format!(
                "unknown reference table `{s}` (expected r_bar, cagr, or cmv)"
            ))),
        }
    }
}

#[derive(Debug, Clone)]
struct Row {
    table: &'static str,
    rule: String,
    cells: Vec<f64>,
}

/// The parsed fixture.
#[derive(Debug, Clone)]
pub struct ReferenceTables {
    indices: Vec<String>,
    rows: Vec<Row>,
}

impl ReferenceTables {
    /// Parse the embedded fixture, verifying its checksum first.
    pub fn load() -> Result<Self> {
        let got = fnv1a64(REFERENCE_FIXTURE.as_bytes());
        if got != REFERENCE_CHECKSUM {
            return Err(Error::ChecksumMismatch {
                expected: REFERENCE_CHECKSUM,
                got,
            });
        }
        let mut lines = REFERENCE_FIXTURE.lines();
        let header = lines.next().expect("fixture has a header");
        let indices: Vec<String> = header.split(',').skip(2).map(str::to_string).collect();
        let mut rows = Vec::new();
        for line in lines {
            let mut fields = line.split(',');
            let table = match fields.next() {
                Some("r_bar") => "r_bar",
                Some("cagr") => "cagr",
                other => panic!("unexpected table tag {other:?} in bundled fixture"),
            };
            let rule = fields.next().expect("rule column").to_string();
            let cells: Vec<f64> = fields
                .map(|f| f.parse().expect("numeric cell in bundled fixture"))
                .collect();
            assert_eq!(cells.len(), indices.len(), "ragged fixture row");
            rows.push(Row { table, rule, cells });
        }
        Ok(Self { indices, rows })
    }

    pub fn indices(&self) -> &[String] {
        &self.indices
    }

    /// One cell of a bundled table.
    pub fn lookup(&self, table: RefTable, rule: &str, index: &str) -> Result<f64> {
        let (tag, rule_key) = match table {
            RefTable::RBar => ("r_bar", rule),
            RefTable::Cagr => ("cagr", rule),
            RefTable::Cmv => ("cagr", "CMV"),
        };
        let col = self
            .indices
            .iter()
            .position(|i| i.eq_ignore_ascii_case(index));
        let row = self
            .rows
            .iter()
            .find(|r| r.table == tag && r.rule.eq_ignore_ascii_case(rule_key));
        match (row, col) {
            (Some(row), Some(col)) => Ok(row.cells[col]),
            _ => Err(Error::UnknownReferenceKey {
                table: format!("{table:?}"),
                rule: rule.to_string(),
                index: index.to_string(),
            }),
        }
    }

    /// The CMV row in index order.
    pub fn cmv_row(&self) -> Vec<f64> {
        self.rows
            .iter()
            .find(|r| r.table == "cagr" && r.rule == "CMV")
            .expect("fixture has a CMV row")
            .cells
            .clone()
    }

    /// The exact fixture text, byte for byte.
    pub fn render(&self) -> &'static str {
        REFERENCE_FIXTURE
    }
}
