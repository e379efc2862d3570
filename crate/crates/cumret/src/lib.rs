//! Cost-aware cumulative-return analysis for technical trading rules.
//!
//! The crate turns daily OHLCV index data into backtests of thirteen simple
//! trading rules (twelve indicator crossovers plus a random benchmark),
//! under a per-round-trip transaction cost rate `k`:
//!
//! - the cumulative return of a trade sequence is
//!   `R(n) = prod (1 - k)(1 + r_i)`;
//! - `R(n)` never exceeds `[(1 - k)(1 + r_bar)]^n`, the bound this crate
//!   verifies wholesale in randomized stress runs;
//! - whenever the mean return `r_bar` stays at or below `k`, the bound is
//!   dominated by a `(1 - k^2)^n` envelope that decays to zero — more trades
//!   mean more losses.
//!
//! Backtests run over bootstrap-resampled windows with fully keyed random
//! streams: a summary is a pure function of `(seed, config, data)`,
//! bit-identical on any number of worker threads.
//!
//! Modules follow the pipeline: [`marketdata`] parses and validates series,
//! [`indicators`] computes the kernels, [`signals`] turns them into events,
//! [`backtest`] pairs trades and prices them, [`returns`] holds the shared
//! product algebra, [`boundcheck`] verifies the inequalities, [`bootstrap`]
//! resamples windows, [`report`] and [`sweep`] shape the outputs, and
//! [`mod@reference`] bundles comparison tables.

pub mod backtest;
pub mod boundcheck;
pub mod bootstrap;
pub mod error;
pub mod indicators;
pub mod marketdata;
pub mod reference;
pub mod report;
pub mod returns;
pub mod rng;
pub mod signals;
pub mod sweep;
pub mod synth;

pub use error::{Error, Result};
