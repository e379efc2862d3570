//! Deterministic synthetic price series for tests, fixtures, and demos.

use crate::marketdata::{Bar, Date, PriceSeries};
use crate::rng::keyed_rng;
use rand::Rng;

/// Date for bar `i` of a synthetic series: a simple 12x28-day calendar so
/// dates are valid and strictly increasing for any length.
fn synthetic_date(i: usize) -> Date {
    let year = 1990 + i / 336;
    let month = (i % 336) / 28 + 1;
    let day = i % 28 + 1;
    Date::parse(&format!("{year:04}-{month:02}-{day:02}")).expect("generated date is valid")
}

/// Geometric random walk with uniform log-steps in (-0.02 + drift, 0.02 + drift).
pub fn random_walk_with_drift(
    symbol: &str,
    len: usize,
    seed: u64,
    drift: f64,
) -> PriceSeries {
    assert!(len >= 2, "a price series needs at least 2 bars");
    let mut rng = keyed_rng(seed, "synthetic-walk", 0);
    let mut bars = Vec::with_capacity(len);
    let mut close = 100.0f64;
    for i in 0..len {
        let open = close;
        let step: f64 = rng.random_range(-0.02..0.02) + drift;
        close = (close * step.exp()).max(1e-6);
        let hi_pad: f64 = rng.random_range(0.0..0.005);
        let lo_pad: f64 = rng.random_range(0.0..0.005);
        let high = open.max(close) * (1.0 + hi_pad);
        let low = open.min(close) * (1.0 - lo_pad);
        bars.push(Bar {
            date: synthetic_date(i),
            open,
            high,
            low,
            close,
            adj_close: close,
            volume: 1000 + rng.random_range(0..9000),
        });
    }
    PriceSeries::new(symbol, bars).expect("generated series is valid")
}

/// Driftless geometric random walk.
pub fn random_walk(symbol: &str, len: usize, seed: u64) -> PriceSeries {
    random_walk_with_drift(symbol, len, seed, 0.0)
}

/// A series whose every OHLC field is the same constant.
pub fn constant_series(symbol: &str, len: usize, price: f64) -> PriceSeries {
    assert!(len >= 2, "a price series needs at least 2 bars");
    let bars = (0..len)
        .map(|i| Bar {
            date: synthetic_date(i),
            open: price,
            high: price,
            low: price,
            close: price,
            adj_close: price,
            volume: 1000,
        })
        .collect();
    PriceSeries::new(symbol, bars).expect("generated series is valid")
}

/// A linear ramp from `start` to `end` inclusive; the endpoints are exact.
pub fn linear_ramp(symbol: &str, len: usize, start: f64, end: f64) -> PriceSeries {
    assert!(len >= 2, "a price series needs at least 2 bars");
    let span = (len - 1) as f64;
    let bars = (0..len)
        .map(|i| {
            let price = start + (end - start) * (i as f64 / span);
            Bar {
                date: synthetic_date(i),
                open: price,
                high: price,
                low: price,
                close: price,
                adj_close: price,
                volume: 1000,
            }
        })
        .collect();
    PriceSeries::new(symbol, bars).expect("generated series is valid")
}
