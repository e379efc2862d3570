//! Emit a synthetic index CSV to stdout.
//!
//! Usage: cargo run -p cumret --example make_synthetic -- SYMBOL LEN SEED [DRIFT]

use cumret::marketdata::emit_ohlcv;
use cumret::synth::random_walk_with_drift;

fn main() {
    let mut args = std::env::args().skip(1);
    let symbol = args.next().unwrap_or_else(|| "SYN".to_string());
    let len: usize = args
        .next()
        .and_then(|s| s.parse().ok())
        .unwrap_or(1200);
    let seed: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(7);
    let drift: f64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(0.0);
    let series = random_walk_with_drift(&symbol, len, seed, drift);
    print!("{}", emit_ohlcv(&series));
}
