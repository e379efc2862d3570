//! The cumulative-return upper bound and its verification machinery.
//!
//! For per-trade returns r_1..r_n and cost rate k, the cumulative return
//! `R(n) = prod (1 - k)(1 + r_i)` never exceeds `[(1 - k)(1 + r_bar)]^n`
//! (a converse-Jensen argument with f = -ln, unit weights); equality holds
//! exactly when all returns are equal. Whenever `r_bar <= k`, that bound is
//! itself dominated by `(1 - k^2)^n`, which decays to zero: trading more
//! under costs that eat the mean return grinds the account down.

use crate::error::{Error, Result};
use crate::returns::{self, kahan_sum, ReturnSeries};
use crate::rng::keyed_rng;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

/// Relative slack allowed when comparing the float product against the float
/// bound. A product of ~1e4 factors accumulates ~1e4 ulp of rounding; 1e-9 is
/// orders above that and orders below any genuine violation.
pub const DEFAULT_BOUND_TOLERANCE: f64 = 1e-9;

/// Longest series checked by direct product; beyond this (or on overflow /
/// underflow) the comparison moves to log space.
const DIRECT_PRODUCT_LIMIT: usize = 1000;

/// Outcome of one bound check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub n: usize,
    pub k: f64,
    pub r_bar: f64,
    /// Direct-product cumulative return; may overflow/underflow for extreme
    /// inputs, in which case `log_r` still carries the value.
    pub r: f64,
    /// `[(1 - k)(1 + r_bar)]^n`.
    pub bound: f64,
    pub log_r: f64,
    pub log_bound: f64,
    /// `(1 - k^2)^n`, present when `r_bar <= k` and `k` is in (0, 1).
    pub envelope: Option<f64>,
    /// `bound - r`; not meaningful when either side left f64 range.
    pub slack: f64,
    pub holds: bool,
}

/// Upper bound on the cumulative return: `[(1 - k)(1 + r_bar)]^n`.
///
/// The empty series yields 1 (empty-product limit).
pub fn theorem1_bound(rs: &ReturnSeries, k: f64) -> Result<f64> {
    returns::check_rate(k)?;
    if rs.is_empty() {
        return Ok(1.0);
    }
    let r_bar = returns::mean_return(rs)?;
    let base = mean_growth_factor(k, r_bar)?;
    Ok(base.powf(rs.len() as f64))
}

fn mean_growth_factor(k: f64, r_bar: f64) -> Result<f64> {
    let base = (1.0 - k) * (1.0 + r_bar);
    if base <= 0.0 || !base.is_finite() {
        return Err(Error::arg(format!(
            "mean growth factor (1-k)(1+r_bar) = {base} must be positive"
        )));
    }
    Ok(base)
}

/// Verify `R(n) <= bound * (1 + tolerance)` and assemble the full report.
///
/// Short series are compared by direct product; long ones, or any whose
/// product leaves f64 range, are compared in log space. The two paths agree
/// to well inside the tolerance wherever both are representable.
pub fn check_bound(rs: &ReturnSeries, k: f64, tolerance: f64) -> Result<BoundReport> {
    returns::check_rate(k)?;
    let n = rs.len();
    if n == 0 {
        return Ok(BoundReport {
            n: 0,
            k,
            r_bar: 0.0,
            r: 1.0,
            bound: 1.0,
            log_r: 0.0,
            log_bound: 0.0,
            envelope: None,
            slack: 0.0,
            holds: true,
        });
    }
    let r_bar = returns::mean_return(rs)?;
    let base = mean_growth_factor(k, r_bar)?;
    let log_bound = n as f64 * base.ln();
    let bound = base.powf(n as f64);
    let r = returns::cumulative_return(rs, k)?;
    let log_r = returns::log_cumulative(rs, k)?;

    let direct_ok = n <= DIRECT_PRODUCT_LIMIT && r.is_normal() && bound.is_normal();
    let holds = if direct_ok {
        r <= bound * (1.0 + tolerance)
    } else {
        log_r <= log_bound + tolerance.ln_1p()
    };

    let envelope = if k > 0.0 && k < 1.0 && r_bar <= k {
        Some((1.0 - k * k).powf(n as f64))
    } else {
        None
    };

    Ok(BoundReport {
        n,
        k,
        r_bar,
        r,
        bound,
        log_r,
        log_bound,
        envelope,
        slack: bound - r,
        holds,
    })
}

/// The converse-Jensen instance behind the bound, stated in log space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiInequality {
    /// `-n * ln(mean of (1 + r_i))`
    pub lhs: f64,
    /// `sum of -ln(1 + r_i)`
    pub rhs: f64,
    pub holds: bool,
}

/// Check `-n ln(mean(1 + r_i)) <= sum -ln(1 + r_i)`, the f = -ln instance of
/// the converse-Jensen inequality with unit weights. Equality iff all
/// returns are equal.
pub fn di_inequality_check(rs: &ReturnSeries) -> Result<DiInequality> {
    if rs.is_empty() {
        return Err(Error::arg("inequality check needs at least one return"));
    }
    let n = rs.len() as f64;
    let mean_growth = kahan_sum(rs.values().iter().map(|&r| 1.0 + r)) / n;
    if mean_growth <= 0.0 {
        return Err(Error::arg(format!(
            "mean growth {mean_growth} must be positive"
        )));
    }
    let lhs = -n * mean_growth.ln();
    let rhs = kahan_sum(rs.values().iter().map(|&r| -(1.0 + r).ln()));
    let holds = lhs <= rhs + 1e-12 * rhs.abs();
    Ok(DiInequality { lhs, rhs, holds })
}

/// `(1 - k^2)^n` for k in (0, 1): the decay envelope that dominates the
/// bound whenever the mean return does not exceed the cost rate.
pub fn proposition1_envelope(k: f64, n: usize) -> Result<f64> {
    if !(k > 0.0 && k < 1.0) {
        return Err(Error::arg(format!(
            "envelope needs k in (0, 1), got {k}"
        )));
    }
    Ok((1.0 - k * k).powf(n as f64))
}

/// Smallest n with `(1 - k^2)^n < threshold`, in closed form.
pub fn envelope_crossing(k: f64, threshold: f64) -> Result<usize> {
    if !(k > 0.0 && k < 1.0) {
        return Err(Error::arg(format!("crossing needs k in (0, 1), got {k}")));
    }
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(Error::arg(format!(
            "crossing needs a threshold in (0, 1), got {threshold}"
        )));
    }
    Ok((threshold.ln() / (1.0 - k * k).ln()).ceil() as usize)
}

/// One row of a decay curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayPoint {
    pub n: usize,
    pub r: f64,
    pub bound: f64,
    pub envelope: f64,
}

/// Simulate `n_max` trades whose running mean tracks `r_bar_target` from
/// below, emitting the cumulative return, its bound, and the decay envelope
/// after every trade.
///
/// Returns come in mirrored pairs `(target - e, target + e)` with the low
/// half first, so every prefix mean is <= the target; when the target is at
/// or below k the simulated R therefore stays under the envelope throughout.
pub fn decay_curve(
    k: f64,
    r_bar_target: f64,
    n_max: usize,
    rng: &mut impl Rng,
) -> Result<Vec<DecayPoint>> {
    returns::check_rate(k)?;
    if n_max == 0 {
        return Err(Error::arg("decay curve needs n_max >= 1"));
    }
    if r_bar_target <= -1.0 {
        return Err(Error::arg("r_bar_target must be > -1"));
    }
    // Noise half-width: visible spread, but returns stay well above -1.
    let spread = 0.02f64.min((1.0 + r_bar_target) / 4.0);
    let envelope_factor = 1.0 - k * k;

    let mut points = Vec::with_capacity(n_max);
    let mut pending_high: Option<f64> = None;
    let mut sum = 0.0;
    let mut log_r = 0.0;
    let mut envelope = 1.0;
    let log_keep = (1.0 - k).ln();
    for i in 0..n_max {
        let r_i = match pending_high.take() {
            Some(high) => high,
            None => {
                let e = rng.random_range(0.0..spread);
                pending_high = Some(r_bar_target + e);
                r_bar_target - e
            }
        };
        sum += r_i;
        log_r += log_keep + (1.0 + r_i).ln();
        envelope *= envelope_factor;
        let n = i + 1;
        let r_bar = sum / n as f64;
        let base = (1.0 - k) * (1.0 + r_bar);
        let bound = (n as f64 * base.ln()).exp();
        points.push(DecayPoint {
            n,
            r: log_r.exp(),
            bound,
            envelope,
        });
    }
    Ok(points)
}

/// Result of a randomized stress run over the bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StressOutcome {
    pub cases: usize,
    pub violations: usize,
    /// Largest observed `log R - log bound` (negative everywhere the bound
    /// holds with margin).
    pub max_log_excess: f64,
}

impl StressOutcome {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Hammer the bound with randomized cases: n in [1, 5000], k in [0, 0.5),
/// returns in (-0.9, 2.0). Deterministic per `(seed, case index)` and safe to
/// run on any number of workers.
pub fn stress_theorem1(cases: usize, seed: u64) -> StressOutcome {
    let (violations, max_log_excess) = (0..cases as u64)
        .into_par_iter()
        .map_init(
            || Vec::with_capacity(5000),
            |buf: &mut Vec<f64>, case| {
                let mut rng = keyed_rng(seed, "stress", case);
                let n: usize = rng.random_range(1..=5000);
                let k: f64 = rng.random_range(0.0..0.5);
                buf.clear();
                for _ in 0..n {
                    buf.push(rng.random_range(-0.9..2.0));
                }
                let rs = ReturnSeries::new(std::mem::take(buf))
                    .expect("generated returns are in range");
                let report =
                    check_bound(&rs, k, DEFAULT_BOUND_TOLERANCE).expect("valid stress case");
                *buf = rs.into_inner();
                let excess = report.log_r - report.log_bound;
                (usize::from(!report.holds), excess)
            },
        )
        .reduce(
            || (0usize, f64::NEG_INFINITY),
            |a, b| (a.0 + b.0, a.1.max(b.1)),
        );
    StressOutcome {
        cases,
        violations,
        max_log_excess,
    }
}
