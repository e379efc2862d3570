//! Shared return/cost algebra.
//!
//! The backtester and the bound auditor both route through this module, so
//! the product they compute and the product they check are one implementation.
//!
//! A round trip with return `r` and cost rate `k` contributes the growth
//! factor `(1 - k) * (1 + r)`; the cumulative return over `n` trades is the
//! product of those factors.

use crate::error::{Error, Result};

/// A series of per-trade returns, each strictly greater than -1.
///
/// The lower bound is enforced at construction: a return of -1 or below would
/// mean a non-positive price, which the data layer already rejects.
#[derive(Debug, Clone, PartialEq)]
pub struct ReturnSeries {
    values: Vec<f64>,
}

impl ReturnSeries {
    /// Wrap a list of returns, rejecting any value `<= -1` or non-finite.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        for (i, &r) in values.iter().enumerate() {
            if !r.is_finite() || r <= -1.0 {
                return Err(Error::arg(format!(
                    "return at position {i} is {r}; every return must be finite and > -1"
                )));
            }
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Recover the backing vector (handy for buffer reuse in hot loops).
    pub fn into_inner(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Compensated (Kahan) sum. Keeps long sums accurate to a few ulp instead of
/// drifting linearly with length.
pub(crate) fn kahan_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut carry = 0.0;
    for v in values {
        let y = v - carry;
        let t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    sum
}

/// Arithmetic mean of the return series.
pub fn mean_return(rs: &ReturnSeries) -> Result<f64> {
    if rs.is_empty() {
        return Err(Error::arg("mean of an empty return series"));
    }
    Ok(kahan_sum(rs.values.iter().copied()) / rs.len() as f64)
}

/// Natural log of the cumulative return: `sum of ln((1 - k)(1 + r_i))`.
///
/// Stays finite where the raw product of thousands of factors would overflow
/// or underflow; `exp` of it agrees with [`cumulative_return`] to 1e-9
/// relative for series up to ~1e4 trades.
pub fn log_cumulative(rs: &ReturnSeries, k: f64) -> Result<f64> {
    check_rate(k)?;
    let log_keep = (1.0 - k).ln();
    Ok(kahan_sum(
        rs.values.iter().map(|&r| log_keep + (1.0 + r).ln()),
    ))
}

/// Cumulative return `R(n)`: the product of `(1 - k)(1 + r_i)` over all
/// trades. The empty product is 1.
///
/// Computed as a direct product; callers that expect extreme lengths or
/// magnitudes should work with [`log_cumulative`] instead.
pub fn cumulative_return(rs: &ReturnSeries, k: f64) -> Result<f64> {
    check_rate(k)?;
    let keep = 1.0 - k;
    Ok(rs.values.iter().fold(1.0, |acc, &r| acc * keep * (1.0 + r)))
}

pub(crate) fn check_rate(k: f64) -> Result<()> {
    if !k.is_finite() || !(0.0..1.0).contains(&k) {
        return Err(Error::arg(format!(
            "transaction cost rate k = {k} must lie in [0, 1)"
        )));
    }
    Ok(())
}
