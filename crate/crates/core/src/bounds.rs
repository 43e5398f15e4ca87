//! Threshold functions and the resulting bounds on the oriented chromatic
//! number of random `d`-regular-like digraphs.
//!
//! Comparisons against the thresholds use a relative guard band of `1e-12`
//! on top of `f64` arithmetic.

use alloc::vec;

use crate::math::{exp, is_prime, ln, pow};

pub const GUARD: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BoundsError {
    #[error("argument outside the domain: {0}")]
    Domain(&'static str),
}

/// `u_k = 2 ln k / (ln k - ln((k-1)/2))`, the first-moment threshold.
/// Defined for real `k >= 2`; `u_1` is taken as its limit `0`.
pub fn u_k(k: f64) -> f64 {
    if k == 1.0 {
        return 0.0;
    }
    2.0 * ln(k) / (ln(k) - ln((k - 1.0) / 2.0))
}

/// `l_k = 2 (k-1)^3 / (k (k+1) (k-2)) ln(k-1)`, the second-moment threshold.
pub fn l_k(k: f64) -> f64 {
    2.0 * pow(k - 1.0, 3.0) / (k * (k + 1.0) * (k - 2.0)) * ln(k - 1.0)
}

const SCAN_LIMIT: u64 = 1_000_000;

/// Largest integer `k >= 2` with `u_{k-1} < d`.
pub fn k1_for_d(d: f64) -> Result<u64, BoundsError> {
    if !(d > 0.0) || !d.is_finite() {
        return Err(BoundsError::Domain("d must be positive and finite"));
    }
    let below = |j: u64| u_k(j as f64) < d * (1.0 - GUARD);
    if !below(1) {
        return Err(BoundsError::Domain("no k >= 2 with u_(k-1) < d"));
    }
    // u is increasing, so the admissible j form a prefix.
    let mut j = 1;
    while below(j + 1) {
        j += 1;
        if j > SCAN_LIMIT {
            return Err(BoundsError::Domain("d too large"));
        }
    }
    Ok(j + 1)
}

/// Prime congruent to 3 mod 4.
pub fn is_dr_order(k: u64) -> bool {
    k % 4 == 3 && is_prime(k)
}

/// Smallest prime `p >= n` with `p = 3 (mod 4)`.
pub fn next_dr_order(n: u64) -> u64 {
    let mut p = n.max(3);
    while !is_dr_order(p) {
        p += 1;
    }
    p
}

/// Smallest prime `k = 3 (mod 4)` with `d <= l_k`.
pub fn k2_for_d(d: f64) -> Result<u64, BoundsError> {
    if !(d > 0.0) || !d.is_finite() {
        return Err(BoundsError::Domain("d must be positive and finite"));
    }
    let mut k = 3;
    while l_k(k as f64) * (1.0 + GUARD) < d {
        k = next_dr_order(k + 1);
        if k > SCAN_LIMIT {
            return Err(BoundsError::Domain("d too large"));
        }
    }
    Ok(k)
}

/// `(2^(d/2), 6 e^(d/2) + 6d + 17]` as `(lo, hi)`, valid for `d > 1`.
pub fn corollary_interval(d: f64) -> Result<(f64, f64), BoundsError> {
    if !(d > 1.0) || !d.is_finite() {
        return Err(BoundsError::Domain("d must exceed 1"));
    }
    Ok((pow(2.0, d / 2.0), 6.0 * exp(d / 2.0) + 6.0 * d + 17.0))
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct BoundsReport {
    pub d: f64,
    pub k1: u64,
    pub k2: u64,
    /// Exclusive lower end: the oriented chromatic number exceeds this.
    pub interval_lo: u64,
    /// Inclusive upper end `3 k2 + 11`.
    pub interval_hi: u64,
    pub corollary_lo: f64,
    pub corollary_hi: f64,
}

pub fn bounds_report(d: f64) -> Result<BoundsReport, BoundsError> {
    let k1 = k1_for_d(d)?;
    let k2 = k2_for_d(d)?;
    let (corollary_lo, corollary_hi) = corollary_interval(d)?;
    Ok(BoundsReport { d, k1, k2, interval_lo: k1 - 1, interval_hi: 3 * k2 + 11, corollary_lo, corollary_hi })
}

/// Checks `next_dr_order(n) <= 2n` for every `n` in `2..=limit` with a
/// single sieve. Returns the first failure.
pub fn check_dr_order_doubling(limit: u64) -> Result<(), u64> {
    let top = (2 * limit + 1) as usize;
    let mut composite = vec![false; top + 1];
    let mut i = 2;
    while i * i <= top {
        if !composite[i] {
            let mut j = i * i;
            while j <= top {
                composite[j] = true;
                j += i;
            }
        }
        i += 1;
    }
    // Walk n downwards, tracking the smallest admissible prime >= n.
    let mut next = u64::MAX;
    for m in (2..=top).rev() {
        if !composite[m] && m % 4 == 3 {
            next = m as u64;
        }
        let n = m as u64;
        if n <= limit && next > 2 * n {
            return Err(n);
        }
    }
    Ok(())
}
