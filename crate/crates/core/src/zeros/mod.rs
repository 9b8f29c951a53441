//! Ordinates of the zeros of `ξ` on the critical line.
//!
//! `Ξ(t)` is real, so zeros are located by sign changes on a grid and then
//! refined inside their brackets. All work is done on the scaled function
//! `Ξ(t)·e^{πt/4}`, which has the same zeros but does not underflow.

use thiserror::Error;

use crate::report::{AuditReport, Verdict};
use crate::specfun::SpecFunError;

mod cache;
mod scan;

pub use cache::{fnv1a64, CacheError, ZeroCache, CACHE_VERSION};
pub use scan::{
    first_zeros, refine_zero, refine_zero_with, scan_zeros, scan_zeros_with, ScanOptions,
    ScanOutcome, ScanWarning,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalZero {
    /// 1-based position along the critical line; 0 for a root refined on its own.
    pub index: usize,
    pub gamma: f64,
    /// Final bracket, `bracket.0 < gamma < bracket.1`.
    pub bracket: (f64, f64),
    /// Half the final bracket width.
    pub abs_err: f64,
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ZeroError {
    #[error("Xi has the same sign at both ends of [{lo}, {hi}]")]
    InvalidBracket { lo: f64, hi: f64 },
    #[error("invalid argument: {0}")]
    Domain(String),
    #[error("root refinement in [{lo}, {hi}] did not reach width {tol:e}")]
    NonConvergence { lo: f64, hi: f64, tol: f64 },
    #[error(transparent)]
    Eval(#[from] SpecFunError),
}

/// `(T/2π)·log(T/(2πe)) + 7/8`, the smooth part of the zero count up to height `T`.
pub fn smooth_count(t: f64) -> f64 {
    let u = t / (2.0 * std::f64::consts::PI);
    u * (u / std::f64::consts::E).ln() + 0.875
}

/// Height where the smooth count reaches `n + 1`, a scan range that should
/// hold at least `n` zeros.
pub fn height_for_count(n: usize) -> f64 {
    let target = n as f64 + 1.0;
    // smooth_count increases for t > 2π
    let (mut lo, mut hi) = (15.0f64, 15.0f64);
    while smooth_count(hi) < target {
        hi *= 2.0;
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if smooth_count(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

/// Mean spacing of consecutive ordinates near height `t`.
pub fn mean_gap(t: f64) -> f64 {
    2.0 * std::f64::consts::PI / (t / (2.0 * std::f64::consts::PI)).ln().max(1.0)
}

/// Compares `found` with the rounded smooth count at `t_max`; passes within one.
pub fn count_check(t_max: f64, found: usize) -> AuditReport {
    let estimate = smooth_count(t_max).round().max(0.0);
    let diff = found as f64 - estimate;
    let mut r = AuditReport::new("zero_count", "zero-count")
        .param("t_max", t_max)
        .param("found", found)
        .param("smooth_count", smooth_count(t_max));
    r.measured = vec![found as f64];
    r.reference = vec![estimate];
    r.ratio_or_residual = diff;
    r.tolerance = 1.0;
    r.verdict = if diff.abs() <= 1.0 {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn count_estimates() {
        assert_eq!(count_check(10.0, 0).verdict, Verdict::Pass);
        assert_eq!(count_check(30.0, 3).verdict, Verdict::Pass);
        assert_eq!(count_check(30.0, 1).verdict, Verdict::Fail);
        assert_eq!(count_check(50.0, 10).verdict, Verdict::Pass);
        assert_eq!(count_check(100.0, 29).verdict, Verdict::Pass);
        assert_eq!(count_check(30.0, 1).ratio_or_residual, -3.0);
    }

    #[test]
    fn gap_at_one_hundred() {
        assert!((mean_gap(100.0) - 2.27).abs() < 0.01);
    }
}
