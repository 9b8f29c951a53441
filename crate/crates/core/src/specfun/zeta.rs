//! Riemann zeta function by Euler–Maclaurin summation.
//!
//! For `Re s ≥ 0` the series
//!
//! ```text
//! ζ(s) = Σ_{n<N} n^{-s} + N^{1-s}/(s-1) + N^{-s}/2
//!        + Σ_{k=1}^{M} B_{2k}/(2k)! · s(s+1)…(s+2k-2) · N^{-s-2k+1} + R
//! ```
//!
//! is summed directly; the left half plane is reached through the functional
//! equation. The number of direct terms `N` grows with `|s|` so that the ratio
//! `|s + 2M| / (2πN)` driving the remainder stays at `1/4`.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use super::gamma::ln_gamma;
use super::trig::sin_pi_c;
use super::SpecFunError;

/// Truncation parameters of the Euler–Maclaurin sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EulerMaclaurin {
    /// Number of terms summed directly, `N`.
    pub terms: usize,
    /// Number of Bernoulli corrections, `M`.
    pub order: usize,
}

impl EulerMaclaurin {
    pub const DEFAULT_ORDER: usize = 20;
    /// Hard cap on `M`; the Bernoulli table is built this far.
    pub const MAX_ORDER: usize = 40;
    /// Hard cap on `N`.
    pub const MAX_TERMS: usize = 200_000;

    /// Parameters for argument `s`. `boost = 2` doubles both `N` and `M`,
    /// which is how results are cross-checked.
    pub fn for_arg(s: Complex64, boost: u32) -> Self {
        let boost = boost.max(1) as usize;
        let order = (Self::DEFAULT_ORDER * boost).min(Self::MAX_ORDER);
        let base = ((s.norm() + 2.0 * Self::DEFAULT_ORDER as f64) / (0.5 * PI)).ceil() as usize;
        let terms = (base.max(16) * boost).min(Self::MAX_TERMS);
        EulerMaclaurin { terms, order }
    }
}

/// `B_{2k} / (2k)!` for `k = 1..=MAX_ORDER`, index `k - 1`.
fn bernoulli_ratios() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let exact = [
            1.0 / 12.0,
            -1.0 / 720.0,
            1.0 / 30_240.0,
            -1.0 / 1_209_600.0,
            1.0 / 47_900_160.0,
        ];
        let two_pi = 2.0 * PI;
        (1..=EulerMaclaurin::MAX_ORDER)
            .map(|k| {
                if k <= exact.len() {
                    exact[k - 1]
                } else {
                    // B_{2k}/(2k)! = (-1)^{k+1} 2 ζ(2k) / (2π)^{2k}
                    let p = 2 * k as i32;
                    let zeta_even: f64 = (1..=64).rev().map(|n| (n as f64).powi(-p)).sum();
                    let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                    sign * 2.0 * zeta_even / two_pi.powi(p)
                }
            })
            .collect()
    })
}

/// `(s - 1)·ζ(s)` for `Re s ≥ 0`. Entire, equal to 1 at `s = 1`.
fn em_times_s_minus_one(s: Complex64, em: EulerMaclaurin) -> Complex64 {
    let n = em.terms;
    let ln_n = (n as f64).ln();
    let mut direct = Complex64::new(0.0, 0.0);
    for k in (2..n).rev() {
        direct += (-s * (k as f64).ln()).exp();
    }
    direct += 1.0;
    let n_pow = (-s * ln_n).exp(); // N^{-s}
    let nf = n as f64;
    let mut corr = n_pow * 0.5;
    let mut q = s * n_pow / nf; // s · N^{-s-1}
    let b = bernoulli_ratios();
    for k in 1..=em.order {
        corr += q * b[k - 1];
        let a = s + (2 * k - 1) as f64;
        q *= a * (a + 1.0) / (nf * nf);
    }
    (s - 1.0) * (direct + corr) + n_pow * nf
}

/// `(s - 1)·ζ(s)`, finite everywhere.
pub(crate) fn zeta_times_s_minus_one(
    s: Complex64,
    boost: u32,
) -> Result<Complex64, SpecFunError> {
    if s.re >= 0.0 {
        return Ok(em_times_s_minus_one(s, EulerMaclaurin::for_arg(s, boost)));
    }
    Ok((s - 1.0) * reflected(s, boost)?)
}

// ζ(s) = 2^s π^{s-1} sin(πs/2) Γ(1-s) ζ(1-s) for Re s < 0.
fn reflected(s: Complex64, boost: u32) -> Result<Complex64, SpecFunError> {
    let one = Complex64::new(1.0, 0.0);
    let r = one - s;
    let zeta_r = em_times_s_minus_one(r, EulerMaclaurin::for_arg(r, boost)) / (r - 1.0);
    let ln_scale = s * 2f64.ln() + (s - 1.0) * PI.ln() + ln_gamma(r)?;
    if ln_scale.re > 709.0 {
        return Err(SpecFunError::Overflow("zeta"));
    }
    Ok(ln_scale.exp() * sin_pi_c(s * 0.5) * zeta_r)
}

/// `ζ(s)` with default truncation.
pub fn zeta(s: Complex64) -> Result<Complex64, SpecFunError> {
    zeta_boosted(s, 1)
}

/// `ζ(s)` with `N` and `M` scaled by `boost` (see [`EulerMaclaurin::for_arg`]).
pub fn zeta_boosted(s: Complex64, boost: u32) -> Result<Complex64, SpecFunError> {
    if !(s.re.is_finite() && s.im.is_finite()) {
        return Err(SpecFunError::NonFinite("zeta argument"));
    }
    if s.re == 1.0 && s.im == 0.0 {
        return Err(SpecFunError::Pole {
            function: "zeta",
            at: 1.0,
        });
    }
    if s.re >= 0.0 {
        Ok(em_times_s_minus_one(s, EulerMaclaurin::for_arg(s, boost)) / (s - 1.0))
    } else {
        reflected(s, boost)
    }
}

/// `ζ(s)` with explicit truncation, `Re s ≥ 0` only.
pub fn zeta_with(s: Complex64, em: EulerMaclaurin) -> Result<Complex64, SpecFunError> {
    if s.re < 0.0 {
        return Err(SpecFunError::Domain("zeta_with needs Re s >= 0"));
    }
    if s.re == 1.0 && s.im == 0.0 {
        return Err(SpecFunError::Pole {
            function: "zeta",
            at: 1.0,
        });
    }
    Ok(em_times_s_minus_one(s, em) / (s - 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn bernoulli_table_matches_exact_rationals() {
        let b = bernoulli_ratios();
        // B_12 = -691/2730, B_14 = 7/6, B_16 = -3617/510
        let fact = |n: u32| (1..=n).map(f64::from).product::<f64>();
        let exact = [
            (6, -691.0 / 2730.0 / fact(12)),
            (7, 7.0 / 6.0 / fact(14)),
            (8, -3617.0 / 510.0 / fact(16)),
        ];
        for (k, v) in exact {
            assert!(((b[k - 1] - v) / v).abs() < 1e-14, "k={k}");
        }
        // the exact head and the ζ-based tail agree on B_10
        let two_pi = 2.0 * PI;
        let z10: f64 = (1..=64).rev().map(|n| (n as f64).powi(-10)).sum();
        let via_zeta = 2.0 * z10 / two_pi.powi(10);
        assert!(((b[4] - via_zeta) / via_zeta).abs() < 1e-14);
    }

    #[test]
    fn classical_values() {
        let z2 = zeta(c(2.0, 0.0)).unwrap();
        assert!(rel(z2, c(PI * PI / 6.0, 0.0)) < 1e-14);
        assert!((z2.re - 1.644_934_066_8).abs() < 1e-10);
        let z4 = zeta(c(4.0, 0.0)).unwrap();
        assert!(rel(z4, c(PI.powi(4) / 90.0, 0.0)) < 1e-14);
        let z0 = zeta(c(0.0, 0.0)).unwrap();
        assert!((z0.re + 0.5).abs() < 1e-15 && z0.im.abs() < 1e-15);
        let zm1 = zeta(c(-1.0, 0.0)).unwrap();
        assert!((zm1.re + 1.0 / 12.0).abs() < 1e-14);
        let zm2 = zeta(c(-2.0, 0.0)).unwrap();
        assert!(zm2.norm() < 1e-15);
    }

    #[test]
    fn complex_reference_values() {
        let cases = [
            (c(0.5, 10.0), c(1.544_895_220_296_752_8, -0.115_336_465_271_273_37)),
            (c(2.0, 3.0), c(0.798_021_985_146_275_7, -0.113_744_308_052_938_5)),
            (c(-3.5, 7.0), c(-0.413_333_071_217_888_2, 1.841_826_461_970_122_8)),
            (c(0.25, -40.0), c(0.734_405_704_167_951_8, 1.565_681_388_930_396_9)),
            (c(0.5, 100.0), c(2.692_619_885_681_324, -0.020_386_029_602_598_16)),
            (c(3.0, 99.0), c(1.097_173_084_455_727_8, 0.032_134_771_941_242_51)),
        ];
        for (s, expected) in cases {
            let z = zeta(s).unwrap();
            assert!(rel(z, expected) < 1e-12, "ζ({s}) = {z}, expected {expected}");
        }
    }

    #[test]
    fn boosted_agrees() {
        for s in [c(0.5, 14.134_725), c(0.5, 77.0), c(1.5, -3.0)] {
            let a = zeta(s).unwrap();
            let b = zeta_boosted(s, 2).unwrap();
            assert!((a - b).norm() < 1e-13 * (1.0 + b.norm()));
        }
    }

    #[test]
    fn pole() {
        assert!(matches!(zeta(c(1.0, 0.0)), Err(SpecFunError::Pole { .. })));
        let near = zeta_times_s_minus_one(c(1.0, 0.0), 1).unwrap();
        assert!((near - 1.0).norm() < 1e-15);
    }
}
