//! The completed zeta function `ξ(s) = ½ s(s−1) π^{−s/2} Γ(s/2) ζ(s)`.
//!
//! The factor `½ s Γ(s/2)` is folded into `Γ(s/2 + 1)` and `(s − 1)ζ(s)` is
//! computed as one entire quantity, so neither `s = 0` nor `s = 1` needs a
//! limit. The remaining poles of `Γ(s/2 + 1)` at `s = −2, −4, …` sit on the
//! trivial zeros of ζ; exactly there the symmetric value `ξ(1 − s)` is used.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::gamma::ln_gamma;
use super::zeta::zeta_times_s_minus_one;
use super::SpecFunError;

/// Allowed imaginary residue of `Ξ(t)`, relative to `1 + |Ξ(t)|`.
pub const REALNESS_TOL: f64 = 1e-10;

fn is_trivial_zero(s: Complex64) -> bool {
    s.im == 0.0 && s.re <= -2.0 && s.re == s.re.round() && (s.re as i64) % 2 == 0
}

/// `ξ(s) · e^{shift}` and the modulus of the factor multiplying `ζ(s)`. The
/// prefactor is formed in the log domain so it never under- or overflows on
/// its own.
fn xi_parts(s: Complex64, shift: f64, boost: u32) -> Result<(Complex64, f64), SpecFunError> {
    if !(s.re.is_finite() && s.im.is_finite()) {
        return Err(SpecFunError::NonFinite("xi argument"));
    }
    if is_trivial_zero(s) {
        return xi_parts(Complex64::new(1.0, 0.0) - s, shift, boost);
    }
    let ln_prefactor = -0.5 * s * PI.ln() + ln_gamma(s * 0.5 + 1.0)? + shift;
    if ln_prefactor.re > 709.0 {
        return Err(SpecFunError::Overflow("xi"));
    }
    let prefactor = ln_prefactor.exp();
    let value = prefactor * zeta_times_s_minus_one(s, boost)?;
    Ok((value, prefactor.norm() * (s - 1.0).norm()))
}

fn xi_shifted(s: Complex64, shift: f64, boost: u32) -> Result<Complex64, SpecFunError> {
    xi_parts(s, shift, boost).map(|(v, _)| v)
}

pub fn xi(s: Complex64) -> Result<Complex64, SpecFunError> {
    xi_shifted(s, 0.0, 1)
}

/// `ξ(s)` with the zeta truncation scaled by `boost`.
pub fn xi_boosted(s: Complex64, boost: u32) -> Result<Complex64, SpecFunError> {
    xi_shifted(s, 0.0, boost)
}

fn realness_checked(t: f64, v: Complex64, scale: f64) -> Result<f64, SpecFunError> {
    if v.im.abs() > REALNESS_TOL * (scale + v.re.abs()) {
        return Err(SpecFunError::Realness {
            t,
            re: v.re,
            im: v.im,
        });
    }
    Ok(v.re)
}

/// `Ξ(t) = ξ(1/2 + it)`, real for real `t`.
pub fn xi_critical(t: f64) -> Result<f64, SpecFunError> {
    realness_checked(t, xi_shifted(Complex64::new(0.5, t), 0.0, 1)?, 1.0)
}

/// `Ξ(t) · e^{π|t|/4}`. Same zeros and signs as `Ξ`, but grows only
/// polynomially, so it stays representable far up the critical line where
/// `Ξ` itself underflows.
///
/// The imaginary residue is bounded relative to the modulus of the factor in
/// front of `ζ`, the scale on which rounding error actually accrues.
pub fn xi_critical_scaled(t: f64) -> Result<f64, SpecFunError> {
    xi_critical_scaled_boosted(t, 1)
}

pub fn xi_critical_scaled_boosted(t: f64, boost: u32) -> Result<f64, SpecFunError> {
    let (v, scale) = xi_parts(Complex64::new(0.5, t), 0.25 * PI * t.abs(), boost)?;
    realness_checked(t, v, scale)
}
