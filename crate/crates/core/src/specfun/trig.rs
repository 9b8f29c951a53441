//! `sin(πx)` and `cos(πx)` with exact argument reduction, so that values near
//! the integers keep full relative accuracy.

use std::f64::consts::PI;

use num_complex::Complex64;

/// Reduces `x` to `r ∈ [-1, 1]` with `x ≡ r (mod 2)`. Exact in floating point.
#[inline]
fn reduce(x: f64) -> f64 {
    x - 2.0 * (0.5 * x).round()
}

pub fn sin_pi(x: f64) -> f64 {
    if !x.is_finite() {
        return f64::NAN;
    }
    let r = reduce(x);
    // fold into [-1/2, 1/2] via sin(π(1 - r)) = sin(πr)
    let r = if r > 0.5 {
        1.0 - r
    } else if r < -0.5 {
        -1.0 - r
    } else {
        r
    };
    (PI * r).sin()
}

pub fn cos_pi(x: f64) -> f64 {
    if !x.is_finite() {
        return f64::NAN;
    }
    let r = reduce(x).abs();
    if r > 0.5 {
        -(PI * (1.0 - r)).cos()
    } else if r == 0.5 {
        0.0
    } else {
        (PI * r).cos()
    }
}

/// `sin(πz)` for complex `z`.
pub fn sin_pi_c(z: Complex64) -> Complex64 {
    let py = PI * z.im;
    Complex64::new(sin_pi(z.re) * py.cosh(), cos_pi(z.re) * py.sinh())
}

/// A logarithm of `sin(πz)`, valid up to a multiple of `2πi`, that does not
/// overflow for large `|Im z|`.
pub fn ln_sin_pi(z: Complex64) -> Complex64 {
    if z.im.abs() <= 20.0 {
        return sin_pi_c(z).ln();
    }
    if z.im < 0.0 {
        return ln_sin_pi(z.conj()).conj();
    }
    // sin(πz) = e^{-iπz}(e^{2πiz} - 1) / (2i), and |e^{2πiz}| = e^{-2πy} is tiny.
    let decay = (-2.0 * PI * z.im).exp();
    let e2 = Complex64::new(cos_pi(2.0 * z.re), sin_pi(2.0 * z.re)) * decay;
    let tail = ((e2 - 1.0) / Complex64::new(0.0, 2.0)).ln();
    Complex64::new(PI * z.im, -PI * reduce(z.re)) + tail
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_at_integers_and_halves() {
        for n in -20..20 {
            assert_eq!(sin_pi(n as f64), 0.0);
            assert_eq!(cos_pi(n as f64 + 0.5), 0.0);
            assert_eq!(cos_pi(n as f64).abs(), 1.0);
        }
        assert_eq!(sin_pi(0.5), 1.0);
        assert_eq!(sin_pi(-1.5), 1.0);
    }

    #[test]
    fn near_an_integer_keeps_relative_accuracy() {
        let eps = 2f64.powi(-30);
        let x = -3.0 + eps;
        let expected = -(PI * eps).sin();
        assert!(((sin_pi(x) - expected) / expected).abs() < 1e-15);
    }

    #[test]
    fn log_sine_matches_direct_form_at_the_switch() {
        for &(x, y) in &[(0.3, 19.9), (-2.7, 20.1), (4.25, -25.0), (0.5, 30.0)] {
            let z = Complex64::new(x, y);
            let direct = sin_pi_c(z).ln();
            let robust = ln_sin_pi(z);
            assert!((direct.re - robust.re).abs() < 1e-12);
            let dphase = (direct.im - robust.im) / (2.0 * PI);
            assert!((dphase - dphase.round()).abs() < 1e-12);
        }
    }
}
