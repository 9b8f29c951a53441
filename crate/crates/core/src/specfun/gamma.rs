//! Complex Gamma function.
//!
//! `ln Γ` is evaluated by shifting the argument up with the recurrence until
//! `|z| ≥ 15` and then summing the Stirling series; the left half plane goes
//! through the reflection formula.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::trig::ln_sin_pi;
use super::SpecFunError;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

// B_{2k} / (2k(2k-1)) for k = 1..=10
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
    43867.0 / 244_188.0,
    -174_611.0 / 125_400.0,
];

const STIRLING_MIN_ABS: f64 = 15.0;

// ln(f64::MAX)
const LN_MAX: f64 = 709.782_712_893_384;

fn is_pole(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

fn ln_gamma_right(z: Complex64) -> Complex64 {
    let mut w = z;
    // at most 15 factors of modulus below 15, so the product cannot overflow
    let mut shift = Complex64::new(1.0, 0.0);
    while w.norm() < STIRLING_MIN_ABS {
        shift *= w;
        w += 1.0;
    }
    let shift = shift.ln();
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut p = inv;
    for c in STIRLING {
        series += p * c;
        p *= inv2;
    }
    (w - 0.5) * w.ln() - w + LN_SQRT_2PI + series - shift
}

/// A branch of `ln Γ(z)`. The imaginary part is correct modulo `2π`, which is
/// all that `exp` needs.
pub fn ln_gamma(z: Complex64) -> Result<Complex64, SpecFunError> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(SpecFunError::NonFinite("ln_gamma argument"));
    }
    if is_pole(z) {
        return Err(SpecFunError::Pole {
            function: "gamma",
            at: z.re,
        });
    }
    if z.re >= 0.5 {
        Ok(ln_gamma_right(z))
    } else {
        let one = Complex64::new(1.0, 0.0);
        Ok(Complex64::new(PI.ln(), 0.0) - ln_sin_pi(z) - ln_gamma_right(one - z))
    }
}

/// `Γ(z)`, relative accuracy around `1e-13` for `|z| ≤ 100`.
pub fn gamma(z: Complex64) -> Result<Complex64, SpecFunError> {
    let lg = ln_gamma(z)?;
    if lg.re > LN_MAX {
        return Err(SpecFunError::Overflow("gamma"));
    }
    Ok(lg.exp())
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
    fn factorials() {
        let mut fact = 1.0;
        for n in 1..=30u32 {
            let g = gamma(c(n as f64, 0.0)).unwrap();
            assert!(rel(g, c(fact, 0.0)) < 1e-14, "Γ({n})");
            fact *= n as f64;
        }
        assert!(rel(gamma(c(5.0, 0.0)).unwrap(), c(24.0, 0.0)) < 1e-14);
    }

    #[test]
    fn half_integer() {
        let g = gamma(c(0.5, 0.0)).unwrap();
        assert!((g.re - PI.sqrt()).abs() < 1e-14);
        assert!(g.im.abs() < 1e-15);
    }

    #[test]
    fn imaginary_unit_modulus() {
        let g = gamma(c(0.0, 1.0)).unwrap();
        let expected = PI / PI.sinh();
        assert!((g.norm_sqr() - expected).abs() < 1e-14);
        assert!((g.norm_sqr() - 0.272_029_1).abs() < 1e-7);
    }

    #[test]
    fn reference_values() {
        // 20-digit values from an arbitrary precision evaluation.
        let cases = [
            (c(0.3, 0.7), c(0.309_686_256_743_749_155_57, -0.856_787_752_939_270_572_54)),
            (c(-4.5, 2.0), c(0.000_327_862_144_004_706_949, 0.000_043_228_892_427_786_637)),
            (c(20.0, 30.0), c(-1_453_876_687.553_481, 1_163_777_777.803_157_3)),
            (c(0.25, 50.0), c(5.625_842_259_204_914e-35, 4.694_489_115_340_814e-35)),
            (c(-30.3, 0.1), c(-4.131_993_498_760_406e-33, -2.592_190_847_919_794e-33)),
        ];
        for (z, expected) in cases {
            let g = gamma(z).unwrap();
            assert!(rel(g, expected) < 1e-12, "Γ({z}) = {g}, expected {expected}");
        }
    }

    #[test]
    fn poles_and_overflow() {
        for n in 0..5 {
            let err = gamma(c(-(n as f64), 0.0)).unwrap_err();
            assert!(matches!(err, SpecFunError::Pole { .. }));
        }
        assert!(matches!(gamma(c(200.0, 0.0)), Err(SpecFunError::Overflow(_))));
        // just off a pole is fine
        assert!(gamma(c(-3.0, 1e-9)).unwrap().norm() > 1e7);
    }
}
