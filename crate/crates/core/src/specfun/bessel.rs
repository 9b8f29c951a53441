//! Modified Bessel function of the second kind, `K_ν(x)`, for real and for
//! purely imaginary order, from the integral representation
//!
//! ```text
//! K_ν(x)  = ∫₀^∞ e^{−x cosh t} cosh(νt) dt
//! K_iμ(x) = ∫₀^∞ e^{−x cosh t} cos(μt) dt
//! ```
//!
//! Both integrands decay double-exponentially, so a plain trapezoidal rule in
//! `t` with step halving converges geometrically.
//!
//! For imaginary order the real-line integrand has size one while `K_iμ` is of
//! size `e^{−πμ/2}`; for `μ` beyond a few units all digits cancel. The
//! contour is therefore moved to `Im t = α`, where
//!
//! ```text
//! K_iμ(x) = e^{−μα} ∫₀^∞ e^{−x cos α cosh u} cos(μu − x sin α sinh u) du.
//! ```
//!
//! For `μ < x` the saddle point sits at `α = arcsin(μ/x)`. Otherwise it sits
//! on `Im t = π/2`, where the integrand stops decaying, so `α` is held a
//! distance `4/μ` below `π/2`. That keeps the cancellation to a factor of
//! about `e^4` and leaves the trapezoidal rule a strip of analyticity wide
//! enough to converge.

use std::f64::consts::FRAC_PI_2;

use super::quadrature::{integrate_half_line, HalfLineMap, QuadError, QuadOptions, QuadratureResult};
use super::SpecFunError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OrderKind {
    Real,
    Imaginary,
}

/// Order of `K`: `ν` real, or `ν = iμ`. The magnitude is stored non-negative,
/// which is harmless since `K_{−ν} = K_ν`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselOrder {
    pub kind: OrderKind,
    pub magnitude: f64,
}

impl BesselOrder {
    pub fn real(nu: f64) -> Self {
        BesselOrder {
            kind: OrderKind::Real,
            magnitude: nu.abs(),
        }
    }

    pub fn imaginary(mu: f64) -> Self {
        BesselOrder {
            kind: OrderKind::Imaginary,
            magnitude: mu.abs(),
        }
    }

    pub fn is_real(&self) -> bool {
        self.kind == OrderKind::Real
    }

    /// A positive integer real order, where `πν / sin πν` has a pole.
    pub fn is_integer_real(&self) -> bool {
        self.is_real() && self.magnitude >= 1.0 && self.magnitude.fract() == 0.0
    }

    /// `ν²`, real in both branches: `ν²` for real order, `−μ²` for `ν = iμ`.
    pub fn squared(&self) -> f64 {
        match self.kind {
            OrderKind::Real => self.magnitude * self.magnitude,
            OrderKind::Imaginary => -self.magnitude * self.magnitude,
        }
    }
}

impl std::fmt::Display for BesselOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.kind {
            OrderKind::Real => write!(f, "{}", self.magnitude),
            OrderKind::Imaginary => write!(f, "{}i", self.magnitude),
        }
    }
}

/// Quadrature settings for [`bessel_k_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselConfig {
    /// Level-to-level change allowed, relative to `∫|integrand|`.
    pub rel_tol: f64,
    /// Extra mandatory halvings of the step, for self-consistency checks.
    pub extra_levels: u32,
}

impl Default for BesselConfig {
    fn default() -> Self {
        BesselConfig {
            rel_tol: 1e-13,
            extra_levels: 0,
        }
    }
}

impl BesselConfig {
    pub fn deeper(mut self) -> Self {
        self.extra_levels += 1;
        self
    }
}

// An accepted result may carry at most this much error relative to the
// integrand's L1 norm.
const ACCURACY_LIMIT: f64 = 1e-10;

const SADDLE_MARGIN: f64 = 4.0;

/// Contour height `α` for `K_iμ(x)`.
pub(crate) fn contour_shift(mu: f64, x: f64) -> f64 {
    if mu <= SADDLE_MARGIN / FRAC_PI_2 {
        return 0.0;
    }
    let saddle = if mu < x { (mu / x).asin() } else { FRAC_PI_2 };
    saddle.min(FRAC_PI_2 - SADDLE_MARGIN / mu).max(0.0)
}

/// `K_order(x)` with the quadrature record.
pub fn bessel_k_with(
    order: BesselOrder,
    x: f64,
    cfg: &BesselConfig,
) -> Result<(f64, QuadratureResult), SpecFunError> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(SpecFunError::Domain("bessel_k needs 0 < x < inf"));
    }
    if !order.magnitude.is_finite() {
        return Err(SpecFunError::NonFinite("bessel order"));
    }
    let mut opts = QuadOptions::default().with_rel_tol(cfg.rel_tol);
    for _ in 0..cfg.extra_levels {
        opts = opts.deeper();
    }
    let nu = order.magnitude;
    let (value, quad) = match order.kind {
        OrderKind::Real => {
            // e^{νt − x cosh t}·(1 + e^{−2νt})/2, kept in the log domain.
            let f = |t: f64| {
                let e = nu * t - x * t.cosh();
                0.5 * e.exp() * (1.0 + (-2.0 * nu * t).exp())
            };
            let q = integrate_half_line(f, HalfLineMap::Even, &opts).map_err(quad_err)?;
            (q.value, q)
        }
        OrderKind::Imaginary => {
            let alpha = contour_shift(nu, x);
            let (sa, ca) = alpha.sin_cos();
            let (xs, xc) = (x * sa, x * ca);
            let f = |u: f64| {
                let m = (-xc * u.cosh()).exp();
                if m == 0.0 {
                    0.0
                } else {
                    m * (nu * u - xs * u.sinh()).cos()
                }
            };
            let q = integrate_half_line(f, HalfLineMap::Even, &opts).map_err(quad_err)?;
            let scale = (-nu * alpha).exp();
            (
                scale * q.value,
                QuadratureResult {
                    value: scale * q.value,
                    err_estimate: scale * q.err_estimate,
                    l1_norm: scale * q.l1_norm,
                    ..q
                },
            )
        }
    };
    if !value.is_finite() {
        return Err(SpecFunError::Overflow("bessel_k"));
    }
    if quad.err_estimate > ACCURACY_LIMIT * quad.l1_norm {
        return Err(SpecFunError::Accuracy {
            function: "bessel_k",
            estimate: quad.err_estimate,
        });
    }
    Ok((value, quad))
}

fn quad_err(e: QuadError) -> SpecFunError {
    match e {
        QuadError::Divergent { .. } => SpecFunError::Overflow("bessel_k"),
        other => SpecFunError::Quadrature(other),
    }
}

/// `K_order(x)` for `x > 0`.
pub fn bessel_k(order: BesselOrder, x: f64) -> Result<f64, SpecFunError> {
    bessel_k_with(order, x, &BesselConfig::default()).map(|(v, _)| v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn half_order_closed_form() {
        for x in [0.01, 0.1, 1.0, 5.0, 20.0, 50.0] {
            let k = bessel_k(BesselOrder::real(0.5), x).unwrap();
            let exact = (PI / (2.0 * x)).sqrt() * (-x).exp();
            assert!(((k - exact) / exact).abs() < 1e-12, "x={x}");
        }
        let k = bessel_k(BesselOrder::real(0.5), 1.0).unwrap();
        assert!((k - 0.461_068_5).abs() < 1e-7);
    }

    #[test]
    fn order_sign_is_irrelevant() {
        let a = bessel_k(BesselOrder::real(-0.7), 2.0).unwrap();
        let b = bessel_k(BesselOrder::real(0.7), 2.0).unwrap();
        assert_eq!(a, b);
        assert!((b - 0.126_013_271_306_610_64).abs() < 1e-14);
    }

    #[test]
    fn large_real_order_small_argument() {
        // K_30(0.01) = 4.7468807331257052166e99
        let k = bessel_k(BesselOrder::real(30.0), 0.01).unwrap();
        assert!((k / 4.746_880_733_125_705e99 - 1.0).abs() < 1e-10);
    }

    #[test]
    fn imaginary_order_reference_values() {
        let k = bessel_k(BesselOrder::imaginary(1.0), 1.0).unwrap();
        assert!((k - 0.289_428_037_025_992_13).abs() < 1e-14);
        // deep in the oscillatory region: only the contour shift gets this
        let k = bessel_k(BesselOrder::imaginary(30.0), 0.01).unwrap();
        let envelope = (PI / (30.0 * (30.0 * PI).sinh())).sqrt();
        assert!((k - (-1.020_742_403_592_117_7e-21)).abs() < 1e-11 * envelope);
        let k = bessel_k(BesselOrder::imaginary(14.134_725), 3.0).unwrap();
        assert!((k - (-5.106_987_807_570_603e-11)).abs() < 1e-12 * 5.1e-11);
    }

    #[test]
    fn doubled_depth_self_consistency() {
        let order = BesselOrder::imaginary(1.0);
        let (a, _) = bessel_k_with(order, 1.0, &BesselConfig::default()).unwrap();
        let (b, _) = bessel_k_with(order, 1.0, &BesselConfig::default().deeper()).unwrap();
        assert!((a - b).abs() < 1e-10 * b.abs());
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(
            bessel_k(BesselOrder::real(0.5), 0.0),
            Err(SpecFunError::Domain(_))
        ));
        assert!(bessel_k(BesselOrder::real(0.5), -1.0).is_err());
        assert!(bessel_k(BesselOrder::imaginary(2.0), f64::NAN).is_err());
    }

    #[test]
    fn decreasing_in_x_for_real_order() {
        for nu in [0.0, 0.3, 1.0, 2.5, 10.0] {
            let mut prev = f64::INFINITY;
            let mut x = 0.1;
            while x <= 10.0 {
                let k = bessel_k(BesselOrder::real(nu), x).unwrap();
                assert!(k < prev, "ν={nu}, x={x}");
                prev = k;
                x += 0.1;
            }
        }
    }

    #[test]
    fn integer_order_flag() {
        assert!(BesselOrder::real(1.0).is_integer_real());
        assert!(BesselOrder::real(3.0).is_integer_real());
        assert!(!BesselOrder::real(0.0).is_integer_real());
        assert!(!BesselOrder::real(1.5).is_integer_real());
        assert!(!BesselOrder::imaginary(2.0).is_integer_real());
    }
}
