//! Special functions and quadrature used by every audit: complex `Γ`, `ζ`,
//! the completed `ξ`, `K_ν` for real and imaginary order, and
//! double-exponential integration on the half line.
//!
//! Everything here is a pure function of its arguments.

use num_complex::Complex64;
use thiserror::Error;

pub mod bessel;
pub mod gamma;
pub mod quadrature;
pub(crate) mod trig;
pub mod xi;
pub mod zeta;

pub use bessel::{bessel_k, bessel_k_with, BesselConfig, BesselOrder, OrderKind};
pub use gamma::{gamma, ln_gamma};
pub use quadrature::{
    integrate_half_line, integrate_semiinfinite, HalfLineMap, QuadError, QuadOptions,
    QuadratureResult,
};
pub use trig::sin_pi_c;
pub use xi::{xi, xi_boosted, xi_critical, xi_critical_scaled, xi_critical_scaled_boosted};
pub use zeta::{zeta, zeta_boosted, zeta_with, EulerMaclaurin};

/// Complex scalar used throughout.
pub type ComplexValue = Complex64;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum SpecFunError {
    #[error("{function} has a pole at {at}")]
    Pole { function: &'static str, at: f64 },
    #[error("{0} overflows")]
    Overflow(&'static str),
    #[error("domain error: {0}")]
    Domain(&'static str),
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("{function}: quadrature error estimate {estimate:e} exceeds tolerance")]
    Accuracy {
        function: &'static str,
        estimate: f64,
    },
    /// `Ξ(t)` came out with a non-negligible imaginary part.
    #[error("xi(1/2 + {t}i) = {re} + {im}i is not real")]
    Realness { t: f64, re: f64, im: f64 },
    #[error(transparent)]
    Quadrature(#[from] QuadError),
}
