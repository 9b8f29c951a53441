//! Values of the completed xi function and a check of `ξ(s) = ξ(1 − s)`.
//!
//! ```text
//! cargo run --release --example xi_values
//! ```

use num_complex::Complex64;
use xi_audit::specfun::{gamma, xi, xi_critical, zeta};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let pi = std::f64::consts::PI;
    println!("xi(0)   = {:.15}", xi(Complex64::new(0.0, 0.0))?.re);
    println!("xi(2)   = {:.15}  (pi/6 = {:.15})", xi(Complex64::new(2.0, 0.0))?.re, pi / 6.0);
    println!("zeta(2) = {:.15}  (pi^2/6 = {:.15})", zeta(Complex64::new(2.0, 0.0))?.re, pi * pi / 6.0);
    println!("|Gamma(i)|^2 = {:.12}", gamma(Complex64::new(0.0, 1.0))?.norm_sqr());

    for s in [Complex64::new(0.3, 7.0), Complex64::new(-2.5, 14.0), Complex64::new(3.0, -20.0)] {
        let a = xi(s)?;
        let b = xi(1.0 - s)?;
        println!("s = {s:>12}: |xi(s) - xi(1-s)| / (1 + |xi(s)|) = {:.2e}", (a - b).norm() / (1.0 + a.norm()));
    }

    for t in [0.0, 10.0, 14.134725141734694, 20.0] {
        println!("Xi({t:>18}) = {:+.6e}", xi_critical(t)?);
    }
    Ok(())
}
