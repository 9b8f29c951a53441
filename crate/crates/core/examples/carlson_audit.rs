//! Exponential-type estimates and Carlson verdicts for known functions, then
//! for the difference function built from the log-linear fit of ξ.
//!
//! ```text
//! cargo run --release --example carlson_audit
//! ```

use num_complex::Complex64;
use xi_audit::carlson::{audit_difference, carlson_verdict, estimate_type, Axis, DEFAULT_MARGIN};
use xi_audit::specfun::sin_pi_c;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for c in [0.5, 1.0, 2.0, 3.0] {
        let e = estimate_type(&|z: Complex64| (c * z).exp(), Axis::Real, 20.0)?;
        println!("type of exp({c} z) along the real axis: {:.9}", e.slope);
    }

    let sine = carlson_verdict(&sin_pi_c, 50, 20.0, DEFAULT_MARGIN)?;
    println!(
        "sin(pi z): beta = {:.6}, beta < pi - margin: {}, vanishes at integers: {} -> {}",
        sine.growth.beta,
        sine.beta_below_pi,
        sine.integers_vanish,
        sine.conclusion.as_str()
    );
    let zero = carlson_verdict(&|_z: Complex64| Complex64::new(0.0, 0.0), 50, 20.0, DEFAULT_MARGIN)?;
    println!("zero function -> {}", zero.conclusion.as_str());

    let d = audit_difference(10, 10.0, 1, DEFAULT_MARGIN)?;
    println!("difference function: a = {:.6}, b = {:.6}", d.a, d.b);
    for (k, r) in d.residuals.iter().enumerate() {
        println!("  |d({})| = {r:.6e}", k + 1);
    }
    println!(
        "alpha = {:.3} (finite: {}), beta = {:.3} -> {}",
        d.verdict.growth.alpha,
        d.verdict.alpha_finite,
        d.verdict.growth.beta,
        d.verdict.conclusion.as_str()
    );
    Ok(())
}
