//! Audits the closed form of `∫₀^∞ r K_ν(r)² dr` against quadrature.
//!
//! ```text
//! cargo run --release --example norm_integral
//! ```

use xi_audit::coupling::{audit_eq5, default_eq5_orders, norm_integral_quadrature};
use xi_audit::specfun::BesselOrder;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let half = norm_integral_quadrature(BesselOrder::real(0.5))?;
    println!("nu = 1/2: quadrature {:.15}, pi/4 = {:.15}", half.value, std::f64::consts::FRAC_PI_4);

    let audit = audit_eq5(&default_eq5_orders());
    for e in &audit.entries {
        match e.ratio {
            Some(r) => println!("{:>10}: ratio {r:.15}", e.order.to_string()),
            None => println!("{:>10}: no ratio ({})", e.order.to_string(), e.verdict),
        }
    }
    let report = audit.report();
    println!("{}", report.to_json());
    Ok(())
}
