//! Genus-one product over the first zeros: prefactor fit, convergence in N
//! and the zero-coincidence discriminator.
//!
//! ```text
//! cargo run --release --example hadamard_product -- 400
//! ```

use num_complex::Complex64;
use xi_audit::hadamard::{
    audit_coincidence, audit_convergence, fit_prefactor, paired_product, xi_samples, ProductSpec, TRUNCATIONS,
};
use xi_audit::specfun::xi;
use xi_audit::zeros::{first_zeros, ScanOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n: usize = std::env::args().nth(1).map_or(Ok(800), |a| a.parse())?;
    let zeros = first_zeros(n, &ScanOptions::default())?;
    let spec = ProductSpec::from_zeros(&zeros)?;

    let fit = fit_prefactor(&xi_samples(-1.0, 2.0, 21)?, &spec, n)?;
    println!("N = {n}: B = {:.9}, D = {:.9}, max relative misfit {:.3e}", fit.b, fit.d, fit.max_relative_misfit);
    let fitted = spec.clone().with_fit(&fit);
    for s in [-0.5, 0.5, 1.5, 3.0] {
        let z = Complex64::new(s, 0.0);
        println!("  s = {s:>4}: product {:.10}, xi {:.10}", paired_product(z, &fitted, n)?.re, xi(z)?.re);
    }

    let ns: Vec<usize> = TRUNCATIONS.iter().copied().filter(|&k| k <= n).collect();
    let conv = audit_convergence(&spec, &ns)?;
    println!("misfit over N = {:?}: {:?} -> {}", ns, conv.measured, conv.verdict);

    let own: Vec<f64> = spec.ordinates.iter().take(5).copied().collect();
    println!("own ordinates: {}", audit_coincidence(&spec, &own, n, None)?.verdict);
    let shifted = [own[0] + 0.01];
    let a = audit_coincidence(&spec, &shifted, n, None)?;
    println!("gamma_1 + 0.01: {} (value {:.3e}, threshold {:.3e})", a.verdict, a.probes[0].value, a.threshold);
    Ok(())
}
