//! Couplings `λ = s(s − 1)` and Bessel orders of the first zeros.
//!
//! ```text
//! cargo run --release --example coupling_spectrum -- 10
//! ```

use num_complex::Complex64;
use xi_audit::coupling::{coupling_spectrum, lambda_from_s, s_from_lambda, spectrum_report};
use xi_audit::zeros::{first_zeros, ScanOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n: usize = std::env::args().nth(1).map_or(Ok(10), |a| a.parse())?;
    let zeros = first_zeros(n, &ScanOptions::default())?;
    let records = coupling_spectrum(&zeros);
    println!("{:>3} {:>22} {:>14} {:>22}", "n", "lambda", "nu", "norm integral");
    for (z, r) in zeros.iter().zip(&records) {
        let norm = r.norm_integral.as_ref().map_or_else(|e| e.to_string(), |q| format!("{:.6e}", q.value));
        println!("{:>3} {:>22.10} {:>14} {:>22}", z.index, r.lambda.re, r.nu.to_string(), norm);
    }
    let report = spectrum_report(&records);
    println!("spectrum verdict: {}", report.verdict);

    let s = Complex64::new(0.5, zeros[0].gamma);
    let (r1, r2) = s_from_lambda(lambda_from_s(s));
    println!("roots of r(r-1) = lambda_1: {r1:.12} and {r2:.12}");
    Ok(())
}
