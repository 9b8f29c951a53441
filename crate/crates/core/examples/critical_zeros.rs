//! Scans the critical line for zeros and refines them.
//!
//! ```text
//! cargo run --release --example critical_zeros -- 100
//! ```

use xi_audit::zeros::{count_check, scan_zeros_with, ScanOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let t_max: f64 = std::env::args().nth(1).map_or(Ok(50.0), |a| a.parse())?;
    let opts = ScanOptions::default().with_tol(1e-12);
    let out = scan_zeros_with(t_max, &opts)?;
    println!("{} zeros up to t = {t_max} (grid step {:.4}, {} evaluations)", out.zeros.len(), out.step, out.evaluations);
    for z in &out.zeros {
        println!("{:>4}  {:.12}  ± {:.1e}", z.index, z.gamma, z.abs_err);
    }
    for w in &out.warnings {
        println!("hidden pair in [{}, {}]", w.t_lo, w.t_hi);
    }
    // whole scan again with twice the zeta truncation
    let boosted = scan_zeros_with(t_max, &ScanOptions { boost: 2, ..opts })?;
    if let (Some(a), Some(b)) = (out.zeros.first(), boosted.zeros.first()) {
        println!("gamma_1 at doubled precision differs by {:.1e}", (a.gamma - b.gamma).abs());
    }
    let check = count_check(t_max, out.zeros.len());
    println!("count check: {} (smooth estimate {})", check.verdict, check.reference[0]);
    Ok(())
}
