//! How far `log ξ` is from a straight line, and the exact exponential used as
//! a control.
//!
//! ```text
//! cargo run --release --example log_linear_fit -- 10 51
//! ```

use xi_audit::carlson::{audit_eq8, audit_eq9, audit_eq9_with};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let s_max: f64 = args.next().map_or(Ok(10.0), |a| a.parse())?;
    let samples: usize = args.next().map_or(Ok(51), |a| a.parse())?;

    let eq8 = audit_eq8(&[0.0, 1.0, 2.0])?;
    println!("log e^(pi s') fit: slope {}, intercept {}", eq8.slope, eq8.intercept);

    let control = audit_eq9_with(&|s: f64| 0.5 * (0.3 * (s + 1.0)).exp(), s_max, samples)?;
    println!("control 0.5 e^(0.3(s'+1)): C = {:.15}, A = {:.15}, residual {:.1e}", control.c, control.a, control.max_residual);

    for n in [samples, 2 * samples] {
        let fit = audit_eq9(s_max, n)?;
        println!(
            "xi on [0, {s_max}] with {n:>3} nodes: C = {:.12}, A = {:.12}, max residual {:.12}, rms {:.12}",
            fit.c, fit.a, fit.max_residual, fit.rms_residual
        );
    }
    Ok(())
}
