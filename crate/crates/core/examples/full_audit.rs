//! Every audit through the command-line entry point, with the zero cache in a
//! temporary directory. Prints the markdown summary.
//!
//! ```text
//! cargo run --release --example full_audit
//! ```

fn main() {
    let dir = std::env::temp_dir().join(format!("xi-audit-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("temp dir");
    let cache = dir.join("zeros.csv");
    let code = xi_audit::cli::run([
        "xi-audit".as_ref(),
        "report".as_ref(),
        "--cache".as_ref(),
        cache.as_os_str(),
    ]);
    let _ = std::fs::remove_dir_all(&dir);
    std::process::exit(code);
}
