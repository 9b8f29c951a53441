fn main() {
    std::process::exit(xi_audit::cli::run(std::env::args_os()));
}
