//! Command-line front end.
//!
//! Exit codes: 0 success, 1 audit failure, 2 usage, 3 cache corruption,
//! 4 numerical non-convergence. When several apply the largest wins.

use std::ffi::{OsStr, OsString};
use std::fmt::Write as _;
use std::fs;
use std::io::{IsTerminal, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use thiserror::Error;

use crate::carlson::{self, CarlsonError, EQ9_SAMPLES, EQ9_S_MAX};
use crate::coupling;
use crate::fit::linspace;
use crate::hadamard::HadamardError;
use crate::report::{reports_to_csv, reports_to_json, AuditReport, Verdict};
use crate::specfun::{xi, xi_critical_scaled, SpecFunError};
use crate::zeros::{ZeroCache, ZeroError};

pub mod audits;
pub mod config;
pub mod plot;

use config::{parse_config, Overrides, RunConfig};
use plot::{Plot, Series};

pub const EXIT_OK: i32 = 0;
pub const EXIT_AUDIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CACHE: i32 = 3;
pub const EXIT_NONCONVERGENCE: i32 = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cache: {0}")]
    Cache(String),
    #[error("non-convergence: {0}")]
    NonConvergence(String),
    /// Reading inputs or writing outputs failed.
    #[error("i/o: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => EXIT_USAGE,
            CliError::Cache(_) => EXIT_CACHE,
            CliError::NonConvergence(_) => EXIT_NONCONVERGENCE,
        }
    }
}

impl From<ZeroError> for CliError {
    fn from(e: ZeroError) -> Self {
        match e {
            ZeroError::Domain(m) => CliError::Usage(m),
            other => CliError::NonConvergence(other.to_string()),
        }
    }
}

impl From<SpecFunError> for CliError {
    fn from(e: SpecFunError) -> Self {
        CliError::NonConvergence(e.to_string())
    }
}

impl From<HadamardError> for CliError {
    fn from(e: HadamardError) -> Self {
        CliError::NonConvergence(e.to_string())
    }
}

impl From<CarlsonError> for CliError {
    fn from(e: CarlsonError) -> Self {
        CliError::NonConvergence(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        <Format as ValueEnum>::from_str(s, false)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    Eq5,
    Eq9,
    Hadamard,
    Coincidence,
    Carlson,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PlotTarget {
    XiCritical,
    Eq5Ratio,
    ProductConvergence,
    Residuals,
}

#[derive(Debug, Parser)]
#[command(name = "xi-audit", version, about = "Numerical audits of a Riemann-hypothesis argument via xi zeros")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Largest ordinate scanned for zeros
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub t_max: Option<f64>,
    /// Bracket width of refined zeros
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub tol: Option<f64>,
    /// Product truncation N
    #[arg(long, global = true)]
    pub n_zeros: Option<usize>,
    /// Shift applied to the first coincidence probe
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub perturb: Option<f64>,
    /// Integer sampling scale of the Carlson audit
    #[arg(long, global = true)]
    pub m: Option<u32>,
    /// Worker threads (default: all cores)
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Output file (default: stdout)
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Zero cache file (default: zeros.csv)
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,
    /// Flat `key = value` file; flags override it
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

impl GlobalArgs {
    fn overrides(&self) -> Overrides {
        Overrides {
            t_max: self.t_max,
            tol: self.tol,
            n_zeros: self.n_zeros,
            perturb: self.perturb,
            m: self.m,
            threads: self.threads,
            format: self.format,
            out: self.out.clone(),
            cache: self.cache.clone(),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Scan, refine and cache zero ordinates up to --t-max
    Zeros,
    /// Run one audit or all of them
    Audit {
        #[arg(value_enum)]
        which: Which,
    },
    /// Write an SVG line plot
    Plot {
        #[arg(value_enum)]
        target: PlotTarget,
        /// Ordinate range `lo:hi` for xi-critical (default 0:t-max)
        #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
        t: Option<(f64, f64)>,
    },
    /// Markdown summary of report files, or of a fresh `audit all`
    Report { inputs: Vec<PathBuf> },
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(':').ok_or("expected lo:hi")?;
    let lo: f64 = a.trim().parse().map_err(|_| format!("bad lower bound {a:?}"))?;
    let hi: f64 = b.trim().parse().map_err(|_| format!("bad upper bound {b:?}"))?;
    Ok((lo, hi))
}

/// Colour only for a terminal, and never when `NO_COLOR` is set to a
/// non-empty value.
pub fn color_enabled(no_color: Option<&OsStr>, is_terminal: bool) -> bool {
    is_terminal && no_color.is_none_or(|v| v.is_empty())
}

fn paint(color: bool, v: Verdict) -> String {
    if !color {
        return v.as_str().to_string();
    }
    let code = match v {
        Verdict::Pass | Verdict::ConsistentUpToConstant | Verdict::Coincide => "32",
        Verdict::Fail | Verdict::Distinct => "31",
        Verdict::Inconclusive => "33",
        Verdict::NotApplicable => "36",
    };
    format!("\x1b[{code}m{}\x1b[0m", v.as_str())
}

fn print_summary(reports: &[AuditReport]) {
    let color = color_enabled(std::env::var_os("NO_COLOR").as_deref(), std::io::stderr().is_terminal());
    let mut err = std::io::stderr().lock();
    for r in reports {
        let flag = if r.verdict == Verdict::Inconclusive { "  (flagged)" } else { "" };
        let _ = writeln!(err, "{:<26} {}{flag}", r.name, paint(color, r.verdict));
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Io(e.to_string()))
        }
    }
}

fn verdict_exit(reports: &[AuditReport]) -> i32 {
    if reports.iter().any(|r| r.verdict.is_failure()) {
        EXIT_AUDIT_FAILURE
    } else {
        EXIT_OK
    }
}

fn render_reports(reports: &[AuditReport], format: Format) -> String {
    match format {
        Format::Json => reports_to_json(reports) + "\n",
        Format::Csv => reports_to_csv(reports),
    }
}

/// Markdown table of reports with a verdict tally.
pub fn markdown_summary(reports: &[AuditReport]) -> String {
    let mut o = String::from("| name | verdict | ratio_or_residual | tolerance | provenance |\n|---|---|---|---|---|\n");
    for r in reports {
        let _ = writeln!(
            o,
            "| {} | {} | {:e} | {:e} | {} |",
            r.name, r.verdict, r.ratio_or_residual, r.tolerance, r.provenance
        );
    }
    let tally: Vec<String> = Verdict::ALL
        .iter()
        .map(|v| (v, reports.iter().filter(|r| r.verdict == *v).count()))
        .filter(|(_, n)| *n > 0)
        .map(|(v, n)| format!("{n} {v}"))
        .collect();
    let _ = writeln!(o, "\n{} reports: {}", reports.len(), tally.join(", "));
    o
}

/// Reads one report object or an array of them.
pub fn read_reports(path: &Path) -> Result<Vec<AuditReport>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let bad = |e: serde_json::Error| CliError::Usage(format!("{}: not an audit report: {e}", path.display()));
    let value: serde_json::Value = serde_json::from_str(&text).map_err(bad)?;
    if value.is_array() {
        serde_json::from_value(value).map_err(bad)
    } else {
        serde_json::from_value(value).map(|r| vec![r]).map_err(bad)
    }
}

fn cmd_zeros(cfg: &RunConfig) -> Result<i32, CliError> {
    let zeros = audits::zeros_for(cfg, cfg.t_max, 0)?;
    let zeros: Vec<_> = zeros.into_iter().filter(|z| z.gamma <= cfg.t_max).collect();
    let text = match cfg.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut o = String::from("n,gamma,abs_err\n");
            for z in &zeros {
                o.push_str(&ZeroCache::row(z));
                o.push('\n');
            }
            o
        }
        Format::Json => {
            let rows: Vec<serde_json::Value> = zeros
                .iter()
                .map(|z| serde_json::json!({"n": z.index, "gamma": z.gamma, "abs_err": z.abs_err}))
                .collect();
            serde_json::to_string_pretty(&rows).expect("value serializes") + "\n"
        }
    };
    emit(cfg.out.as_deref(), &text)?;
    Ok(EXIT_OK)
}

fn cmd_audit(which: Which, cfg: &RunConfig) -> Result<i32, CliError> {
    let outcome = audits::run_audit(which, cfg)?;
    emit(cfg.out.as_deref(), &render_reports(&outcome.reports, cfg.format.unwrap_or(Format::Json)))?;
    print_summary(&outcome.reports);
    if !outcome.nonconvergence.is_empty() {
        return Err(CliError::NonConvergence(outcome.nonconvergence.join("; ")));
    }
    Ok(verdict_exit(&outcome.reports))
}

fn xi_plot(lo: f64, hi: f64) -> Result<Plot, CliError> {
    let points = linspace(lo, hi, 801)
        .into_iter()
        .map(|t| Ok((t, xi_critical_scaled(t)?)))
        .collect::<Result<Vec<_>, SpecFunError>>()?;
    Ok(Plot {
        title: format!("Xi(t)·exp(pi t/4) on [{lo}, {hi}]"),
        x_label: "t".into(),
        y_label: "scaled Xi(t)".into(),
        series: vec![Series {
            label: "Xi(t)·exp(pi t/4)".into(),
            points,
            markers: false,
        }],
        zero_line: true,
    })
}

fn eq5_plot() -> Plot {
    let audit = coupling::audit_eq5(&coupling::default_eq5_orders());
    let mut real = Vec::new();
    let mut imag = Vec::new();
    for e in &audit.entries {
        if let Some(ratio) = e.ratio {
            if e.order.is_real() {
                real.push((e.order.magnitude, ratio));
            } else {
                imag.push((e.order.magnitude, ratio));
            }
        }
    }
    Plot {
        title: "Quadrature over the 1/8 closed form".into(),
        x_label: "|nu|".into(),
        y_label: "ratio".into(),
        series: vec![
            Series {
                label: "real nu".into(),
                points: real,
                markers: true,
            },
            Series {
                label: "nu = i mu".into(),
                points: imag,
                markers: true,
            },
        ],
        zero_line: false,
    }
}

fn convergence_plot(cfg: &RunConfig) -> Result<Plot, CliError> {
    let outcome = audits::run_audit(Which::Hadamard, cfg)?;
    let report = &outcome.reports[0];
    let ns: Vec<f64> = report.params["truncations"]
        .split(';')
        .map(|n| n.parse().expect("integer truncation"))
        .collect();
    Ok(Plot {
        title: "Hadamard product misfit against xi on [-1, 2]".into(),
        x_label: "N".into(),
        y_label: "max relative misfit".into(),
        series: vec![Series {
            label: "fitted prefactor per N".into(),
            points: ns.into_iter().zip(report.measured.iter().copied()).collect(),
            markers: true,
        }],
        zero_line: false,
    })
}

fn residual_plot() -> Result<Plot, CliError> {
    let fit = carlson::audit_eq9(EQ9_S_MAX, EQ9_SAMPLES)?;
    let points = linspace(0.0, EQ9_S_MAX, 201)
        .into_iter()
        .map(|s| {
            let v = xi(Complex64::new(s + 1.0, 0.0))?.re;
            Ok((s, v.ln() - fit.c.ln() - fit.a * (s + 1.0)))
        })
        .collect::<Result<Vec<_>, SpecFunError>>()?;
    Ok(Plot {
        title: format!("log xi(s'+1) minus log C - A(s'+1), C = {:.6}, A = {:.6}", fit.c, fit.a),
        x_label: "s'".into(),
        y_label: "log residual".into(),
        series: vec![Series {
            label: "residual".into(),
            points,
            markers: false,
        }],
        zero_line: true,
    })
}

fn cmd_plot(target: PlotTarget, range: Option<(f64, f64)>, cfg: &RunConfig) -> Result<i32, CliError> {
    let plot = match target {
        PlotTarget::XiCritical => {
            let (lo, hi) = range.unwrap_or((0.0, cfg.t_max));
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(CliError::Usage(format!("empty plot range {lo}:{hi}")));
            }
            xi_plot(lo, hi)?
        }
        PlotTarget::Eq5Ratio => eq5_plot(),
        PlotTarget::ProductConvergence => convergence_plot(cfg)?,
        PlotTarget::Residuals => residual_plot()?,
    };
    emit(cfg.out.as_deref(), &plot.render())?;
    Ok(EXIT_OK)
}

fn cmd_report(inputs: &[PathBuf], cfg: &RunConfig) -> Result<i32, CliError> {
    let reports = if inputs.is_empty() {
        audits::run_audit(Which::All, cfg)?.reports
    } else {
        let mut all = Vec::new();
        for p in inputs {
            all.extend(read_reports(p)?);
        }
        all
    };
    emit(cfg.out.as_deref(), &markdown_summary(&reports))?;
    Ok(verdict_exit(&reports))
}

fn dispatch(cli: &Cli, cfg: &RunConfig) -> Result<i32, CliError> {
    match &cli.command {
        Command::Zeros => cmd_zeros(cfg),
        Command::Audit { which } => cmd_audit(*which, cfg),
        Command::Plot { target, t } => cmd_plot(*target, *t, cfg),
        Command::Report { inputs } => cmd_report(inputs, cfg),
    }
}

fn resolve(cli: &Cli) -> Result<RunConfig, CliError> {
    let file = match &cli.global.config {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| CliError::Usage(format!("config {}: {e}", p.display())))?;
            parse_config(&text)?
        }
        None => Overrides::default(),
    };
    RunConfig::resolve(cli.global.overrides().layered_over(file))
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code. Diagnostics go to stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = resolve(&cli).and_then(|cfg| match cfg.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Usage(format!("threads: {e}")))
            .and_then(|pool| pool.install(|| dispatch(&cli, &cfg))),
        None => dispatch(&cli, &cfg),
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("xi-audit: {e}");
            e.exit_code()
        }
    }
}
