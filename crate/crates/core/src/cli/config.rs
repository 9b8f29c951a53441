//! Run configuration: defaults, then a flat `key = value` file, then flags.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::str::FromStr;

use super::{CliError, Format};

pub const KEYS: [&str; 9] = [
    "t_max", "tol", "n_zeros", "perturb", "m", "threads", "format", "out", "cache",
];

pub const DEFAULT_T_MAX: f64 = 50.0;
pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_N_ZEROS: usize = 800;
pub const DEFAULT_CACHE: &str = "zeros.csv";

/// Every field optional; `None` means "not set at this layer".
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub t_max: Option<f64>,
    pub tol: Option<f64>,
    pub n_zeros: Option<usize>,
    pub perturb: Option<f64>,
    pub m: Option<u32>,
    pub threads: Option<usize>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub cache: Option<PathBuf>,
}

impl Overrides {
    /// Fields set in `self` win.
    pub fn layered_over(self, base: Overrides) -> Overrides {
        Overrides {
            t_max: self.t_max.or(base.t_max),
            tol: self.tol.or(base.tol),
            n_zeros: self.n_zeros.or(base.n_zeros),
            perturb: self.perturb.or(base.perturb),
            m: self.m.or(base.m),
            threads: self.threads.or(base.threads),
            format: self.format.or(base.format),
            out: self.out.or(base.out),
            cache: self.cache.or(base.cache),
        }
    }
}

fn parse_value<T: FromStr>(line: usize, key: &str, value: &str) -> Result<T, CliError> {
    value
        .parse()
        .map_err(|_| CliError::Usage(format!("config line {line}: invalid value for {key}: {value:?}")))
}

/// Parses a flat config. Blank lines and lines starting with `#` are ignored;
/// unknown or repeated keys are errors.
pub fn parse_config(text: &str) -> Result<Overrides, CliError> {
    let mut o = Overrides::default();
    let mut seen = BTreeSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (key, value) = trimmed
            .split_once('=')
            .map(|(k, v)| (k.trim(), v.trim()))
            .ok_or_else(|| CliError::Usage(format!("config line {line}: expected key = value")))?;
        if !KEYS.contains(&key) {
            return Err(CliError::Usage(format!("config line {line}: unknown key {key:?}")));
        }
        if !seen.insert(key.to_string()) {
            return Err(CliError::Usage(format!("config line {line}: repeated key {key:?}")));
        }
        match key {
            "t_max" => o.t_max = Some(parse_value(line, key, value)?),
            "tol" => o.tol = Some(parse_value(line, key, value)?),
            "n_zeros" => o.n_zeros = Some(parse_value(line, key, value)?),
            "perturb" => o.perturb = Some(parse_value(line, key, value)?),
            "m" => o.m = Some(parse_value(line, key, value)?),
            "threads" => o.threads = Some(parse_value(line, key, value)?),
            "format" => o.format = Some(parse_value(line, key, value)?),
            "out" => o.out = Some(PathBuf::from(value)),
            "cache" => o.cache = Some(PathBuf::from(value)),
            _ => unreachable!("key list checked above"),
        }
    }
    Ok(o)
}

/// Resolved settings; every numeric field validated.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub t_max: f64,
    pub tol: f64,
    pub n_zeros: usize,
    pub perturb: f64,
    pub m: u32,
    /// `None` uses every available core.
    pub threads: Option<usize>,
    /// `None` lets the subcommand choose.
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub cache: PathBuf,
}

fn positive(name: &str, v: f64) -> Result<f64, CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Usage(format!("{name} must be positive and finite, got {v}")))
    }
}

fn nonzero<T: Default + PartialEq + std::fmt::Display>(name: &str, v: T) -> Result<T, CliError> {
    if v == T::default() {
        Err(CliError::Usage(format!("{name} must be positive, got {v}")))
    } else {
        Ok(v)
    }
}

impl RunConfig {
    pub fn resolve(o: Overrides) -> Result<Self, CliError> {
        let perturb = o.perturb.unwrap_or(0.0);
        if !perturb.is_finite() {
            return Err(CliError::Usage(format!("perturb must be finite, got {perturb}")));
        }
        Ok(RunConfig {
            t_max: positive("t-max", o.t_max.unwrap_or(DEFAULT_T_MAX))?,
            tol: positive("tol", o.tol.unwrap_or(DEFAULT_TOL))?,
            n_zeros: nonzero("n-zeros", o.n_zeros.unwrap_or(DEFAULT_N_ZEROS))?,
            perturb,
            m: nonzero("m", o.m.unwrap_or(1))?,
            threads: o.threads.map(|t| nonzero("threads", t)).transpose()?,
            format: o.format,
            out: o.out,
            cache: o.cache.unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE)),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_keys() {
        let text = "# run\nt_max = 30\ntol=1e-8\nn_zeros = 100\nperturb = 0.01\nm = 2\nthreads = 3\nformat = csv\nout = r.csv\ncache = z.csv\n\n";
        let o = parse_config(text).unwrap();
        assert_eq!(o.t_max, Some(30.0));
        assert_eq!(o.tol, Some(1e-8));
        assert_eq!(o.n_zeros, Some(100));
        assert_eq!(o.m, Some(2));
        assert_eq!(o.format, Some(Format::Csv));
        assert_eq!(o.cache, Some(PathBuf::from("z.csv")));
    }

    #[test]
    fn rejects_unknown_repeated_and_malformed() {
        for bad in ["tmax = 3", "t_max = 1\nt_max = 2", "t_max 3", "m = -1", "format = xml"] {
            assert!(matches!(parse_config(bad), Err(CliError::Usage(_))), "{bad}");
        }
    }

    #[test]
    fn flags_override_file() {
        let file = parse_config("t_max = 30\ntol = 1e-8").unwrap();
        let flags = Overrides {
            t_max: Some(10.0),
            ..Overrides::default()
        };
        let cfg = RunConfig::resolve(flags.layered_over(file)).unwrap();
        assert_eq!((cfg.t_max, cfg.tol), (10.0, 1e-8));
        assert_eq!(cfg.n_zeros, DEFAULT_N_ZEROS);
    }

    #[test]
    fn validation() {
        let bad = |o: Overrides| matches!(RunConfig::resolve(o), Err(CliError::Usage(_)));
        assert!(bad(Overrides { t_max: Some(-1.0), ..Default::default() }));
        assert!(bad(Overrides { tol: Some(0.0), ..Default::default() }));
        assert!(bad(Overrides { n_zeros: Some(0), ..Default::default() }));
        assert!(bad(Overrides { m: Some(0), ..Default::default() }));
        assert!(bad(Overrides { threads: Some(0), ..Default::default() }));
        assert!(bad(Overrides { perturb: Some(f64::NAN), ..Default::default() }));
    }
}
