//! Plain-text zero cache.
//!
//! ```text
//! # xi-zeros v1 tol=<tol> tmax=<tmax> checksum=<hex>
//! 1,14.1347251417347,5.2e-11
//! ```
//!
//! The checksum is 64-bit FNV-1a over the bytes of every data line including
//! its trailing `\n`, printed as 16 lowercase hex digits.

use std::fs;
use std::io;
use std::path::Path;

use thiserror::Error;

use super::CriticalZero;

pub const CACHE_VERSION: &str = "v1";
const MAGIC: &str = "# xi-zeros";

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("cache i/o: {0}")]
    Io(#[from] io::Error),
    #[error("cache is corrupt: {0}")]
    Corrupt(String),
}

pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// `x` with 15 significant digits.
pub fn format_sig15(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return x.to_string();
    }
    let e = x.abs().log10().floor() as i32;
    if (-4..15).contains(&e) {
        format!("{:.*}", (14 - e) as usize, x)
    } else {
        format!("{x:.14e}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZeroCache {
    pub version: String,
    pub tol: f64,
    pub t_max: f64,
    pub zeros: Vec<CriticalZero>,
}

impl ZeroCache {
    pub fn new(tol: f64, t_max: f64, zeros: Vec<CriticalZero>) -> Self {
        ZeroCache {
            version: CACHE_VERSION.to_string(),
            tol,
            t_max,
            zeros,
        }
    }

    pub fn row(z: &CriticalZero) -> String {
        format!("{},{},{:e}", z.index, format_sig15(z.gamma), z.abs_err)
    }

    pub fn data(&self) -> String {
        self.zeros.iter().map(|z| Self::row(z) + "\n").collect()
    }

    pub fn render(&self) -> String {
        let data = self.data();
        format!(
            "{MAGIC} {} tol={} tmax={} checksum={:016x}\n{data}",
            self.version,
            self.tol,
            self.t_max,
            fnv1a64(data.as_bytes())
        )
    }

    pub fn parse(text: &str) -> Result<Self, CacheError> {
        let corrupt = |msg: &str| CacheError::Corrupt(msg.to_string());
        let (header, data) = text.split_once('\n').ok_or_else(|| corrupt("missing header line"))?;
        let rest = header
            .strip_prefix(MAGIC)
            .ok_or_else(|| corrupt("header does not start with the cache tag"))?;
        let fields: Vec<&str> = rest.split_whitespace().collect();
        let [version, tol, tmax, checksum] = fields[..] else {
            return Err(corrupt("header needs version, tol, tmax and checksum"));
        };
        let value = |field: &str, key: &str| -> Result<String, CacheError> {
            field
                .strip_prefix(key)
                .map(str::to_string)
                .ok_or_else(|| CacheError::Corrupt(format!("expected {key} in header")))
        };
        let number = |s: String| -> Result<f64, CacheError> {
            s.parse::<f64>()
                .map_err(|_| CacheError::Corrupt(format!("bad number {s:?} in header")))
        };
        let tol = number(value(tol, "tol=")?)?;
        let t_max = number(value(tmax, "tmax=")?)?;
        let expected = u64::from_str_radix(&value(checksum, "checksum=")?, 16)
            .map_err(|_| corrupt("checksum is not hex"))?;
        if fnv1a64(data.as_bytes()) != expected {
            return Err(corrupt("checksum mismatch"));
        }

        let mut zeros = Vec::new();
        for (i, line) in data.lines().enumerate() {
            let cols: Vec<&str> = line.split(',').collect();
            let [n, gamma, err] = cols[..] else {
                return Err(CacheError::Corrupt(format!("line {} has {} columns", i + 2, cols.len())));
            };
            let bad = || CacheError::Corrupt(format!("unparsable line {}", i + 2));
            let index: usize = n.parse().map_err(|_| bad())?;
            let gamma: f64 = gamma.parse().map_err(|_| bad())?;
            let abs_err: f64 = err.parse().map_err(|_| bad())?;
            if index != i + 1 {
                return Err(bad());
            }
            zeros.push(CriticalZero {
                index,
                gamma,
                bracket: (gamma - abs_err, gamma + abs_err),
                abs_err,
            });
        }
        Ok(ZeroCache {
            version: version.to_string(),
            tol,
            t_max,
            zeros,
        })
    }

    pub fn load(path: &Path) -> Result<Self, CacheError> {
        Self::parse(&fs::read_to_string(path)?)
    }

    /// Writes a sibling temp file and renames it over `path`, so readers never
    /// see a partial cache.
    pub fn store(&self, path: &Path) -> Result<(), CacheError> {
        let mut tmp = path.as_os_str().to_owned();
        tmp.push(format!(".tmp{}", std::process::id()));
        fs::write(&tmp, self.render())?;
        fs::rename(&tmp, path)?;
        Ok(())
    }

    /// Usable for a request when version and tolerance match and the scan
    /// reached at least `t_max`.
    pub fn covers(&self, tol: f64, t_max: f64) -> bool {
        self.version == CACHE_VERSION && self.tol == tol && self.t_max >= t_max
    }

    pub fn zeros_up_to(&self, t_max: f64) -> Vec<CriticalZero> {
        self.zeros.iter().copied().filter(|z| z.gamma <= t_max).collect()
    }
}
