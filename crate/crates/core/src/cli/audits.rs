//! Zero acquisition through the cache and the report list of every audit.

use std::io::ErrorKind;

use crate::carlson::{self, CarlsonError, DEFAULT_MARGIN, EQ9_SAMPLES, EQ9_S_MAX};
use crate::coupling::{self, CouplingError};
use crate::fit::linspace;
use crate::hadamard::{self, ProductSpec, FIT_RANGE, FIT_SAMPLES, TRUNCATIONS};
use crate::report::{AuditReport, Verdict};
use crate::specfun::{EulerMaclaurin, QuadError};
use crate::zeros::{
    count_check, height_for_count, scan_zeros_with, CacheError, CriticalZero, ScanOptions, ZeroCache,
};

use super::config::RunConfig;
use super::{CliError, Which};

/// Ordinates of the Carlson difference audit and its sample window.
pub const DIFFERENCE_N: usize = 10;
pub const COINCIDENCE_PROBES: usize = 5;
/// Sample count of the second grid in the prefactor-equality check.
pub const EQUALITY_SAMPLES: usize = 31;

/// Reports plus numerical failures that should turn into exit code 4 after
/// the reports are written.
#[derive(Debug, Default)]
pub struct Outcome {
    pub reports: Vec<AuditReport>,
    pub nonconvergence: Vec<String>,
}

impl Outcome {
    fn extend(&mut self, other: Outcome) {
        self.reports.extend(other.reports);
        self.nonconvergence.extend(other.nonconvergence);
    }
}

fn load_cache(cfg: &RunConfig) -> Result<Option<ZeroCache>, CliError> {
    match ZeroCache::load(&cfg.cache) {
        Ok(c) => Ok(Some(c)),
        Err(CacheError::Io(e)) if e.kind() == ErrorKind::NotFound => Ok(None),
        Err(e) => Err(CliError::Cache(format!("{}: {e}", cfg.cache.display()))),
    }
}

/// Zeros up to `t_max` and at least `min_count` of them, from the cache when
/// it covers the request. Fresh results go through the cache text format
/// before use, so a cache hit and a miss yield bit-identical ordinates. A
/// corrupt cache is an error and is left untouched.
pub fn zeros_for(cfg: &RunConfig, t_max: f64, min_count: usize) -> Result<Vec<CriticalZero>, CliError> {
    if let Some(cache) = load_cache(cfg)? {
        if cache.covers(cfg.tol, t_max) && cache.zeros.len() >= min_count {
            return Ok(cache.zeros);
        }
    }
    let opts = ScanOptions::default().with_tol(cfg.tol);
    let mut height = if min_count > 0 {
        t_max.max(height_for_count(min_count))
    } else {
        t_max
    };
    let outcome = loop {
        let out = scan_zeros_with(height, &opts)?;
        if out.zeros.len() >= min_count {
            break out;
        }
        height *= 1.1;
    };
    for w in &outcome.warnings {
        eprintln!(
            "warning: {} extra sign changes hidden in [{}, {}] at step {}",
            w.extra_sign_changes, w.t_lo, w.t_hi, w.step
        );
    }
    let fresh = ZeroCache::new(cfg.tol, height, outcome.zeros);
    let normalized = ZeroCache::parse(&fresh.render()).expect("rendered cache parses");
    normalized
        .store(&cfg.cache)
        .map_err(|e| CliError::Io(format!("{}: {e}", cfg.cache.display())))?;
    Ok(normalized.zeros)
}

fn up_to(zeros: &[CriticalZero], t_max: f64) -> Vec<CriticalZero> {
    zeros.iter().copied().filter(|z| z.gamma <= t_max).collect()
}

fn eq5(zeros: &[CriticalZero], cfg: &RunConfig) -> Outcome {
    let audit = coupling::audit_eq5(&coupling::default_eq5_orders());
    let mut nonconvergence: Vec<String> = audit
        .entries
        .iter()
        .filter_map(|e| match &e.quadrature {
            Err(CouplingError::Quadrature(q @ QuadError::NonConvergence { .. })) => {
                Some(format!("norm integral at order {}: {q}", e.order))
            }
            _ => None,
        })
        .collect();
    let records = coupling::coupling_spectrum(&up_to(zeros, cfg.t_max));
    for r in &records {
        if let Err(CouplingError::Quadrature(q @ QuadError::NonConvergence { .. })) = &r.norm_integral {
            nonconvergence.push(format!("norm integral for zero {:?}: {q}", r.source_zero_index));
        }
    }
    Outcome {
        reports: vec![audit.report(), coupling::spectrum_report(&records)],
        nonconvergence,
    }
}

fn eq9() -> Result<Outcome, CliError> {
    let fit = carlson::audit_eq9(EQ9_S_MAX, EQ9_SAMPLES)?;
    Ok(Outcome {
        reports: vec![fit.report()],
        ..Outcome::default()
    })
}

fn truncations(n: usize) -> Vec<usize> {
    let mut ns: Vec<usize> = TRUNCATIONS.iter().copied().filter(|&k| k < n).collect();
    ns.push(n);
    ns
}

fn product_spec(zeros: &[CriticalZero], n: usize) -> Result<ProductSpec, CliError> {
    Ok(ProductSpec::from_zeros(&zeros[..n.min(zeros.len())])?)
}

fn hadamard_audit(zeros: &[CriticalZero], cfg: &RunConfig) -> Result<Outcome, CliError> {
    let spec = product_spec(zeros, cfg.n_zeros)?;
    let convergence = hadamard::audit_convergence(&spec, &truncations(cfg.n_zeros))?;
    let a = hadamard::fit_prefactor(
        &hadamard::xi_samples(FIT_RANGE.0, FIT_RANGE.1, FIT_SAMPLES)?,
        &spec,
        cfg.n_zeros,
    )?;
    let b = hadamard::fit_prefactor(
        &hadamard::xi_samples(FIT_RANGE.0, FIT_RANGE.1, EQUALITY_SAMPLES)?,
        &spec,
        cfg.n_zeros,
    )?;
    Ok(Outcome {
        reports: vec![convergence, hadamard::audit_equality(&a, &b)],
        ..Outcome::default()
    })
}

/// Probes the product at its own first ordinates, the first one shifted by
/// `perturb`.
fn coincidence(zeros: &[CriticalZero], cfg: &RunConfig) -> Result<Outcome, CliError> {
    let spec = product_spec(zeros, cfg.n_zeros)?;
    let mut probes: Vec<f64> = spec.ordinates.iter().take(COINCIDENCE_PROBES).copied().collect();
    if let Some(first) = probes.first_mut() {
        *first += cfg.perturb;
    }
    let audit = hadamard::audit_coincidence(&spec, &probes, cfg.n_zeros, None)?;
    let report = audit.report().param("perturb", cfg.perturb);
    Ok(Outcome {
        reports: vec![report],
        ..Outcome::default()
    })
}

fn carlson_audit(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let mut reports = vec![carlson::eq8_report(&linspace(0.0, EQ9_S_MAX, 11)).map_err(CarlsonError::from)?];
    reports.push(carlson::audit_difference(DIFFERENCE_N, EQ9_S_MAX, cfg.m, DEFAULT_MARGIN)?.report());
    reports.extend(carlson::self_check_reports(DEFAULT_MARGIN)?);
    Ok(Outcome {
        reports,
        ..Outcome::default()
    })
}

/// Composite verdict: FAIL when any member failed, PASS otherwise.
pub fn summary(reports: &[AuditReport]) -> AuditReport {
    let names = |pred: fn(Verdict) -> bool| {
        reports
            .iter()
            .filter(|r| pred(r.verdict))
            .map(|r| r.name.as_str())
            .collect::<Vec<_>>()
            .join(";")
    };
    let failures = reports.iter().filter(|r| r.verdict.is_failure()).count();
    let mut r = AuditReport::new("audit_all", "composite")
        .param("reports", reports.len())
        .param("failed", names(Verdict::is_failure))
        .param("inconclusive", names(|v| v == Verdict::Inconclusive))
        .param("not_applicable", names(|v| v == Verdict::NotApplicable));
    for v in Verdict::ALL {
        r.set_param(
            &format!("count_{}", v.as_str().to_lowercase()),
            reports.iter().filter(|r| r.verdict == v).count(),
        );
    }
    r.measured = vec![failures as f64];
    r.reference = vec![0.0];
    r.ratio_or_residual = failures as f64;
    r.tolerance = 0.0;
    r.verdict = if failures == 0 { Verdict::Pass } else { Verdict::Fail };
    r
}

/// Every report carries the evaluation caps that bounded it.
pub fn run_audit(which: Which, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let mut out = Outcome::default();
    match which {
        Which::Eq5 => out.extend(eq5(&zeros_for(cfg, cfg.t_max, 0)?, cfg)),
        Which::Eq9 => out.extend(eq9()?),
        Which::Hadamard => out.extend(hadamard_audit(&zeros_for(cfg, 0.0, cfg.n_zeros)?, cfg)?),
        Which::Coincidence => out.extend(coincidence(&zeros_for(cfg, 0.0, cfg.n_zeros)?, cfg)?),
        Which::Carlson => out.extend(carlson_audit(cfg)?),
        Which::All => {
            let zeros = zeros_for(cfg, cfg.t_max, cfg.n_zeros)?;
            out.extend(eq5(&zeros, cfg));
            out.extend(eq9()?);
            out.extend(hadamard_audit(&zeros, cfg)?);
            out.extend(coincidence(&zeros, cfg)?);
            out.extend(carlson_audit(cfg)?);
            out.reports.push(count_check(cfg.t_max, up_to(&zeros, cfg.t_max).len()));
            let s = summary(&out.reports);
            out.reports.push(s);
        }
    }
    for r in &mut out.reports {
        r.set_param("zeta_max_terms", EulerMaclaurin::MAX_TERMS);
        r.set_param("zeta_max_order", EulerMaclaurin::MAX_ORDER);
    }
    Ok(out)
}
