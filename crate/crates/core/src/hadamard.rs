//! Genus-one Hadamard products over the critical-line zeros.
//!
//! The zeros `ρ = 1/2 + iγ` and `ρ̄` are multiplied in conjugate pairs,
//!
//! ```text
//! (1 − s/ρ)(1 − s/ρ̄)·exp(s/ρ + s/ρ̄) = ((s − 1/2)² + γ²)/(1/4 + γ²) · exp(s/(1/4 + γ²)),
//! ```
//!
//! which is real for real `s` and vanishes exactly, in floating point, at
//! `s = 1/2 + iγ`. The full product is `s^m·e^{B + Ds}·∏ pairs`.
//!
//! The quadratic parts are symmetric under `s ↔ 1 − s` but the exponential
//! corrections are not: with `S_N = Σ 1/(1/4 + γ²)`,
//! `P(s) / P(1 − s) = e^{(D + S_N)(2s − 1)}`.

use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::fit::{fit_line, linspace, FitError};
use crate::report::{AuditReport, Verdict};
use crate::specfun::{xi, SpecFunError};
use crate::zeros::{mean_gap, CriticalZero};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HadamardError {
    #[error("ordinates must be positive and strictly increasing (position {0})")]
    BadOrdinates(usize),
    #[error("truncation {n} exceeds the {available} ordinates available")]
    Truncation { n: usize, available: usize },
    #[error("target is zero or non-finite at s = {0}")]
    BadTarget(f64),
    #[error(transparent)]
    Fit(#[from] FitError),
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProductSpec {
    pub ordinates: Vec<f64>,
    /// Order of the zero at the origin; 0 throughout the audits.
    pub multiplicity: u32,
    pub b: f64,
    pub d: f64,
}

impl ProductSpec {
    pub fn new(ordinates: Vec<f64>) -> Result<Self, HadamardError> {
        for (i, &g) in ordinates.iter().enumerate() {
            let ok = g > 0.0 && g.is_finite() && (i == 0 || g > ordinates[i - 1]);
            if !ok {
                return Err(HadamardError::BadOrdinates(i));
            }
        }
        Ok(ProductSpec {
            ordinates,
            multiplicity: 0,
            b: 0.0,
            d: 0.0,
        })
    }

    pub fn from_zeros(zeros: &[CriticalZero]) -> Result<Self, HadamardError> {
        Self::new(zeros.iter().map(|z| z.gamma).collect())
    }

    pub fn with_prefactor(mut self, b: f64, d: f64) -> Self {
        self.b = b;
        self.d = d;
        self
    }

    pub fn with_fit(self, fit: &PrefactorFit) -> Self {
        self.with_prefactor(fit.b, fit.d)
    }

    fn first(&self, n: usize) -> Result<&[f64], HadamardError> {
        self.ordinates.get(..n).ok_or(HadamardError::Truncation {
            n,
            available: self.ordinates.len(),
        })
    }
}

/// One conjugate pair of genus-one factors.
pub fn pair_factor(s: Complex64, gamma: f64) -> Complex64 {
    let g2 = gamma * gamma;
    let den = 0.25 + g2;
    let u = s - 0.5;
    (u * u + g2) / den * (s / den).exp()
}

/// The pair factor without its exponential correction.
pub fn quadratic_factor(s: Complex64, gamma: f64) -> Complex64 {
    let g2 = gamma * gamma;
    let u = s - 0.5;
    (u * u + g2) / (0.25 + g2)
}

const TREE_LEAF: usize = 256;

/// Product over a fixed binary split of the index range. The split points do
/// not depend on the thread count, so the result is bit-reproducible.
fn tree_product(factors: &[Complex64]) -> Complex64 {
    if factors.len() <= TREE_LEAF {
        return match factors.len() {
            0 => Complex64::new(1.0, 0.0),
            1 => factors[0],
            n => {
                let (l, r) = factors.split_at(n / 2);
                tree_product(l) * tree_product(r)
            }
        };
    }
    let (l, r) = factors.split_at(factors.len() / 2);
    let (a, b) = rayon::join(|| tree_product(l), || tree_product(r));
    a * b
}

fn product_of(s: Complex64, ordinates: &[f64], factor: fn(Complex64, f64) -> Complex64) -> Complex64 {
    let factors: Vec<Complex64> = if ordinates.len() > TREE_LEAF {
        ordinates.par_iter().map(|&g| factor(s, g)).collect()
    } else {
        ordinates.iter().map(|&g| factor(s, g)).collect()
    };
    tree_product(&factors)
}

/// `∏_{n ≤ N}` pair factors, without prefactor.
pub fn bare_product(s: Complex64, ordinates: &[f64]) -> Complex64 {
    product_of(s, ordinates, pair_factor)
}

/// `∏_{n ≤ N}` quadratic factors only; symmetric under `s ↔ 1 − s`.
pub fn quadratic_product(s: Complex64, ordinates: &[f64]) -> Complex64 {
    product_of(s, ordinates, quadratic_factor)
}

/// `S_N = Σ_{n ≤ N} 1/(1/4 + γ_n²)`.
pub fn exponent_sum(ordinates: &[f64]) -> f64 {
    ordinates.iter().map(|g| 1.0 / (0.25 + g * g)).sum()
}

/// `s^m·e^{B + Ds}·∏_{n ≤ N}` pair factors.
pub fn paired_product(s: Complex64, spec: &ProductSpec, n: usize) -> Result<Complex64, HadamardError> {
    let ords = spec.first(n)?;
    let pre = (Complex64::new(spec.b, 0.0) + s * spec.d).exp();
    let zero_order = s.powu(spec.multiplicity);
    Ok(zero_order * pre * bare_product(s, ords))
}

/// `log ∏` pair factors for real `s`, where every factor is positive.
fn ln_bare_real(s: f64, ordinates: &[f64]) -> f64 {
    ordinates
        .iter()
        .map(|&g| {
            let den = 0.25 + g * g;
            (((s - 0.5) * (s - 0.5) + g * g) / den).ln() + s / den
        })
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrefactorFit {
    pub b: f64,
    pub d: f64,
    /// `max |log model − log target|` over the samples.
    pub max_residual: f64,
    /// `max |model / target − 1|` over the samples.
    pub max_relative_misfit: f64,
    pub sample_range: (f64, f64),
    pub samples: usize,
}

/// Least-squares `(B, D)` for `log|target(s_k)| ≈ B + D·s_k + log(s_k^m ∏ pairs)`
/// over real samples `(s_k, target(s_k))`.
pub fn fit_prefactor(
    samples: &[(f64, f64)],
    spec: &ProductSpec,
    n: usize,
) -> Result<PrefactorFit, HadamardError> {
    let ords = spec.first(n)?;
    let mut xs = Vec::with_capacity(samples.len());
    let mut ys = Vec::with_capacity(samples.len());
    for &(s, target) in samples {
        if target == 0.0 || !target.is_finite() {
            return Err(HadamardError::BadTarget(s));
        }
        let ln_zero_order = match spec.multiplicity {
            0 => 0.0,
            m => f64::from(m) * s.abs().ln(),
        };
        xs.push(s);
        ys.push(target.abs().ln() - ln_bare_real(s, ords) - ln_zero_order);
    }
    let line = fit_line(&xs, &ys)?;
    let max_relative_misfit = xs
        .iter()
        .zip(&ys)
        .map(|(&x, &y)| (line.predict(x) - y).exp_m1().abs())
        .fold(0.0f64, f64::max);
    let lo = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(PrefactorFit {
        b: line.intercept,
        d: line.slope,
        max_residual: line.max_residual,
        max_relative_misfit,
        sample_range: (lo, hi),
        samples: samples.len(),
    })
}

/// `(s, ξ(s))` at `count` evenly spaced real points of `[lo, hi]`.
pub fn xi_samples(lo: f64, hi: f64, count: usize) -> Result<Vec<(f64, f64)>, HadamardError> {
    linspace(lo, hi, count)
        .into_iter()
        .map(|s| Ok((s, xi(Complex64::new(s, 0.0))?.re)))
        .collect()
}

/// Sample window and count used by the product audits.
pub const FIT_RANGE: (f64, f64) = (-1.0, 2.0);
pub const FIT_SAMPLES: usize = 21;
/// Truncations of the convergence audit.
pub const TRUNCATIONS: [usize; 5] = [50, 100, 200, 400, 800];
/// Largest misfit accepted at the final truncation.
pub const MISFIT_TOL: f64 = 2e-2;

/// Passes when the constant terms differ by no more than the two fits' log
/// residuals together, plus rounding.
pub fn audit_equality(a: &PrefactorFit, b: &PrefactorFit) -> AuditReport {
    let diff = (a.b - b.b).abs();
    let bound = a.max_residual + b.max_residual + 8.0 * f64::EPSILON * (1.0 + a.b.abs().max(b.b.abs()));
    let mut r = AuditReport::new("prefactor_equality", "eq18-19")
        .param("range_a", format!("{}:{}", a.sample_range.0, a.sample_range.1))
        .param("range_b", format!("{}:{}", b.sample_range.0, b.sample_range.1))
        .param("samples_a", a.samples)
        .param("samples_b", b.samples);
    r.measured = vec![a.b, a.d];
    r.reference = vec![b.b, b.d];
    r.ratio_or_residual = diff;
    r.tolerance = bound;
    r.verdict = if diff <= bound {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    r
}

/// Fits ξ on [`FIT_RANGE`] for every truncation and checks that the misfit
/// never grows and ends below [`MISFIT_TOL`]. Also checks `P(0) = e^B`.
pub fn audit_convergence(spec: &ProductSpec, truncations: &[usize]) -> Result<AuditReport, HadamardError> {
    let samples = xi_samples(FIT_RANGE.0, FIT_RANGE.1, FIT_SAMPLES)?;
    let fits: Vec<PrefactorFit> = truncations
        .iter()
        .map(|&n| fit_prefactor(&samples, spec, n))
        .collect::<Result<_, _>>()?;
    let misfits: Vec<f64> = fits.iter().map(|f| f.max_relative_misfit).collect();
    let monotone = misfits.windows(2).all(|w| w[1] <= w[0]);
    let last = misfits.last().copied().unwrap_or(f64::INFINITY);
    let mut origin_exact = true;
    for (&n, fit) in truncations.iter().zip(&fits) {
        let fitted = spec.clone().with_fit(fit);
        let p0 = paired_product(Complex64::new(0.0, 0.0), &fitted, n)?;
        origin_exact &= p0 == Complex64::new(fit.b.exp(), 0.0);
    }
    let final_fit = fits.last();
    let mut r = AuditReport::new("hadamard_product", "eq17-18")
        .param(
            "truncations",
            truncations.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(";"),
        )
        .param("range", format!("{}:{}", FIT_RANGE.0, FIT_RANGE.1))
        .param("samples", FIT_SAMPLES)
        .param("non_increasing", monotone)
        .param("origin_equals_exp_b", origin_exact)
        .param("b_final", final_fit.map_or(f64::NAN, |f| f.b))
        .param("d_final", final_fit.map_or(f64::NAN, |f| f.d));
    if let Some(&n) = truncations.last() {
        r.set_param("exponent_sum_final", exponent_sum(spec.first(n)?));
    }
    r.measured = misfits;
    r.reference = vec![MISFIT_TOL];
    r.ratio_or_residual = last;
    r.tolerance = MISFIT_TOL;
    r.verdict = if monotone && last < MISFIT_TOL && origin_exact {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(r)
}

/// Relative rounding error of an `N`-pair product, about `4(N + 1)ε`.
pub fn rounding_floor(n: usize) -> f64 {
    4.0 * (n as f64 + 1.0) * f64::EPSILON
}

/// `Σ_{n > N} |s|²/(1/4 + γ_n²)` with the ordinates past `γ_N` spaced by the
/// mean gap at `γ_N`.
pub fn tail_bound(s: Complex64, ordinates: &[f64]) -> f64 {
    let Some(&last) = ordinates.last() else {
        return f64::INFINITY;
    };
    let g = mean_gap(last);
    // Σ_{k ≥ 1} 1/(γ_N + kg)² ≈ 1/(g(γ_N + g/2))
    s.norm_sqr() / (g * (last + 0.5 * g))
}

/// `|P_N(s)|` divided by the same product with every numerator replaced by its
/// modulus bound `|s − 1/2|² + γ²`. Lies in `[0, 1]`, is exactly 0 on a stored
/// zero and does not depend on the prefactor.
pub fn normalized_modulus(s: Complex64, ordinates: &[f64]) -> f64 {
    let u = s - 0.5;
    let u2 = u.norm_sqr();
    let mut log_sum = 0.0;
    for &g in ordinates {
        let g2 = g * g;
        let num = (u * u + g2).norm();
        if num == 0.0 {
            return 0.0;
        }
        log_sum += (num / (u2 + g2)).ln();
    }
    log_sum.exp()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeResult {
    pub gamma: f64,
    pub value: f64,
    /// The probe ordinate is bit-identical to one of the first `N` ordinates.
    pub in_spec: bool,
    pub tail_bound: f64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoincidenceAudit {
    pub probes: Vec<ProbeResult>,
    pub threshold: f64,
    pub n: usize,
    pub verdict: Verdict,
}

/// Evaluates the normalized product at `1/2 + iγ` for every probe.
///
/// A probe COINCIDEs when its value is at most `threshold` and is DISTINCT
/// when it exceeds `10·threshold`; probes above `γ_N` cannot be decided by an
/// `N`-pair product and are INCONCLUSIVE. The default threshold is
/// `10·rounding_floor(N)`.
pub fn audit_coincidence(
    spec: &ProductSpec,
    probes: &[f64],
    n: usize,
    threshold: Option<f64>,
) -> Result<CoincidenceAudit, HadamardError> {
    let ords = spec.first(n)?;
    let threshold = threshold.unwrap_or(10.0 * rounding_floor(n));
    let top = ords.last().copied().unwrap_or(0.0);
    let results: Vec<ProbeResult> = probes
        .iter()
        .map(|&gamma| {
            let s = Complex64::new(0.5, gamma);
            let value = normalized_modulus(s, ords);
            let verdict = if gamma > top {
                Verdict::Inconclusive
            } else if value <= threshold {
                Verdict::Coincide
            } else if value > 10.0 * threshold {
                Verdict::Distinct
            } else {
                Verdict::Inconclusive
            };
            ProbeResult {
                gamma,
                value,
                in_spec: ords.contains(&gamma),
                tail_bound: tail_bound(s, ords),
                verdict,
            }
        })
        .collect();
    let verdict = if results.iter().any(|p| p.verdict == Verdict::Distinct) {
        Verdict::Distinct
    } else if results.iter().all(|p| p.verdict == Verdict::Coincide) {
        Verdict::Coincide
    } else {
        Verdict::Inconclusive
    };
    Ok(CoincidenceAudit {
        probes: results,
        threshold,
        n,
        verdict,
    })
}

impl CoincidenceAudit {
    /// `ratio_or_residual` is the largest probe value over the threshold.
    pub fn report(&self) -> AuditReport {
        let join = |f: fn(&ProbeResult) -> String| {
            self.probes.iter().map(f).collect::<Vec<_>>().join(";")
        };
        let mut r = AuditReport::new("zero_coincidence", "eq20-21")
            .param("n", self.n)
            .param("probes", join(|p| p.gamma.to_string()))
            .param("probe_verdicts", join(|p| p.verdict.to_string()))
            .param("in_spec", join(|p| p.in_spec.to_string()))
            .param("tail_bounds", join(|p| format!("{:e}", p.tail_bound)))
            .param("rounding_floor", rounding_floor(self.n));
        r.measured = self.probes.iter().map(|p| p.value).collect();
        r.reference = vec![0.0; self.probes.len()];
        let max = self.probes.iter().map(|p| p.value).fold(0.0f64, f64::max);
        r.ratio_or_residual = max / self.threshold;
        r.tolerance = self.threshold;
        r.verdict = self.verdict;
        r
    }
}
