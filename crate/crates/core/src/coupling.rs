//! Coupling constants of the inverse-square potential.
//!
//! A point `s` maps to the coupling `λ = s(s − 1)` and the Bessel order
//! `ν = √(λ + 1/4) = s − 1/2`. For `s = 1/2 + iγ` the coupling is real,
//! `λ = −(γ² + 1/4)`, and the order is imaginary, `ν = iγ`.
//!
//! The norm integral `∫₀^∞ r K_ν(r)² dr` equals `(1/2)·πν / sin πν` for
//! real `0 ≤ ν < 1` and `(1/2)·πμ / sinh πμ` for `ν = iμ`. The closed form
//! under audit carries the coefficient `1/8`, so the measured ratio is 4.

use std::cell::RefCell;
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::report::{AuditReport, Verdict};
use crate::specfun::trig::sin_pi;
use crate::specfun::{
    bessel_k, integrate_half_line, BesselOrder, HalfLineMap, OrderKind, QuadError, QuadOptions,
    QuadratureResult, SpecFunError,
};
use crate::zeros::CriticalZero;

/// Coefficient of `πν / sin πν` in the closed form being audited.
pub const PAPER_COEFFICIENT: f64 = 0.125;
/// Coefficient found in standard integral tables.
pub const STANDARD_COEFFICIENT: f64 = 0.5;
/// Relative spread allowed between the ratios of one batch.
pub const RATIO_SPREAD_TOL: f64 = 1e-6;
/// Relative accuracy requested from the norm-integral quadrature.
pub const NORM_REL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum CouplingError {
    #[error("closed form has a pole at integer order {0}")]
    ClosedFormPole(f64),
    #[error(transparent)]
    Quadrature(#[from] QuadError),
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
}

impl CouplingError {
    /// The integral itself does not exist, as opposed to a numerical failure.
    pub fn is_divergence(&self) -> bool {
        matches!(self, CouplingError::Quadrature(QuadError::Divergent { .. }))
    }
}

pub fn lambda_from_s(s: Complex64) -> Complex64 {
    s * (s - 1.0)
}

/// Both roots of `r(r − 1) = λ`, the one with non-negative `Re √(λ + 1/4)`
/// offset first. The second root comes from the product of the roots, which
/// avoids cancellation when the two differ greatly in size.
pub fn s_from_lambda(lambda: Complex64) -> (Complex64, Complex64) {
    let q = (lambda + 0.25).sqrt();
    let r1 = q + 0.5;
    if r1 == Complex64::new(0.0, 0.0) {
        return (r1, Complex64::new(1.0, 0.0) - r1);
    }
    (r1, -lambda / r1)
}

/// `√(λ + 1/4)` as a Bessel order. Integer real orders are returned as is;
/// [`BesselOrder::is_integer_real`] flags the pole of the closed form there.
pub fn nu_from_lambda(lambda: f64) -> BesselOrder {
    let shifted = lambda + 0.25;
    if shifted >= 0.0 {
        BesselOrder::real(shifted.sqrt())
    } else {
        BesselOrder::imaginary((-shifted).sqrt())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CouplingRecord {
    pub s: Complex64,
    pub lambda: Complex64,
    pub nu: BesselOrder,
    pub source_zero_index: Option<usize>,
    /// `∫ r K_ν² dr`, or why it could not be computed.
    pub norm_integral: Result<QuadratureResult, CouplingError>,
}

impl CouplingRecord {
    pub fn from_zero(zero: &CriticalZero) -> Self {
        let s = Complex64::new(0.5, zero.gamma);
        let lambda = lambda_from_s(s);
        let nu = nu_from_lambda(lambda.re);
        CouplingRecord {
            s,
            lambda,
            nu,
            source_zero_index: Some(zero.index),
            norm_integral: norm_integral_quadrature(nu),
        }
    }
}

/// `∫₀^∞ r·K_order(r)² dr`, computed in `r = e^t`.
///
/// For real order the integrand behaves like `e^{(2−2ν)t}` as `t → −∞`, an
/// exponential tail that the trapezoidal rule handles well for `ν < 1`. At
/// `ν ≥ 1` the tail stops decaying and the quadrature reports divergence.
/// For imaginary order `K_iμ(e^t)` oscillates at the constant rate `μ` as
/// `t → −∞`, under an `e^{2t}` envelope.
///
/// Real orders above roughly 0.99 decay too slowly to fit in the range of `t`
/// and are reported as divergent too.
pub fn norm_integral_quadrature(order: BesselOrder) -> Result<QuadratureResult, CouplingError> {
    let failure: RefCell<Option<SpecFunError>> = RefCell::new(None);
    let integrand = |r: f64| -> f64 {
        match bessel_k(order, r) {
            Ok(k) => {
                let root = r.sqrt() * k;
                root * root
            }
            Err(SpecFunError::Overflow(_)) => f64::INFINITY,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        }
    };
    let opts = QuadOptions::default().with_rel_tol(NORM_REL_TOL);
    let result = integrate_half_line(integrand, HalfLineMap::Exp, &opts);
    if let Some(e) = failure.into_inner() {
        return Err(e.into());
    }
    Ok(result?)
}

/// `(1/8)·πν / sin πν`, continued to `(1/8)·πμ / sinh πμ` for `ν = iμ`.
pub fn norm_integral_paper(order: BesselOrder) -> Result<f64, CouplingError> {
    Ok(PAPER_COEFFICIENT * pi_nu_over_sin(order)?)
}

/// `πν / sin πν`, or `πμ / sinh πμ` for imaginary order; 1 at the origin.
pub fn pi_nu_over_sin(order: BesselOrder) -> Result<f64, CouplingError> {
    let x = PI * order.magnitude;
    if x == 0.0 {
        return Ok(1.0);
    }
    match order.kind {
        OrderKind::Real => {
            if order.is_integer_real() {
                return Err(CouplingError::ClosedFormPole(order.magnitude));
            }
            Ok(x / sin_pi(order.magnitude))
        }
        OrderKind::Imaginary => {
            // x/sinh x without overflow for large x
            if x > 20.0 {
                Ok(2.0 * x * (-x).exp() / (1.0 - (-2.0 * x).exp()))
            } else {
                Ok(x / x.sinh())
            }
        }
    }
}

/// One line of the norm-integral audit.
#[derive(Debug, Clone, PartialEq)]
pub struct NormIntegralAudit {
    pub order: BesselOrder,
    pub quadrature: Result<QuadratureResult, CouplingError>,
    pub paper_closed_form: Result<f64, CouplingError>,
    /// Quadrature over the `1/8` closed form.
    pub ratio: Option<f64>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Eq5Audit {
    pub entries: Vec<NormIntegralAudit>,
    /// Mean ratio over the entries that produced one.
    pub common_ratio: f64,
    /// `(max − min) / |mean|` of those ratios.
    pub spread: f64,
    pub verdict: Verdict,
}

impl Eq5Audit {
    pub fn report(&self) -> AuditReport {
        let ok: Vec<&NormIntegralAudit> = self.entries.iter().filter(|e| e.ratio.is_some()).collect();
        let orders = self
            .entries
            .iter()
            .map(|e| e.order.to_string())
            .collect::<Vec<_>>()
            .join(";");
        let failures = self
            .entries
            .iter()
            .filter_map(|e| match (&e.quadrature, &e.paper_closed_form) {
                (Err(err), _) | (_, Err(err)) => Some(format!("{}: {err}", e.order)),
                _ => None,
            })
            .collect::<Vec<_>>()
            .join("; ");
        let max_dev_standard = ok
            .iter()
            .map(|e| {
                let q = e.quadrature.as_ref().unwrap().value;
                let std = STANDARD_COEFFICIENT * pi_nu_over_sin(e.order).unwrap();
                (q / std - 1.0).abs()
            })
            .fold(0.0f64, f64::max);
        let implied = self.common_ratio * PAPER_COEFFICIENT;
        let mut r = AuditReport::new("eq5_norm_integral", "eq5")
            .param("orders", orders)
            .param("common_constant", self.common_ratio)
            .param("ratio_spread", self.spread)
            .param("implied_coefficient", implied)
            .param("hypothesis_coefficient_1_8", PAPER_COEFFICIENT)
            .param("hypothesis_coefficient_1_2", STANDARD_COEFFICIENT)
            .param(
                "hypothesis_1_8_holds",
                (self.common_ratio - 1.0).abs() <= RATIO_SPREAD_TOL,
            )
            .param("hypothesis_1_2_max_relative_deviation", max_dev_standard)
            .param("hypothesis_1_2_holds", !ok.is_empty() && max_dev_standard <= RATIO_SPREAD_TOL);
        if !failures.is_empty() {
            r.set_param("entry_failures", failures);
        }
        r.measured = ok.iter().map(|e| e.quadrature.as_ref().unwrap().value).collect();
        r.reference = ok.iter().map(|e| *e.paper_closed_form.as_ref().unwrap()).collect();
        r.ratio_or_residual = self.common_ratio;
        r.tolerance = RATIO_SPREAD_TOL;
        r.verdict = self.verdict;
        r
    }
}

/// Quadrature against the `1/8` closed form for every order. Entries that fail
/// are kept and marked; the batch verdict is CONSISTENT_UP_TO_CONSTANT when
/// every entry produced a ratio and the ratios agree to [`RATIO_SPREAD_TOL`].
pub fn audit_eq5(orders: &[BesselOrder]) -> Eq5Audit {
    let entries: Vec<NormIntegralAudit> = orders
        .par_iter()
        .map(|&order| {
            let quadrature = norm_integral_quadrature(order);
            let paper_closed_form = norm_integral_paper(order);
            let ratio = match (&quadrature, &paper_closed_form) {
                (Ok(q), Ok(p)) => Some(q.value / p),
                _ => None,
            };
            let verdict = if ratio.is_some() {
                Verdict::Pass
            } else {
                Verdict::Fail
            };
            NormIntegralAudit {
                order,
                quadrature,
                paper_closed_form,
                ratio,
                verdict,
            }
        })
        .collect();
    let ratios: Vec<f64> = entries.iter().filter_map(|e| e.ratio).collect();
    let (common_ratio, spread) = if ratios.is_empty() {
        (0.0, 0.0)
    } else {
        let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
        let max = ratios.iter().copied().fold(f64::MIN, f64::max);
        let min = ratios.iter().copied().fold(f64::MAX, f64::min);
        (mean, (max - min) / mean.abs())
    };
    let verdict = if ratios.is_empty() {
        Verdict::Inconclusive
    } else if ratios.len() == entries.len() && spread <= RATIO_SPREAD_TOL {
        Verdict::ConsistentUpToConstant
    } else {
        Verdict::Fail
    };
    Eq5Audit {
        entries,
        common_ratio,
        spread,
        verdict,
    }
}

/// Real orders 0.1, 0.2, …, 0.9 and imaginary orders 0.5i, 1i, 2i.
pub fn default_eq5_orders() -> Vec<BesselOrder> {
    let mut orders: Vec<BesselOrder> = (1..=9).map(|k| BesselOrder::real(k as f64 / 10.0)).collect();
    orders.extend([0.5, 1.0, 2.0].map(BesselOrder::imaginary));
    orders
}

/// One record per zero, in input order.
pub fn coupling_spectrum(zeros: &[CriticalZero]) -> Vec<CouplingRecord> {
    zeros.par_iter().map(CouplingRecord::from_zero).collect()
}

/// Reality, negativity, `λ = −(γ² + 1/4)`, imaginary order and finite norm
/// for every record.
pub fn spectrum_report(records: &[CouplingRecord]) -> AuditReport {
    const REL_TOL: f64 = 1e-12;
    let mut worst = 0.0f64;
    let mut problems = Vec::new();
    for rec in records {
        let gamma = rec.s.im;
        let expected = -(gamma * gamma + 0.25);
        let dev = (rec.lambda.re - expected).abs() / expected.abs();
        worst = worst.max(dev);
        let label = rec.source_zero_index.map_or_else(|| format!("{gamma}"), |i| i.to_string());
        if rec.lambda.im != 0.0 {
            problems.push(format!("{label}: lambda not real"));
        }
        if !(rec.lambda.re < -0.25) {
            problems.push(format!("{label}: lambda >= -1/4"));
        }
        if dev > REL_TOL {
            problems.push(format!("{label}: lambda deviates by {dev:e}"));
        }
        if rec.nu.kind != OrderKind::Imaginary || (rec.nu.magnitude - gamma).abs() > 1e-9 * gamma {
            problems.push(format!("{label}: order is not i*gamma"));
        }
        match &rec.norm_integral {
            Ok(q) if q.value > 0.0 && q.value.is_finite() => {}
            Ok(q) => problems.push(format!("{label}: norm integral {}", q.value)),
            Err(e) => problems.push(format!("{label}: {e}")),
        }
    }
    let mut r = AuditReport::new("coupling_spectrum", "eq1,eq6-7")
        .param("zeros", records.len())
        .param(
            "norm_integrals",
            records
                .iter()
                .map(|rec| match &rec.norm_integral {
                    Ok(q) => format!("{:e}", q.value),
                    Err(_) => "none".to_string(),
                })
                .collect::<Vec<_>>()
                .join(";"),
        )
        .param("problems", if problems.is_empty() { "none".to_string() } else { problems.join("; ") });
    r.measured = records.iter().map(|rec| rec.lambda.re).collect();
    r.reference = records.iter().map(|rec| -(rec.s.im * rec.s.im + 0.25)).collect();
    r.ratio_or_residual = worst;
    r.tolerance = REL_TOL;
    r.verdict = if problems.is_empty() {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn map_examples() {
        assert_eq!(lambda_from_s(c(2.0, 0.0)), c(2.0, 0.0));
        assert_eq!(lambda_from_s(c(0.5, 0.0)), c(-0.25, 0.0));
        // −(14.134725² + 1/4) = −200.040450825625; the exact first ordinate
        // gives −200.04045483238685946
        let l = lambda_from_s(c(0.5, 14.134_725));
        assert!((l.re + 200.040_450_825_625).abs() < 1e-12 && l.im == 0.0);
        let l = lambda_from_s(c(0.5, 14.134_725_141_734_694));
        assert!((l.re + 200.040_454_832_386_86).abs() < 1e-11);
        assert!((l.re + 200.040_455).abs() < 1e-6);
    }

    #[test]
    fn inverse_examples() {
        let (a, b) = s_from_lambda(c(0.0, 0.0));
        assert_eq!((a, b), (c(1.0, 0.0), c(0.0, 0.0)));
        let (a, b) = s_from_lambda(c(-0.25, 0.0));
        assert_eq!((a, b), (c(0.5, 0.0), c(0.5, 0.0)));
        let (a, b) = s_from_lambda(c(-200.040_456, 0.0));
        assert!((a - c(0.5, 14.134_725)).norm() < 1e-6);
        assert!((b - c(0.5, -14.134_725)).norm() < 1e-6);
    }

    #[test]
    fn order_branches() {
        assert_eq!(nu_from_lambda(0.0), BesselOrder::real(0.5));
        assert_eq!(nu_from_lambda(-0.25), BesselOrder::real(0.0));
        let nu = nu_from_lambda(-200.040_456);
        assert_eq!(nu.kind, OrderKind::Imaginary);
        assert!((nu.magnitude - 14.134_725).abs() < 1e-6);
        assert!(nu_from_lambda(0.75).is_integer_real());
    }

    #[test]
    fn norm_integral_values() {
        let half = norm_integral_quadrature(BesselOrder::real(0.5)).unwrap();
        assert!((half.value - PI / 4.0).abs() < 1e-10);
        // π/(2 sinh π) = 0.13601452749106658148
        let one = norm_integral_quadrature(BesselOrder::imaginary(1.0)).unwrap();
        assert!((one.value - 0.136_014_527_491_066_58).abs() < 1e-11);
        assert!((one.value - 0.136_014_5).abs() < 1e-7);
        assert!(one.err_estimate <= 1e-9 * one.value);
    }

    #[test]
    fn order_one_and_above_diverge() {
        for nu in [1.0, 1.5] {
            let err = norm_integral_quadrature(BesselOrder::real(nu)).unwrap_err();
            assert!(err.is_divergence(), "{nu}: {err:?}");
        }
    }

    #[test]
    fn closed_form_examples() {
        let half = norm_integral_paper(BesselOrder::real(0.5)).unwrap();
        assert!((half - PI / 16.0).abs() < 1e-15);
        let one = norm_integral_paper(BesselOrder::imaginary(1.0)).unwrap();
        assert!((one - PI / (8.0 * PI.sinh())).abs() < 1e-15);
        assert!((one - 0.034_003_7).abs() < 1e-7);
        assert!(matches!(
            norm_integral_paper(BesselOrder::real(1.0)),
            Err(CouplingError::ClosedFormPole(_))
        ));
        assert_eq!(norm_integral_paper(BesselOrder::real(0.0)).unwrap(), 0.125);
        // sin changes sign past ν = 1, and so does the closed form
        assert!(pi_nu_over_sin(BesselOrder::real(1.5)).unwrap() < 0.0);
        // ≈ 1e-406: underflows to zero rather than producing NaN
        assert_eq!(pi_nu_over_sin(BesselOrder::imaginary(300.0)).unwrap(), 0.0);
        let mid = pi_nu_over_sin(BesselOrder::imaginary(30.0)).unwrap();
        assert!((mid / (2.0 * 30.0 * PI * (-30.0 * PI).exp()) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn single_half_order_ratio_is_four() {
        let a = audit_eq5(&[BesselOrder::real(0.5)]);
        assert!((a.common_ratio - 4.0).abs() < 1e-9);
        assert_eq!(a.verdict, Verdict::ConsistentUpToConstant);
    }

    #[test]
    fn divergent_entry_does_not_abort_the_batch() {
        let a = audit_eq5(&[BesselOrder::real(0.5), BesselOrder::real(1.5), BesselOrder::real(1.0)]);
        assert_eq!(a.entries.len(), 3);
        assert_eq!(a.entries[0].verdict, Verdict::Pass);
        assert_eq!(a.entries[1].verdict, Verdict::Fail);
        assert_eq!(a.verdict, Verdict::Fail);
        assert!(a.report().params["entry_failures"].contains("1.5"));
    }

    #[test]
    fn spectrum_of_nothing_is_empty() {
        assert!(coupling_spectrum(&[]).is_empty());
    }

    #[test]
    fn first_two_couplings() {
        let z = |index, gamma| CriticalZero {
            index,
            gamma,
            bracket: (gamma, gamma),
            abs_err: 0.0,
        };
        let recs = coupling_spectrum(&[z(1, 14.134_725_141_734_694), z(2, 21.022_039_638_771_555)]);
        // −442.17615057408249032 from the exact ordinate
        assert!((recs[1].lambda.re + 442.176_150_574_082_5).abs() < 1e-10);
        assert!((recs[0].lambda.re + 200.040_454_832_386_86).abs() < 1e-11);
        assert_eq!(spectrum_report(&recs).verdict, Verdict::Pass);
    }
}
