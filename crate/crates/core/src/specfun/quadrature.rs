//! Double-exponential quadrature on the half line.
//!
//! Every integral over `(0, ∞)` is pulled back to a trapezoidal sum over the
//! whole real line through a change of variables `x = φ(t)`. When the
//! transformed integrand decays double-exponentially the trapezoidal rule
//! converges geometrically in the number of nodes, so the step is halved
//! until two consecutive levels agree.
//!
//! Three maps are provided:
//!
//! * [`HalfLineMap::ExpSinh`]: `x = exp(π/2 · sinh t)`, the general purpose
//!   choice for integrable algebraic singularities at the origin and
//!   exponential decay at infinity.
//! * [`HalfLineMap::Exp`]: `x = e^t`, better when the integrand oscillates in
//!   `log x` near the origin (the sinh stretching would otherwise make the
//!   oscillation arbitrarily fast in `t`).
//! * [`HalfLineMap::Even`]: `x = t` for `t ≥ 0`, for integrands that are even
//!   and already decay double-exponentially, such as `e^{-x cosh t}`.

use std::f64::consts::FRAC_PI_2;

use thiserror::Error;

/// Outcome of a converged quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    /// Difference between the last two refinement levels; non-negative.
    pub err_estimate: f64,
    /// Integrand evaluations spent, always at least one.
    pub evaluations: usize,
    /// `∫ |f|` over the same nodes. Equal to `|value|` for one-signed integrands
    /// and much larger when the integrand cancels.
    pub l1_norm: f64,
    pub levels: u32,
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum QuadError {
    #[error("quadrature did not converge: value {value:e}, error estimate {err_estimate:e} after {evaluations} evaluations")]
    NonConvergence {
        value: f64,
        err_estimate: f64,
        evaluations: usize,
    },
    /// The transformed integrand does not die out towards an end of the range,
    /// so the partial sums keep growing as the range is extended.
    #[error("integral diverges: integrand does not decay near x = {at:e}")]
    Divergent { at: f64 },
    #[error("integrand returned NaN at x = {at:e}")]
    NonFinite { at: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HalfLineMap {
    ExpSinh,
    Exp,
    Even,
}

impl HalfLineMap {
    #[inline]
    fn point(self, t: f64) -> (f64, f64) {
        match self {
            HalfLineMap::ExpSinh => {
                let x = (FRAC_PI_2 * t.sinh()).exp();
                (x, FRAC_PI_2 * t.cosh() * x)
            }
            HalfLineMap::Exp => {
                let x = t.exp();
                (x, x)
            }
            HalfLineMap::Even => (t, 1.0),
        }
    }

    /// Range of `t` outside of which `x` under- or overflows.
    fn t_limits(self) -> (f64, f64) {
        match self {
            // π/2·sinh(6.8) ≈ 705
            HalfLineMap::ExpSinh => (-6.8, 6.8),
            HalfLineMap::Exp => (-705.0, 705.0),
            HalfLineMap::Even => (0.0, 1.0e4),
        }
    }

    /// Tails are not trusted to have died out before `|t|` reaches this far.
    fn min_extent(self) -> f64 {
        match self {
            HalfLineMap::ExpSinh => 3.0,
            HalfLineMap::Exp => 4.0,
            HalfLineMap::Even => 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    /// Convergence is declared when the level-to-level change is below
    /// `max(abs_tol, rel_tol · ∫|f|)`.
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub initial_step: f64,
    pub min_levels: u32,
    pub max_levels: u32,
    /// Halvings still performed after the tolerance is first met.
    pub extra_levels: u32,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions {
            rel_tol: 1e-12,
            abs_tol: 0.0,
            initial_step: 0.5,
            min_levels: 2,
            max_levels: 14,
            extra_levels: 0,
        }
    }
}

impl QuadOptions {
    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    /// Same tolerance, but the step is halved once more after convergence,
    /// doubling the node budget.
    pub fn deeper(mut self) -> Self {
        self.extra_levels += 1;
        self
    }
}

// Terms below this fraction of the running L1 sum count as negligible tail.
const TAIL_EPS: f64 = 1e-18;
const TAIL_RUN: usize = 4;

/// Integrates `f` over `(0, ∞)` with the exp-sinh map and relative tolerance `tol`.
pub fn integrate_semiinfinite<F>(f: F, tol: f64) -> Result<QuadratureResult, QuadError>
where
    F: Fn(f64) -> f64,
{
    integrate_half_line(f, HalfLineMap::ExpSinh, &QuadOptions::default().with_rel_tol(tol))
}

/// Integrates `f` over `(0, ∞)` through `map`.
pub fn integrate_half_line<F>(
    f: F,
    map: HalfLineMap,
    opts: &QuadOptions,
) -> Result<QuadratureResult, QuadError>
where
    F: Fn(f64) -> f64,
{
    let g = |t: f64| -> Result<f64, QuadError> {
        let (x, w) = map.point(t);
        if w == 0.0 {
            return Ok(0.0);
        }
        let y = f(x);
        if y.is_nan() {
            return Err(QuadError::NonFinite { at: x });
        }
        if y.is_infinite() {
            return Err(QuadError::Divergent { at: x });
        }
        let v = y * w;
        if v.is_infinite() {
            return Err(QuadError::Divergent { at: x });
        }
        Ok(v)
    };

    let h0 = opts.initial_step;
    let (t_min, t_max) = map.t_limits();
    let mut evaluations = 0usize;

    // Level 0: march outwards from the origin of t until the tails vanish.
    let centre = g(0.0)?;
    evaluations += 1;
    let centre_weight = if map == HalfLineMap::Even { 0.5 } else { 1.0 };
    let mut sum = centre_weight * centre;
    let mut l1 = centre_weight * centre.abs();

    let mut k_hi = 0i64;
    let mut k_lo = 0i64;
    for dir in [1i64, -1] {
        if map == HalfLineMap::Even && dir < 0 {
            continue;
        }
        let limit = if dir > 0 { t_max } else { t_min };
        let mut run = 0usize;
        let mut k = 0i64;
        loop {
            k += dir;
            let t = k as f64 * h0;
            if t.abs() > limit.abs() {
                let (x, _) = map.point(t - dir as f64 * h0);
                return Err(QuadError::Divergent { at: x });
            }
            let v = g(t)?;
            evaluations += 1;
            sum += v;
            l1 += v.abs();
            if v.abs() <= TAIL_EPS * l1 {
                run += 1;
            } else {
                run = 0;
            }
            if run >= TAIL_RUN && t.abs() >= map.min_extent() {
                break;
            }
        }
        if dir > 0 {
            k_hi = k;
        } else {
            k_lo = k;
        }
    }
    let t_lo = k_lo as f64 * h0;
    let t_hi = k_hi as f64 * h0;

    let mut h = h0;
    let mut estimate = sum * h;
    let mut err = f64::INFINITY;
    let mut converged_at: Option<u32> = None;
    for level in 1..=opts.max_levels + opts.extra_levels {
        h *= 0.5;
        // New nodes are the odd multiples of the halved step.
        let j_lo = ((t_lo / h - 1.0) / 2.0).ceil() as i64;
        let j_hi = ((t_hi / h - 1.0) / 2.0).floor() as i64;
        for j in j_lo..=j_hi {
            let t = (2 * j + 1) as f64 * h;
            let v = g(t)?;
            evaluations += 1;
            sum += v;
            l1 += v.abs();
        }
        let refined = sum * h;
        err = (refined - estimate).abs();
        estimate = refined;
        let threshold = opts.abs_tol.max(opts.rel_tol * l1 * h);
        if converged_at.is_none() && level >= opts.min_levels && err <= threshold {
            converged_at = Some(level);
        }
        if converged_at.is_some_and(|c| level >= c + opts.extra_levels) {
            return Ok(QuadratureResult {
                value: estimate,
                err_estimate: err,
                evaluations,
                l1_norm: l1 * h,
                levels: level,
            });
        }
    }
    Err(QuadError::NonConvergence {
        value: estimate,
        err_estimate: err,
        evaluations,
    })
}
