use rayon::prelude::*;

use super::{height_for_count, mean_gap, CriticalZero, ZeroError};
use crate::specfun::xi_critical_scaled_boosted;

/// Grid and refinement settings for [`scan_zeros_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanOptions {
    /// Final bracket width of every refined zero.
    pub tol: f64,
    /// Grid step; `None` picks `min(0.25, mean_gap(t_max)/8)`.
    pub step: Option<f64>,
    /// Zeta truncation multiplier, see [`crate::specfun::EulerMaclaurin::for_arg`].
    pub boost: u32,
    pub parallel: bool,
    /// How many times a suspicious grid cell is subdivided by 8.
    pub rescan_depth: u32,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            tol: 1e-10,
            step: None,
            boost: 1,
            parallel: true,
            rescan_depth: 3,
        }
    }
}

impl ScanOptions {
    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn step_for(&self, t_max: f64) -> f64 {
        self.step.unwrap_or_else(|| (mean_gap(t_max) / 8.0).min(0.25))
    }
}

/// A grid cell where `|Ξ|` dipped without a sign change and a finer pass found
/// a hidden pair of sign changes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanWarning {
    pub t_lo: f64,
    pub t_hi: f64,
    pub step: f64,
    pub extra_sign_changes: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanOutcome {
    pub zeros: Vec<CriticalZero>,
    pub warnings: Vec<ScanWarning>,
    pub step: f64,
    pub evaluations: usize,
}

fn eval(t: f64, boost: u32) -> Result<f64, ZeroError> {
    Ok(xi_critical_scaled_boosted(t, boost)?)
}

fn positive(v: f64) -> bool {
    v >= 0.0
}

fn sample(ts: &[f64], boost: u32, parallel: bool) -> Result<Vec<f64>, ZeroError> {
    if parallel {
        ts.par_iter().map(|&t| eval(t, boost)).collect()
    } else {
        ts.iter().map(|&t| eval(t, boost)).collect()
    }
}

struct Cells {
    brackets: Vec<(f64, f64)>,
    warnings: Vec<ScanWarning>,
    evaluations: usize,
}

/// Sign changes of `Ξ` over the sampled points, descending into cells around
/// same-sign local minima of `|Ξ|`.
fn sign_changes(
    ts: &[f64],
    vs: &[f64],
    step: f64,
    depth: u32,
    opts: &ScanOptions,
) -> Result<Cells, ZeroError> {
    let mut out = Cells {
        brackets: Vec::new(),
        warnings: Vec::new(),
        evaluations: 0,
    };
    for k in 1..ts.len() {
        if positive(vs[k - 1]) != positive(vs[k]) {
            out.brackets.push((ts[k - 1], ts[k]));
        }
        let dip = k + 1 < ts.len()
            && positive(vs[k - 1]) == positive(vs[k])
            && positive(vs[k]) == positive(vs[k + 1])
            && vs[k].abs() < vs[k - 1].abs()
            && vs[k].abs() < vs[k + 1].abs();
        if dip && depth > 0 {
            let (lo, hi) = (ts[k - 1], ts[k + 1]);
            let fine = step / 8.0;
            let n = ((hi - lo) / fine).ceil() as usize;
            let sub_t: Vec<f64> = (0..=n)
                .map(|i| if i == n { hi } else { lo + i as f64 * (hi - lo) / n as f64 })
                .collect();
            let mut sub_v = sample(&sub_t[1..n], opts.boost, opts.parallel)?;
            out.evaluations += sub_v.len();
            sub_v.insert(0, vs[k - 1]);
            sub_v.push(vs[k + 1]);
            let inner = sign_changes(&sub_t, &sub_v, fine, depth - 1, opts)?;
            out.evaluations += inner.evaluations;
            if !inner.brackets.is_empty() {
                out.warnings.push(ScanWarning {
                    t_lo: lo,
                    t_hi: hi,
                    step: fine,
                    extra_sign_changes: inner.brackets.len(),
                });
            }
            out.brackets.extend(inner.brackets);
            out.warnings.extend(inner.warnings);
        }
    }
    Ok(out)
}

/// All zeros with ordinate in `(0, t_max]`, serial and parallel runs giving
/// identical output.
pub fn scan_zeros_with(t_max: f64, opts: &ScanOptions) -> Result<ScanOutcome, ZeroError> {
    if !(t_max > 0.0) || !t_max.is_finite() {
        return Err(ZeroError::Domain(format!("t_max must be positive, got {t_max}")));
    }
    if !(opts.tol > 0.0) || !opts.tol.is_finite() {
        return Err(ZeroError::Domain(format!("tol must be positive, got {}", opts.tol)));
    }
    let step = opts.step_for(t_max);
    if !(step > 0.0) {
        return Err(ZeroError::Domain(format!("step must be positive, got {step}")));
    }
    // Grid points are k·step, so any partition of the work evaluates the same abscissae.
    let k_max = (t_max / step).ceil() as usize;
    let ts: Vec<f64> = (0..=k_max).map(|k| (k as f64 * step).min(t_max)).collect();
    let vs = sample(&ts, opts.boost, opts.parallel)?;
    let mut cells = sign_changes(&ts, &vs, step, opts.rescan_depth, opts)?;
    cells.brackets.sort_by(|a, b| a.0.total_cmp(&b.0));
    cells.warnings.sort_by(|a, b| a.t_lo.total_cmp(&b.t_lo));

    let refine = |&(lo, hi): &(f64, f64)| refine_zero_with((lo, hi), opts.tol, opts.boost);
    let mut zeros: Vec<CriticalZero> = if opts.parallel {
        cells.brackets.par_iter().map(refine).collect::<Result<_, _>>()?
    } else {
        cells.brackets.iter().map(refine).collect::<Result<_, _>>()?
    };
    for (i, z) in zeros.iter_mut().enumerate() {
        z.index = i + 1;
    }
    Ok(ScanOutcome {
        zeros,
        warnings: cells.warnings,
        step,
        evaluations: ts.len() + cells.evaluations,
    })
}

/// Zeros with ordinate in `(0, t_max]`, each to bracket width `tol`.
pub fn scan_zeros(t_max: f64, tol: f64) -> Result<Vec<CriticalZero>, ZeroError> {
    scan_zeros_with(t_max, &ScanOptions::default().with_tol(tol)).map(|o| o.zeros)
}

/// The first `n` zeros. The scan height starts from the smooth count and grows
/// by 10% until enough zeros are found.
pub fn first_zeros(n: usize, opts: &ScanOptions) -> Result<Vec<CriticalZero>, ZeroError> {
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut t_max = height_for_count(n);
    loop {
        let mut zeros = scan_zeros_with(t_max, opts)?.zeros;
        if zeros.len() >= n {
            zeros.truncate(n);
            return Ok(zeros);
        }
        t_max *= 1.1;
    }
}

/// Refines a sign-change bracket of `Ξ` to width `tol`.
pub fn refine_zero(bracket: (f64, f64), tol: f64) -> Result<CriticalZero, ZeroError> {
    refine_zero_with(bracket, tol, 1)
}

const MAX_ITER: usize = 200;

/// Illinois false position with a bisection step whenever an iteration fails
/// to halve the bracket.
pub fn refine_zero_with(
    bracket: (f64, f64),
    tol: f64,
    boost: u32,
) -> Result<CriticalZero, ZeroError> {
    let (mut a, mut b) = if bracket.0 <= bracket.1 {
        bracket
    } else {
        (bracket.1, bracket.0)
    };
    if !(tol > 0.0) || !a.is_finite() || !b.is_finite() {
        return Err(ZeroError::Domain(format!("bad bracket {bracket:?} or tol {tol}")));
    }
    let mut fa = eval(a, boost)?;
    let mut fb = eval(b, boost)?;
    if positive(fa) == positive(fb) {
        return Err(ZeroError::InvalidBracket { lo: a, hi: b });
    }
    // Which end was kept on the previous step: -1 left, +1 right, 0 none.
    let mut side = 0i8;
    for _ in 0..MAX_ITER {
        let width = b - a;
        if width <= tol {
            let gamma = 0.5 * (a + b);
            return Ok(CriticalZero {
                index: 0,
                gamma,
                bracket: (a, b),
                abs_err: 0.5 * width,
            });
        }
        let mut c = b - fb * (b - a) / (fb - fa);
        if !(c > a && c < b) {
            c = 0.5 * (a + b);
        }
        let fc = eval(c, boost)?;
        if positive(fc) == positive(fa) {
            a = c;
            fa = fc;
            if side == -1 {
                fb *= 0.5;
            }
            side = -1;
        } else {
            b = c;
            fb = fc;
            if side == 1 {
                fa *= 0.5;
            }
            side = 1;
        }
        if b - a > 0.5 * width {
            let m = 0.5 * (a + b);
            if m <= a || m >= b {
                break;
            }
            let fm = eval(m, boost)?;
            if positive(fm) == positive(fa) {
                a = m;
                fa = fm;
            } else {
                b = m;
                fb = fm;
            }
            side = 0;
        }
    }
    Err(ZeroError::NonConvergence {
        lo: a,
        hi: b,
        tol,
    })
}
