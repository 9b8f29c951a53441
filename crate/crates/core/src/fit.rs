//! Straight-line least squares, the one fitting problem every audit reduces to.

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum FitError {
    #[error("need at least two samples, got {0}")]
    TooFewSamples(usize),
    #[error("all abscissae coincide")]
    Singular,
    #[error("non-finite sample at x = {0}")]
    NonFinite(f64),
}

/// `y ≈ intercept + slope·x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub intercept: f64,
    pub slope: f64,
    /// `max |y − ŷ|`.
    pub max_residual: f64,
    /// Standard error of the slope; 0 with exactly two samples.
    pub slope_stderr: f64,
    pub samples: usize,
}

impl LineFit {
    pub fn predict(&self, x: f64) -> f64 {
        self.intercept + self.slope * x
    }
}

pub fn fit_line(xs: &[f64], ys: &[f64]) -> Result<LineFit, FitError> {
    fit_line_weighted(xs, ys, &vec![1.0; xs.len()])
}

/// Minimizes `Σ w_k (y_k − ŷ_k)²`. With quadrature weights this is the
/// continuous least-squares line on the integration interval. The standard
/// error uses the sample count for its degrees of freedom.
pub fn fit_line_weighted(xs: &[f64], ys: &[f64], ws: &[f64]) -> Result<LineFit, FitError> {
    assert_eq!(xs.len(), ys.len(), "abscissae and ordinates differ in length");
    assert_eq!(xs.len(), ws.len(), "abscissae and weights differ in length");
    let n = xs.len();
    if n < 2 {
        return Err(FitError::TooFewSamples(n));
    }
    for (&x, &y) in xs.iter().zip(ys) {
        if !x.is_finite() || !y.is_finite() {
            return Err(FitError::NonFinite(x));
        }
    }
    let nf = n as f64;
    let w_sum: f64 = ws.iter().sum();
    let x_mean = xs.iter().zip(ws).map(|(x, w)| w * x).sum::<f64>() / w_sum;
    let y_mean = ys.iter().zip(ws).map(|(y, w)| w * y).sum::<f64>() / w_sum;
    let sxx: f64 = xs.iter().zip(ws).map(|(x, w)| w * (x - x_mean).powi(2)).sum();
    if sxx == 0.0 {
        return Err(FitError::Singular);
    }
    let sxy: f64 = xs
        .iter()
        .zip(ys)
        .zip(ws)
        .map(|((x, y), w)| w * (x - x_mean) * (y - y_mean))
        .sum();
    let slope = sxy / sxx;
    let intercept = y_mean - slope * x_mean;
    let residuals: Vec<f64> = xs.iter().zip(ys).map(|(x, y)| y - (intercept + slope * x)).collect();
    let max_residual = residuals.iter().fold(0.0f64, |m, r| m.max(r.abs()));
    let slope_stderr = if n > 2 {
        let ss: f64 = residuals.iter().zip(ws).map(|(r, w)| w * r * r).sum();
        (ss * nf / w_sum / (nf - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    Ok(LineFit {
        intercept,
        slope,
        max_residual,
        slope_stderr,
        samples: n,
    })
}

/// `n` points evenly spaced on `[a, b]`, endpoints included.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n)
            .map(|i| if i == n - 1 { b } else { a + (b - a) * i as f64 / (n - 1) as f64 })
            .collect(),
    }
}

/// `n` points in geometric progression from `a` to `b`, both positive.
pub fn geomspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    linspace(a.ln(), b.ln(), n).into_iter().map(f64::exp).collect()
}
