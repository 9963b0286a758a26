//! Agreement measures between predicted and true volumes.

use crate::error::{Error, Result};

/// Default relative-error threshold for the exceedance fraction.
pub const DEFAULT_THRESHOLD: f64 = 0.05;

/// Sample Pearson correlation coefficient.
pub fn pearson_correlation(predicted: &[f64], truth: &[f64]) -> Result<f64> {
    if predicted.len() != truth.len() {
        return Err(Error::LengthMismatch(predicted.len(), truth.len()));
    }
    let n = predicted.len();
    if n < 2 {
        return Err(Error::UndefinedCorrelation);
    }
    if predicted.iter().chain(truth).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("correlation input"));
    }
    let mean = |v: &[f64]| v.iter().sum::<f64>() / n as f64;
    let (mx, my) = (mean(predicted), mean(truth));
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in predicted.iter().zip(truth) {
        let (dx, dy) = (x - mx, y - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::UndefinedCorrelation);
    }
    let r = sxy / libm::sqrt(sxx * syy);
    Ok(r.clamp(-1.0, 1.0))
}

fn relative_errors<'a>(
    predicted: &'a [f64],
    truth: &'a [f64],
) -> Result<impl Iterator<Item = f64> + 'a> {
    if predicted.len() != truth.len() {
        return Err(Error::LengthMismatch(predicted.len(), truth.len()));
    }
    for (row, &value) in truth.iter().enumerate() {
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::InvalidVolume { row, value });
        }
    }
    Ok(predicted.iter().zip(truth).map(|(p, l)| (p - l).abs() / l))
}

/// Share of samples whose relative error `|p - l| / l` strictly exceeds
/// `threshold`. Zero for empty input.
pub fn exceedance_fraction(predicted: &[f64], truth: &[f64], threshold: f64) -> Result<f64> {
    if !(threshold.is_finite() && threshold > 0.0) {
        return Err(Error::InvalidConfig("threshold must be finite and > 0"));
    }
    let count = relative_errors(predicted, truth)?
        .filter(|&e| e > threshold)
        .count();
    if truth.is_empty() {
        return Ok(0.0);
    }
    Ok(count as f64 / truth.len() as f64)
}

/// Summary of predicted-vs-true agreement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalReport {
    /// `None` when the correlation is undefined (n < 2 or a constant vector).
    pub pearson_r: Option<f64>,
    pub exceed_fraction: f64,
    pub threshold: f64,
    pub n: usize,
    pub mean_abs_rel_error: f64,
    pub max_abs_rel_error: f64,
}

impl EvalReport {
    pub fn from_predictions(predicted: &[f64], truth: &[f64], threshold: f64) -> Result<Self> {
        let exceed_fraction = exceedance_fraction(predicted, truth, threshold)?;
        let n = truth.len();
        let (mut sum, mut max) = (0.0_f64, 0.0_f64);
        for e in relative_errors(predicted, truth)? {
            sum += e;
            max = max.max(e);
        }
        let mean_abs_rel_error = if n == 0 { 0.0 } else { sum / n as f64 };
        let pearson_r = match pearson_correlation(predicted, truth) {
            Ok(r) => Some(r),
            Err(Error::UndefinedCorrelation) => None,
            Err(e) => return Err(e),
        };
        Ok(Self {
            pearson_r,
            exceed_fraction,
            threshold,
            n,
            mean_abs_rel_error,
            max_abs_rel_error: max,
        })
    }
}
