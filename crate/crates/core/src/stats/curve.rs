use serde::{Deserialize, Serialize};

use super::binomial::ConfidenceResult;
use crate::error::{Error, Result};

/// Quartile convention used by [`confidence_curve_stats`].
pub const QUARTILE_CONVENTION: &str =
    "median: middle value, midpoint of the two middle values for even counts; \
     quartiles: medians of the lower and upper halves, excluding the median for odd counts";

/// Box-plot summary of the confidence ensemble at one event index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    /// 1-based count of retained events.
    pub event_index: usize,
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
    /// Confidences beyond 1.5 IQR from the box.
    pub outliers: Vec<f64>,
    /// `1 - median`, computed from the p-values so it stays accurate far
    /// below machine epsilon.
    pub residual: f64,
}

fn median_sorted(v: &[f64]) -> f64 {
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// `(q1, median, q3)` of an ascending slice.
fn quartiles_sorted(v: &[f64]) -> (f64, f64, f64) {
    let n = v.len();
    let half = n / 2;
    let lower = &v[..half.max(1)];
    let upper = &v[n - half.max(1)..];
    (median_sorted(lower), median_sorted(v), median_sorted(upper))
}

/// Per-event median, quartiles, outliers and residual over an ensemble of
/// equal-length confidence trajectories.
pub fn confidence_curve_stats(repetitions: &[Vec<ConfidenceResult>]) -> Result<Vec<CurvePoint>> {
    if repetitions.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "need at least 2 trajectories, got {}",
            repetitions.len()
        )));
    }
    let len = repetitions[0].len();
    for r in repetitions {
        if r.len() != len {
            return Err(Error::LengthMismatch {
                expected: len,
                found: r.len(),
            });
        }
    }
    let mut out = Vec::with_capacity(len);
    let mut conf = Vec::with_capacity(repetitions.len());
    let mut pvals = Vec::with_capacity(repetitions.len());
    for i in 0..len {
        conf.clear();
        pvals.clear();
        for r in repetitions {
            conf.push(r[i].confidence);
            pvals.push(r[i].p_value);
        }
        conf.sort_by(f64::total_cmp);
        pvals.sort_by(f64::total_cmp);
        let (q1, median, q3) = quartiles_sorted(&conf);
        let iqr = q3 - q1;
        let (lo, hi) = (q1 - 1.5 * iqr, q3 + 1.5 * iqr);
        out.push(CurvePoint {
            event_index: i + 1,
            median,
            q1,
            q3,
            outliers: conf.iter().copied().filter(|&c| c < lo || c > hi).collect(),
            residual: median_sorted(&pvals),
        });
    }
    Ok(out)
}

/// Least-squares line through `(x, ln y)` for positive `y`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogLinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub points: usize,
}

pub fn log_linear_fit(xs: &[f64], ys: &[f64]) -> Result<LogLinearFit> {
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|(_, &y)| y > 0.0 && y.is_finite())
        .map(|(&x, &y)| (x, y.ln()))
        .collect();
    let n = pts.len();
    if n < 3 {
        return Err(Error::InsufficientData(format!("log-linear fit needs 3 positive points, got {n}")));
    }
    let nf = n as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / nf;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::RankDeficient("all abscissae equal".into()));
    }
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok(LogLinearFit {
        slope,
        intercept: my - slope * mx,
        r_squared,
        points: n,
    })
}
