//! Hong-Ou-Mandel dip: delay-stage scans and their Gaussian fit.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::lm::{levenberg_marquardt, CurveModel, FitResult, LmOptions};
use super::scan::{draw_count, Abscissa, ScanRecord};
use crate::error::{check_unit_interval, Error, Result};

pub const HOM_CHANNEL: &str = "coincidences";
const MIN_POINTS: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HomScanParams {
    pub visibility: f64,
    /// Mean coincidences per point far from the dip.
    pub c_max: f64,
    /// Gaussian width of the dip in micrometres.
    pub coherence_width: f64,
    /// Delay of perfect temporal overlap in micrometres.
    pub center: f64,
    pub integration_time: f64,
}

impl Default for HomScanParams {
    fn default() -> Self {
        Self {
            visibility: 0.94,
            c_max: 2500.0,
            coherence_width: 25.0,
            center: 0.0,
            integration_time: 5.0,
        }
    }
}

/// `G(x) = C - A exp(-(x - x0)^2 / (2 sigma^2))`, parameters `[C, A, x0, sigma]`.
pub struct GaussianDip;

impl CurveModel for GaussianDip {
    fn n_params(&self) -> usize {
        4
    }

    fn eval(&self, x: f64, p: &[f64]) -> f64 {
        let z = (x - p[2]) / p[3];
        p[0] - p[1] * (-0.5 * z * z).exp()
    }

    fn gradient(&self, x: f64, p: &[f64], out: &mut [f64]) {
        let z = (x - p[2]) / p[3];
        let g = (-0.5 * z * z).exp();
        out[0] = 1.0;
        out[1] = -g;
        out[2] = -p[1] * g * z / p[3];
        out[3] = -p[1] * g * z * z / p[3];
    }
}

/// Single-channel coincidence scan across `delays` (micrometres).
///
/// Counts are Poisson around the dip profile; with `rng = None` they are
/// the rounded expectation.
pub fn simulate_hom_scan<R: Rng + ?Sized>(
    delays: &[f64],
    params: &HomScanParams,
    mut rng: Option<&mut R>,
) -> Result<ScanRecord> {
    check_unit_interval("visibility", params.visibility)?;
    if !(params.c_max >= 0.0 && params.coherence_width > 0.0) {
        return Err(Error::Config("HOM scan needs c_max >= 0 and coherence_width > 0".into()));
    }
    let truth = [
        params.c_max,
        params.visibility * params.c_max,
        params.center,
        params.coherence_width,
    ];
    let counts = delays
        .iter()
        .map(|&x| vec![draw_count(GaussianDip.eval(x, &truth), rng.as_deref_mut())])
        .collect();
    let scan = ScanRecord {
        abscissa_kind: Abscissa::DelayMicrons,
        abscissa: delays.to_vec(),
        channels: vec![HOM_CHANNEL.to_string()],
        counts,
        integration_time: params.integration_time,
    };
    scan.validate()?;
    Ok(scan)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HomFit {
    /// `[C_max, A, x0, sigma]`.
    pub fit: FitResult,
    pub visibility: f64,
    pub visibility_uncertainty: f64,
    /// Raw `A / C_max` fell outside `[0, 1]` and was clamped.
    pub clamped: bool,
    /// Flat data; no dip could be resolved.
    pub degenerate: bool,
}

fn flat_fit(ys: &[f64], w: &[f64]) -> HomFit {
    let wsum: f64 = w.iter().sum();
    let mean = ys.iter().zip(w).map(|(y, w)| y * w).sum::<f64>() / wsum;
    let rss = ys.iter().zip(w).map(|(y, w)| w * (y - mean).powi(2)).sum();
    HomFit {
        fit: FitResult {
            names: NAMES.iter().map(|s| s.to_string()).collect(),
            params: vec![mean, 0.0, f64::NAN, f64::NAN],
            uncertainties: None,
            rss,
            converged: true,
            iterations: 0,
            covariance: None,
        },
        visibility: 0.0,
        visibility_uncertainty: 1.0,
        clamped: false,
        degenerate: true,
    }
}

const NAMES: [&str; 4] = ["c_max", "amplitude", "x0", "sigma"];

/// Weighted linear least squares for `(C, A)` with the dip shape fixed.
fn linear_seed(xs: &[f64], ys: &[f64], w: &[f64], x0: f64, sigma: f64) -> (f64, f64, f64) {
    let (mut s1, mut sg, mut sgg, mut sy, mut sgy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for ((&x, &y), &wi) in xs.iter().zip(ys).zip(w) {
        let z = (x - x0) / sigma;
        let g = -(-0.5 * z * z).exp();
        s1 += wi;
        sg += wi * g;
        sgg += wi * g * g;
        sy += wi * y;
        sgy += wi * g * y;
    }
    let det = s1 * sgg - sg * sg;
    if det.abs() < 1e-300 {
        return (sy / s1, 0.0, f64::INFINITY);
    }
    let c = (sgg * sy - sg * sgy) / det;
    let a = (s1 * sgy - sg * sy) / det;
    let rss = weighted_rss(xs, ys, w, &[c, a, x0, sigma]);
    (c, a, rss)
}

fn weighted_rss(xs: &[f64], ys: &[f64], w: &[f64], p: &[f64]) -> f64 {
    xs.iter()
        .zip(ys)
        .zip(w)
        .map(|((&x, &y), &wi)| wi * (y - GaussianDip.eval(x, p)).powi(2))
        .sum()
}

/// Fits the dip profile and derives `V = (C_max - C_min) / C_max = A / C_max`.
pub fn fit_hom_dip(scan: &ScanRecord) -> Result<HomFit> {
    fit_hom_dip_with(scan, LmOptions::default())
}

pub fn fit_hom_dip_with(scan: &ScanRecord, opts: LmOptions) -> Result<HomFit> {
    scan.validate()?;
    let ys = scan
        .channel(HOM_CHANNEL)
        .ok_or_else(|| Error::InsufficientData(format!("scan has no '{HOM_CHANNEL}' channel")))?;
    if ys.len() < MIN_POINTS {
        return Err(Error::InsufficientData(format!(
            "HOM fit needs at least {MIN_POINTS} points, got {}",
            ys.len()
        )));
    }
    let xs = &scan.abscissa;
    // Poisson weights.
    let w: Vec<f64> = ys.iter().map(|&y| 1.0 / y.max(1.0)).collect();
    if ys.iter().all(|&y| y == ys[0]) {
        return Ok(flat_fit(&ys, &w));
    }

    let (lo, hi) = xs.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &x| (l.min(x), h.max(x)));
    let span = hi - lo;
    let min_step = xs.windows(2).map(|p| (p[1] - p[0]).abs()).fold(f64::INFINITY, f64::min);
    let mut best = (f64::INFINITY, [0.0; 4]);
    for &x0 in xs {
        for k in 0..24 {
            // Widths from half a step to the full span.
            let sigma = 0.5 * min_step * (2.0 * span / min_step).powf(k as f64 / 23.0);
            let (c, a, rss) = linear_seed(xs, &ys, &w, x0, sigma);
            if rss < best.0 {
                best = (rss, [c, a, x0, sigma]);
            }
        }
    }

    let fit = levenberg_marquardt(&GaussianDip, &NAMES, xs, &ys, Some(&w), &best.1, opts);
    if !fit.converged {
        return Err(Error::NoConvergence {
            iterations: fit.iterations,
        });
    }
    let [c, a] = [fit.params[0], fit.params[1]];
    let cov = fit.covariance.as_ref();
    let resolved = cov.map(|m| a.abs() > 2.0 * m[(1, 1)].max(0.0).sqrt()).unwrap_or(false);
    if !resolved || c <= 0.0 {
        let mut flat = flat_fit(&ys, &w);
        flat.fit = fit;
        return Ok(flat);
    }

    let raw = a / c;
    let visibility = raw.clamp(0.0, 1.0);
    let visibility_uncertainty = cov
        .map(|m| {
            // Gradient of A/C with respect to (C, A).
            let (dc, da) = (-a / (c * c), 1.0 / c);
            (dc * dc * m[(0, 0)] + da * da * m[(1, 1)] + 2.0 * dc * da * m[(0, 1)]).max(0.0).sqrt()
        })
        .unwrap_or(1.0);
    Ok(HomFit {
        fit,
        visibility,
        visibility_uncertainty,
        clamped: visibility != raw,
        degenerate: false,
    })
}
