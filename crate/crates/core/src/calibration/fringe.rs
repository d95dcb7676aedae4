//! Piezo sweeps: phase-reference setpoints and detector-efficiency regression.

use std::f64::consts::{PI, TAU};

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::lm::{levenberg_marquardt, CurveModel, FitResult, LmOptions};
use super::scan::{draw_count, Abscissa, ScanRecord};
use crate::error::{check_unit_interval, Error, Result};
use crate::optics::{outcome_distribution, InterferometerConfig, PhaseSetting};
use crate::stats::EfficiencyMap;

/// Channel names in `(a, b)` order `00, 01, 10, 11`.
pub const CROSS_CHANNELS: [&str; 4] = ["A0B0", "A0B1", "A1B0", "A1B1"];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FringeScanParams {
    pub interferometer: InterferometerConfig,
    pub visibility: f64,
    /// Phases at zero drive; the sweep adds to Alice's local phase.
    pub baseline: PhaseSetting,
    pub volts_per_radian: f64,
    /// Extra phase `q v^2`; zero for a linear piezo.
    pub quadratic: f64,
    /// Mean cross-lab coincidences per point before efficiency losses.
    pub mean_counts: f64,
    pub efficiencies: [f64; 4],
    pub integration_time: f64,
}

impl Default for FringeScanParams {
    fn default() -> Self {
        Self {
            interferometer: InterferometerConfig::default(),
            visibility: 0.94,
            baseline: PhaseSetting::from_bits(false, false),
            volts_per_radian: 1.5,
            quadratic: 0.0,
            mean_counts: 5000.0,
            efficiencies: [1.0; 4],
            integration_time: 10.0,
        }
    }
}

impl FringeScanParams {
    /// Phase added by the piezo at drive `v`.
    pub fn drive_phase(&self, v: f64) -> f64 {
        v / self.volts_per_radian + self.quadratic * v * v
    }

    /// Total interferometer phase at drive `v`.
    pub fn total_phase(&self, v: f64) -> f64 {
        self.baseline.total_phase() + self.drive_phase(v)
    }
}

/// Cross-lab coincidence counts while sweeping Alice's piezo.
pub fn simulate_fringe_scan<R: Rng + ?Sized>(
    voltages: &[f64],
    params: &FringeScanParams,
    mut rng: Option<&mut R>,
) -> Result<ScanRecord> {
    check_unit_interval("visibility", params.visibility)?;
    if !(params.volts_per_radian.is_finite() && params.volts_per_radian != 0.0) {
        return Err(Error::Config("volts_per_radian must be finite and nonzero".into()));
    }
    if params.efficiencies.iter().any(|&e| !(0.0..=1.0).contains(&e)) {
        return Err(Error::Config("efficiencies must lie in [0, 1]".into()));
    }
    let mut counts = Vec::with_capacity(voltages.len());
    for &v in voltages {
        let b = params.baseline;
        let ps = b.with_local_phases(b.theta_a + params.drive_phase(v), b.theta_b);
        let dist = outcome_distribution(&params.interferometer, &ps, 1.0, params.visibility)?;
        let cross: f64 = (0..4u8).map(|k| dist.cross(k / 2, k % 2)).sum();
        let row = (0..4u8)
            .map(|k| {
                let mean = params.mean_counts * dist.cross(k / 2, k % 2) / cross * params.efficiencies[k as usize];
                draw_count(mean, rng.as_deref_mut())
            })
            .collect();
        counts.push(row);
    }
    let scan = ScanRecord {
        abscissa_kind: Abscissa::Volts,
        abscissa: voltages.to_vec(),
        channels: CROSS_CHANNELS.iter().map(|s| s.to_string()).collect(),
        counts,
        integration_time: params.integration_time,
    };
    scan.validate()?;
    Ok(scan)
}

/// Phase-reference sweep with ideal detectors.
pub fn simulate_phase_scan<R: Rng + ?Sized>(
    voltages: &[f64],
    params: &FringeScanParams,
    rng: Option<&mut R>,
) -> Result<ScanRecord> {
    let ideal = FringeScanParams {
        efficiencies: [1.0; 4],
        ..*params
    };
    simulate_fringe_scan(voltages, &ideal, rng)
}

/// Sweep used for efficiency regression; identical to a phase scan but with
/// the given per-pattern detection efficiencies.
pub fn simulate_efficiency_scan<R: Rng + ?Sized>(
    voltages: &[f64],
    params: &FringeScanParams,
    rng: Option<&mut R>,
) -> Result<ScanRecord> {
    simulate_fringe_scan(voltages, params, rng)
}

/// `C(v) = C0 (1 + k cos(v / s + delta))`, parameters `[C0, k, s, delta]`.
pub struct Fringe;

impl CurveModel for Fringe {
    fn n_params(&self) -> usize {
        4
    }

    fn eval(&self, v: f64, p: &[f64]) -> f64 {
        p[0] * (1.0 + p[1] * (v / p[2] + p[3]).cos())
    }

    fn gradient(&self, v: f64, p: &[f64], out: &mut [f64]) {
        let u = v / p[2] + p[3];
        let (s, c) = u.sin_cos();
        out[0] = 1.0 + p[1] * c;
        out[1] = p[0] * c;
        out[2] = p[0] * p[1] * s * v / (p[2] * p[2]);
        out[3] = -p[0] * p[1] * s;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseSetpoints {
    /// Drive voltage at the correlated-events maximum nearest the scan centre.
    pub zero: f64,
    /// Half a fringe away from `zero`, towards the scan centre.
    pub pi: f64,
    /// Fringe period in volts.
    pub period: f64,
    /// Fit of the correlated channels `[C0, k, s, delta]`, normalized so
    /// that `k > 0` and `s > 0`.
    pub fit: FitResult,
}

/// Correlated-pattern counts `A0B0 + A1B1` of a fringe scan.
fn correlated(scan: &ScanRecord) -> Result<Vec<f64>> {
    let a = scan.channel("A0B0");
    let b = scan.channel("A1B1");
    match (a, b) {
        (Some(a), Some(b)) => Ok(a.iter().zip(&b).map(|(x, y)| x + y).collect()),
        _ => Err(Error::InsufficientData("fringe scan needs A0B0 and A1B1 channels".into())),
    }
}

fn fringe_seed(vs: &[f64], ys: &[f64], w: &[f64], span: f64, min_step: f64) -> [f64; 4] {
    let mut best = (f64::INFINITY, [ys.iter().sum::<f64>() / ys.len() as f64, 0.0, span, 0.0]);
    // Periods from four samples per fringe up to twice the span.
    let (p_lo, p_hi) = (4.0 * min_step, 2.0 * span);
    if p_lo >= p_hi {
        return best.1;
    }
    let n_grid = 400;
    for k in 0..n_grid {
        let period = p_lo * (p_hi / p_lo).powf(k as f64 / (n_grid - 1) as f64);
        let s = period / TAU;
        // Weighted least squares on [1, cos, sin].
        let mut ata = nalgebra::Matrix3::<f64>::zeros();
        let mut aty = nalgebra::Vector3::<f64>::zeros();
        for ((&v, &y), &wi) in vs.iter().zip(ys).zip(w) {
            let (sn, cs) = (v / s).sin_cos();
            let row = nalgebra::Vector3::new(1.0, cs, sn);
            ata += wi * row * row.transpose();
            aty += wi * y * row;
        }
        let Some(sol) = ata.cholesky().map(|c| c.solve(&aty)) else {
            continue;
        };
        let rss: f64 = vs
            .iter()
            .zip(ys)
            .zip(w)
            .map(|((&v, &y), &wi)| {
                let (sn, cs) = (v / s).sin_cos();
                wi * (y - sol[0] - sol[1] * cs - sol[2] * sn).powi(2)
            })
            .sum();
        if rss < best.0 && sol[0] > 0.0 {
            let amp = sol[1].hypot(sol[2]);
            best = (rss, [sol[0], amp / sol[0], s, (-sol[2]).atan2(sol[1])]);
        }
    }
    best.1
}

/// Sinusoidal fit of the correlated fringe; returns the 0 and pi setpoints.
pub fn find_phase_setpoints(scan: &ScanRecord) -> Result<PhaseSetpoints> {
    scan.validate()?;
    let ys = correlated(scan)?;
    if ys.len() < 8 {
        return Err(Error::InsufficientData(format!("phase fit needs at least 8 points, got {}", ys.len())));
    }
    let vs = &scan.abscissa;
    let (lo, hi) = vs.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &x| (l.min(x), h.max(x)));
    let span = hi - lo;
    let min_step = vs.windows(2).map(|p| (p[1] - p[0]).abs()).fold(f64::INFINITY, f64::min);
    let w: Vec<f64> = ys.iter().map(|&y| 1.0 / y.max(1.0)).collect();

    let seed = fringe_seed(vs, &ys, &w, span, min_step);
    if seed[1] == 0.0 {
        return Err(Error::InsufficientData("no fringe visible in phase scan".into()));
    }
    let mut fit = levenberg_marquardt(&Fringe, &["c0", "contrast", "volts_per_radian", "delta"], vs, &ys, Some(&w), &seed, LmOptions::default());
    if !fit.converged {
        return Err(Error::NoConvergence {
            iterations: fit.iterations,
        });
    }
    // Canonical sign: contrast and scale positive.
    let p = &mut fit.params;
    if p[1] < 0.0 {
        p[1] = -p[1];
        p[3] += PI;
    }
    if p[2] < 0.0 {
        p[2] = -p[2];
        p[3] = -p[3];
    }
    p[3] = p[3].rem_euclid(TAU);
    let (s, delta) = (p[2], p[3]);
    let period = TAU * s;
    if span < period * (1.0 - 1e-9) {
        return Err(Error::InsufficientData(format!(
            "scan spans {span} V but one fringe is {period} V"
        )));
    }
    // Maxima at v = s (2 pi n - delta).
    let center = 0.5 * (lo + hi);
    let n = ((center / s + delta) / TAU).round();
    let zero = s * (TAU * n - delta);
    let pi = if zero <= center { zero + PI * s } else { zero - PI * s };
    Ok(PhaseSetpoints { zero, pi, period, fit })
}

/// Relative detection efficiency of each cross-lab pattern.
///
/// All four patterns follow one fringe, in phase or in antiphase, so the
/// counts of any two are linearly related with slope `+-eta_j / eta_i`.
/// Each slope is the Poisson-corrected reduced-major-axis estimate
/// `sqrt((var_j - mean_j) / (var_i - mean_i))`; the six log-ratios are
/// combined by least squares and the result is scaled so the largest is 1.
pub fn fit_relative_efficiencies(scan: &ScanRecord) -> Result<EfficiencyMap> {
    scan.validate()?;
    if scan.len() < 3 {
        return Err(Error::InsufficientData("efficiency regression needs at least 3 points".into()));
    }
    let mut signal_var = [0.0; 4];
    for (k, name) in CROSS_CHANNELS.iter().enumerate() {
        let ys = scan
            .channel(name)
            .ok_or_else(|| Error::InsufficientData(format!("efficiency scan lacks channel {name}")))?;
        let n = ys.len() as f64;
        let mean = ys.iter().sum::<f64>() / n;
        let var = ys.iter().map(|y| (y - mean).powi(2)).sum::<f64>() / (n - 1.0);
        signal_var[k] = var - mean;
        if !(signal_var[k] > 0.0) {
            return Err(Error::RankDeficient(format!(
                "channel {name} shows no fringe above shot noise"
            )));
        }
    }
    // Least squares for ln eta with zero-mean gauge: ln eta_k = mean_j ln(eta_k / eta_j).
    let mut log_eta = [0.0; 4];
    for (k, slot) in log_eta.iter_mut().enumerate() {
        *slot = (0..4).map(|j| 0.5 * (signal_var[k] / signal_var[j]).ln()).sum::<f64>() / 4.0;
    }
    EfficiencyMap::from_relative(log_eta.map(f64::exp))
}
