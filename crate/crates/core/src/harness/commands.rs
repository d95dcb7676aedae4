//! The five pipelines behind the command-line subcommands. Each is a pure
//! function of its config: same config and seed, same files.

use std::path::PathBuf;

use rayon::prelude::*;
use serde::Serialize;

use super::config::RunConfig;
use super::output::{scan_table, write_json, Cell, Table};
use crate::calibration::{
    find_phase_setpoints, fit_hom_dip, fit_relative_efficiencies, simulate_efficiency_scan, simulate_hom_scan,
    simulate_phase_scan, HomFit, PhaseSetpoints,
};
use crate::error::Result;
use crate::game::{pwin_lambda, pwin_purity, run_experiment, with_workers, EventStream, PhaseNoise, RunRecord};
use crate::optics::InterferometerConfig;
use crate::rng::{child_seed, substream, Domain};
use crate::state::{lambda_from_purity, sigma_from_lambda, DecoherenceSpec};
use crate::stats::{
    confidence_curve_stats, confidence_trajectory, log_linear_fit, normalized_win_rate, CurvePoint, EfficiencyMap,
    LogLinearFit, QUARTILE_CONVENTION,
};

/// Visibility at which the published headline value was evaluated.
pub const REFERENCE_VISIBILITY: f64 = 0.95;
/// Published headline value, quoted to four digits.
pub const REFERENCE_PWIN: f64 = 0.7162;
/// Confidence level the headline result is stated at.
pub const CONFIDENCE_TARGET: f64 = 0.99;

/// Mean, sample standard deviation and standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Summary {
    pub n: usize,
    pub mean: f64,
    pub std: f64,
    pub sem: f64,
}

impl Summary {
    pub fn of(xs: &[f64]) -> Self {
        let n = xs.len();
        let nf = n as f64;
        let mean = xs.iter().sum::<f64>() / nf;
        let var = if n > 1 {
            xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (nf - 1.0)
        } else {
            0.0
        };
        Self {
            n,
            mean,
            std: var.sqrt(),
            sem: (var / nf).sqrt(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalyticReport {
    /// Configured splitters, visibility and dephasing.
    pub configured: f64,
    /// Balanced splitters, perfect visibility, pure state.
    pub ideal: f64,
    /// Fully dephased test photon.
    pub classical: f64,
    /// Configured splitters, pure state, [`REFERENCE_VISIBILITY`].
    pub at_reference_visibility: f64,
    pub purity_floor: f64,
    pub files: Vec<PathBuf>,
}

/// Closed-form win probabilities over a lambda grid, plus headline values.
pub fn cmd_analytic(cfg: &RunConfig) -> Result<AnalyticReport> {
    cfg.validate()?;
    let ifm = cfg.interferometer()?;
    let deco = cfg.decoherence()?;
    let floor = cfg.purity_floor()?;

    let mut grid = Table::new("analytic", &["lambda", "sigma", "purity", "pwin", "pwin_perfect_visibility"]);
    for i in 0..cfg.analytic_points {
        let lambda = i as f64 / (cfg.analytic_points - 1) as f64;
        let d = DecoherenceSpec::from_lambda(lambda, &ifm.test)?;
        grid.push(vec![
            lambda.into(),
            d.sigma.into(),
            d.purity.into(),
            pwin_lambda(lambda, cfg.visibility, &ifm).into(),
            pwin_lambda(lambda, 1.0, &ifm).into(),
        ]);
    }

    let report = AnalyticReport {
        configured: pwin_lambda(deco.lambda, cfg.visibility, &ifm),
        ideal: pwin_lambda(1.0, 1.0, &InterferometerConfig::balanced()),
        classical: pwin_lambda(0.0, cfg.visibility, &ifm),
        at_reference_visibility: pwin_lambda(1.0, REFERENCE_VISIBILITY, &ifm),
        purity_floor: floor,
        files: Vec::new(),
    };

    let mut head = Table::new("analytic", &["label", "visibility", "lambda", "purity", "pwin"]);
    head.meta("reported_reference_pwin", REFERENCE_PWIN);
    let rows = [
        ("configured", cfg.visibility, deco.lambda, deco.purity, report.configured),
        ("ideal", 1.0, 1.0, 1.0, report.ideal),
        ("classical", cfg.visibility, 0.0, floor, report.classical),
        ("reference_visibility", REFERENCE_VISIBILITY, 1.0, 1.0, report.at_reference_visibility),
    ];
    for (label, v, l, p, w) in rows {
        head.push(vec![label.into(), v.into(), l.into(), p.into(), w.into()]);
    }

    let files = vec![
        grid.write(&cfg.out_dir, "analytic.csv", cfg)?,
        head.write(&cfg.out_dir, "analytic_headline.csv", cfg)?,
    ];
    Ok(AnalyticReport { files, ..report })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub record: RunRecord,
    /// Efficiency-normalized win rate per instance.
    pub win_rates: Vec<f64>,
    pub summary: Summary,
    pub model: f64,
    pub files: Vec<PathBuf>,
}

/// One simulated experimental run with per-instance tallies.
pub fn cmd_run(cfg: &RunConfig) -> Result<RunReport> {
    cfg.validate()?;
    let params = cfg.experiment()?;
    let record = run_experiment(&params, cfg.workers)?;
    let eta = EfficiencyMap::from_relative(cfg.efficiencies)?;
    let win_rates = record
        .instances
        .iter()
        .map(|inst| normalized_win_rate(inst, &eta, &params.interferometer))
        .collect::<Result<Vec<_>>>()?;
    let summary = Summary::of(&win_rates);
    let model = pwin_lambda(cfg.decoherence()?.lambda, cfg.visibility, &params.interferometer);

    let mut inst = Table::new(
        "run",
        &[
            "instance", "x", "y", "phi_x", "c_a0b0", "c_a0b1", "c_a1b0", "c_a1b1", "correlated", "anticorrelated",
            "in_lab_a", "in_lab_b", "win_rate",
        ],
    );
    for (rec, &w) in record.instances.iter().zip(&win_rates) {
        let c = rec.coincidences;
        inst.push(vec![
            rec.index.into(),
            rec.x.into(),
            rec.y.into(),
            rec.phi_x.into(),
            c[0].into(),
            c[1].into(),
            c[2].into(),
            c[3].into(),
            (c[0] + c[3]).into(),
            (c[1] + c[2]).into(),
            rec.in_lab[0].into(),
            rec.in_lab[1].into(),
            w.into(),
        ]);
    }
    let mut sum = Table::new("run", &["instances", "mean_win_rate", "std_win_rate", "sem_win_rate", "model_pwin"]);
    sum.push(vec![
        summary.n.into(),
        summary.mean.into(),
        summary.std.into(),
        summary.sem.into(),
        model.into(),
    ]);

    let files = vec![
        write_json(&cfg.out_dir, "run.json", "run", cfg, &record)?,
        inst.write(&cfg.out_dir, "run_instances.csv", cfg)?,
        sum.write(&cfg.out_dir, "run_summary.csv", cfg)?,
    ];
    Ok(RunReport {
        record,
        win_rates,
        summary,
        model,
        files,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint {
    pub purity: f64,
    pub lambda: f64,
    pub sigma: f64,
    pub simulated: Summary,
    pub model: f64,
    pub model_perfect_visibility: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub purity_floor: f64,
    pub points: Vec<SweepPoint>,
    pub files: Vec<PathBuf>,
}

/// Full runs on an even purity grid from the dephasing floor to 1.
pub fn cmd_purity_sweep(cfg: &RunConfig) -> Result<SweepReport> {
    cfg.validate()?;
    let base = cfg.experiment()?;
    let floor = cfg.purity_floor()?;
    let eta = EfficiencyMap::from_relative(cfg.efficiencies)?;
    let n = cfg.sweep_points;
    let mut points = Vec::with_capacity(n);
    for i in 0..n {
        let purity = if i + 1 == n { 1.0 } else { floor + (1.0 - floor) * i as f64 / (n - 1) as f64 };
        let lambda = lambda_from_purity(purity, &base.interferometer.test)?;
        let sigma = sigma_from_lambda(lambda)?;
        let params = crate::game::ExperimentParams {
            phase_noise: PhaseNoise::from_sigma(sigma),
            seed: child_seed(cfg.seed, Domain::SweepPoint, i as u64),
            ..base.clone()
        };
        let record = run_experiment(&params, cfg.workers)?;
        let rates = record
            .instances
            .iter()
            .map(|inst| normalized_win_rate(inst, &eta, &params.interferometer))
            .collect::<Result<Vec<_>>>()?;
        points.push(SweepPoint {
            purity,
            lambda,
            sigma,
            simulated: Summary::of(&rates),
            model: pwin_purity(purity, cfg.visibility, &base.interferometer)?,
            model_perfect_visibility: pwin_purity(purity, 1.0, &base.interferometer)?,
        });
    }

    let mut t = Table::new(
        "purity-sweep",
        &["purity", "lambda", "sigma", "mean_win_rate", "std_win_rate", "sem_win_rate", "model_pwin", "model_pwin_perfect_visibility"],
    );
    t.meta("purity_floor", floor);
    for p in &points {
        t.push(vec![
            p.purity.into(),
            p.lambda.into(),
            p.sigma.into(),
            p.simulated.mean.into(),
            p.simulated.std.into(),
            p.simulated.sem.into(),
            p.model.into(),
            p.model_perfect_visibility.into(),
        ]);
    }
    let files = vec![t.write(&cfg.out_dir, "purity_sweep.csv", cfg)?];
    Ok(SweepReport {
        purity_floor: floor,
        points,
        files,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfidenceReport {
    pub curve: Vec<CurvePoint>,
    /// First event index whose median confidence exceeds [`CONFIDENCE_TARGET`].
    pub first_above_target: Option<usize>,
    /// Fit of `ln(1 - median)` against event index.
    pub residual_fit: LogLinearFit,
    pub files: Vec<PathBuf>,
}

/// Running confidence for `repetitions` independent event streams.
pub fn cmd_confidence(cfg: &RunConfig) -> Result<ConfidenceReport> {
    cfg.validate()?;
    let base = cfg.experiment()?;
    let trajectory = |r: usize| {
        let params = crate::game::ExperimentParams {
            seed: child_seed(cfg.seed, Domain::Repetition, r as u64),
            ..base.clone()
        };
        let mut discard = substream(cfg.seed, Domain::Discard, r as u64);
        confidence_trajectory(EventStream::new(&params), cfg.visibility, &mut discard, cfg.confidence_events)
    };
    let trajectories = with_workers(cfg.workers, || {
        (0..cfg.repetitions).into_par_iter().map(trajectory).collect::<Result<Vec<_>>>()
    })?;
    let curve = confidence_curve_stats(&trajectories)?;
    let first_above_target = curve.iter().find(|p| p.median > CONFIDENCE_TARGET).map(|p| p.event_index);
    let xs: Vec<f64> = curve.iter().map(|p| p.event_index as f64).collect();
    let ys: Vec<f64> = curve.iter().map(|p| p.residual).collect();
    let residual_fit = log_linear_fit(&xs, &ys)?;

    let mut t = Table::new("confidence", &["event_index", "median", "q1", "q3", "residual", "n_outliers", "outliers"]);
    t.meta("repetitions", cfg.repetitions);
    t.meta("quartiles", QUARTILE_CONVENTION);
    for p in &curve {
        let mut outliers = String::new();
        for (i, &o) in p.outliers.iter().enumerate() {
            if i > 0 {
                outliers.push(' ');
            }
            super::output::format_real(o, &mut outliers);
        }
        t.push(vec![
            p.event_index.into(),
            p.median.into(),
            p.q1.into(),
            p.q3.into(),
            p.residual.into(),
            p.outliers.len().into(),
            Cell::Text(outliers),
        ]);
    }
    let mut fit = Table::new("confidence", &["target", "first_event_above_target", "slope", "intercept", "r_squared", "points"]);
    fit.push(vec![
        CONFIDENCE_TARGET.into(),
        first_above_target.map_or(Cell::Text(String::new()), Cell::from),
        residual_fit.slope.into(),
        residual_fit.intercept.into(),
        residual_fit.r_squared.into(),
        residual_fit.points.into(),
    ]);
    let files = vec![
        t.write(&cfg.out_dir, "confidence_curve.csv", cfg)?,
        fit.write(&cfg.out_dir, "confidence_residual_fit.csv", cfg)?,
    ];
    Ok(ConfidenceReport {
        curve,
        first_above_target,
        residual_fit,
        files,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CalibrationReport {
    pub hom: HomFit,
    pub setpoints: PhaseSetpoints,
    /// Phase error of the 0 setpoint against the simulated truth, radians.
    pub setpoint_phase_error: f64,
    pub efficiencies: EfficiencyMap,
    pub injected_efficiencies: EfficiencyMap,
    pub files: Vec<PathBuf>,
}

/// Simulates and fits the HOM, phase-reference and efficiency scans.
pub fn cmd_calibrate(cfg: &RunConfig) -> Result<CalibrationReport> {
    cfg.validate()?;
    let mut rng = substream(cfg.seed, Domain::Calibration, 0);
    let hom_scan = simulate_hom_scan(&cfg.hom_delays(), &cfg.hom_scan(), Some(&mut rng))?;
    let hom = fit_hom_dip(&hom_scan)?;

    let phase_params = cfg.fringe_scan([1.0; 4])?;
    let mut rng = substream(cfg.seed, Domain::Calibration, 1);
    let phase_scan = simulate_phase_scan(&cfg.pzt_voltages(), &phase_params, Some(&mut rng))?;
    let setpoints = find_phase_setpoints(&phase_scan)?;
    let tau = std::f64::consts::TAU;
    let setpoint_phase_error = (phase_params.total_phase(setpoints.zero) + std::f64::consts::PI).rem_euclid(tau)
        - std::f64::consts::PI;

    let injected = EfficiencyMap::from_relative(cfg.calibration_efficiencies)?;
    let eff_params = cfg.fringe_scan(cfg.calibration_efficiencies)?;
    let mut rng = substream(cfg.seed, Domain::Calibration, 2);
    let eff_scan = simulate_efficiency_scan(&cfg.pzt_voltages(), &eff_params, Some(&mut rng))?;
    let efficiencies = fit_relative_efficiencies(&eff_scan)?;

    let mut t = Table::new("calibrate", &["quantity", "value", "uncertainty", "injected"]);
    let unc = |name: &str| hom.fit.uncertainty(name).unwrap_or(f64::NAN);
    let p = |i: usize| hom.fit.params[i];
    t.push(vec!["hom_visibility".into(), hom.visibility.into(), hom.visibility_uncertainty.into(), cfg.visibility.into()]);
    t.push(vec!["hom_c_max".into(), p(0).into(), unc("c_max").into(), cfg.hom_c_max.into()]);
    t.push(vec!["hom_x0_um".into(), p(2).into(), unc("x0").into(), cfg.hom_center.into()]);
    t.push(vec!["hom_sigma_um".into(), p(3).abs().into(), unc("sigma").into(), cfg.hom_coherence_width.into()]);
    t.push(vec!["phase_zero_v".into(), setpoints.zero.into(), Cell::Real(f64::NAN), Cell::Real(f64::NAN)]);
    t.push(vec!["phase_pi_v".into(), setpoints.pi.into(), Cell::Real(f64::NAN), Cell::Real(f64::NAN)]);
    t.push(vec![
        "fringe_period_v".into(),
        setpoints.period.into(),
        (tau * setpoints.fit.uncertainty("volts_per_radian").unwrap_or(f64::NAN)).into(),
        (tau * cfg.pzt_volts_per_radian.abs()).into(),
    ]);
    t.push(vec!["phase_zero_error_rad".into(), setpoint_phase_error.into(), Cell::Real(f64::NAN), 0.0.into()]);
    for (k, name) in ["eta_a0b0", "eta_a0b1", "eta_a1b0", "eta_a1b1"].iter().enumerate() {
        t.push(vec![
            (*name).into(),
            efficiencies.as_array()[k].into(),
            Cell::Real(f64::NAN),
            injected.as_array()[k].into(),
        ]);
    }
    t.meta("hom_visibility_clamped", hom.clamped);
    t.meta("hom_degenerate", hom.degenerate);

    let report = CalibrationReport {
        hom,
        setpoints,
        setpoint_phase_error,
        efficiencies,
        injected_efficiencies: injected,
        files: Vec::new(),
    };
    let files = vec![
        scan_table("calibrate", &hom_scan).write(&cfg.out_dir, "hom_scan.csv", cfg)?,
        scan_table("calibrate", &phase_scan).write(&cfg.out_dir, "phase_scan.csv", cfg)?,
        scan_table("calibrate", &eff_scan).write(&cfg.out_dir, "efficiency_scan.csv", cfg)?,
        t.write(&cfg.out_dir, "calibration.csv", cfg)?,
        write_json(&cfg.out_dir, "calibration.json", "calibrate", cfg, &report)?,
    ];
    Ok(CalibrationReport { files, ..report })
}
