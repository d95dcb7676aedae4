use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::calibration::{FringeScanParams, HomScanParams};
use crate::error::{Error, Result};
use crate::game::{CountMode, ExperimentParams, PhaseNoise};
use crate::optics::{BeamsplitterSpec, InterferometerConfig, PhaseSetting};
use crate::state::{purity_floor, DecoherenceSpec};

/// Every knob of every command, as one flat TOML table.
///
/// Exactly one of `sigma`, `lambda`, `purity` may be set; when none is, the
/// test photon is taken to be pure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Intensity transmissions of the four beamsplitters.
    pub test_transmission: f64,
    pub ancilla_transmission: f64,
    pub detect_a_transmission: f64,
    pub detect_b_transmission: f64,
    pub visibility: f64,

    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub purity: Option<f64>,
    pub ancilla_lambda: f64,
    pub theta_a: f64,
    pub theta_b: f64,

    pub instances_per_setting: usize,
    /// Mean cross-lab coincidences per instance.
    pub mean_counts: f64,
    pub count_mode: CountMode,
    /// Relative pattern efficiencies, order `A0B0, A0B1, A1B0, A1B1`.
    pub efficiencies: [f64; 4],
    pub integration_time: f64,

    pub seed: u64,
    /// Worker threads; 0 picks the number of cores.
    pub workers: usize,
    pub out_dir: PathBuf,
    pub rng: String,

    /// Points in the `analytic` lambda grid.
    pub analytic_points: usize,
    /// Points in the purity sweep, floor to 1 inclusive.
    pub sweep_points: usize,

    pub repetitions: usize,
    /// Retained events per confidence trajectory.
    pub confidence_events: usize,

    pub hom_c_max: f64,
    pub hom_coherence_width: f64,
    pub hom_center: f64,
    pub hom_span: f64,
    pub hom_step: f64,
    pub hom_integration_time: f64,

    pub pzt_volts_per_radian: f64,
    pub pzt_quadratic: f64,
    /// Total phase at zero drive, in radians.
    pub pzt_phase_offset: f64,
    pub pzt_points: usize,
    pub pzt_fringes: f64,
    pub pzt_mean_counts: f64,
    pub pzt_integration_time: f64,
    /// Efficiencies injected into the simulated regression scan.
    pub calibration_efficiencies: [f64; 4],
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            test_transmission: 0.35,
            ancilla_transmission: 0.35,
            detect_a_transmission: 0.5,
            detect_b_transmission: 0.5,
            visibility: 0.94,
            sigma: None,
            lambda: None,
            purity: None,
            ancilla_lambda: 1.0,
            theta_a: 0.0,
            theta_b: 0.0,
            instances_per_setting: 60,
            mean_counts: 500.0,
            count_mode: CountMode::Poisson,
            efficiencies: [1.0; 4],
            integration_time: 1.0,
            seed: 1,
            workers: 0,
            out_dir: PathBuf::from("out"),
            rng: crate::rng::GENERATOR.to_string(),
            analytic_points: 21,
            sweep_points: 10,
            repetitions: 25,
            confidence_events: 1000,
            hom_c_max: 2500.0,
            hom_coherence_width: 25.0,
            hom_center: 0.0,
            hom_span: 300.0,
            hom_step: 5.0,
            hom_integration_time: 5.0,
            pzt_volts_per_radian: 1.5,
            pzt_quadratic: 0.0,
            pzt_phase_offset: 0.7,
            pzt_points: 150,
            pzt_fringes: 3.0,
            pzt_mean_counts: 5000.0,
            pzt_integration_time: 10.0,
            calibration_efficiencies: [1.0, 0.9, 0.8, 0.95],
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Serde(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text)
    }

    pub fn interferometer(&self) -> Result<InterferometerConfig> {
        Ok(InterferometerConfig {
            test: BeamsplitterSpec::from_transmission(self.test_transmission)?,
            ancilla: BeamsplitterSpec::from_transmission(self.ancilla_transmission)?,
            detect_a: BeamsplitterSpec::from_transmission(self.detect_a_transmission)?,
            detect_b: BeamsplitterSpec::from_transmission(self.detect_b_transmission)?,
        })
    }

    /// All three dephasing parameters, derived from whichever one is set.
    pub fn decoherence(&self) -> Result<DecoherenceSpec> {
        let bs = BeamsplitterSpec::from_transmission(self.test_transmission)?;
        match (self.sigma, self.lambda, self.purity) {
            (None, None, None) => Ok(DecoherenceSpec::pure()),
            (Some(s), None, None) => DecoherenceSpec::from_sigma(s, &bs),
            (None, Some(l), None) => DecoherenceSpec::from_lambda(l, &bs),
            (None, None, Some(p)) => DecoherenceSpec::from_purity(p, &bs),
            _ => Err(Error::Config("set at most one of sigma, lambda, purity".into())),
        }
    }

    pub fn validate(&self) -> Result<()> {
        // TOML integers are signed 64-bit.
        if self.seed > i64::MAX as u64 {
            return Err(Error::Config(format!("seed must be at most {}", i64::MAX)));
        }
        if self.rng != crate::rng::GENERATOR {
            return Err(Error::Config(format!(
                "unsupported rng '{}', only '{}' is available",
                self.rng,
                crate::rng::GENERATOR
            )));
        }
        self.interferometer()?;
        self.decoherence()?;
        self.experiment()?.validate()?;
        if self.analytic_points < 2 || self.sweep_points < 2 {
            return Err(Error::Config("analytic_points and sweep_points must be at least 2".into()));
        }
        if self.repetitions < 2 || self.confidence_events == 0 {
            return Err(Error::Config("need repetitions >= 2 and confidence_events >= 1".into()));
        }
        if !(self.hom_step > 0.0 && self.hom_span >= 5.0 * self.hom_step) {
            return Err(Error::Config("hom_span must cover at least 6 points of hom_step".into()));
        }
        if !(self.pzt_fringes > 0.0) || self.pzt_points < 8 {
            return Err(Error::Config("need pzt_fringes > 0 and pzt_points >= 8".into()));
        }
        Ok(())
    }

    /// Phase noise for the configured decoherence; the purity floor maps to
    /// uniform noise.
    pub fn phase_noise(&self) -> Result<PhaseNoise> {
        Ok(PhaseNoise::from_sigma(self.decoherence()?.sigma))
    }

    pub fn experiment(&self) -> Result<ExperimentParams> {
        Ok(ExperimentParams {
            interferometer: self.interferometer()?,
            visibility: self.visibility,
            phase_noise: self.phase_noise()?,
            ancilla_lambda: self.ancilla_lambda,
            theta_a: self.theta_a,
            theta_b: self.theta_b,
            instances_per_setting: self.instances_per_setting,
            mean_counts: self.mean_counts,
            count_mode: self.count_mode,
            efficiencies: self.efficiencies,
            integration_time: self.integration_time,
            seed: self.seed,
        })
    }

    pub fn purity_floor(&self) -> Result<f64> {
        Ok(purity_floor(&BeamsplitterSpec::from_transmission(self.test_transmission)?))
    }

    pub fn hom_scan(&self) -> HomScanParams {
        HomScanParams {
            visibility: self.visibility,
            c_max: self.hom_c_max,
            coherence_width: self.hom_coherence_width,
            center: self.hom_center,
            integration_time: self.hom_integration_time,
        }
    }

    pub fn hom_delays(&self) -> Vec<f64> {
        let n = (self.hom_span / self.hom_step).round() as usize + 1;
        let half = 0.5 * self.hom_span;
        crate::calibration::linspace(self.hom_center - half, self.hom_center + half, n)
    }

    pub fn fringe_scan(&self, efficiencies: [f64; 4]) -> Result<FringeScanParams> {
        Ok(FringeScanParams {
            interferometer: InterferometerConfig {
                test: BeamsplitterSpec::from_transmission(self.test_transmission)?,
                ancilla: BeamsplitterSpec::from_transmission(self.ancilla_transmission)?,
                ..InterferometerConfig::balanced()
            },
            visibility: self.visibility,
            baseline: PhaseSetting::from_bits(false, false).with_local_phases(self.pzt_phase_offset, 0.0),
            volts_per_radian: self.pzt_volts_per_radian,
            quadratic: self.pzt_quadratic,
            mean_counts: self.pzt_mean_counts,
            efficiencies,
            integration_time: self.pzt_integration_time,
        })
    }

    pub fn pzt_voltages(&self) -> Vec<f64> {
        let span = self.pzt_fringes * std::f64::consts::TAU * self.pzt_volts_per_radian.abs();
        crate::calibration::linspace(0.0, span, self.pzt_points)
    }
}
