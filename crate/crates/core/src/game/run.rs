use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::round::{play_round, RoundResult};
use super::schedule::RefereeSchedule;
use crate::error::{check_unit_interval, Error, Result};
use crate::optics::{outcome_distribution_with_ancilla, Arrival, InterferometerConfig, Lab, Pattern, PhaseSetting};
use crate::rng::{substream, Domain, SimRng};
use crate::state::sample_phase_noise;

/// Per-instance noise on the Referee's `x` phase.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PhaseNoise {
    Gaussian { sigma: f64 },
    /// Uniform over the circle; the infinite-width limit.
    Uniform,
}

impl PhaseNoise {
    pub fn from_sigma(sigma: f64) -> Self {
        if sigma.is_infinite() {
            PhaseNoise::Uniform
        } else {
            PhaseNoise::Gaussian { sigma }
        }
    }

    pub fn sigma(&self) -> f64 {
        match self {
            PhaseNoise::Gaussian { sigma } => *sigma,
            PhaseNoise::Uniform => f64::INFINITY,
        }
    }
}

/// How many rounds an instance plays.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CountMode {
    /// Poisson-distributed cross-lab coincidences with the configured mean.
    Poisson,
    /// Exactly the configured number of cross-lab coincidences.
    Fixed,
}

/// Everything `run_experiment` needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentParams {
    pub interferometer: InterferometerConfig,
    pub visibility: f64,
    pub phase_noise: PhaseNoise,
    pub ancilla_lambda: f64,
    pub theta_a: f64,
    pub theta_b: f64,
    pub instances_per_setting: usize,
    /// Mean number of cross-lab coincidences per instance.
    pub mean_counts: f64,
    pub count_mode: CountMode,
    /// Relative detection efficiency per cross-lab pattern, `(a, b)` order
    /// `00, 01, 10, 11`.
    pub efficiencies: [f64; 4],
    /// Seconds of acquisition per instance.
    pub integration_time: f64,
    pub seed: u64,
}

impl Default for ExperimentParams {
    fn default() -> Self {
        Self {
            interferometer: InterferometerConfig::default(),
            visibility: 0.94,
            phase_noise: PhaseNoise::Gaussian { sigma: 0.0 },
            ancilla_lambda: 1.0,
            theta_a: 0.0,
            theta_b: 0.0,
            instances_per_setting: 60,
            mean_counts: 500.0,
            count_mode: CountMode::Poisson,
            efficiencies: [1.0; 4],
            integration_time: 1.0,
            seed: 0,
        }
    }
}

impl ExperimentParams {
    pub fn validate(&self) -> Result<()> {
        check_unit_interval("visibility", self.visibility)?;
        check_unit_interval("ancilla_lambda", self.ancilla_lambda)?;
        if let PhaseNoise::Gaussian { sigma } = self.phase_noise {
            if !(sigma >= 0.0 && sigma.is_finite()) {
                return Err(Error::Config(format!("phase-noise sigma must be finite and >= 0, got {sigma}")));
            }
        }
        if self.instances_per_setting == 0 {
            return Err(Error::Config("instances_per_setting must be positive".into()));
        }
        if !(self.mean_counts > 0.0 && self.mean_counts.is_finite()) {
            return Err(Error::Config(format!("mean_counts must be positive, got {}", self.mean_counts)));
        }
        for (i, &eta) in self.efficiencies.iter().enumerate() {
            if !(eta > 0.0 && eta <= 1.0) {
                return Err(Error::Config(format!("efficiency {i} = {eta} not in (0, 1]")));
            }
        }
        if self.interferometer.same_lab_probability() >= 1.0 {
            return Err(Error::Config("no cross-lab coincidences possible with these splitters".into()));
        }
        Ok(())
    }

    pub fn schedule(&self) -> RefereeSchedule {
        RefereeSchedule::new(self.instances_per_setting, self.seed)
    }
}

/// Tallies for one instance of the game.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub index: usize,
    pub x: bool,
    pub y: bool,
    /// Referee phase actually applied, including noise.
    pub phi_x: f64,
    pub start_time: f64,
    /// Detected cross-lab coincidences `C_ab`, order `00, 01, 10, 11`.
    pub coincidences: [u64; 4],
    /// In-lab coincidences `[A0 A1, B0 B1]`.
    pub in_lab: [u64; 2],
    /// Simulation truth, not observable with threshold detectors:
    /// double clicks `[A0, A1, B0, B1]`.
    pub unresolved_double_clicks: [u64; 4],
    /// Simulation truth: two-photon events generated and won (including
    /// guesses and events lost to detector inefficiency).
    pub rounds: u64,
    pub rounds_won: u64,
}

impl InstanceRecord {
    pub fn parity(&self) -> bool {
        self.x ^ self.y
    }

    pub fn total_coincidences(&self) -> u64 {
        self.coincidences.iter().sum()
    }
}

/// Output of [`run_experiment`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub version: String,
    pub generator: String,
    pub params: ExperimentParams,
    pub schedule: RefereeSchedule,
    pub instances: Vec<InstanceRecord>,
}

impl RunRecord {
    pub fn total_rounds(&self) -> u64 {
        self.instances.iter().map(|i| i.total_coincidences()).sum()
    }
}

fn poisson<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> u64 {
    if mean <= 0.0 {
        return 0;
    }
    Poisson::new(mean).expect("positive mean").sample(rng) as u64
}

/// Plays one instance; returns its tallies and the detected rounds in order.
pub fn simulate_instance(params: &ExperimentParams, schedule: &RefereeSchedule, index: usize) -> Result<(InstanceRecord, Vec<RoundResult>)> {
    let mut rng: SimRng = substream(params.seed, Domain::Instance, index as u64);
    let (x, y) = schedule.setting(index);
    let nominal = PhaseSetting::from_bits(x, y).with_local_phases(params.theta_a, params.theta_b);
    let phi_x = sample_phase_noise(if x { PI } else { 0.0 }, params.phase_noise.sigma(), &mut rng);
    let ps = nominal.with_phi_x(phi_x);
    let dist = outcome_distribution_with_ancilla(&params.interferometer, &ps, 1.0, params.ancilla_lambda, params.visibility)?;
    let cross_fraction: f64 = Pattern::CROSS.iter().map(|&p| dist.get(p)).sum();

    let mut record = InstanceRecord {
        index,
        x,
        y,
        phi_x: ps.phi_x,
        start_time: index as f64 * params.integration_time,
        coincidences: [0; 4],
        in_lab: [0; 2],
        unresolved_double_clicks: [0; 4],
        rounds: 0,
        rounds_won: 0,
    };
    let mut rounds = Vec::new();

    let target_cross = params.mean_counts.round() as u64;
    let total_events = match params.count_mode {
        CountMode::Poisson => Some(poisson(params.mean_counts / cross_fraction, &mut rng)),
        CountMode::Fixed => None,
    };
    let mut cross_seen = 0u64;
    loop {
        match total_events {
            Some(n) if record.rounds >= n => break,
            None if cross_seen >= target_cross => break,
            _ => {}
        }
        let round = play_round(&dist, &ps, &mut rng);
        record.rounds += 1;
        record.rounds_won += u64::from(round.win);
        let detected = match round.pattern.arrival() {
            Arrival::CrossLab { a, b } => {
                cross_seen += 1;
                let slot = (a * 2 + b) as usize;
                let eta = params.efficiencies[slot];
                let kept = eta >= 1.0 || rng.random::<f64>() < eta;
                if kept {
                    record.coincidences[slot] += 1;
                }
                kept
            }
            Arrival::SameLab { lab, resolved: true } => {
                record.in_lab[if lab == Lab::Alice { 0 } else { 1 }] += 1;
                true
            }
            Arrival::SameLab { .. } => {
                let slot = match round.pattern {
                    Pattern::A0A0 => 0,
                    Pattern::A1A1 => 1,
                    Pattern::B0B0 => 2,
                    _ => 3,
                };
                record.unresolved_double_clicks[slot] += 1;
                true
            }
        };
        if detected {
            rounds.push(round);
        }
    }
    Ok((record, rounds))
}

/// Simulates a full run: one instance per schedule slot, each with freshly
/// sampled phase noise. Output does not depend on `workers`.
pub fn run_experiment(params: &ExperimentParams, workers: usize) -> Result<RunRecord> {
    params.validate()?;
    let schedule = params.schedule();
    let simulate = || -> Result<Vec<InstanceRecord>> {
        (0..schedule.len())
            .into_par_iter()
            .map(|i| simulate_instance(params, &schedule, i).map(|(rec, _)| rec))
            .collect()
    };
    let instances = with_workers(workers, simulate)?;
    Ok(RunRecord {
        version: crate::VERSION.to_string(),
        generator: crate::rng::GENERATOR.to_string(),
        params: params.clone(),
        schedule,
        instances,
    })
}

/// Runs `f` inside a rayon pool of `workers` threads (0 = rayon default).
pub fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> T {
    match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

/// Endless stream of detected rounds, instance after instance, following
/// the run's schedule (wrapping around after the last block).
pub struct EventStream<'a> {
    params: &'a ExperimentParams,
    schedule: RefereeSchedule,
    next_instance: usize,
    buffer: std::vec::IntoIter<RoundResult>,
}

impl<'a> EventStream<'a> {
    pub fn new(params: &'a ExperimentParams) -> Self {
        Self {
            params,
            schedule: params.schedule(),
            next_instance: 0,
            buffer: Vec::new().into_iter(),
        }
    }
}

impl Iterator for EventStream<'_> {
    type Item = Result<RoundResult>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            if let Some(r) = self.buffer.next() {
                return Some(Ok(r));
            }
            match simulate_instance(self.params, &self.schedule, self.next_instance) {
                Ok((_, rounds)) => self.buffer = rounds.into_iter(),
                Err(e) => return Some(Err(e)),
            }
            self.next_instance += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_mode_gives_exact_cross_counts() {
        let params = ExperimentParams {
            count_mode: CountMode::Fixed,
            mean_counts: 300.0,
            instances_per_setting: 2,
            seed: 3,
            ..ExperimentParams::default()
        };
        let run = run_experiment(&params, 1).unwrap();
        assert_eq!(run.instances.len(), 8);
        for inst in &run.instances {
            assert_eq!(inst.total_coincidences(), 300);
        }
    }

    #[test]
    fn inefficient_detectors_drop_counts() {
        let params = ExperimentParams {
            count_mode: CountMode::Fixed,
            mean_counts: 2000.0,
            instances_per_setting: 1,
            efficiencies: [0.5, 1.0, 1.0, 1.0],
            interferometer: InterferometerConfig::balanced(),
            visibility: 1.0,
            phase_noise: PhaseNoise::Uniform,
            seed: 8,
            ..ExperimentParams::default()
        };
        let run = run_experiment(&params, 1).unwrap();
        for inst in &run.instances {
            let ratio = inst.coincidences[0] as f64 / inst.coincidences[3] as f64;
            assert!((ratio - 0.5).abs() < 0.1, "{ratio}");
        }
    }

    #[test]
    fn worker_count_does_not_change_output() {
        let params = ExperimentParams {
            instances_per_setting: 5,
            phase_noise: PhaseNoise::Gaussian { sigma: 0.7 },
            seed: 42,
            ..ExperimentParams::default()
        };
        let a = run_experiment(&params, 1).unwrap();
        let b = run_experiment(&params, 4).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn invalid_params_rejected() {
        let bad = ExperimentParams {
            visibility: 1.2,
            ..ExperimentParams::default()
        };
        assert!(run_experiment(&bad, 1).is_err());
        let bad = ExperimentParams {
            efficiencies: [1.0, 0.0, 1.0, 1.0],
            ..ExperimentParams::default()
        };
        assert!(matches!(bad.validate(), Err(Error::Config(_))));
    }

    #[test]
    fn event_stream_spans_instances() {
        let params = ExperimentParams {
            mean_counts: 20.0,
            seed: 1,
            ..ExperimentParams::default()
        };
        let events: Vec<_> = EventStream::new(&params).take(500).collect::<Result<_>>().unwrap();
        assert_eq!(events.len(), 500);
        let again: Vec<_> = EventStream::new(&params).take(500).collect::<Result<_>>().unwrap();
        assert_eq!(events, again);
    }
}
