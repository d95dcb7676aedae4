//! Simulated runs agree with the closed-form win probability.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use superposition_xor::game::{pwin_lambda, run_experiment, CountMode, ExperimentParams, PhaseNoise};
use superposition_xor::optics::{BeamsplitterSpec, InterferometerConfig};

#[test]
fn twenty_random_configurations_within_four_sigma() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for k in 0..20 {
        let prep = BeamsplitterSpec::from_transmission(rng.random_range(0.15..0.85)).unwrap();
        let cfg = InterferometerConfig::symmetric(prep);
        let visibility = rng.random_range(0.5..=1.0);
        let sigma = rng.random_range(0.0..2.0);
        let params = ExperimentParams {
            interferometer: cfg,
            visibility,
            phase_noise: PhaseNoise::Gaussian { sigma },
            instances_per_setting: 50,
            mean_counts: 400.0,
            count_mode: CountMode::Fixed,
            seed: 1000 + k,
            ..ExperimentParams::default()
        };
        let run = run_experiment(&params, 0).unwrap();
        let rounds: u64 = run.instances.iter().map(|i| i.rounds).sum();
        let won: u64 = run.instances.iter().map(|i| i.rounds_won).sum();
        let rate = won as f64 / rounds as f64;
        let lambda = (-sigma * sigma / 2.0).exp();
        let model = pwin_lambda(lambda, visibility, &cfg);
        // Binomial error inflated for the per-instance phase-noise spread.
        let per_instance: Vec<f64> = run.instances.iter().map(|i| i.rounds_won as f64 / i.rounds as f64).collect();
        let n = per_instance.len() as f64;
        let mean = per_instance.iter().sum::<f64>() / n;
        let sem = (per_instance.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / (n - 1.0) / n).sqrt();
        assert!(
            (rate - model).abs() < 4.0 * sem.max(1e-4),
            "config {k}: simulated {rate:.5}, model {model:.5}, sem {sem:.5}"
        );
    }
}

#[test]
fn dephased_photon_plays_classically() {
    let params = ExperimentParams {
        phase_noise: PhaseNoise::Uniform,
        seed: 77,
        ..ExperimentParams::default()
    };
    let run = run_experiment(&params, 0).unwrap();
    let rounds: u64 = run.instances.iter().map(|i| i.rounds).sum();
    let won: u64 = run.instances.iter().map(|i| i.rounds_won).sum();
    let rate = won as f64 / rounds as f64;
    let sigma = (0.25 / rounds as f64).sqrt();
    assert!((rate - 0.5).abs() < 4.0 * sigma, "{rate}");
}
