use approx::assert_relative_eq;
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

use superposition_xor::game::{pwin_from_distribution, pwin_lambda, ALL_SETTINGS};
use superposition_xor::optics::{
    build_unitary, outcome_distribution, outcome_distribution_with_ancilla, permanent, BeamsplitterSpec,
    InterferometerConfig, Pattern, PhaseSetting,
};

fn splitter() -> impl Strategy<Value = BeamsplitterSpec> {
    (0.0f64..=1.0).prop_map(|t| BeamsplitterSpec::from_transmission(t).unwrap())
}

fn interferometer() -> impl Strategy<Value = InterferometerConfig> {
    (splitter(), splitter(), splitter(), splitter()).prop_map(|(test, ancilla, detect_a, detect_b)| InterferometerConfig {
        test,
        ancilla,
        detect_a,
        detect_b,
    })
}

fn phases() -> impl Strategy<Value = PhaseSetting> {
    (any::<bool>(), any::<bool>(), prop::array::uniform4(-10.0f64..10.0))
        .prop_map(|(x, y, p)| PhaseSetting::new(x, y, p[0], p[1], p[2], p[3]))
}

proptest! {
    #[test]
    fn unitary_for_any_configuration(cfg in interferometer(), ps in phases()) {
        let u = build_unitary(&cfg, &ps);
        let err = (u.adjoint() * u - nalgebra::Matrix4::<Complex64>::identity()).norm();
        prop_assert!(err < 1e-12);
    }

    #[test]
    fn distribution_is_complete(cfg in interferometer(), ps in phases(), lambda in 0.0f64..=1.0, v in 0.0f64..=1.0, anc in 0.0f64..=1.0) {
        let d = outcome_distribution_with_ancilla(&cfg, &ps, lambda, anc, v).unwrap();
        prop_assert!((d.total() - 1.0).abs() < 1e-10);
        prop_assert!(d.as_array().iter().all(|&p| p >= 0.0));
    }

    #[test]
    fn same_lab_mass_is_phase_independent(cfg in interferometer(), a in phases(), b in phases(), lambda in 0.0f64..=1.0, v in 0.0f64..=1.0) {
        let da = outcome_distribution(&cfg, &a, lambda, v).unwrap();
        let db = outcome_distribution(&cfg, &b, lambda, v).unwrap();
        prop_assert!((da.same_lab_total() - db.same_lab_total()).abs() < 1e-12);
        prop_assert!((da.same_lab_total() - cfg.same_lab_probability()).abs() < 1e-12);
    }

    /// Shifting the total phase by pi swaps correlated and anticorrelated
    /// cross-lab outcomes.
    #[test]
    fn pi_shift_swaps_correlations(t in 0.05f64..0.95, ps in phases(), lambda in 0.0f64..=1.0, v in 0.0f64..=1.0) {
        let cfg = InterferometerConfig::symmetric(BeamsplitterSpec::from_transmission(t).unwrap());
        let shifted = ps.with_local_phases(ps.theta_a + std::f64::consts::PI, ps.theta_b);
        let d0 = outcome_distribution(&cfg, &ps, lambda, v).unwrap();
        let d1 = outcome_distribution(&cfg, &shifted, lambda, v).unwrap();
        let corr = |d: &superposition_xor::optics::OutcomeDistribution| d.get(Pattern::A0B0) + d.get(Pattern::A1B1);
        let anti = |d: &superposition_xor::optics::OutcomeDistribution| d.get(Pattern::A0B1) + d.get(Pattern::A1B0);
        prop_assert!((corr(&d0) - anti(&d1)).abs() < 1e-12);
    }

    #[test]
    fn permanent_is_row_permutation_invariant(seed in any::<u64>(), n in 1usize..=6) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let m = DMatrix::from_fn(n, n, |_, _| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        let mut swapped = m.clone();
        swapped.swap_rows(0, n - 1);
        let a = permanent(&m).unwrap();
        let b = permanent(&swapped).unwrap();
        prop_assert!((a - b).norm() <= 1e-12 * a.norm().max(1.0));
        let t = permanent(&m.transpose()).unwrap();
        prop_assert!((a - t).norm() <= 1e-12 * a.norm().max(1.0));
    }
}

#[test]
fn setting_average_matches_closed_form_on_a_grid() {
    for t in [0.1, 0.35, 0.5, 0.8] {
        let cfg = InterferometerConfig::symmetric(BeamsplitterSpec::from_transmission(t).unwrap());
        for lambda in [0.0, 0.25, 0.9, 1.0] {
            for v in [0.0, 0.5, 0.94, 1.0] {
                let avg: f64 = ALL_SETTINGS
                    .iter()
                    .map(|&(x, y)| {
                        let ps = PhaseSetting::from_bits(x, y);
                        0.25 * pwin_from_distribution(&outcome_distribution(&cfg, &ps, lambda, v).unwrap(), &ps)
                    })
                    .sum();
                assert_relative_eq!(avg, pwin_lambda(lambda, v, &cfg), epsilon = 1e-12);
            }
        }
    }
}

#[test]
fn settings_with_equal_parity_share_statistics() {
    let cfg = InterferometerConfig::default();
    let d00 = outcome_distribution(&cfg, &PhaseSetting::from_bits(false, false), 0.7, 0.9).unwrap();
    let d11 = outcome_distribution(&cfg, &PhaseSetting::from_bits(true, true), 0.7, 0.9).unwrap();
    let d01 = outcome_distribution(&cfg, &PhaseSetting::from_bits(false, true), 0.7, 0.9).unwrap();
    let d10 = outcome_distribution(&cfg, &PhaseSetting::from_bits(true, false), 0.7, 0.9).unwrap();
    for p in Pattern::CROSS {
        assert_relative_eq!(d00.get(p), d11.get(p), epsilon = 1e-12);
        assert_relative_eq!(d01.get(p), d10.get(p), epsilon = 1e-12);
    }
}
