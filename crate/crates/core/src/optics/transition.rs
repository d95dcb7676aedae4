use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::fock::{submatrix, OccupationVector, OutcomeDistribution, Pattern};
use super::interferometer::{build_unitary, InterferometerConfig, PhaseSetting, Unitary};
use super::permanent::permanent;
use crate::error::{check_unit_interval, Result};

/// Probabilities within this distance below zero are rounding noise.
const CLAMP_TOL: f64 = 1e-12;

/// Unitaries for a setting and for the same setting with `x` inverted.
///
/// Dephasing the test photon mixes these two with weights `(1 +/- lambda)/2`.
#[derive(Debug, Clone, Copy)]
pub struct UnitaryPair {
    pub direct: Unitary,
    pub flipped: Unitary,
}

impl UnitaryPair {
    pub fn new(cfg: &InterferometerConfig, ps: &PhaseSetting) -> Self {
        Self {
            direct: build_unitary(cfg, ps),
            flipped: build_unitary(cfg, &ps.flipped_x()),
        }
    }
}

/// Partial-distinguishability probability for one unitary: a
/// `(1 +/- V)/2` mix of `|Per|^2` and `|det|^2`.
fn interpolated_probability(
    u: &Unitary,
    input: &OccupationVector,
    output: &OccupationVector,
    visibility: f64,
) -> Result<f64> {
    let sub = submatrix(u, input, output)?;
    let per = permanent(&sub)?;
    let det: Complex64 = sub.determinant();
    let norm = input.factorial_product() * output.factorial_product();
    Ok(((1.0 + visibility) / 2.0 * per.norm_sqr() + (1.0 - visibility) / 2.0 * det.norm_sqr()) / norm)
}

/// Probability of the transition `input -> output`.
pub fn transition_probability(
    pair: &UnitaryPair,
    input: &OccupationVector,
    output: &OccupationVector,
    lambda: f64,
    visibility: f64,
) -> Result<f64> {
    check_unit_interval("lambda", lambda)?;
    check_unit_interval("visibility", visibility)?;
    let direct = interpolated_probability(&pair.direct, input, output, visibility)?;
    let flipped = interpolated_probability(&pair.flipped, input, output, visibility)?;
    Ok((1.0 + lambda) / 2.0 * direct + (1.0 - lambda) / 2.0 * flipped)
}

fn clamp(p: f64) -> f64 {
    if p < 0.0 && p > -CLAMP_TOL {
        0.0
    } else {
        p
    }
}

/// Exact distribution over all ten output patterns for the
/// `[1, 0, 1, 0]` input.
pub fn outcome_distribution(
    cfg: &InterferometerConfig,
    ps: &PhaseSetting,
    lambda: f64,
    visibility: f64,
) -> Result<OutcomeDistribution> {
    let pair = UnitaryPair::new(cfg, ps);
    let mut probs = [0.0; 10];
    for pattern in Pattern::ALL {
        probs[pattern.index()] = clamp(transition_probability(
            &pair,
            &OccupationVector::INPUT,
            &pattern.occupation(),
            lambda,
            visibility,
        )?);
    }
    Ok(OutcomeDistribution::from_array(probs))
}

/// Like [`outcome_distribution`], additionally dephasing the ancilla photon
/// with its own coherence parameter `ancilla_lambda`.
pub fn outcome_distribution_with_ancilla(
    cfg: &InterferometerConfig,
    ps: &PhaseSetting,
    lambda: f64,
    ancilla_lambda: f64,
    visibility: f64,
) -> Result<OutcomeDistribution> {
    check_unit_interval("ancilla_lambda", ancilla_lambda)?;
    if ancilla_lambda == 1.0 {
        return outcome_distribution(cfg, ps, lambda, visibility);
    }
    // Inverting the ancilla's relative phase is a pi shift on one of its modes.
    let ancilla_flipped = ps.with_local_phases(ps.theta_a + std::f64::consts::PI, ps.theta_b);
    let coherent = outcome_distribution(cfg, ps, lambda, visibility)?;
    let inverted = outcome_distribution(cfg, &ancilla_flipped, lambda, visibility)?;
    let (w0, w1) = ((1.0 + ancilla_lambda) / 2.0, (1.0 - ancilla_lambda) / 2.0);
    let mut probs = [0.0; 10];
    for (i, p) in probs.iter_mut().enumerate() {
        *p = w0 * coherent.as_array()[i] + w1 * inverted.as_array()[i];
    }
    Ok(OutcomeDistribution::from_array(probs))
}

/// Ideal-case cross-lab probabilities `(p00, p01, p10, p11)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairProbabilities {
    pub p00: f64,
    pub p01: f64,
    pub p10: f64,
    pub p11: f64,
}

/// Closed form for balanced splitters, pure states and perfect
/// indistinguishability: correlated outcomes go as `cos^2(s/2)/4`,
/// anti-correlated as `sin^2(s/2)/4`, with `s` the total phase.
pub fn analytic_pair_probabilities(ps: &PhaseSetting) -> PairProbabilities {
    let half = ps.total_phase() / 2.0;
    let corr = 0.25 * half.cos().powi(2);
    let anti = 0.25 * half.sin().powi(2);
    PairProbabilities {
        p00: corr,
        p01: anti,
        p10: anti,
        p11: corr,
    }
}
