use crate::error::{Error, Result};
use crate::optics::{Arrival, InterferometerConfig, OutcomeDistribution, PhaseSetting};
use crate::state::purity_floor;

/// Ideal-case `p(ab|xy)` for the optimal strategy: cross-lab events output
/// the clicking detector's index, same-lab events are a fair guess.
///
/// `1/8 + 1/8 (1 + (-1)^(a xor b) cos(phi_x + phi_y + theta_a + theta_b))`.
pub fn p_ab_given_xy(a: u8, b: u8, ps: &PhaseSetting) -> f64 {
    let sign = if (a ^ b) & 1 == 0 { 1.0 } else { -1.0 };
    0.125 + 0.125 * (1.0 + sign * ps.total_phase().cos())
}

/// `1/2 + 1/2 lambda V (T_T R_M + T_M R_T)`.
///
/// Agrees with the simulated distribution when test and ancilla splitters
/// are identical. For distinct splitters the distribution's interference
/// term is `lambda V sqrt(T_T R_T T_M R_M)` instead.
///
/// Requires `lambda` and `visibility` in `[0, 1]`.
pub fn pwin_lambda(lambda: f64, visibility: f64, cfg: &InterferometerConfig) -> f64 {
    0.5 + 0.5 * lambda * visibility * cfg.same_lab_probability()
}

/// Win probability as a function of the test photon's purity.
///
/// For distinct preparation splitters this is
/// `1/2 + V/2 sqrt(P - (R_T^2 + T_T^2)) (sqrt(T_T / 2R_T) R_M + sqrt(R_T / 2T_T) T_M)`;
/// with identical splitters it reduces to `1/2 + V sqrt(RT/2) sqrt(P - (R^2 + T^2))`.
pub fn pwin_purity(purity: f64, visibility: f64, cfg: &InterferometerConfig) -> Result<f64> {
    let floor = purity_floor(&cfg.test);
    if purity < floor - 1e-12 || purity > 1.0 + 1e-12 {
        return Err(Error::OutOfRange {
            name: "purity",
            value: purity,
            lo: floor,
            hi: 1.0,
        });
    }
    let (tt, rt) = (cfg.test.transmission(), cfg.test.reflection());
    let (tm, rm) = (cfg.ancilla.transmission(), cfg.ancilla.reflection());
    if tt == 0.0 || rt == 0.0 {
        return Ok(0.5);
    }
    let excess = (purity - floor).max(0.0).sqrt();
    let weight = (tt / (2.0 * rt)).sqrt() * rm + (rt / (2.0 * tt)).sqrt() * tm;
    Ok(0.5 + 0.5 * visibility * excess * weight)
}

/// Winning cross-lab mass for the setting plus half the same-lab mass.
pub fn pwin_from_distribution(dist: &OutcomeDistribution, setting: &PhaseSetting) -> f64 {
    let parity = u8::from(setting.parity());
    let correct: f64 = crate::optics::Pattern::CROSS
        .iter()
        .filter(|p| matches!(p.arrival(), Arrival::CrossLab { a, b } if a ^ b == parity))
        .map(|&p| dist.get(p))
        .sum();
    correct + 0.5 * dist.same_lab_total()
}
