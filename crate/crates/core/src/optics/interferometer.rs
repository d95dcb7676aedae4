use std::f64::consts::{PI, TAU};

use nalgebra::Matrix4;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const NORM_TOL: f64 = 1e-12;

/// Lossless beamsplitter `[[t, i r], [i r, t]]` with real amplitudes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawBeamsplitter", into = "RawBeamsplitter")]
pub struct BeamsplitterSpec {
    t: f64,
    r: f64,
}

#[derive(Serialize, Deserialize)]
struct RawBeamsplitter {
    t: f64,
    r: f64,
}

impl TryFrom<RawBeamsplitter> for BeamsplitterSpec {
    type Error = Error;
    fn try_from(raw: RawBeamsplitter) -> Result<Self> {
        BeamsplitterSpec::new(raw.t, raw.r)
    }
}

impl From<BeamsplitterSpec> for RawBeamsplitter {
    fn from(bs: BeamsplitterSpec) -> Self {
        RawBeamsplitter { t: bs.t, r: bs.r }
    }
}

impl BeamsplitterSpec {
    pub fn new(t: f64, r: f64) -> Result<Self> {
        let norm = t * t + r * r;
        if !(t >= 0.0 && r >= 0.0) || (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { t, r, norm });
        }
        Ok(Self { t, r })
    }

    /// Beamsplitter with intensity transmission `transmission`.
    pub fn from_transmission(transmission: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&transmission) {
            return Err(Error::OutOfRange {
                name: "transmission",
                value: transmission,
                lo: 0.0,
                hi: 1.0,
            });
        }
        Ok(Self {
            t: transmission.sqrt(),
            r: (1.0 - transmission).sqrt(),
        })
    }

    pub fn balanced() -> Self {
        Self {
            t: std::f64::consts::FRAC_1_SQRT_2,
            r: std::f64::consts::FRAC_1_SQRT_2,
        }
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    /// Intensity transmission `t^2`.
    pub fn transmission(&self) -> f64 {
        self.t * self.t
    }

    /// Intensity reflection `r^2`.
    pub fn reflection(&self) -> f64 {
        self.r * self.r
    }
}

/// The four beamsplitters of the nonlocal interferometer.
///
/// `test` and `ancilla` prepare the path superpositions; `detect_a` and
/// `detect_b` are the local measurement splitters in Alice's and Bob's labs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterferometerConfig {
    pub test: BeamsplitterSpec,
    pub ancilla: BeamsplitterSpec,
    pub detect_a: BeamsplitterSpec,
    pub detect_b: BeamsplitterSpec,
}

impl InterferometerConfig {
    /// Identical preparation splitters, balanced detection.
    pub fn symmetric(prep: BeamsplitterSpec) -> Self {
        Self {
            test: prep,
            ancilla: prep,
            detect_a: BeamsplitterSpec::balanced(),
            detect_b: BeamsplitterSpec::balanced(),
        }
    }

    pub fn balanced() -> Self {
        Self::symmetric(BeamsplitterSpec::balanced())
    }

    /// Probability that both photons reach the same lab,
    /// `T_T R_M + T_M R_T`.
    pub fn same_lab_probability(&self) -> f64 {
        self.test.transmission() * self.ancilla.reflection()
            + self.ancilla.transmission() * self.test.reflection()
    }
}

impl Default for InterferometerConfig {
    /// Measured splitting ratio R:T = 0.65:0.35 on both preparation splitters.
    fn default() -> Self {
        Self::symmetric(BeamsplitterSpec::from_transmission(0.35).expect("valid"))
    }
}

/// Referee bits plus the continuous phases applied in the interferometer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseSetting {
    pub x: bool,
    pub y: bool,
    pub phi_x: f64,
    pub phi_y: f64,
    pub theta_a: f64,
    pub theta_b: f64,
}

fn wrap_phase(p: f64) -> f64 {
    let w = p.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if w >= TAU {
        0.0
    } else {
        w
    }
}

impl PhaseSetting {
    /// Referee phases `phi_x = x pi`, `phi_y = y pi`; local references at zero.
    pub fn from_bits(x: bool, y: bool) -> Self {
        Self {
            x,
            y,
            phi_x: if x { PI } else { 0.0 },
            phi_y: if y { PI } else { 0.0 },
            theta_a: 0.0,
            theta_b: 0.0,
        }
    }

    /// Arbitrary phases; all are reduced to `[0, 2 pi)`.
    pub fn new(x: bool, y: bool, phi_x: f64, phi_y: f64, theta_a: f64, theta_b: f64) -> Self {
        Self {
            x,
            y,
            phi_x: wrap_phase(phi_x),
            phi_y: wrap_phase(phi_y),
            theta_a: wrap_phase(theta_a),
            theta_b: wrap_phase(theta_b),
        }
    }

    pub fn with_local_phases(self, theta_a: f64, theta_b: f64) -> Self {
        Self::new(self.x, self.y, self.phi_x, self.phi_y, theta_a, theta_b)
    }

    pub fn with_phi_x(self, phi_x: f64) -> Self {
        Self::new(self.x, self.y, phi_x, self.phi_y, self.theta_a, self.theta_b)
    }

    /// Same setting with the Referee's x intervention inverted (`phi_x + pi`).
    pub fn flipped_x(self) -> Self {
        Self::new(
            !self.x,
            self.y,
            self.phi_x + PI,
            self.phi_y,
            self.theta_a,
            self.theta_b,
        )
    }

    /// `x XOR y`, the bit the players must guess.
    pub fn parity(&self) -> bool {
        self.x ^ self.y
    }

    /// `phi_x + phi_y + theta_a + theta_b`, the phase the cross-lab
    /// correlations depend on.
    pub fn total_phase(&self) -> f64 {
        self.phi_x + self.phi_y + self.theta_a + self.theta_b
    }
}

pub type Unitary = Matrix4<Complex64>;

fn embed_beamsplitter(u: &mut Unitary, bs: &BeamsplitterSpec, p: usize, q: usize) {
    let t = Complex64::new(bs.t(), 0.0);
    let ir = Complex64::new(0.0, bs.r());
    u[(p, p)] = t;
    u[(p, q)] = ir;
    u[(q, p)] = ir;
    u[(q, q)] = t;
}

/// Full interferometer unitary `U = U_detect * R * U_prep`.
///
/// Modes (0-based): 0 = A_T, 1 = B_T, 2 = A_M, 3 = B_M on the input side.
/// Preparation mixes (0, 1) and (2, 3); detection mixes (0, 3) in Alice's
/// lab and (1, 2) in Bob's lab.
///
/// The phase layer is `diag(e^{i phi_x}, e^{-i phi_y}, e^{i theta_a},
/// e^{-i theta_b})`. Modes 1 and 3 carry conjugate phases so that the
/// cross-lab correlations depend on `phi_x + phi_y + theta_a + theta_b`;
/// at `phi_y in {0, pi}` this is the `(-1)^y` Referee matrix.
pub fn build_unitary(cfg: &InterferometerConfig, ps: &PhaseSetting) -> Unitary {
    let zero = Complex64::new(0.0, 0.0);
    let mut prep = Unitary::from_element(zero);
    embed_beamsplitter(&mut prep, &cfg.test, 0, 1);
    embed_beamsplitter(&mut prep, &cfg.ancilla, 2, 3);

    let phases = Unitary::from_diagonal(&nalgebra::Vector4::new(
        Complex64::from_polar(1.0, ps.phi_x),
        Complex64::from_polar(1.0, -ps.phi_y),
        Complex64::from_polar(1.0, ps.theta_a),
        Complex64::from_polar(1.0, -ps.theta_b),
    ));

    let mut detect = Unitary::from_element(zero);
    embed_beamsplitter(&mut detect, &cfg.detect_a, 0, 3);
    embed_beamsplitter(&mut detect, &cfg.detect_b, 1, 2);

    detect * phases * prep
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn max_dev_from_identity(u: &Unitary) -> f64 {
        let prod = u * u.adjoint();
        (prod - Unitary::identity())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn balanced_identity_phases_has_uniform_modulus() {
        let u = build_unitary(&InterferometerConfig::balanced(), &PhaseSetting::from_bits(false, false));
        for z in u.iter() {
            assert!((z.norm() - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn matches_closed_form_product() {
        let cfg = InterferometerConfig {
            test: BeamsplitterSpec::from_transmission(0.3).unwrap(),
            ancilla: BeamsplitterSpec::from_transmission(0.6).unwrap(),
            detect_a: BeamsplitterSpec::balanced(),
            detect_b: BeamsplitterSpec::balanced(),
        };
        let (tt, rt, tm, rm) = (cfg.test.t(), cfg.test.r(), cfg.ancilla.t(), cfg.ancilla.r());
        for (x, y) in [(true, false), (false, false), (true, true), (false, true)] {
            let u = build_unitary(&cfg, &PhaseSetting::from_bits(x, y));
            let sx = if x { -1.0 } else { 1.0 };
            let sy = if y { -1.0 } else { 1.0 };
            let c = |re: f64, im: f64| Complex64::new(re * FRAC_1_SQRT_2, im * FRAC_1_SQRT_2);
            #[rustfmt::skip]
            let expected = Unitary::new(
                c(sx * tt, 0.0),  c(0.0, sx * rt), c(-rm, 0.0), c(0.0, tm),
                c(0.0, sy * rt),  c(sy * tt, 0.0), c(0.0, tm),  c(-rm, 0.0),
                c(-sy * rt, 0.0), c(0.0, sy * tt), c(tm, 0.0),  c(0.0, rm),
                c(0.0, sx * tt),  c(-sx * rt, 0.0), c(0.0, rm), c(tm, 0.0),
            );
            let dev = (u - expected).iter().map(|z| z.norm()).fold(0.0, f64::max);
            assert!(dev < 1e-15, "x={x} y={y}: {dev}");
        }
    }

    #[test]
    fn unitary_for_arbitrary_phases() {
        let cfg = InterferometerConfig {
            test: BeamsplitterSpec::from_transmission(0.12).unwrap(),
            ancilla: BeamsplitterSpec::from_transmission(0.81).unwrap(),
            detect_a: BeamsplitterSpec::from_transmission(0.47).unwrap(),
            detect_b: BeamsplitterSpec::from_transmission(0.55).unwrap(),
        };
        let ps = PhaseSetting::new(true, false, 0.3, 2.1, -1.4, 5.9);
        assert!(max_dev_from_identity(&build_unitary(&cfg, &ps)) < 1e-12);
    }

    #[test]
    fn rejects_unnormalized_splitter() {
        assert!(matches!(
            BeamsplitterSpec::new(0.6, 0.6),
            Err(Error::NotNormalized { .. })
        ));
        assert!(BeamsplitterSpec::new(-0.6, 0.8).is_err());
        assert!(BeamsplitterSpec::new(0.6, 0.8).is_ok());
    }

    #[test]
    fn phases_are_wrapped() {
        let ps = PhaseSetting::new(false, false, -0.5, 7.0, TAU, -1e-300);
        for p in [ps.phi_x, ps.phi_y, ps.theta_a, ps.theta_b] {
            assert!((0.0..TAU).contains(&p), "{p}");
        }
        assert!((ps.phi_x - (TAU - 0.5)).abs() < 1e-15);
    }

    #[test]
    fn from_bits_uses_exact_pi() {
        let ps = PhaseSetting::from_bits(true, false);
        assert_eq!(ps.phi_x, PI);
        assert_eq!(ps.phi_y, 0.0);
    }
}
