//! Test-photon path qubit and its dephasing parameterizations.
//!
//! Dephasing is described interchangeably by the Gaussian phase-noise width
//! `sigma`, the coherence factor `lambda = exp(-sigma^2 / 2)` and the purity
//! `T^2 + R^2 + 2 lambda^2 T R`. `lambda` is the canonical parameter; the
//! other two are converted at the boundary.

use std::f64::consts::TAU;

use nalgebra::Matrix2;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{check_unit_interval, Error, Result};
use crate::optics::BeamsplitterSpec;

/// 2x2 density matrix of the test photon's path qubit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestStateDensity(pub Matrix2<Complex64>);

impl TestStateDensity {
    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        (self.0 - self.0.adjoint()).iter().all(|z| z.norm() <= tol)
    }

    /// Positive semidefinite check for a Hermitian 2x2: non-negative
    /// diagonal and determinant.
    pub fn is_positive_semidefinite(&self, tol: f64) -> bool {
        let m = &self.0;
        m[(0, 0)].re >= -tol && m[(1, 1)].re >= -tol && m.determinant().re >= -tol
    }
}

/// `[[T, lambda t r e^{-i phi}], [lambda t r e^{i phi}, R]]`.
pub fn density_from_lambda(bs: &BeamsplitterSpec, phi: f64, lambda: f64) -> Result<TestStateDensity> {
    check_unit_interval("lambda", lambda)?;
    let coherence = lambda * bs.t() * bs.r();
    Ok(TestStateDensity(Matrix2::new(
        Complex64::new(bs.transmission(), 0.0),
        Complex64::from_polar(coherence, -phi),
        Complex64::from_polar(coherence, phi),
        Complex64::new(bs.reflection(), 0.0),
    )))
}

/// `Tr(rho^2)`.
pub fn purity(rho: &TestStateDensity) -> f64 {
    (rho.0 * rho.0).trace().re
}

/// Purity of a fully dephased path mixture, `T^2 + R^2`.
pub fn purity_floor(bs: &BeamsplitterSpec) -> f64 {
    bs.transmission().powi(2) + bs.reflection().powi(2)
}

pub fn purity_from_lambda(bs: &BeamsplitterSpec, lambda: f64) -> f64 {
    purity_floor(bs) + 2.0 * lambda * lambda * bs.transmission() * bs.reflection()
}

pub fn lambda_from_sigma(sigma: f64) -> Result<f64> {
    if !(sigma >= 0.0) {
        return Err(Error::OutOfRange {
            name: "sigma",
            value: sigma,
            lo: 0.0,
            hi: f64::INFINITY,
        });
    }
    Ok((-sigma * sigma / 2.0).exp())
}

pub fn sigma_from_lambda(lambda: f64) -> Result<f64> {
    check_unit_interval("lambda", lambda)?;
    Ok((-2.0 * lambda.ln()).sqrt())
}

/// Inverse of [`purity_from_lambda`]. Accepts the floor itself (`lambda = 0`).
pub fn lambda_from_purity(purity: f64, bs: &BeamsplitterSpec) -> Result<f64> {
    let floor = purity_floor(bs);
    let tr = bs.transmission() * bs.reflection();
    if !(purity >= floor - 1e-12 && purity <= 1.0 + 1e-12) || tr == 0.0 {
        return Err(Error::OutOfRange {
            name: "purity",
            value: purity,
            lo: floor,
            hi: 1.0,
        });
    }
    Ok(((purity - floor).max(0.0) / (2.0 * tr)).sqrt().min(1.0))
}

/// Phase-noise width that dephases the state to `purity`.
///
/// The floor `T^2 + R^2` itself would need infinite noise and is rejected
/// with [`Error::PurityFloor`].
pub fn sigma_from_purity(purity: f64, bs: &BeamsplitterSpec) -> Result<f64> {
    let floor = purity_floor(bs);
    if purity <= floor {
        return Err(Error::PurityFloor { purity, floor });
    }
    if purity > 1.0 + 1e-12 {
        return Err(Error::OutOfRange {
            name: "purity",
            value: purity,
            lo: floor,
            hi: 1.0,
        });
    }
    // Purity 1 up to rounding in T^2 + R^2 is the pure state.
    if purity >= 1.0 - 1e-12 {
        return Ok(0.0);
    }
    let ratio = (purity - floor) / (2.0 * bs.transmission() * bs.reflection());
    Ok((-ratio.min(1.0).ln()).sqrt())
}

/// One draw of the Referee's noisy phase, `Normal(phi_x, sigma^2)`.
///
/// `sigma = 0` returns `phi_x` untouched; `sigma = inf` draws a uniform phase.
pub fn sample_phase_noise<R: Rng + ?Sized>(phi_x: f64, sigma: f64, rng: &mut R) -> f64 {
    if sigma == 0.0 {
        phi_x
    } else if sigma.is_infinite() {
        rng.random_range(0.0..TAU)
    } else {
        Normal::new(phi_x, sigma).expect("finite positive sigma").sample(rng)
    }
}

/// The three mutually consistent dephasing parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecoherenceSpec {
    /// Gaussian phase-noise width in radians; infinite at the purity floor.
    pub sigma: f64,
    pub lambda: f64,
    pub purity: f64,
}

impl DecoherenceSpec {
    pub fn from_lambda(lambda: f64, bs: &BeamsplitterSpec) -> Result<Self> {
        Ok(Self {
            sigma: sigma_from_lambda(lambda)?,
            lambda,
            purity: purity_from_lambda(bs, lambda),
        })
    }

    pub fn from_sigma(sigma: f64, bs: &BeamsplitterSpec) -> Result<Self> {
        let lambda = lambda_from_sigma(sigma)?;
        Ok(Self {
            sigma,
            lambda,
            purity: purity_from_lambda(bs, lambda),
        })
    }

    pub fn from_purity(purity: f64, bs: &BeamsplitterSpec) -> Result<Self> {
        let lambda = lambda_from_purity(purity, bs)?;
        Ok(Self {
            sigma: sigma_from_lambda(lambda)?,
            lambda,
            purity,
        })
    }

    pub fn pure() -> Self {
        Self {
            sigma: 0.0,
            lambda: 1.0,
            purity: 1.0,
        }
    }
}
