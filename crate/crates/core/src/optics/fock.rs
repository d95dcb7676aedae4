//! Two-photon occupation patterns at the interferometer outputs.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::interferometer::Unitary;
use crate::error::{Error, Result};

/// Photon number per mode, in interferometer mode order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OccupationVector(pub [u32; 4]);

impl OccupationVector {
    /// One test photon and one ancilla photon entering the preparation splitters.
    pub const INPUT: OccupationVector = OccupationVector([1, 0, 1, 0]);

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `prod_i n_i!`
    pub fn factorial_product(&self) -> f64 {
        self.0
            .iter()
            .map(|&n| (1..=n).map(f64::from).product::<f64>())
            .product()
    }
}

impl fmt::Display for OccupationVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for n in self.0 {
            write!(f, "{n}")?;
        }
        Ok(())
    }
}

/// Square matrix for an input/output pairing: `n_j` copies of column `j`,
/// then `m_i` copies of row `i`.
pub fn submatrix(
    u: &Unitary,
    input: &OccupationVector,
    output: &OccupationVector,
) -> Result<DMatrix<Complex64>> {
    let (k_in, k_out) = (input.total(), output.total());
    if k_in != k_out {
        return Err(Error::PhotonNumberMismatch {
            input: k_in,
            output: k_out,
        });
    }
    let expand = |occ: &OccupationVector| -> Vec<usize> {
        occ.0
            .iter()
            .enumerate()
            .flat_map(|(mode, &n)| std::iter::repeat_n(mode, n as usize))
            .collect()
    };
    let cols = expand(input);
    let rows = expand(output);
    let k = k_in as usize;
    Ok(DMatrix::from_fn(k, k, |i, j| u[(rows[i], cols[j])]))
}

/// Which lab a detector sits in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Lab {
    Alice,
    Bob,
}

/// Output modes map onto detectors as: mode 0 = A0, mode 1 = B1,
/// mode 2 = B0, mode 3 = A1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pattern {
    /// `2000`: unresolved double click on A0.
    A0A0,
    /// `0200`: unresolved double click on B1.
    B1B1,
    /// `0020`: unresolved double click on B0.
    B0B0,
    /// `0002`: unresolved double click on A1.
    A1A1,
    /// `1001`: in-lab coincidence A0 & A1.
    A0A1,
    /// `0110`: in-lab coincidence B0 & B1.
    B0B1,
    /// `1010`: cross-lab, correlated.
    A0B0,
    /// `0101`: cross-lab, correlated.
    A1B1,
    /// `1100`: cross-lab, anti-correlated.
    A0B1,
    /// `0011`: cross-lab, anti-correlated.
    A1B0,
}

/// Where the two photons of a pattern ended up.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arrival {
    /// Both in one lab; `resolved` is true for an in-lab coincidence and
    /// false for a double click on a single (non number-resolving) detector.
    SameLab { lab: Lab, resolved: bool },
    /// One photon per lab; detector indices for Alice and Bob.
    CrossLab { a: u8, b: u8 },
}

impl Pattern {
    pub const ALL: [Pattern; 10] = [
        Pattern::A0A0,
        Pattern::B1B1,
        Pattern::B0B0,
        Pattern::A1A1,
        Pattern::A0A1,
        Pattern::B0B1,
        Pattern::A0B0,
        Pattern::A1B1,
        Pattern::A0B1,
        Pattern::A1B0,
    ];

    /// Cross-lab patterns in `(a, b)` order `00, 01, 10, 11`.
    pub const CROSS: [Pattern; 4] = [Pattern::A0B0, Pattern::A0B1, Pattern::A1B0, Pattern::A1B1];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn occupation(self) -> OccupationVector {
        OccupationVector(match self {
            Pattern::A0A0 => [2, 0, 0, 0],
            Pattern::B1B1 => [0, 2, 0, 0],
            Pattern::B0B0 => [0, 0, 2, 0],
            Pattern::A1A1 => [0, 0, 0, 2],
            Pattern::A0A1 => [1, 0, 0, 1],
            Pattern::B0B1 => [0, 1, 1, 0],
            Pattern::A0B0 => [1, 0, 1, 0],
            Pattern::A1B1 => [0, 1, 0, 1],
            Pattern::A0B1 => [1, 1, 0, 0],
            Pattern::A1B0 => [0, 0, 1, 1],
        })
    }

    pub fn arrival(self) -> Arrival {
        use Arrival::*;
        match self {
            Pattern::A0A0 | Pattern::A1A1 => SameLab { lab: Lab::Alice, resolved: false },
            Pattern::B0B0 | Pattern::B1B1 => SameLab { lab: Lab::Bob, resolved: false },
            Pattern::A0A1 => SameLab { lab: Lab::Alice, resolved: true },
            Pattern::B0B1 => SameLab { lab: Lab::Bob, resolved: true },
            Pattern::A0B0 => CrossLab { a: 0, b: 0 },
            Pattern::A0B1 => CrossLab { a: 0, b: 1 },
            Pattern::A1B0 => CrossLab { a: 1, b: 0 },
            Pattern::A1B1 => CrossLab { a: 1, b: 1 },
        }
    }

    pub fn cross(a: u8, b: u8) -> Pattern {
        Self::CROSS[((a & 1) * 2 + (b & 1)) as usize]
    }

    pub fn is_cross_lab(self) -> bool {
        matches!(self.arrival(), Arrival::CrossLab { .. })
    }

    /// Whether threshold detectors register this event as a coincidence.
    pub fn is_observable(self) -> bool {
        !matches!(self.arrival(), Arrival::SameLab { resolved: false, .. })
    }

    pub fn label(self) -> String {
        self.occupation().to_string()
    }
}

/// Probabilities over the ten two-photon patterns, indexed by [`Pattern::index`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutcomeDistribution {
    probs: [f64; 10],
}

impl OutcomeDistribution {
    pub(crate) fn from_array(probs: [f64; 10]) -> Self {
        Self { probs }
    }

    /// All mass on a single pattern.
    pub fn point_mass(pattern: Pattern) -> Self {
        let mut probs = [0.0; 10];
        probs[pattern.index()] = 1.0;
        Self { probs }
    }

    pub fn get(&self, pattern: Pattern) -> f64 {
        self.probs[pattern.index()]
    }

    pub fn as_array(&self) -> &[f64; 10] {
        &self.probs
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// Mass on patterns where both photons land in the same lab.
    pub fn same_lab_total(&self) -> f64 {
        Pattern::ALL
            .iter()
            .filter(|p| !p.is_cross_lab())
            .map(|&p| self.get(p))
            .sum()
    }

    /// Cross-lab probability for detector indices `(a, b)`.
    pub fn cross(&self, a: u8, b: u8) -> f64 {
        self.get(Pattern::cross(a, b))
    }
}
