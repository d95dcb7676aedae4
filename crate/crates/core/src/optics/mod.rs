//! Four-mode interferometer and exact two-photon outcome probabilities.
//!
//! Outcome probabilities come from permanents of unitary submatrices;
//! partial distinguishability interpolates toward the determinant and test
//! photon dephasing mixes in the unitary with the Referee's `x` inverted.

mod fock;
mod interferometer;
mod permanent;
mod transition;

pub use fock::{submatrix, Arrival, Lab, OccupationVector, OutcomeDistribution, Pattern};
pub use interferometer::{build_unitary, BeamsplitterSpec, InterferometerConfig, PhaseSetting, Unitary};
pub use permanent::{permanent, MAX_PERMANENT_DIM};
pub use transition::{
    analytic_pair_probabilities, outcome_distribution, outcome_distribution_with_ancilla,
    transition_probability, PairProbabilities, UnitaryPair,
};
