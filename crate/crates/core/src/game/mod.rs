//! The XOR game: closed-form win probabilities, the Referee schedule, the
//! players' strategy and seeded Monte Carlo runs.

mod analytic;
mod round;
mod run;
mod schedule;

pub use analytic::{p_ab_given_xy, pwin_from_distribution, pwin_lambda, pwin_purity};
pub use round::{play_round, sample_pattern, strategy_outputs, RoundResult};
pub use run::{
    run_experiment, simulate_instance, with_workers, CountMode, EventStream, ExperimentParams, InstanceRecord,
    PhaseNoise, RunRecord,
};
pub use schedule::{RefereeSchedule, ALL_SETTINGS};
