//! From raw counts to win rates and superposition confidence.

mod binomial;
mod curve;
mod normalize;
mod stream;

pub use binomial::{confidence, p_value, ConfidenceResult, MAX_GAMES};
pub use curve::{confidence_curve_stats, log_linear_fit, CurvePoint, LogLinearFit, QUARTILE_CONVENTION};
pub use normalize::{normalized_win_rate, EfficiencyMap};
pub use stream::{confidence_event_stream, confidence_trajectory, effective_double_click_efficiency};
