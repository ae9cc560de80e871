//! Feature rankings, the risk score and paired method comparisons.

mod compare;
mod interpret;
mod risk;
mod stats;

pub use compare::{compare_solutions, ComparisonReport, PointComparison};
pub use interpret::{interpretability_ranking, InterpretabilityReport, InterpretabilityRow};
pub use risk::{
    risk_feature_names, risk_feature_positions, risk_score, risk_score_vector, weight_preset,
    REFERENCE_AMPLITUDES_POLY, REFERENCE_AMPLITUDES_RBF, RISK_COEFFICIENTS, RISK_FEATURE_RANGES, RISK_INTERCEPT,
    STULONG_PRESET,
};
pub use stats::{mean, median, sign_test};
