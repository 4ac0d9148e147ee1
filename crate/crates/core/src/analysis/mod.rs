//! Monte Carlo estimators and verification reports.

mod hypotheses;
mod mixing;
mod oracle;
mod shape;
mod speed;
pub mod stats;

pub use hypotheses::{
    verify_hypotheses, verify_network, CheckKind, CheckOutcome, HypothesisReport, VerifyConfig,
    VIOLATION_TOLERANCE,
};
pub use mixing::{mixing_diagnostic, MixingConfig, MixingSeries};
pub use oracle::{oracle_check, OracleConfig, OracleReport};
pub use shape::{
    convex_hull, estimate_shape, hausdorff_l1, polygon_area, shape_estimate, Discrepancy,
    InclusionFrequency, ShapeConfig, ShapeEstimate, ShapeReport,
};
pub use speed::{estimate_speed, fekete_envelope, SpeedConfig, SpeedEstimate, SpeedRow};

use crate::seed;

/// Environment seeds of replicates `0..n` under `base`.
pub fn replicate_seeds(base: u64, n: usize) -> Vec<u64> {
    (0..n as u64).map(|r| seed::derive(base, r)).collect()
}
