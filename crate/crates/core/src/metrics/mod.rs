//! Read-probability model, novelty utility and precision-based baselines.

pub mod config;
pub mod precision;
pub mod probability;
pub mod utility;

pub use config::{EpsilonPolicy, EvalConfig, LogBase, Rational};
pub use precision::{average_precision, precision_recall, PrecisionRecall};
pub use probability::{
    pooled_probability, read_probability, Probability, RankAssignment, ReadEntry, ReadModel,
};
pub use utility::{document_utility, total_utility, utility_from_model, UtilityScore};
