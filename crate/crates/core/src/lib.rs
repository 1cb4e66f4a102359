//! Evaluation of ranked retrieval runs by the novelty of what they retrieve.
//!
//! A system's utility for a relevant document is the log ratio between the
//! probability that a user reads the document through that system and the
//! probability of reading it through the other available systems. Systems are
//! compared leave-one-out: each one is scored against a pool made of all the
//! others, and the resulting ranking is set against the ranking by average
//! precision.
//!
//! ```
//! use novelty_eval::corpus::{parse_judgments_str, parse_run_str, GradeMap, RunParseOptions};
//! use novelty_eval::harness::{aggregate, run_leave_one_out, AggregationScheme, LeaveOneOutPlan};
//! use novelty_eval::metrics::EvalConfig;
//!
//! let runs = parse_run_str(
//!     "q1 0 a 1 0.9 s1\nq1 0 b 2 0.5 s1\nq1 0 a 1 0.8 s2\n",
//!     RunParseOptions::default(),
//! )?;
//! let qrels = parse_judgments_str("q1 0 a 2\nq1 0 b 2\n", &GradeMap::default())?;
//! let plan = LeaveOneOutPlan::from_corpus(&runs, &qrels, EvalConfig::with_depth(10))?;
//! let results = run_leave_one_out(&runs, &qrels, &plan)?;
//! let table = aggregate(&results, AggregationScheme::Sum)?;
//! assert_eq!(table.rows()[0].system.as_str(), "s1");
//! # Ok::<(), novelty_eval::Error>(())
//! ```

pub mod corpus;
pub mod error;
pub mod harness;
pub mod metrics;
pub mod report;
pub mod synth;

pub use corpus::{DocId, JudgmentSet, QueryId, RelevanceGrade, RunSet, SystemId};
pub use error::{Error, Result};
pub use harness::{LeaveOneOutPlan, RankingTable, SystemQueryResult};
pub use metrics::{EvalConfig, UtilityScore};
