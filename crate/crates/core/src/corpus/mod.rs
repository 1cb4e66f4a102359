//! Reading and writing run files, relevance judgments and topic metadata.

pub mod ids;
pub mod qrels;
pub mod run;
pub mod topics;

pub use ids::{DocId, QueryId, SystemId};
pub use qrels::{
    parse_judgments, parse_judgments_str, write_judgments, GradeMap, JudgmentSet, RelevanceGrade,
};
pub use run::{
    parse_run_file, parse_run_line, parse_run_str, write_run_file, RankedDoc, RunEntry,
    RunParseOptions, RunSet,
};
pub use topics::{parse_topics, parse_topics_str, TopicMeta, TopicParseOptions};
