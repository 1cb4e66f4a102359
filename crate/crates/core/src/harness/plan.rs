use std::collections::{BTreeSet, HashSet};

use crate::corpus::{JudgmentSet, QueryId, RunSet, SystemId};
use crate::error::{Error, Result};
use crate::metrics::EvalConfig;

/// Which systems and queries take part in a leave-one-out evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct LeaveOneOutPlan {
    systems: Vec<SystemId>,
    queries: Vec<QueryId>,
    config: EvalConfig,
}

fn check_unique<T: std::hash::Hash + Eq + std::fmt::Display>(items: &[T], what: &str) -> Result<()> {
    let mut seen = HashSet::new();
    for item in items {
        if !seen.insert(item) {
            return Err(Error::Config(format!("{what} {item} listed twice")));
        }
    }
    Ok(())
}

impl LeaveOneOutPlan {
    pub fn new(systems: Vec<SystemId>, queries: Vec<QueryId>, config: EvalConfig) -> Result<Self> {
        config.validate()?;
        if systems.len() < 2 {
            return Err(Error::Config(format!(
                "leave-one-out requires ≥ 2 systems, found {}",
                systems.len()
            )));
        }
        if queries.is_empty() {
            return Err(Error::Config("no queries to evaluate".into()));
        }
        check_unique(&systems, "system")?;
        check_unique(&queries, "query")?;
        Ok(Self {
            systems,
            queries,
            config,
        })
    }

    /// Every system found in `runs` and every judged query, both sorted.
    pub fn from_corpus(runs: &RunSet, judgments: &JudgmentSet, config: EvalConfig) -> Result<Self> {
        let queries: BTreeSet<QueryId> = judgments.queries().cloned().collect();
        Self::new(runs.systems(), queries.into_iter().collect(), config)
    }

    pub fn systems(&self) -> &[SystemId] {
        &self.systems
    }

    pub fn queries(&self) -> &[QueryId] {
        &self.queries
    }

    pub fn config(&self) -> &EvalConfig {
        &self.config
    }
}
