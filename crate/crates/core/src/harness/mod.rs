//! Leave-one-out evaluation: each system in turn is scored against a pool made
//! of all the other systems.

mod plan;
mod ranking;

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::corpus::{DocId, JudgmentSet, QueryId, RunSet, SystemId};
use crate::error::{Error, Result};
use crate::metrics::{average_precision, total_utility, RankAssignment, UtilityScore};

pub use plan::LeaveOneOutPlan;
pub use ranking::{
    aggregate, per_query_diffs, rank_difference, tie_break, AggregationScheme, PerQueryDiffMatrix,
    QueryRanks, RankingRow, RankingTable,
};

/// Scores of one evaluated system on one query.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SystemQueryResult {
    pub system: SystemId,
    pub query: QueryId,
    pub utility: UtilityScore,
    /// `None` when the query has no relevant documents.
    pub ap: Option<f64>,
    pub relevant_count: usize,
}

impl SystemQueryResult {
    /// Queries without relevant documents are reported but carry no AP.
    pub fn is_flagged(&self) -> bool {
        self.relevant_count == 0
    }
}

/// Rank assignments for every (query, system) of a plan, truncated to depth.
struct Assignments {
    by_query: Vec<Vec<RankAssignment>>,
    relevant: Vec<BTreeSet<DocId>>,
}

impl Assignments {
    fn build(runs: &RunSet, judgments: &JudgmentSet, plan: &LeaveOneOutPlan) -> Self {
        let config = plan.config();
        let by_query = plan
            .queries()
            .iter()
            .map(|q| {
                plan.systems()
                    .iter()
                    .map(|s| match runs.get(s, q) {
                        Some(docs) => RankAssignment::from_ranking(docs, config.depth),
                        None => RankAssignment::empty(config.depth),
                    })
                    .collect()
            })
            .collect();
        let relevant = plan
            .queries()
            .iter()
            .map(|q| judgments.relevant_docs(q, config.partial_relevant_counts))
            .collect();
        Self { by_query, relevant }
    }
}

/// Evaluates every system of `plan` on every query, using the remaining systems as the pool.
///
/// Results are ordered by the plan's system order, then query order. Cells are
/// computed in parallel; the output does not depend on scheduling.
pub fn run_leave_one_out(
    runs: &RunSet,
    judgments: &JudgmentSet,
    plan: &LeaveOneOutPlan,
) -> Result<Vec<SystemQueryResult>> {
    if let Some(missing) = plan.systems().iter().find(|s| !runs.contains_system(s)) {
        return Err(Error::Config(format!("system {missing} has no runs")));
    }
    let config = plan.config();
    let assignments = Assignments::build(runs, judgments, plan);
    let n_queries = plan.queries().len();
    let cells: Vec<(usize, usize)> = (0..plan.systems().len())
        .flat_map(|s| (0..n_queries).map(move |q| (s, q)))
        .collect();

    cells
        .into_par_iter()
        .map(|(si, qi)| {
            let row = &assignments.by_query[qi];
            let relevant = &assignments.relevant[qi];
            let evaluated = &row[si];
            let pool: Vec<&RankAssignment> = row
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != si)
                .map(|(_, a)| a)
                .collect();
            Ok(SystemQueryResult {
                system: plan.systems()[si].clone(),
                query: plan.queries()[qi].clone(),
                utility: total_utility(evaluated, &pool, relevant, config)?,
                ap: average_precision(evaluated, relevant),
                relevant_count: relevant.len(),
            })
        })
        .collect()
}
