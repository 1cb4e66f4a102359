//! Turning per-(system, query) scores into rankings and rank differences.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use serde::Serialize;

use crate::corpus::{QueryId, SystemId};
use crate::error::{Error, Result};
use crate::harness::SystemQueryResult;

/// How per-query utilities are combined across queries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AggregationScheme {
    #[default]
    Sum,
    Mean,
}

impl FromStr for AggregationScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sum" => Ok(AggregationScheme::Sum),
            "mean" => Ok(AggregationScheme::Mean),
            other => Err(Error::Config(format!(
                "aggregation {other:?} is neither 'sum' nor 'mean'"
            ))),
        }
    }
}

impl fmt::Display for AggregationScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AggregationScheme::Sum => "sum",
            AggregationScheme::Mean => "mean",
        })
    }
}

/// Ranks systems by descending score; exact ties go to the lexicographically smaller id.
pub fn tie_break(scores: &[(SystemId, f64)]) -> BTreeMap<SystemId, usize> {
    let mut order: Vec<&(SystemId, f64)> = scores.iter().collect();
    order.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    order
        .into_iter()
        .enumerate()
        .map(|(i, (id, _))| (id.clone(), i + 1))
        .collect()
}

/// Ranks systems by descending exact utility ratio, ties to the smaller id.
///
/// Utility is the log of this ratio, so the order is the same for every log
/// base, and documents whose contributions cancel exactly produce exact ties.
fn utility_ranks(ratios: &[(SystemId, BigRational)]) -> BTreeMap<SystemId, usize> {
    let mut order: Vec<&(SystemId, BigRational)> = ratios.iter().collect();
    order.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    order
        .into_iter()
        .enumerate()
        .map(|(i, (id, _))| (id.clone(), i + 1))
        .collect()
}

/// Positive when the utility measure places the system higher than AP does.
pub fn rank_difference(ap_rank: usize, utility_rank: usize) -> i64 {
    ap_rank as i64 - utility_rank as i64
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankingRow {
    pub system: SystemId,
    pub aggregate_ap: f64,
    pub aggregate_utility: f64,
    pub ap_rank: usize,
    pub utility_rank: usize,
    pub difference: i64,
}

/// Systems ranked by aggregate AP and by aggregate utility, in utility-rank order.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct RankingTable {
    rows: Vec<RankingRow>,
}

fn check_permutation<'a>(ranks: impl Iterator<Item = &'a usize>, m: usize, what: &str) -> Result<()> {
    let set: BTreeSet<usize> = ranks.copied().collect();
    if set.len() != m || set.first() != Some(&1) || set.last() != Some(&m) {
        return Err(Error::Integrity(format!("{what} ranks are not a permutation of 1..={m}")));
    }
    Ok(())
}

impl RankingTable {
    fn from_rows(mut rows: Vec<RankingRow>) -> Result<Self> {
        let m = rows.len();
        check_permutation(rows.iter().map(|r| &r.ap_rank), m, "AP")?;
        check_permutation(rows.iter().map(|r| &r.utility_rank), m, "utility")?;
        rows.sort_by_key(|r| r.utility_rank);
        Ok(Self { rows })
    }

    /// Builds a table from externally supplied rank pairs; scores are left at zero.
    pub fn from_ranks<I>(ranks: I) -> Result<Self>
    where
        I: IntoIterator<Item = (SystemId, usize, usize)>,
    {
        let rows = ranks
            .into_iter()
            .map(|(system, ap_rank, utility_rank)| RankingRow {
                system,
                aggregate_ap: 0.0,
                aggregate_utility: 0.0,
                ap_rank,
                utility_rank,
                difference: rank_difference(ap_rank, utility_rank),
            })
            .collect();
        Self::from_rows(rows)
    }

    pub fn rows(&self) -> &[RankingRow] {
        &self.rows
    }

    pub fn row(&self, system: &SystemId) -> Option<&RankingRow> {
        self.rows.iter().find(|r| &r.system == system)
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

/// Results indexed by cell, after checking the grid is complete.
struct Grid<'a> {
    systems: Vec<SystemId>,
    queries: Vec<QueryId>,
    cells: BTreeMap<(&'a SystemId, &'a QueryId), &'a SystemQueryResult>,
}

fn grid(results: &[SystemQueryResult]) -> Result<Grid<'_>> {
    let systems: BTreeSet<&SystemId> = results.iter().map(|r| &r.system).collect();
    let queries: BTreeSet<&QueryId> = results.iter().map(|r| &r.query).collect();
    if systems.is_empty() {
        return Err(Error::Integrity("no results to aggregate".into()));
    }
    let mut cells = BTreeMap::new();
    for r in results {
        if cells.insert((&r.system, &r.query), r).is_some() {
            return Err(Error::Integrity(format!(
                "duplicate result for system {} query {}",
                r.system, r.query
            )));
        }
    }
    let missing: Vec<String> = systems
        .iter()
        .flat_map(|s| queries.iter().map(move |q| (*s, *q)))
        .filter(|key| !cells.contains_key(key))
        .map(|(s, q)| format!("({s}, {q})"))
        .collect();
    if !missing.is_empty() {
        return Err(Error::Integrity(format!(
            "result grid is missing cells {}",
            missing.join(", ")
        )));
    }
    for q in &queries {
        let defined: BTreeSet<bool> = systems
            .iter()
            .map(|s| cells[&(*s, *q)].ap.is_some())
            .collect();
        if defined.len() > 1 {
            return Err(Error::Integrity(format!(
                "AP is defined for some systems but not others on query {q}"
            )));
        }
    }
    Ok(Grid {
        systems: systems.into_iter().cloned().collect(),
        queries: queries.into_iter().cloned().collect(),
        cells,
    })
}

/// Aggregates utilities with `scheme` and AP as a mean over queries where it is defined.
///
/// Queries with undefined AP are left out of the AP mean for every system
/// alike. If no query has a defined AP the aggregate is 0 for everyone.
pub fn aggregate(results: &[SystemQueryResult], scheme: AggregationScheme) -> Result<RankingTable> {
    let grid = grid(results)?;
    let mut ap_scores = Vec::with_capacity(grid.systems.len());
    let mut utility_scores = Vec::with_capacity(grid.systems.len());
    let mut utility_ratios = Vec::with_capacity(grid.systems.len());
    for s in &grid.systems {
        let cells: Vec<&SystemQueryResult> =
            grid.queries.iter().map(|q| grid.cells[&(s, q)]).collect();
        let utility_sum: f64 = cells.iter().map(|c| c.utility.total).sum();
        let utility = match scheme {
            AggregationScheme::Sum => utility_sum,
            AggregationScheme::Mean => utility_sum / cells.len() as f64,
        };
        let ratio = cells
            .iter()
            .fold(BigRational::from_integer(1.into()), |acc, c| acc * &c.utility.ratio);
        utility_ratios.push((s.clone(), ratio));
        let aps: Vec<f64> = cells.iter().filter_map(|c| c.ap).collect();
        let ap = if aps.is_empty() {
            0.0
        } else {
            aps.iter().sum::<f64>() / aps.len() as f64
        };
        ap_scores.push((s.clone(), ap));
        utility_scores.push((s.clone(), utility));
    }
    let ap_ranks = tie_break(&ap_scores);
    let utility_ranks = utility_ranks(&utility_ratios);
    let rows = ap_scores
        .into_iter()
        .zip(utility_scores)
        .map(|((system, ap), (_, utility))| {
            let ap_rank = ap_ranks[&system];
            let utility_rank = utility_ranks[&system];
            RankingRow {
                system,
                aggregate_ap: ap,
                aggregate_utility: utility,
                ap_rank,
                utility_rank,
                difference: rank_difference(ap_rank, utility_rank),
            }
        })
        .collect();
    RankingTable::from_rows(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct QueryRanks {
    pub ap_rank: usize,
    pub utility_rank: usize,
    pub difference: i64,
}

/// Per-query rank differences, systems and queries both sorted.
#[derive(Debug, Clone, PartialEq)]
pub struct PerQueryDiffMatrix {
    systems: Vec<SystemId>,
    queries: Vec<QueryId>,
    cells: BTreeMap<(SystemId, QueryId), QueryRanks>,
}

impl PerQueryDiffMatrix {
    pub fn systems(&self) -> &[SystemId] {
        &self.systems
    }

    pub fn queries(&self) -> &[QueryId] {
        &self.queries
    }

    pub fn cell(&self, system: &SystemId, query: &QueryId) -> Option<QueryRanks> {
        self.cells.get(&(system.clone(), query.clone())).copied()
    }

    pub fn difference(&self, system: &SystemId, query: &QueryId) -> Option<i64> {
        self.cell(system, query).map(|c| c.difference)
    }

    pub fn column_sum(&self, query: &QueryId) -> i64 {
        self.systems
            .iter()
            .filter_map(|s| self.difference(s, query))
            .sum()
    }
}

/// Ranks systems independently on each query by AP and by utility.
///
/// On a query where AP is undefined every system ties on AP.
pub fn per_query_diffs(results: &[SystemQueryResult]) -> Result<PerQueryDiffMatrix> {
    let grid = grid(results)?;
    let mut cells = BTreeMap::new();
    for q in &grid.queries {
        let ap: Vec<(SystemId, f64)> = grid
            .systems
            .iter()
            .map(|s| (s.clone(), grid.cells[&(s, q)].ap.unwrap_or(0.0)))
            .collect();
        let utility: Vec<(SystemId, BigRational)> = grid
            .systems
            .iter()
            .map(|s| (s.clone(), grid.cells[&(s, q)].utility.ratio.clone()))
            .collect();
        let ap_ranks = tie_break(&ap);
        let utility_ranks = utility_ranks(&utility);
        for s in &grid.systems {
            let ap_rank = ap_ranks[s];
            let utility_rank = utility_ranks[s];
            cells.insert(
                (s.clone(), q.clone()),
                QueryRanks {
                    ap_rank,
                    utility_rank,
                    difference: rank_difference(ap_rank, utility_rank),
                },
            );
        }
    }
    Ok(PerQueryDiffMatrix {
        systems: grid.systems,
        queries: grid.queries,
        cells,
    })
}
