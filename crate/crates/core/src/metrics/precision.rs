use std::collections::BTreeSet;

use serde::Serialize;

use crate::corpus::DocId;
use crate::error::{Error, Result};
use crate::metrics::probability::RankAssignment;

/// Non-interpolated average precision.
///
/// Each relevant document retrieved at rank `k` contributes the precision of
/// the top `k`; unretrieved relevant documents contribute zero. Returns `None`
/// when there are no relevant documents, since the metric is undefined there.
pub fn average_precision(ranking: &RankAssignment, relevant: &BTreeSet<DocId>) -> Option<f64> {
    if relevant.is_empty() {
        return None;
    }
    let mut ranks: Vec<u32> = relevant.iter().filter_map(|d| ranking.rank(d)).collect();
    ranks.sort_unstable();
    let sum: f64 = ranks
        .iter()
        .enumerate()
        .map(|(i, &k)| (i + 1) as f64 / f64::from(k))
        .sum();
    Some(sum / relevant.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PrecisionRecall {
    /// `None` when nothing was retrieved.
    pub precision: Option<f64>,
    /// `None` when there are no relevant documents.
    pub recall: Option<f64>,
}

/// Precision and recall over the top `cutoff` ranks.
pub fn precision_recall(
    ranking: &RankAssignment,
    relevant: &BTreeSet<DocId>,
    cutoff: u32,
) -> Result<PrecisionRecall> {
    if cutoff == 0 {
        return Err(Error::Domain("cutoff must be at least 1".into()));
    }
    let hits = relevant
        .iter()
        .filter(|d| ranking.rank(d).is_some_and(|r| r <= cutoff))
        .count();
    let retrieved = ranking.len().min(cutoff as usize);
    Ok(PrecisionRecall {
        precision: (retrieved > 0).then(|| hits as f64 / retrieved as f64),
        recall: (!relevant.is_empty()).then(|| hits as f64 / relevant.len() as f64),
    })
}
