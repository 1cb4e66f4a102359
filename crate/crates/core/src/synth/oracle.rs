//! A deliberately naive utility computation for cross-checking.
//!
//! Read probabilities are summed threshold by threshold, ranks are found by
//! scanning the raw run lists, and the pool probability is an explicit mean.
//! Nothing here calls into `crate::metrics`.

use crate::corpus::{JudgmentSet, QueryId, RelevanceGrade, RunSet, SystemId};
use crate::error::{Error, Result};
use crate::metrics::{EpsilonPolicy, EvalConfig, LogBase, Rational, UtilityScore};

/// Largest depth the oracle accepts.
pub const ORACLE_MAX_DEPTH: u32 = 50;

/// `Σ_{i=rank}^{N} 1/N`, one threshold at a time. `None` reads with probability 0.
pub fn enumerated_read_probability(rank: Option<u32>, depth: u32) -> Rational {
    let mut p = Rational::from_integer(0);
    if let Some(rank) = rank {
        for _threshold in rank..=depth {
            p += Rational::new(1, i128::from(depth));
        }
    }
    p
}

fn rank_in(runs: &RunSet, system: &SystemId, query: &QueryId, doc: &crate::corpus::DocId, depth: u32) -> Option<u32> {
    let docs = runs.get(system, query)?;
    for entry in docs {
        if &entry.doc == doc && entry.rank <= depth {
            return Some(entry.rank);
        }
    }
    None
}

/// Utility of `x` on `query` with every other system in `runs` as the pool.
pub fn oracle_utility(
    runs: &RunSet,
    judgments: &JudgmentSet,
    x: &SystemId,
    query: &QueryId,
    config: &EvalConfig,
) -> Result<UtilityScore> {
    let depth = config.depth;
    if depth == 0 || depth > ORACLE_MAX_DEPTH {
        return Err(Error::Config(format!(
            "oracle is limited to 1 ≤ N ≤ {ORACLE_MAX_DEPTH}, got N = {depth}"
        )));
    }
    let others: Vec<SystemId> = runs.systems().into_iter().filter(|s| s != x).collect();
    if others.is_empty() {
        return Err(Error::Domain("oracle needs at least one other system".into()));
    }
    let system_floor = match config.epsilon {
        EpsilonPolicy::HalfMinimumMass => Rational::new(1, 2 * i128::from(depth)),
        EpsilonPolicy::Custom(eps) => eps,
    };
    let pool_floor = system_floor / others.len() as i128;

    let mut score = UtilityScore::zero();
    for (q, doc, grade) in judgments.iter() {
        if q != query {
            continue;
        }
        let relevant = grade == RelevanceGrade::Relevant
            || (config.partial_relevant_counts && grade == RelevanceGrade::PartiallyRelevant);
        if !relevant {
            continue;
        }
        let mut p_x = enumerated_read_probability(rank_in(runs, x, query, doc, depth), depth);
        let mut p_pool = Rational::from_integer(0);
        for y in &others {
            p_pool += enumerated_read_probability(rank_in(runs, y, query, doc, depth), depth);
        }
        p_pool /= others.len() as i128;

        if p_x == Rational::from_integer(0) {
            p_x = system_floor;
        }
        if p_pool == Rational::from_integer(0) {
            p_pool = pool_floor;
        }
        let to_f64 = |r: Rational| *r.numer() as f64 / *r.denom() as f64;
        let nats = to_f64(p_x).ln() - to_f64(p_pool).ln();
        let u = match config.log_base {
            LogBase::Natural => nats,
            LogBase::Other(b) => nats / b.ln(),
        };
        score.push(doc.clone(), u, p_x / p_pool);
    }
    Ok(score)
}
