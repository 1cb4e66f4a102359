//! The rank-based reading model.
//!
//! A user scanning a ranking of `N` documents picks a stopping threshold
//! uniformly from `1..=N` and reads everything above it, so a document at rank
//! `r` is read with probability `(N - r + 1) / N`. The probability of reading a
//! document without the evaluated system is the mean of that quantity over the
//! remaining systems.

use std::borrow::Borrow;
use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::corpus::{DocId, RankedDoc};
use crate::error::{Error, Result};
use crate::metrics::config::{EvalConfig, Rational};

/// A probability held as an exact fraction in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Probability(Rational);

impl Probability {
    pub const ZERO: Probability = Probability(Rational::new_raw(0, 1));
    pub const ONE: Probability = Probability(Rational::new_raw(1, 1));

    pub fn new(value: Rational) -> Result<Self> {
        if value < Rational::from_integer(0) || value > Rational::from_integer(1) {
            return Err(Error::Domain(format!("{value} is not a probability")));
        }
        Ok(Probability(value))
    }

    pub fn ratio(&self) -> Rational {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        *self.0.numer() == 0
    }

    pub fn to_f64(&self) -> f64 {
        *self.0.numer() as f64 / *self.0.denom() as f64
    }

    /// Replaces zero with `floor`.
    pub fn floored(self, floor: Rational) -> Probability {
        if self.is_zero() {
            Probability(floor)
        } else {
            self
        }
    }
}

impl Serialize for Probability {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_f64(self.to_f64())
    }
}

/// Ranks of the documents one system retrieved for one query, all within `1..=N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankAssignment {
    depth: u32,
    ranks: HashMap<DocId, u32>,
}

impl RankAssignment {
    /// Validates that every rank lies in `1..=depth` and ranks and documents are unique.
    pub fn new<I>(depth: u32, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (DocId, u32)>,
    {
        let mut ranks = HashMap::new();
        let mut used = BTreeSet::new();
        for (doc, rank) in pairs {
            if rank == 0 || rank > depth {
                return Err(Error::Domain(format!(
                    "rank {rank} of doc {doc} is outside 1..={depth}"
                )));
            }
            if !used.insert(rank) {
                return Err(Error::Domain(format!("rank {rank} assigned twice")));
            }
            if ranks.insert(doc.clone(), rank).is_some() {
                return Err(Error::Domain(format!("doc {doc} ranked twice")));
            }
        }
        Ok(Self { depth, ranks })
    }

    /// Takes a validated ranking and keeps the entries within `depth`.
    pub fn from_ranking(docs: &[RankedDoc], depth: u32) -> Self {
        let ranks = docs
            .iter()
            .filter(|d| d.rank <= depth)
            .map(|d| (d.doc.clone(), d.rank))
            .collect();
        Self { depth, ranks }
    }

    /// An assignment for a system that retrieved nothing.
    pub fn empty(depth: u32) -> Self {
        Self {
            depth,
            ranks: HashMap::new(),
        }
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn rank(&self, doc: &DocId) -> Option<u32> {
        self.ranks.get(doc).copied()
    }

    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    /// Documents sorted by rank.
    pub fn ordered(&self) -> Vec<(&DocId, u32)> {
        let mut v: Vec<_> = self.ranks.iter().map(|(d, r)| (d, *r)).collect();
        v.sort_by_key(|&(_, r)| r);
        v
    }
}

/// `(N - r + 1) / N` for a retrieved document, 0 for one not retrieved within depth.
pub fn read_probability(rank: Option<u32>, depth: u32) -> Result<Probability> {
    if depth == 0 {
        return Err(Error::Domain("depth N must be at least 1".into()));
    }
    match rank {
        None => Ok(Probability::ZERO),
        Some(r) if r == 0 || r > depth => Err(Error::Domain(format!(
            "rank {r} is outside 1..={depth}"
        ))),
        Some(r) => {
            let n = i128::from(depth);
            Ok(Probability(Rational::new(n - i128::from(r) + 1, n)))
        }
    }
}

fn pool_mean<A: Borrow<RankAssignment>>(
    doc: &DocId,
    pool: &[A],
    depth: u32,
) -> Result<Probability> {
    if pool.is_empty() {
        return Err(Error::Domain("pool of existing systems is empty".into()));
    }
    let mut sum = Rational::from_integer(0);
    for assignment in pool {
        let assignment = assignment.borrow();
        if assignment.depth != depth {
            return Err(Error::Domain(format!(
                "pool assignment has depth {} but evaluation depth is {depth}",
                assignment.depth
            )));
        }
        sum += read_probability(assignment.rank(doc), depth)?.ratio();
    }
    Probability::new(sum / pool.len() as i128)
}

/// Mean read probability of `doc` over the pool, floored at `ε / |E|` when zero.
///
/// `pool` may hold assignments or references to them.
pub fn pooled_probability<A: Borrow<RankAssignment>>(
    doc: &DocId,
    pool: &[A],
    config: &EvalConfig,
) -> Result<Probability> {
    let mean = pool_mean(doc, pool, config.depth)?;
    Ok(mean.floored(config.epsilon.pool_floor(config.depth, pool.len())))
}

/// Read probabilities of one relevant document.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReadEntry {
    pub doc: DocId,
    /// Probability of reading the document through the evaluated system, unfloored.
    pub p_system: Probability,
    /// Probability of reading it through the other systems, after flooring.
    pub p_pool: Probability,
}

/// The reading model for one evaluated system and one query.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReadModel {
    pub pool_size: usize,
    pub entries: Vec<ReadEntry>,
}

impl ReadModel {
    pub fn build<A: Borrow<RankAssignment>>(
        evaluated: &RankAssignment,
        pool: &[A],
        relevant: &BTreeSet<DocId>,
        config: &EvalConfig,
    ) -> Result<Self> {
        if pool.is_empty() {
            return Err(Error::Domain("pool of existing systems is empty".into()));
        }
        if evaluated.depth != config.depth {
            return Err(Error::Domain(format!(
                "evaluated assignment has depth {} but evaluation depth is {}",
                evaluated.depth, config.depth
            )));
        }
        let entries = relevant
            .iter()
            .map(|doc| {
                Ok(ReadEntry {
                    doc: doc.clone(),
                    p_system: read_probability(evaluated.rank(doc), config.depth)?,
                    p_pool: pooled_probability(doc, pool, config)?,
                })
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            pool_size: pool.len(),
            entries,
        })
    }
}
