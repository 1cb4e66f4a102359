//! Synthetic corpora with controlled overlap between systems, and a naive
//! reference implementation of the utility measure to check the real one against.
//!
//! Generation draws from `ChaCha8Rng::seed_from_u64(seed)` (the `rand_chacha`
//! crate) using `rand` 0.8 sampling routines, so a given spec and seed yield the
//! same corpus on every platform.
//!
//! For each query the relevant documents are split into three groups:
//!
//! * **shared** documents, retrieved by every system at the same ranks at the
//!   top of the ranking;
//! * **unique** documents, `unique_per_system` of them for each "novel"
//!   system (the first `novel_systems` systems), retrieved by that system only;
//! * the remaining **partial** documents, each retrieved by a random
//!   non-empty subset of systems.
//!
//! A system's run lists its shared documents first, then its other relevant
//! documents in shuffled order, then non-relevant filler up to `depth`. Novel
//! systems can be pushed down by `novel_lead` filler documents placed above
//! everything else, which lowers their precision without hiding what they
//! retrieve. Filler documents are judged irrelevant with probability 0.5 and
//! left unjudged otherwise.

mod oracle;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::corpus::{DocId, JudgmentSet, QueryId, RelevanceGrade, RunEntry, RunParseOptions, RunSet, SystemId};
use crate::error::{Error, Result};

pub use oracle::{enumerated_read_probability, oracle_utility, ORACLE_MAX_DEPTH};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SyntheticSpec {
    pub num_systems: usize,
    pub num_queries: usize,
    pub depth: u32,
    pub relevant_per_query: usize,
    /// Fraction of the relevant documents every system retrieves.
    pub shared_fraction: f64,
    /// Relevant documents retrieved only by one designated system, per novel system.
    pub unique_per_system: usize,
    /// How many systems (taken in id order) get unique documents.
    pub novel_systems: usize,
    /// Filler documents placed above the relevant ones in novel systems' runs.
    pub novel_lead: u32,
    pub seed: u64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        Self {
            num_systems: 5,
            num_queries: 10,
            depth: 100,
            relevant_per_query: 20,
            shared_fraction: 0.5,
            unique_per_system: 1,
            novel_systems: 5,
            novel_lead: 0,
            seed: 0,
        }
    }
}

impl SyntheticSpec {
    fn shared_count(&self) -> usize {
        (self.shared_fraction * self.relevant_per_query as f64).round() as usize
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Config(m));
        if self.num_systems < 2 {
            return fail(format!("num_systems must be ≥ 2, got {}", self.num_systems));
        }
        if self.num_queries < 1 {
            return fail("num_queries must be ≥ 1".into());
        }
        if self.depth < 1 {
            return fail("depth must be ≥ 1".into());
        }
        if !(0.0..=1.0).contains(&self.shared_fraction) {
            return fail(format!("shared_fraction {} is outside [0, 1]", self.shared_fraction));
        }
        if self.novel_systems > self.num_systems {
            return fail(format!(
                "novel_systems {} exceeds num_systems {}",
                self.novel_systems, self.num_systems
            ));
        }
        let r = self.relevant_per_query as f64;
        let unique = self.novel_systems * self.unique_per_system;
        if self.shared_fraction * r + unique as f64 > r {
            return fail(format!(
                "shared ({} x {}) plus unique ({unique}) relevant documents exceed relevant_per_query {}",
                self.shared_fraction, self.relevant_per_query, self.relevant_per_query
            ));
        }
        if self.relevant_per_query as u64 + u64::from(self.novel_lead) > u64::from(self.depth) {
            return fail(format!(
                "relevant_per_query {} plus novel_lead {} do not fit in depth {}",
                self.relevant_per_query, self.novel_lead, self.depth
            ));
        }
        Ok(())
    }

    pub fn system_id(index: usize) -> SystemId {
        SystemId::new(format!("sys{:02}", index + 1)).expect("generated id is a token")
    }

    pub fn query_id(index: usize) -> QueryId {
        QueryId::new(format!("{}", 1001 + index)).expect("generated id is a token")
    }
}

/// Builds a run set and judgment set from `spec`. Pure in `spec`.
pub fn generate(spec: &SyntheticSpec) -> Result<(RunSet, JudgmentSet)> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut entries = Vec::new();
    let mut judgments = JudgmentSet::new();
    let depth = spec.depth as usize;
    let shared = spec.shared_count();
    let unique_total = spec.novel_systems * spec.unique_per_system;
    let systems: Vec<SystemId> = (0..spec.num_systems).map(SyntheticSpec::system_id).collect();

    for qi in 0..spec.num_queries {
        let query = SyntheticSpec::query_id(qi);
        let doc = |kind: char, k: usize| {
            DocId::new(format!("{query}-{kind}{k:04}")).expect("generated id is a token")
        };
        let relevant: Vec<DocId> = (0..spec.relevant_per_query).map(|k| doc('R', k)).collect();
        for d in &relevant {
            judgments.insert(query.clone(), d.clone(), RelevanceGrade::Relevant)?;
        }
        let filler: Vec<DocId> = (0..2 * depth).map(|k| doc('N', k)).collect();
        for d in &filler {
            if rng.gen_bool(0.5) {
                judgments.insert(query.clone(), d.clone(), RelevanceGrade::Irrelevant)?;
            }
        }

        let (shared_docs, rest) = relevant.split_at(shared);
        let (unique_docs, partial_docs) = rest.split_at(unique_total);
        let mut takes: Vec<Vec<&DocId>> = vec![Vec::new(); spec.num_systems];
        for d in partial_docs {
            let owner = rng.gen_range(0..spec.num_systems);
            for (s, take) in takes.iter_mut().enumerate() {
                if s == owner || rng.gen_bool(0.5) {
                    take.push(d);
                }
            }
        }

        for (s, system) in systems.iter().enumerate() {
            let novel = spec.unique_per_system > 0 && s < spec.novel_systems;
            let mut others: Vec<&DocId> = std::mem::take(&mut takes[s]);
            if novel {
                let start = s * spec.unique_per_system;
                others.extend(&unique_docs[start..start + spec.unique_per_system]);
            }
            others.shuffle(&mut rng);

            let lead = if novel { spec.novel_lead as usize } else { 0 };
            let relevant_count = shared_docs.len() + others.len();
            let filler_needed = depth - relevant_count;
            let picked: Vec<&DocId> = rand::seq::index::sample(&mut rng, filler.len(), filler_needed)
                .into_iter()
                .map(|i| &filler[i])
                .collect();
            let (lead_docs, tail_docs) = picked.split_at(lead.min(filler_needed));

            let mut scores: Vec<f64> = (0..depth).map(|_| rng.gen::<f64>()).collect();
            scores.sort_by(|a, b| b.total_cmp(a));

            let ranking = lead_docs
                .iter()
                .copied()
                .chain(shared_docs.iter())
                .chain(others)
                .chain(tail_docs.iter().copied());
            for (i, (d, score)) in ranking.zip(scores).enumerate() {
                entries.push(RunEntry {
                    query: query.clone(),
                    doc: d.clone(),
                    rank: i as u32 + 1,
                    score: (score * 1e6).round() / 1e6,
                    system: system.clone(),
                });
            }
        }
    }

    let runs = RunSet::from_entries(entries, RunParseOptions { strict_scores: true })?;
    Ok((runs, judgments))
}
