#![allow(dead_code)]

use novelty_eval::corpus::{JudgmentSet, RelevanceGrade, RunEntry, RunParseOptions, RunSet};
use novelty_eval::{DocId, QueryId, SystemId};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn sid(i: usize) -> SystemId {
    SystemId::new(format!("s{i}")).unwrap()
}

pub fn qid(i: usize) -> QueryId {
    QueryId::new(format!("q{i}")).unwrap()
}

pub fn did(i: usize) -> DocId {
    DocId::new(format!("d{i}")).unwrap()
}

/// Unstructured random corpus: every system ranks a random prefix-free subset of a
/// small document universe, and judgments cover a random part of that universe.
pub fn random_corpus<R: Rng>(
    rng: &mut R,
    systems: usize,
    queries: usize,
    depth: u32,
) -> (RunSet, JudgmentSet) {
    let universe = (depth as usize * 2).max(4);
    let mut entries = Vec::new();
    let mut judgments = JudgmentSet::new();
    for q in 0..queries {
        for d in 0..universe {
            let grade = match rng.gen_range(0..6) {
                0 | 1 => Some(RelevanceGrade::Relevant),
                2 => Some(RelevanceGrade::PartiallyRelevant),
                3 => Some(RelevanceGrade::Irrelevant),
                _ => None,
            };
            if let Some(g) = grade {
                judgments.insert(qid(q), did(d), g).unwrap();
            }
        }
        for s in 0..systems {
            let mut docs: Vec<usize> = (0..universe).collect();
            docs.shuffle(rng);
            // runs may be shorter or longer than depth
            let len = rng.gen_range(0..=(depth as usize + 2).min(universe));
            for (i, d) in docs.into_iter().take(len).enumerate() {
                entries.push(RunEntry {
                    query: qid(q),
                    doc: did(d),
                    rank: i as u32 + 1,
                    score: 1.0 - i as f64 / 100.0,
                    system: sid(s),
                });
            }
        }
    }
    let runs = RunSet::from_entries(entries, RunParseOptions::default()).unwrap();
    (runs, judgments)
}
