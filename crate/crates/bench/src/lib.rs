//! Corpus fixtures shared by the benchmarks.

use novelty_eval::synth::{generate, SyntheticSpec};
use novelty_eval::{JudgmentSet, RunSet};

/// A corpus the size of a typical shared-task pool: 22 systems, 30 queries, depth 300.
pub fn workshop_scale() -> (RunSet, JudgmentSet) {
    generate(&SyntheticSpec {
        num_systems: 22,
        num_queries: 30,
        depth: 300,
        relevant_per_query: 68,
        shared_fraction: 0.25,
        unique_per_system: 1,
        novel_systems: 22,
        novel_lead: 0,
        seed: 1999,
    })
    .expect("fixture spec is feasible")
}
