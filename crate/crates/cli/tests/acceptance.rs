//! Acceptance criteria, one PASS/FAIL line each. Run with
//! `cargo test -p novelty-eval-cli --test acceptance`.

use std::collections::BTreeSet;

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use novelty_eval::corpus::{
    parse_run_str, write_run_file, JudgmentSet, RelevanceGrade, RunEntry, RunParseOptions, RunSet,
};
use novelty_eval::harness::{
    aggregate, per_query_diffs, run_leave_one_out, AggregationScheme, LeaveOneOutPlan,
    RankingTable,
};
use novelty_eval::metrics::{average_precision, read_probability, EvalConfig, LogBase, RankAssignment};
use novelty_eval::report::signed;
use novelty_eval::synth::{enumerated_read_probability, generate, oracle_utility, SyntheticSpec};
use novelty_eval::{DocId, QueryId, SystemId};
use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Tolerance for harness vs. oracle utility totals.
const ORACLE_TOLERANCE: f64 = 1e-12;
/// Tolerance for crafted average precision values.
const AP_TOLERANCE: f64 = 1e-12;
const ORACLE_CASES: usize = 1000;
const DOMINANCE_CORPORA: u64 = 100;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    let elapsed = start.elapsed();
    ensure(elapsed < limit, || format!("took {elapsed:?}, limit {limit:?}"))
}

fn random_corpus(rng: &mut ChaCha8Rng, systems: usize, queries: usize, depth: u32) -> (RunSet, JudgmentSet) {
    let universe = (2 * depth as usize).max(4);
    let mut entries = Vec::new();
    let mut judgments = JudgmentSet::new();
    for q in 0..queries {
        let query = QueryId::new(format!("q{q}")).unwrap();
        for d in 0..universe {
            let grade = match rng.gen_range(0..6) {
                0 | 1 => Some(RelevanceGrade::Relevant),
                2 => Some(RelevanceGrade::PartiallyRelevant),
                3 => Some(RelevanceGrade::Irrelevant),
                _ => None,
            };
            if let Some(g) = grade {
                judgments.insert(query.clone(), DocId::new(format!("d{d}")).unwrap(), g).unwrap();
            }
        }
        for s in 0..systems {
            let mut docs: Vec<usize> = (0..universe).collect();
            docs.shuffle(rng);
            // at least one document so that every system is present
            let len = rng.gen_range(1..=(depth as usize + 2).min(universe));
            for (i, d) in docs.into_iter().take(len).enumerate() {
                entries.push(RunEntry {
                    query: query.clone(),
                    doc: DocId::new(format!("d{d}")).unwrap(),
                    rank: i as u32 + 1,
                    score: rng.gen_range(-5.0..5.0),
                    system: SystemId::new(format!("s{s}")).unwrap(),
                });
            }
        }
    }
    (RunSet::from_entries(entries, RunParseOptions::default()).unwrap(), judgments)
}

fn evaluate(runs: &RunSet, judgments: &JudgmentSet, config: EvalConfig) -> Vec<novelty_eval::SystemQueryResult> {
    let plan = LeaveOneOutPlan::from_corpus(runs, judgments, config).unwrap();
    run_leave_one_out(runs, judgments, &plan).unwrap()
}

fn read_probability_enumeration() -> Outcome {
    let start = Instant::now();
    let mut pairs = 0;
    for depth in 1..=50u32 {
        for rank in 1..=depth {
            let closed = read_probability(Some(rank), depth).map_err(|e| e.to_string())?.ratio();
            let summed = enumerated_read_probability(Some(rank), depth);
            ensure(closed == summed, || format!("N={depth} r={rank}: {closed} != {summed}"))?;
            ensure(closed == Ratio::new(i128::from(depth - rank + 1), i128::from(depth)), || {
                format!("N={depth} r={rank}: unexpected {closed}")
            })?;
            pairs += 1;
        }
    }
    within(Duration::from_secs(1), start)?;
    Ok(format!("{pairs} (N, r) pairs exact in {:?}", start.elapsed()))
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(20_000_817);
    let mut cells = 0;
    let mut worst = 0f64;
    for case in 0..ORACLE_CASES {
        let systems = rng.gen_range(2..=4);
        let queries = rng.gen_range(1..=3);
        let depth = rng.gen_range(1..=10);
        let (runs, judgments) = random_corpus(&mut rng, systems, queries, depth);
        let mut config = EvalConfig::with_depth(depth);
        config.partial_relevant_counts = rng.gen_bool(0.25);
        for r in evaluate(&runs, &judgments, config) {
            let oracle = oracle_utility(&runs, &judgments, &r.system, &r.query, &config)
                .map_err(|e| e.to_string())?;
            let gap = (oracle.total - r.utility.total).abs();
            worst = worst.max(gap);
            ensure(gap <= ORACLE_TOLERANCE, || {
                format!("case {case} {} {}: harness {} oracle {}", r.system, r.query, r.utility.total, oracle.total)
            })?;
            cells += 1;
        }
    }
    within(Duration::from_secs(10), start)?;
    Ok(format!(
        "{ORACLE_CASES} corpora, {cells} cells, max |diff| {worst:.1e} in {:?}",
        start.elapsed()
    ))
}

fn self_pool_zero() -> Outcome {
    let mut corpora = 0;
    for seed in 0..30u64 {
        let spec = SyntheticSpec {
            num_systems: 2 + (seed % 6) as usize,
            num_queries: 1 + (seed % 4) as usize,
            depth: 20 + 10 * (seed % 5) as u32,
            relevant_per_query: 1 + (seed % 12) as usize,
            shared_fraction: 1.0,
            unique_per_system: 0,
            novel_systems: 0,
            novel_lead: 0,
            seed,
        };
        let (runs, judgments) = generate(&spec).map_err(|e| e.to_string())?;
        for r in evaluate(&runs, &judgments, EvalConfig::with_depth(spec.depth)) {
            ensure(r.utility.total == 0.0, || {
                format!("seed {seed}: {} on {} scored {}", r.system, r.query, r.utility.total)
            })?;
        }
        corpora += 1;
    }
    Ok(format!("{corpora} fully shared corpora, every utility exactly 0"))
}

fn novelty_dominance() -> Outcome {
    let mut wins = 0;
    for seed in 0..DOMINANCE_CORPORA {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let relevant = rng.gen_range(5..=20);
        let unique = rng.gen_range(1..=2);
        let spec = SyntheticSpec {
            num_systems: rng.gen_range(3..=8),
            num_queries: rng.gen_range(1..=6),
            depth: 100,
            relevant_per_query: relevant,
            shared_fraction: (relevant - unique) as f64 / relevant as f64,
            unique_per_system: unique,
            novel_systems: 1,
            novel_lead: rng.gen_range(3..=10),
            seed,
        };
        let (runs, judgments) = generate(&spec).map_err(|e| e.to_string())?;
        let results = evaluate(&runs, &judgments, EvalConfig::with_depth(spec.depth));
        let table = aggregate(&results, AggregationScheme::Sum).map_err(|e| e.to_string())?;
        let novel = table.row(&SyntheticSpec::system_id(0)).expect("novel system ranked");
        ensure(novel.utility_rank == 1 && novel.ap_rank > 1, || {
            format!("seed {seed}: utility rank {} AP rank {}", novel.utility_rank, novel.ap_rank)
        })?;
        wins += 1;
    }
    Ok(format!("{wins}/{DOMINANCE_CORPORA} corpora: novel system utility rank 1, AP rank > 1"))
}

/// (system, AP rank, utility rank, expected difference)
const WORKSHOP_RANKS: [(&str, usize, usize, &str); 22] = [
    ("1144b", 2, 1, "+1"),
    ("1135a", 3, 2, "+1"),
    ("1144a", 1, 3, "-2"),
    ("1135b", 4, 4, "0"),
    ("1103b", 5, 5, "0"),
    ("1106", 17, 6, "+11"),
    ("1145b", 16, 7, "+9"),
    ("1122b", 7, 8, "-1"),
    ("1103a", 10, 9, "+1"),
    ("1128b", 9, 10, "-1"),
    ("1142", 6, 11, "-5"),
    ("1122a", 8, 12, "-4"),
    ("1110", 11, 13, "-2"),
    ("1133a", 19, 14, "+5"),
    ("1133b", 18, 15, "+3"),
    ("1128a", 12, 16, "-4"),
    ("1120", 14, 17, "-3"),
    ("1145a", 13, 18, "-5"),
    ("1112", 15, 19, "-4"),
    ("1146", 20, 20, "0"),
    ("1132", 22, 21, "+1"),
    ("1126", 21, 22, "-1"),
];

fn workshop_rank_differences() -> Outcome {
    let table = RankingTable::from_ranks(
        WORKSHOP_RANKS
            .iter()
            .map(|&(s, ap, u, _)| (SystemId::new(s).unwrap(), ap, u)),
    )
    .map_err(|e| e.to_string())?;
    for &(system, _, _, expected) in &WORKSHOP_RANKS {
        let row = table.row(&SystemId::new(system).unwrap()).unwrap();
        ensure(signed(row.difference) == expected, || {
            format!("{system}: computed {} expected {expected}", signed(row.difference))
        })?;
    }
    let order: Vec<&str> = table.rows().iter().map(|r| r.system.as_str()).collect();
    let expected_order: Vec<&str> = WORKSHOP_RANKS.iter().map(|r| r.0).collect();
    ensure(order == expected_order, || "row order differs from utility rank order".into())?;
    Ok("22/22 differences reproduced (1106 +11, 1145b +9, 1144a -2, 1135b 0)".into())
}

fn permutation_integrity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7_777);
    let corpora = 200;
    for case in 0..corpora {
        let systems = rng.gen_range(2..=9);
        let queries = rng.gen_range(1..=5);
        let universe_depth = rng.gen_range(1..=15);
        let (runs, judgments) = random_corpus(&mut rng, systems, queries, universe_depth);
        let depth = rng.gen_range(1..=15);
        let results = evaluate(&runs, &judgments, EvalConfig::with_depth(depth));
        for scheme in [AggregationScheme::Sum, AggregationScheme::Mean] {
            let table = aggregate(&results, scheme).map_err(|e| e.to_string())?;
            let expected: BTreeSet<usize> = (1..=systems).collect();
            let ap: BTreeSet<usize> = table.rows().iter().map(|r| r.ap_rank).collect();
            let ut: BTreeSet<usize> = table.rows().iter().map(|r| r.utility_rank).collect();
            ensure(ap == expected && ut == expected && table.len() == systems, || {
                format!("case {case}: rank columns are not permutations")
            })?;
            ensure(table.rows().iter().map(|r| r.difference).sum::<i64>() == 0, || {
                format!("case {case}: differences do not sum to 0")
            })?;
        }
        let matrix = per_query_diffs(&results).map_err(|e| e.to_string())?;
        for q in matrix.queries() {
            ensure(matrix.column_sum(q) == 0, || format!("case {case}: column {q} sums to non-zero"))?;
        }
    }
    Ok(format!("{corpora} random corpora"))
}

fn ap_reference() -> Outcome {
    // (ranks of relevant docs retrieved, R, expected AP)
    let cases: [(&[u32], usize, f64); 12] = [
        (&[1, 3], 2, 5.0 / 6.0),
        (&[1, 2, 3], 3, 1.0),
        (&[], 4, 0.0),
        (&[2], 1, 0.5),
        (&[1, 2], 4, 0.5),
        (&[3, 5], 2, 11.0 / 30.0),
        (&[10], 1, 0.1),
        (&[1, 10], 3, 0.4),
        (&[2, 4, 6], 3, 0.5),
        (&[1, 2, 3, 4, 5], 10, 0.5),
        (&[4, 5], 2, 0.325),
        (&[1, 4, 9, 16], 5, 5.0 / 12.0),
    ];
    for (i, (ranks, r, expected)) in cases.iter().enumerate() {
        let docs = (1..=20u32).map(|k| (DocId::new(format!("d{k}")).unwrap(), k));
        let ranking = RankAssignment::new(20, docs).unwrap();
        let mut relevant: BTreeSet<DocId> =
            ranks.iter().map(|k| DocId::new(format!("d{k}")).unwrap()).collect();
        for extra in 0..(r - ranks.len()) {
            relevant.insert(DocId::new(format!("missing{extra}")).unwrap());
        }
        let ap = average_precision(&ranking, &relevant).ok_or("AP undefined")?;
        ensure((ap - expected).abs() <= AP_TOLERANCE, || {
            format!("case {i}: AP {ap} expected {expected}")
        })?;
    }
    Ok(format!("{} crafted rankings", cases.len()))
}

fn run_cli(args: &[&str]) -> Result<Vec<u8>, String> {
    let output = Command::new(env!("CARGO_BIN_EXE_novelty-eval"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    ensure(output.status.success(), || {
        format!("{args:?} failed: {}", String::from_utf8_lossy(&output.stderr))
    })?;
    Ok(output.stdout)
}

fn round_trip_and_determinism() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(424_242);
    let sets = 200;
    for case in 0..sets {
        let (systems, queries, depth) = (rng.gen_range(1..=4), rng.gen_range(1..=3), rng.gen_range(1..=12));
        let (runs, _) = random_corpus(&mut rng, systems, queries, depth);
        let mut buf = Vec::new();
        write_run_file(&runs, &mut buf).map_err(|e| e.to_string())?;
        let back = parse_run_str(std::str::from_utf8(&buf).unwrap(), RunParseOptions::default())
            .map_err(|e| e.to_string())?;
        ensure(back == runs, || format!("case {case}: round trip changed the run set"))?;
    }

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let corpus = |name: &str| dir.path().join(name);
    for name in ["a", "b"] {
        let out = corpus(name);
        run_cli(&[
            "synth", "--out-dir", out.to_str().unwrap(), "--systems", "6", "--queries", "5",
            "--depth", "60", "--relevant", "12", "--shared-fraction", "0.4", "--unique", "1",
            "--seed", "99",
        ])?;
    }
    for file in ["qrels.txt", "runs/sys01.run", "runs/sys06.run"] {
        let a = std::fs::read(corpus("a").join(file)).map_err(|e| e.to_string())?;
        let b = std::fs::read(corpus("b").join(file)).map_err(|e| e.to_string())?;
        ensure(a == b, || format!("synth output {file} differs between runs"))?;
    }
    let runs = corpus("a").join("runs");
    let qrels = corpus("a").join("qrels.txt");
    let base = |format: &'static str| -> Vec<String> {
        [
            "--runs", runs.to_str().unwrap(), "--qrels", qrels.to_str().unwrap(),
            "--depth", "60", "--per-query", "--format", format,
        ]
        .iter()
        .map(|s| s.to_string())
        .collect()
    };
    for format in ["text", "csv", "json"] {
        let args = base(format);
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let first = run_cli(&args)?;
        let second = run_cli(&args)?;
        ensure(!first.is_empty() && first == second, || format!("{format} reports differ"))?;
    }
    Ok(format!("{sets} random run sets round-trip; synth and text/csv/json reports byte-identical"))
}

/// Aggregate utility order followed by each query's utility ranks.
fn utility_order(results: &[novelty_eval::SystemQueryResult]) -> (Vec<SystemId>, Vec<usize>) {
    let table = aggregate(results, AggregationScheme::Sum).unwrap();
    let matrix = per_query_diffs(results).unwrap();
    let per_query = matrix
        .queries()
        .iter()
        .flat_map(|q| matrix.systems().iter().map(|s| matrix.cell(s, q).unwrap().utility_rank))
        .collect();
    (table.rows().iter().map(|r| r.system.clone()).collect(), per_query)
}

fn log_base_invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(31_415);
    let corpora = 200;
    for case in 0..corpora {
        let depth = rng.gen_range(1..=20);
        let (systems, queries) = (rng.gen_range(2..=6), rng.gen_range(1..=4));
        let (runs, judgments) = random_corpus(&mut rng, systems, queries, depth);
        let mut config = EvalConfig::with_depth(depth);
        let mut orders = Vec::new();
        for base in [LogBase::Natural, LogBase::Other(2.0), LogBase::Other(10.0)] {
            config.log_base = base;
            orders.push(utility_order(&evaluate(&runs, &judgments, config)));
        }
        ensure(orders[0] == orders[1] && orders[0] == orders[2], || {
            format!("case {case}: orderings differ {orders:?}")
        })?;
    }
    Ok(format!("{corpora} random corpora, identical aggregate and per-query orderings for bases e, 2, 10"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("read probability closed form = threshold enumeration", read_probability_enumeration),
        ("harness utility = brute-force oracle", oracle_equivalence),
        ("self-pool zero", self_pool_zero),
        ("novelty dominance", novelty_dominance),
        ("reference rank differences", workshop_rank_differences),
        ("permutation integrity", permutation_integrity),
        ("average precision reference values", ap_reference),
        ("round trip and report determinism", round_trip_and_determinism),
        ("log-base ranking invariance", log_base_invariance),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}: {why}");
            }
        }
    }
    let total = start.elapsed();
    let budget = Duration::from_secs(60);
    if total >= budget {
        failed += 1;
        println!("FAIL  total runtime {total:?} exceeds {budget:?}");
    }
    println!("{} of {} criteria passed in {total:?}", criteria.len() - failed.min(criteria.len()), criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

