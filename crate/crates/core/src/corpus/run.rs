//! Run files: six whitespace-separated columns per record,
//! `query dummy doc rank score system`.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::io::{BufRead, Write};

use crate::corpus::ids::{DocId, QueryId, SystemId};
use crate::error::{Error, Result};

/// One line of a run file.
#[derive(Debug, Clone, PartialEq)]
pub struct RunEntry {
    pub query: QueryId,
    pub doc: DocId,
    pub rank: u32,
    pub score: f64,
    pub system: SystemId,
}

/// A document as placed in one system's ranking for one query.
#[derive(Debug, Clone, PartialEq)]
pub struct RankedDoc {
    pub doc: DocId,
    pub rank: u32,
    pub score: f64,
}

/// Options controlling run-file validation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunParseOptions {
    /// Reject rankings whose scores increase as rank increases.
    pub strict_scores: bool,
}

/// All ranked results, grouped by `(system, query)`.
///
/// Every group holds ranks `1..=n` exactly once each, sorted by rank, with
/// unique documents.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunSet {
    groups: BTreeMap<(SystemId, QueryId), Vec<RankedDoc>>,
}

impl RunSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Groups and validates a flat list of entries.
    pub fn from_entries<I>(entries: I, options: RunParseOptions) -> Result<Self>
    where
        I: IntoIterator<Item = RunEntry>,
    {
        let mut groups: BTreeMap<(SystemId, QueryId), Vec<RankedDoc>> = BTreeMap::new();
        for entry in entries {
            groups
                .entry((entry.system, entry.query))
                .or_default()
                .push(RankedDoc {
                    doc: entry.doc,
                    rank: entry.rank,
                    score: entry.score,
                });
        }
        for ((system, query), docs) in groups.iter_mut() {
            validate_group(system, query, docs, options)?;
        }
        Ok(Self { groups })
    }

    /// Combines two fragments. A `(system, query)` pair present in both is an error.
    pub fn merge(mut self, other: RunSet) -> Result<Self> {
        for (key, docs) in other.groups {
            match self.groups.entry(key) {
                Entry::Vacant(slot) => {
                    slot.insert(docs);
                }
                Entry::Occupied(slot) => {
                    let (system, query) = slot.key();
                    return Err(Error::Validation(format!(
                        "run for system {system} query {query} appears in more than one input"
                    )));
                }
            }
        }
        Ok(self)
    }

    /// The ranking of `system` for `query`, sorted by rank.
    pub fn get(&self, system: &SystemId, query: &QueryId) -> Option<&[RankedDoc]> {
        self.groups
            .get(&(system.clone(), query.clone()))
            .map(Vec::as_slice)
    }

    pub fn systems(&self) -> Vec<SystemId> {
        let set: BTreeSet<&SystemId> = self.groups.keys().map(|(s, _)| s).collect();
        set.into_iter().cloned().collect()
    }

    pub fn queries(&self) -> Vec<QueryId> {
        let set: BTreeSet<&QueryId> = self.groups.keys().map(|(_, q)| q).collect();
        set.into_iter().cloned().collect()
    }

    pub fn contains_system(&self, system: &SystemId) -> bool {
        self.groups.keys().any(|(s, _)| s == system)
    }

    /// Iterates over groups in `(system, query)` order.
    pub fn groups(&self) -> impl Iterator<Item = (&SystemId, &QueryId, &[RankedDoc])> {
        self.groups
            .iter()
            .map(|((s, q), docs)| (s, q, docs.as_slice()))
    }

    /// Flattens back into entries, ordered by system, query, then rank.
    pub fn entries(&self) -> impl Iterator<Item = RunEntry> + '_ {
        self.groups.iter().flat_map(|((system, query), docs)| {
            docs.iter().map(move |d| RunEntry {
                query: query.clone(),
                doc: d.doc.clone(),
                rank: d.rank,
                score: d.score,
                system: system.clone(),
            })
        })
    }

    /// Number of `(system, query)` groups.
    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    /// Drops every entry ranked below `depth`. Contiguity is preserved.
    pub fn truncated(&self, depth: u32) -> RunSet {
        let groups = self
            .groups
            .iter()
            .map(|(key, docs)| {
                let kept = docs.iter().filter(|d| d.rank <= depth).cloned().collect();
                (key.clone(), kept)
            })
            .collect();
        RunSet { groups }
    }

    /// Only the runs of the given system.
    pub fn for_system(&self, system: &SystemId) -> RunSet {
        let groups = self
            .groups
            .iter()
            .filter(|((s, _), _)| s == system)
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        RunSet { groups }
    }
}

fn validate_group(
    system: &SystemId,
    query: &QueryId,
    docs: &mut [RankedDoc],
    options: RunParseOptions,
) -> Result<()> {
    docs.sort_by_key(|d| d.rank);
    let mut seen = HashMap::with_capacity(docs.len());
    for (i, d) in docs.iter().enumerate() {
        if let Some(prev) = seen.insert(&d.doc, d.rank) {
            return Err(Error::Validation(format!(
                "system {system} query {query}: doc {} ranked twice ({prev} and {})",
                d.doc, d.rank
            )));
        }
        let expected = i as u32 + 1;
        if d.rank != expected {
            let message = if d.rank < expected {
                format!("rank {} assigned to more than one doc", d.rank)
            } else {
                format!("ranks are not contiguous, rank {expected} is missing")
            };
            return Err(Error::Validation(format!(
                "system {system} query {query}: {message}"
            )));
        }
    }
    if options.strict_scores {
        if let Some(w) = docs.windows(2).find(|w| w[1].score > w[0].score) {
            return Err(Error::Validation(format!(
                "system {system} query {query}: score rises from {} at rank {} to {} at rank {}",
                w[0].score, w[0].rank, w[1].score, w[1].rank
            )));
        }
    }
    Ok(())
}

/// Returns `None` for blank and `#` comment lines.
pub(crate) fn content_line(line: &str) -> Option<&str> {
    let trimmed = line.trim();
    if trimmed.is_empty() || trimmed.starts_with('#') {
        None
    } else {
        Some(trimmed)
    }
}

/// Parses a single run record. `line_no` is 1-based and only used for errors.
pub fn parse_run_line(line: &str, line_no: usize) -> Result<RunEntry> {
    let fields: Vec<&str> = line.split_whitespace().collect();
    if fields.len() != 6 {
        return Err(Error::parse(
            line_no,
            format!("expected 6 columns, found {}", fields.len()),
        ));
    }
    let rank: u32 = fields[3]
        .parse()
        .map_err(|_| Error::parse(line_no, format!("rank {:?} is not an integer", fields[3])))?;
    if rank == 0 {
        return Err(Error::parse(line_no, "rank must be at least 1"));
    }
    let score: f64 = fields[4]
        .parse()
        .map_err(|_| Error::parse(line_no, format!("score {:?} is not a number", fields[4])))?;
    if !score.is_finite() {
        return Err(Error::parse(line_no, format!("score {:?} is not finite", fields[4])));
    }
    let id_err = |e: Error| Error::parse(line_no, e.to_string());
    Ok(RunEntry {
        query: QueryId::new(fields[0]).map_err(id_err)?,
        doc: DocId::new(fields[2]).map_err(id_err)?,
        rank,
        score,
        system: SystemId::new(fields[5]).map_err(id_err)?,
    })
}

/// Reads a run file that may hold one or several systems.
///
/// Blank lines and lines starting with `#` are skipped; the second column is ignored.
pub fn parse_run_file<R: BufRead>(reader: R, options: RunParseOptions) -> Result<RunSet> {
    let mut entries = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        if let Some(content) = content_line(&line) {
            entries.push(parse_run_line(content, idx + 1)?);
        }
    }
    RunSet::from_entries(entries, options)
}

pub fn parse_run_str(input: &str, options: RunParseOptions) -> Result<RunSet> {
    parse_run_file(input.as_bytes(), options)
}

/// Writes `runs` in run-file format with a `0` dummy column.
///
/// Scores use the shortest decimal form that parses back to the same `f64`.
pub fn write_run_file<W: Write>(runs: &RunSet, mut out: W) -> Result<()> {
    for e in runs.entries() {
        writeln!(
            out,
            "{} 0 {} {} {} {}",
            e.query, e.doc, e.rank, e.score, e.system
        )?;
    }
    out.flush()?;
    Ok(())
}
