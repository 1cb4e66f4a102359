//! Relevance judgments in four-column `query iter doc grade` form.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::ids::{DocId, QueryId};
use crate::corpus::run::content_line;
use crate::error::{Error, Result};

/// The three assessment levels used by the assessors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RelevanceGrade {
    Relevant,
    PartiallyRelevant,
    Irrelevant,
}

impl RelevanceGrade {
    /// Whether the grade counts as relevant for evaluation.
    pub fn counts_as_relevant(self, include_partial: bool) -> bool {
        match self {
            RelevanceGrade::Relevant => true,
            RelevanceGrade::PartiallyRelevant => include_partial,
            RelevanceGrade::Irrelevant => false,
        }
    }
}

/// Maps the integer grade column onto [`RelevanceGrade`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradeMap {
    values: BTreeMap<i64, RelevanceGrade>,
}

impl Default for GradeMap {
    /// `2 → relevant`, `1 → partially relevant`, `0 → irrelevant`.
    fn default() -> Self {
        Self::from_pairs([
            (2, RelevanceGrade::Relevant),
            (1, RelevanceGrade::PartiallyRelevant),
            (0, RelevanceGrade::Irrelevant),
        ])
        .expect("default map has distinct values")
    }
}

impl GradeMap {
    /// Builds a map; a value bound to two different grades is a configuration error.
    pub fn from_pairs<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, RelevanceGrade)>,
    {
        let mut values = BTreeMap::new();
        for (value, grade) in pairs {
            if let Some(prev) = values.insert(value, grade) {
                if prev != grade {
                    return Err(Error::Config(format!(
                        "grade value {value} mapped to both {prev:?} and {grade:?}"
                    )));
                }
            }
        }
        Ok(Self { values })
    }

    pub fn grade(&self, value: i64) -> Option<RelevanceGrade> {
        self.values.get(&value).copied()
    }

    /// The value written for `grade` by [`write_judgments`]: the largest value bound to it.
    pub fn value_for(&self, grade: RelevanceGrade) -> Option<i64> {
        self.values
            .iter()
            .rev()
            .find(|(_, g)| **g == grade)
            .map(|(v, _)| *v)
    }
}

impl FromStr for GradeMap {
    type Err = Error;

    /// Parses `r=2,p=1,i=0`. Letters may repeat to bind several values to one grade.
    fn from_str(s: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("grade map entry {part:?} lacks '='")))?;
            let grade = match key.trim() {
                "r" | "relevant" => RelevanceGrade::Relevant,
                "p" | "partial" | "partially_relevant" => RelevanceGrade::PartiallyRelevant,
                "i" | "irrelevant" => RelevanceGrade::Irrelevant,
                other => {
                    return Err(Error::Config(format!(
                        "unknown grade {other:?} in grade map (use r, p or i)"
                    )))
                }
            };
            let value: i64 = value.trim().parse().map_err(|_| {
                Error::Config(format!("grade value {value:?} is not an integer"))
            })?;
            pairs.push((value, grade));
        }
        if pairs.is_empty() {
            return Err(Error::Config("grade map is empty".into()));
        }
        Self::from_pairs(pairs)
    }
}

impl fmt::Display for GradeMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (value, grade) in self.values.iter().rev() {
            let key = match grade {
                RelevanceGrade::Relevant => "r",
                RelevanceGrade::PartiallyRelevant => "p",
                RelevanceGrade::Irrelevant => "i",
            };
            if !first {
                f.write_str(",")?;
            }
            first = false;
            write!(f, "{key}={value}")?;
        }
        Ok(())
    }
}

/// Graded assessments per `(query, doc)`. Absence means unjudged.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct JudgmentSet {
    grades: BTreeMap<QueryId, BTreeMap<DocId, RelevanceGrade>>,
}

impl JudgmentSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records a grade. Repeating an identical grade is a no-op; a conflicting one is an error.
    pub fn insert(&mut self, query: QueryId, doc: DocId, grade: RelevanceGrade) -> Result<()> {
        let docs = self.grades.entry(query.clone()).or_default();
        match docs.get(&doc) {
            Some(&prev) if prev != grade => Err(Error::Validation(format!(
                "query {query} doc {doc} judged both {prev:?} and {grade:?}"
            ))),
            Some(_) => Ok(()),
            None => {
                docs.insert(doc, grade);
                Ok(())
            }
        }
    }

    pub fn grade(&self, query: &QueryId, doc: &DocId) -> Option<RelevanceGrade> {
        self.grades.get(query)?.get(doc).copied()
    }

    /// Queries with at least one judgment, in sorted order.
    pub fn queries(&self) -> impl Iterator<Item = &QueryId> {
        self.grades.keys()
    }

    pub fn is_judged(&self, query: &QueryId) -> bool {
        self.grades.contains_key(query)
    }

    /// Documents that count as relevant for `query`.
    pub fn relevant_docs(&self, query: &QueryId, include_partial: bool) -> BTreeSet<DocId> {
        self.grades
            .get(query)
            .map(|docs| {
                docs.iter()
                    .filter(|(_, g)| g.counts_as_relevant(include_partial))
                    .map(|(d, _)| d.clone())
                    .collect()
            })
            .unwrap_or_default()
    }

    /// Iterates `(query, doc, grade)` in sorted order.
    pub fn iter(&self) -> impl Iterator<Item = (&QueryId, &DocId, RelevanceGrade)> {
        self.grades
            .iter()
            .flat_map(|(q, docs)| docs.iter().map(move |(d, g)| (q, d, *g)))
    }

    pub fn len(&self) -> usize {
        self.grades.values().map(BTreeMap::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.grades.is_empty()
    }
}

/// Reads a judgment file. Unmapped grade values are configuration errors.
pub fn parse_judgments<R: BufRead>(reader: R, grade_map: &GradeMap) -> Result<JudgmentSet> {
    let mut judgments = JudgmentSet::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let line_no = idx + 1;
        let Some(content) = content_line(&line) else {
            continue;
        };
        let fields: Vec<&str> = content.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(Error::parse(
                line_no,
                format!("expected 4 columns, found {}", fields.len()),
            ));
        }
        let value: i64 = fields[3].parse().map_err(|_| {
            Error::parse(line_no, format!("grade {:?} is not an integer", fields[3]))
        })?;
        let grade = grade_map.grade(value).ok_or_else(|| {
            Error::Config(format!(
                "line {line_no}: grade value {value} is not in the grade map ({grade_map})"
            ))
        })?;
        let id_err = |e: Error| Error::parse(line_no, e.to_string());
        let query = QueryId::new(fields[0]).map_err(id_err)?;
        let doc = DocId::new(fields[2]).map_err(id_err)?;
        judgments.insert(query, doc, grade).map_err(|e| match e {
            Error::Validation(m) => Error::Validation(format!("line {line_no}: {m}")),
            other => other,
        })?;
    }
    Ok(judgments)
}

pub fn parse_judgments_str(input: &str, grade_map: &GradeMap) -> Result<JudgmentSet> {
    parse_judgments(input.as_bytes(), grade_map)
}

/// Writes judgments as `query 0 doc value`, using `grade_map` to pick values.
pub fn write_judgments<W: Write>(
    judgments: &JudgmentSet,
    grade_map: &GradeMap,
    mut out: W,
) -> Result<()> {
    for (query, doc, grade) in judgments.iter() {
        let value = grade_map.value_for(grade).ok_or_else(|| {
            Error::Config(format!("grade map has no value for {grade:?}"))
        })?;
        writeln!(out, "{query} 0 {doc} {value}")?;
    }
    out.flush()?;
    Ok(())
}
