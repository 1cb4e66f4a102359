//! Rendering ranking tables and per-query difference matrices.

mod table;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::corpus::{QueryId, SystemId};
use crate::error::{Error, Result};
use crate::harness::{AggregationScheme, PerQueryDiffMatrix, RankingTable};
use crate::metrics::EvalConfig;
use table::Align;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Text,
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(OutputFormat::Text),
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::Config(format!("unknown output format {other:?}"))),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Text => "text",
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

/// Everything needed to trace a report back to its inputs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunMetadata {
    pub config: EvalConfig,
    pub aggregation: AggregationScheme,
    pub grade_map: String,
    pub strict_scores: bool,
    pub systems: usize,
    pub queries: usize,
    /// Queries without relevant documents; AP is undefined there.
    pub flagged_queries: Vec<QueryId>,
    pub inputs: Vec<InputDigest>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportBundle {
    pub metadata: RunMetadata,
    pub ranking: RankingTable,
    pub per_query: Option<PerQueryDiffMatrix>,
}

/// `+11`, `-2`, and `0` without a sign.
pub fn signed(value: i64) -> String {
    if value > 0 {
        format!("+{value}")
    } else {
        value.to_string()
    }
}

/// Column labels for queries: a prefix shared by every id is dropped, keeping
/// at least two characters, e.g. `1007, 1008` become `07, 08`.
pub fn abbreviate_queries(queries: &[QueryId]) -> Vec<String> {
    let full = || queries.iter().map(|q| q.to_string()).collect();
    let Some(first) = queries.first() else {
        return Vec::new();
    };
    let mut prefix: Vec<char> = first.as_str().chars().collect();
    let mut min_len = prefix.len();
    for q in &queries[1..] {
        let chars: Vec<char> = q.as_str().chars().collect();
        min_len = min_len.min(chars.len());
        let common = prefix.iter().zip(&chars).take_while(|(a, b)| a == b).count();
        prefix.truncate(common);
    }
    let strip = prefix.len().min(min_len.saturating_sub(2));
    if strip == 0 {
        return full();
    }
    queries
        .iter()
        .map(|q| q.as_str().chars().skip(strip).collect())
        .collect()
}

#[derive(Serialize)]
struct RankingRecord<'a> {
    system: &'a SystemId,
    ap_rank: usize,
    utility_rank: usize,
    difference: i64,
    ap_score: f64,
    utility_score: f64,
}

fn ranking_records(table: &RankingTable) -> Vec<RankingRecord<'_>> {
    table
        .rows()
        .iter()
        .map(|r| RankingRecord {
            system: &r.system,
            ap_rank: r.ap_rank,
            utility_rank: r.utility_rank,
            difference: r.difference,
            ap_score: r.aggregate_ap,
            utility_score: r.aggregate_utility,
        })
        .collect()
}

#[derive(Serialize)]
struct MatrixRow<'a> {
    system: &'a SystemId,
    differences: Vec<i64>,
}

#[derive(Serialize)]
struct MatrixRecord<'a> {
    queries: &'a [QueryId],
    rows: Vec<MatrixRow<'a>>,
}

fn matrix_record(matrix: &PerQueryDiffMatrix) -> MatrixRecord<'_> {
    let rows = matrix
        .systems()
        .iter()
        .map(|s| MatrixRow {
            system: s,
            differences: matrix
                .queries()
                .iter()
                .map(|q| matrix.difference(s, q).unwrap_or(0))
                .collect(),
        })
        .collect();
    MatrixRecord {
        queries: matrix.queries(),
        rows,
    }
}

fn csv_string<F>(write: F) -> Result<String>
where
    F: FnOnce(&mut csv::Writer<&mut Vec<u8>>) -> Result<()>,
{
    let mut buf = Vec::new();
    {
        let mut writer = csv::Writer::from_writer(&mut buf);
        write(&mut writer)?;
        writer.flush()?;
    }
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}

fn json_string<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report values serialize");
    s.push('\n');
    s
}

/// Renders the ranking table, best utility rank first.
///
/// Panics if the table has fewer than two systems; the harness never produces one.
pub fn render_ranking(table: &RankingTable, format: OutputFormat) -> Result<String> {
    assert!(table.len() >= 2, "ranking table needs at least two systems");
    match format {
        OutputFormat::Text => {
            let rows: Vec<Vec<String>> = table
                .rows()
                .iter()
                .map(|r| {
                    vec![
                        r.system.to_string(),
                        r.ap_rank.to_string(),
                        r.utility_rank.to_string(),
                        signed(r.difference),
                        format!("{:.4}", r.aggregate_ap),
                        format!("{:.4}", r.aggregate_utility),
                    ]
                })
                .collect();
            Ok(table::render(
                &["System ID", "Avg. Precision", "Utility", "Difference", "AP score", "Utility score"],
                &[Align::Left, Align::Right, Align::Right, Align::Right, Align::Right, Align::Right],
                &rows,
            ))
        }
        OutputFormat::Csv => csv_string(|w| {
            w.write_record([
                "system",
                "ap_rank",
                "utility_rank",
                "difference",
                "ap_score",
                "utility_score",
            ])?;
            for r in table.rows() {
                w.write_record([
                    r.system.to_string(),
                    r.ap_rank.to_string(),
                    r.utility_rank.to_string(),
                    r.difference.to_string(),
                    r.aggregate_ap.to_string(),
                    r.aggregate_utility.to_string(),
                ])?;
            }
            Ok(())
        }),
        OutputFormat::Json => Ok(json_string(&ranking_records(table))),
    }
}

/// Renders per-query rank differences: one row per system, one column per query.
///
/// Only the text format abbreviates query ids.
pub fn render_per_query(matrix: &PerQueryDiffMatrix, format: OutputFormat) -> Result<String> {
    let cells = |s: &SystemId| -> Vec<i64> {
        matrix
            .queries()
            .iter()
            .map(|q| matrix.difference(s, q).unwrap_or(0))
            .collect()
    };
    match format {
        OutputFormat::Text => {
            let labels = abbreviate_queries(matrix.queries());
            let mut headers = vec!["System ID"];
            headers.extend(labels.iter().map(String::as_str));
            let mut aligns = vec![Align::Left];
            aligns.extend(std::iter::repeat_n(Align::Right, labels.len()));
            let rows: Vec<Vec<String>> = matrix
                .systems()
                .iter()
                .map(|s| {
                    std::iter::once(s.to_string())
                        .chain(cells(s).into_iter().map(signed))
                        .collect()
                })
                .collect();
            Ok(table::render(&headers, &aligns, &rows))
        }
        OutputFormat::Csv => csv_string(|w| {
            let mut header = vec!["system".to_string()];
            header.extend(matrix.queries().iter().map(|q| q.to_string()));
            w.write_record(&header)?;
            for s in matrix.systems() {
                let mut record = vec![s.to_string()];
                record.extend(cells(s).into_iter().map(|d| d.to_string()));
                w.write_record(&record)?;
            }
            Ok(())
        }),
        OutputFormat::Json => Ok(json_string(&matrix_record(matrix))),
    }
}

fn metadata_lines(meta: &RunMetadata) -> Vec<String> {
    let c = &meta.config;
    let mut lines = vec![
        format!("depth: {}", c.depth),
        format!("epsilon_policy: {}", c.epsilon),
        format!(
            "partial_relevant: {}",
            if c.partial_relevant_counts { "include" } else { "exclude" }
        ),
        format!("log_base: {}", c.log_base),
        format!("aggregation: {}", meta.aggregation),
        format!("grade_map: {}", meta.grade_map),
        format!("strict_scores: {}", meta.strict_scores),
        format!("systems: {}", meta.systems),
        format!("queries: {}", meta.queries),
    ];
    if !meta.flagged_queries.is_empty() {
        let ids: Vec<&str> = meta.flagged_queries.iter().map(QueryId::as_str).collect();
        lines.push(format!("queries_without_relevant_docs: {}", ids.join(" ")));
    }
    for input in &meta.inputs {
        lines.push(format!("input: {} sha256={}", input.path, input.sha256));
    }
    lines
}

/// Renders a complete report including its metadata header.
pub fn render_bundle(bundle: &ReportBundle, format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct Bundle<'a> {
                metadata: &'a RunMetadata,
                ranking: Vec<RankingRecord<'a>>,
                #[serde(skip_serializing_if = "Option::is_none")]
                per_query: Option<MatrixRecord<'a>>,
            }
            Ok(json_string(&Bundle {
                metadata: &bundle.metadata,
                ranking: ranking_records(&bundle.ranking),
                per_query: bundle.per_query.as_ref().map(matrix_record),
            }))
        }
        OutputFormat::Text | OutputFormat::Csv => {
            let mut out = String::new();
            for line in metadata_lines(&bundle.metadata) {
                out.push_str("# ");
                out.push_str(&line);
                out.push('\n');
            }
            out.push('\n');
            out.push_str(&render_ranking(&bundle.ranking, format)?);
            if let Some(matrix) = &bundle.per_query {
                out.push('\n');
                if format == OutputFormat::Text {
                    out.push_str("Per-query rank differences (AP rank - utility rank)\n\n");
                }
                out.push_str(&render_per_query(matrix, format)?);
            }
            Ok(out)
        }
    }
}
