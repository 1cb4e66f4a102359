use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use novelty_eval::corpus::{
    parse_judgments, parse_run_file, parse_topics, write_judgments, write_run_file, GradeMap,
    JudgmentSet, RunParseOptions, RunSet, TopicParseOptions,
};
use novelty_eval::harness::{aggregate, per_query_diffs, run_leave_one_out, LeaveOneOutPlan};
use novelty_eval::metrics::EvalConfig;
use novelty_eval::report::{render_bundle, InputDigest, ReportBundle, RunMetadata};
use novelty_eval::synth::{generate, SyntheticSpec};
use novelty_eval::Error;
use sha2::{Digest, Sha256};

use crate::args::{EvalArgs, PartialRelevant, SynthArgs};

#[derive(Debug)]
pub enum CliError {
    /// A failure reading or writing `path`.
    Io(PathBuf, io::Error),
    /// A problem with the content of `path`.
    Input(PathBuf, Error),
    Eval(Error),
}

impl CliError {
    /// 2 for I/O failures, 1 for everything else.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(..) => 2,
            CliError::Input(_, e) | CliError::Eval(e) if e.is_io() => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io(path, e) => write!(f, "{}: {e}", path.display()),
            CliError::Input(path, e) => write!(f, "{}: {e}", path.display()),
            CliError::Eval(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Eval(e)
    }
}

struct LoadedFile {
    path: PathBuf,
    bytes: Vec<u8>,
}

impl LoadedFile {
    fn read(path: &Path) -> Result<Self, CliError> {
        let bytes = fs::read(path).map_err(|e| CliError::Io(path.to_owned(), e))?;
        Ok(Self {
            path: path.to_owned(),
            bytes,
        })
    }

    fn digest(&self) -> InputDigest {
        InputDigest {
            path: self.path.display().to_string(),
            sha256: hex::encode(Sha256::digest(&self.bytes)),
        }
    }
}

/// Regular files of a directory in name order, or the path itself.
fn run_files(path: &Path) -> Result<Vec<PathBuf>, CliError> {
    let meta = fs::metadata(path).map_err(|e| CliError::Io(path.to_owned(), e))?;
    if !meta.is_dir() {
        return Ok(vec![path.to_owned()]);
    }
    let mut files = Vec::new();
    for entry in fs::read_dir(path).map_err(|e| CliError::Io(path.to_owned(), e))? {
        let entry = entry.map_err(|e| CliError::Io(path.to_owned(), e))?;
        let file_type = entry
            .file_type()
            .map_err(|e| CliError::Io(entry.path(), e))?;
        if file_type.is_file() {
            files.push(entry.path());
        }
    }
    files.sort();
    Ok(files)
}

fn load_runs(path: &Path, options: RunParseOptions) -> Result<(RunSet, Vec<InputDigest>), CliError> {
    let mut runs = RunSet::new();
    let mut digests = Vec::new();
    for file in run_files(path)? {
        let loaded = LoadedFile::read(&file)?;
        let fragment = parse_run_file(loaded.bytes.as_slice(), options)
            .map_err(|e| CliError::Input(file.clone(), e))?;
        runs = runs
            .merge(fragment)
            .map_err(|e| CliError::Input(file.clone(), e))?;
        digests.push(loaded.digest());
    }
    Ok((runs, digests))
}

fn load_judgments(path: &Path, grade_map: &GradeMap) -> Result<(JudgmentSet, InputDigest), CliError> {
    let loaded = LoadedFile::read(path)?;
    let judgments = parse_judgments(loaded.bytes.as_slice(), grade_map)
        .map_err(|e| CliError::Input(path.to_owned(), e))?;
    Ok((judgments, loaded.digest()))
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Io(path.to_owned(), e)),
        None => {
            let mut stdout = io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|()| stdout.flush())
                .map_err(|e| CliError::Io(PathBuf::from("<stdout>"), e))
        }
    }
}

pub fn evaluate(args: &EvalArgs) -> Result<(), CliError> {
    let runs_path = args.runs.as_deref().expect("required by clap");
    let qrels_path = args.qrels.as_deref().expect("required by clap");
    let config = EvalConfig {
        depth: args.depth,
        epsilon: args.epsilon_policy,
        partial_relevant_counts: args.partial_relevant == PartialRelevant::Include,
        log_base: args.log_base(),
    };
    config.validate()?;
    let options = RunParseOptions {
        strict_scores: args.strict_scores,
    };

    let (runs, mut inputs) = load_runs(runs_path, options)?;
    let (judgments, qrels_digest) = load_judgments(qrels_path, &args.grade_map)?;
    inputs.push(qrels_digest);
    if let Some(topics_path) = args.topics.as_deref() {
        let loaded = LoadedFile::read(topics_path)?;
        parse_topics(loaded.bytes.as_slice(), TopicParseOptions::default())
            .map_err(|e| CliError::Input(topics_path.to_owned(), e))?;
        inputs.push(loaded.digest());
    }

    let plan = LeaveOneOutPlan::from_corpus(&runs, &judgments, config)?;
    let results = run_leave_one_out(&runs, &judgments, &plan)?;
    let ranking = aggregate(&results, args.agg)?;
    let per_query = if args.per_query {
        Some(per_query_diffs(&results)?)
    } else {
        None
    };
    let flagged_queries = results
        .iter()
        .filter(|r| r.is_flagged() && r.system == plan.systems()[0])
        .map(|r| r.query.clone())
        .collect();

    let bundle = ReportBundle {
        metadata: RunMetadata {
            config,
            aggregation: args.agg,
            grade_map: args.grade_map.to_string(),
            strict_scores: args.strict_scores,
            systems: plan.systems().len(),
            queries: plan.queries().len(),
            flagged_queries,
            inputs,
        },
        ranking,
        per_query,
    };
    let text = render_bundle(&bundle, args.format)?;
    write_output(args.out.as_deref(), &text)
}

fn create_file(path: &Path) -> Result<io::BufWriter<fs::File>, CliError> {
    fs::File::create(path)
        .map(io::BufWriter::new)
        .map_err(|e| CliError::Io(path.to_owned(), e))
}

pub fn synth(args: &SynthArgs) -> Result<(), CliError> {
    let spec = SyntheticSpec {
        num_systems: args.systems,
        num_queries: args.queries,
        depth: args.depth,
        relevant_per_query: args.relevant,
        shared_fraction: args.shared_fraction,
        unique_per_system: args.unique,
        novel_systems: args.novel_systems.unwrap_or(args.systems),
        novel_lead: args.novel_lead,
        seed: args.seed,
    };
    let (runs, judgments) = generate(&spec)?;

    let runs_dir = args.out_dir.join("runs");
    fs::create_dir_all(&runs_dir).map_err(|e| CliError::Io(runs_dir.clone(), e))?;
    for system in runs.systems() {
        let path = runs_dir.join(format!("{system}.run"));
        let out = create_file(&path)?;
        write_run_file(&runs.for_system(&system), out).map_err(|e| CliError::Input(path.clone(), e))?;
    }
    let qrels_path = args.out_dir.join("qrels.txt");
    let out = create_file(&qrels_path)?;
    write_judgments(&judgments, &GradeMap::default(), out)
        .map_err(|e| CliError::Input(qrels_path.clone(), e))?;

    let spec_path = args.out_dir.join("spec.json");
    let mut spec_json = serde_json::to_string_pretty(&spec).expect("spec serializes");
    spec_json.push('\n');
    fs::write(&spec_path, spec_json).map_err(|e| CliError::Io(spec_path, e))?;
    Ok(())
}
