//! Batch front end for `germlab`: JSON job files in, JSON reports out.
//!
//! Report layout is described in `docs/report-schema.md` at the repository
//! root.

mod commands;
pub mod job;
mod suite;

use std::path::Path;

use germlab::Limits;
use serde_json::{json, Value};

pub use job::{Command, Job, ParsedJob};
pub use suite::{run_suite, SuiteSummary};

/// Bumped whenever a report field changes meaning or disappears.
pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Environment variables that override the default [`Limits`].
pub const LIMIT_VARS: [&str; 3] = [
    "GERMLAB_MAX_TERMS",
    "GERMLAB_MAX_BASIS",
    "GERMLAB_MAX_PAIRS",
];

#[derive(Debug, thiserror::Error)]
pub enum JobError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("job file line {line}, column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{field}, column {column}: {message}")]
    Poly {
        field: String,
        column: usize,
        message: String,
    },
    #[error("{field}: {message}")]
    Invalid { field: String, message: String },
    #[error("{0}")]
    Rejected(String),
    #[error(transparent)]
    Library(#[from] germlab::Error),
}

impl JobError {
    pub(crate) fn invalid(field: &str, e: impl std::fmt::Display) -> JobError {
        JobError::Invalid {
            field: field.into(),
            message: e.to_string(),
        }
    }

    /// 1 for mathematical rejections, 2 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            JobError::Rejected(_)
            | JobError::Library(germlab::Error::NotFlat { .. } | germlab::Error::UnitIdeal) => 1,
            _ => 2,
        }
    }

    fn to_json(&self) -> Value {
        let message = self.to_string();
        match self {
            JobError::Io { path, .. } => json!({"kind": "io", "path": path, "message": message}),
            JobError::Json { line, column, .. } => {
                json!({"kind": "parse", "line": line, "column": column, "message": message})
            }
            JobError::Poly { field, column, .. } => {
                json!({"kind": "parse", "field": field, "column": column, "message": message})
            }
            JobError::Invalid { field, .. } => {
                json!({"kind": "invalid_input", "field": field, "message": message})
            }
            JobError::Rejected(_) => json!({"kind": "rejected", "message": message}),
            JobError::Library(germlab::Error::ResourceLimit {
                bound,
                limit,
                value,
            }) => json!({
                "kind": "resource_limit",
                "bound": bound,
                "limit": limit,
                "value": value,
                "message": message,
            }),
            JobError::Library(germlab::Error::NotFlat { .. } | germlab::Error::UnitIdeal) => {
                json!({"kind": "rejected", "message": message})
            }
            JobError::Library(_) => json!({"kind": "invalid_input", "message": message}),
        }
    }
}

/// How a job ended.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Status {
    Ok,
    /// A check the command performs did not hold.
    Failed,
    Rejected,
    Error,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Failed => "failed",
            Status::Rejected => "rejected",
            Status::Error => "error",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Failed | Status::Rejected => 1,
            Status::Error => 2,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub status: Status,
    pub report: Value,
    /// Per-trial table of an experiment.
    pub csv: Option<String>,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        self.status.exit_code()
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_pretty(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.report).expect("reports are plain JSON");
        s.push('\n');
        s
    }
}

/// Default limits with the overrides from [`LIMIT_VARS`].
pub fn limits_from_env() -> Result<Limits, JobError> {
    limits_from(|k| std::env::var(k).ok())
}

pub fn limits_from(get: impl Fn(&str) -> Option<String>) -> Result<Limits, JobError> {
    let mut limits = Limits::default();
    for (var, slot) in LIMIT_VARS.into_iter().zip([
        &mut limits.max_terms,
        &mut limits.max_basis,
        &mut limits.max_pairs,
    ]) {
        if let Some(v) = get(var) {
            *slot = v.trim().parse().map_err(|e| JobError::invalid(var, e))?;
        }
    }
    Ok(limits)
}

fn envelope(job: Option<&Job>, limits: &Limits) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("schema_version".into(), json!(SCHEMA_VERSION));
    m.insert("tool".into(), json!("germlab"));
    m.insert("tool_version".into(), json!(TOOL_VERSION));
    m.insert("command".into(), json!(job.map(|j| j.command.name())));
    m.insert(
        "job".into(),
        job.map_or(Value::Null, |j| {
            serde_json::to_value(j).expect("plain data")
        }),
    );
    let seed = job.and_then(|j| {
        j.command
            .uses_seed()
            .then(|| j.parameters.seed.unwrap_or(0))
    });
    m.insert("seed".into(), json!(seed));
    m.insert(
        "limits".into(),
        serde_json::to_value(limits).expect("plain data"),
    );
    m
}

/// Runs the job in `text`. Never panics on bad input; errors become reports.
pub fn run_job_str(text: &str, limits: &Limits) -> Outcome {
    let job = match Job::from_json(text) {
        Ok(job) => job,
        Err(e) => return error_outcome(None, limits, &e),
    };
    let parsed = match ParsedJob::new(job.clone(), *limits) {
        Ok(p) => p,
        Err(e) => return error_outcome(Some(&job), limits, &e),
    };
    match commands::execute(&parsed) {
        Ok(done) => {
            let mut m = envelope(Some(&job), limits);
            m.insert("status".into(), json!(done.status.name()));
            m.insert("result".into(), done.result);
            Outcome {
                status: done.status,
                report: Value::Object(m),
                csv: done.csv,
            }
        }
        Err(e) => error_outcome(Some(&job), limits, &e),
    }
}

pub fn run_job_file(path: &Path, limits: &Limits) -> Outcome {
    match std::fs::read_to_string(path) {
        Ok(text) => run_job_str(&text, limits),
        Err(e) => error_outcome(
            None,
            limits,
            &JobError::Io {
                path: path.display().to_string(),
                message: e.to_string(),
            },
        ),
    }
}

fn error_outcome(job: Option<&Job>, limits: &Limits, e: &JobError) -> Outcome {
    let status = if e.exit_code() == 1 {
        Status::Rejected
    } else {
        Status::Error
    };
    let mut m = envelope(job, limits);
    m.insert("status".into(), json!(status.name()));
    m.insert("error".into(), e.to_json());
    Outcome {
        status,
        report: Value::Object(m),
        csv: None,
    }
}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
mod book_cli {}
