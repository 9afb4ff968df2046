//! Directories of job files.

use std::path::{Path, PathBuf};

use germlab::Limits;
use rayon::prelude::*;
use serde::Serialize;

use crate::{run_job_file, JobError, Outcome, SCHEMA_VERSION, TOOL_VERSION};

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct JobSummary {
    pub job: String,
    pub status: &'static str,
    pub exit_code: i32,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct SuiteSummary {
    pub schema_version: u32,
    pub tool_version: &'static str,
    pub jobs: Vec<JobSummary>,
    pub passed: usize,
    pub failed: usize,
}

impl SuiteSummary {
    /// 0 when every job exited with 0, else 1.
    pub fn exit_code(&self) -> i32 {
        i32::from(self.failed > 0)
    }
}

/// Runs every `*.json` file directly inside `dir` and writes
/// `<out>/<stem>.json` per job plus `<out>/summary.json`. `out` defaults to
/// `dir/reports`.
pub fn run_suite(
    dir: &Path,
    out: Option<&Path>,
    limits: &Limits,
) -> Result<SuiteSummary, JobError> {
    let io = |path: &Path, e: std::io::Error| JobError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    };
    let out: PathBuf = out.map_or_else(|| dir.join("reports"), Path::to_path_buf);
    let mut jobs: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| io(dir, e))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "json"))
        .collect();
    jobs.sort();
    std::fs::create_dir_all(&out).map_err(|e| io(&out, e))?;

    let results: Vec<(String, Outcome)> = jobs
        .par_iter()
        .map(|path| {
            let stem = path
                .file_stem()
                .map_or_else(String::new, |s| s.to_string_lossy().into_owned());
            (stem, run_job_file(path, limits))
        })
        .collect();

    let mut summary = SuiteSummary {
        schema_version: SCHEMA_VERSION,
        tool_version: TOOL_VERSION,
        jobs: Vec::with_capacity(results.len()),
        passed: 0,
        failed: 0,
    };
    for (stem, outcome) in &results {
        let path = out.join(format!("{stem}.json"));
        std::fs::write(&path, outcome.to_pretty()).map_err(|e| io(&path, e))?;
        if outcome.exit_code() == 0 {
            summary.passed += 1;
        } else {
            summary.failed += 1;
        }
        summary.jobs.push(JobSummary {
            job: stem.clone(),
            status: outcome.status.name(),
            exit_code: outcome.exit_code(),
        });
    }
    let path = out.join("summary.json");
    let mut text = serde_json::to_string_pretty(&summary).expect("plain data");
    text.push('\n');
    std::fs::write(&path, text).map_err(|e| io(&path, e))?;
    Ok(summary)
}
