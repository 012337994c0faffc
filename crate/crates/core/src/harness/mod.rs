//! Seeded multi-trial sweeps and their output files.

mod report;
mod spec;

use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

pub use report::{emit_points, emit_summary, emit_trace, format_sig, Format, SummaryRow};
pub use spec::ExperimentSpec;

use crate::error::{Error, Result};
use crate::orchestrator::RunResult;
use crate::registry::{run_optimizer, OptimizerId, ProblemId};
use crate::rng::{trial_seed, RandomStream};

/// One finished trial.
#[derive(Debug, Clone)]
pub struct TrialRecord {
    pub problem: ProblemId,
    pub optimizer: OptimizerId,
    pub trial: usize,
    pub seed: u64,
    pub budget: usize,
    pub result: RunResult,
}

impl TrialRecord {
    pub fn file_stem(&self) -> String {
        format!("{}_{}_{}", self.problem, self.optimizer, self.trial)
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub rows: Vec<SummaryRow>,
    pub trials: Vec<TrialRecord>,
    pub metadata: serde_json::Value,
}

/// Resolved configuration of a sweep, written as `metadata.json`.
pub fn metadata(spec: &ExperimentSpec) -> Result<serde_json::Value> {
    #[derive(Serialize)]
    struct Budgets {
        problem: String,
        budget: usize,
    }
    let budgets: Vec<Budgets> = spec
        .problem_ids()?
        .into_iter()
        .map(|p| Budgets {
            problem: p.to_string(),
            budget: spec.budget_for(p),
        })
        .collect();
    Ok(json!({
        "crate_version": env!("CARGO_PKG_VERSION"),
        "spec": spec,
        "budgets": budgets,
        "std": "sample (n - 1)",
        "budget_note": "common per-trial evaluation budget fixed by the harness",
    }))
}

/// Runs every trial without touching the filesystem.
pub fn execute(spec: &ExperimentSpec) -> Result<ExperimentOutput> {
    spec.validate()?;
    let problems = spec.problem_ids()?;
    let optimizers = spec.optimizer_ids()?;
    let mut jobs = Vec::new();
    for &p in &problems {
        for &o in &optimizers {
            for t in 0..spec.trials {
                jobs.push((p, o, t));
            }
        }
    }
    let run = |(problem, optimizer, trial): (ProblemId, OptimizerId, usize)| -> Result<TrialRecord> {
        let objective = problem.build(spec.penalty)?;
        let seed = trial_seed(spec.master_seed, &problem.to_string(), optimizer.id(), trial as u64);
        let budget = spec.budget_for(problem);
        let result = run_optimizer(
            optimizer,
            objective.as_ref(),
            budget,
            &spec.optimizer,
            &RandomStream::new(seed),
            spec.log_points,
        )?;
        Ok(TrialRecord {
            problem,
            optimizer,
            trial,
            seed,
            budget,
            result,
        })
    };
    let trials: Vec<TrialRecord> = if spec.workers == 1 {
        jobs.into_iter().map(run).collect::<Result<_>>()?
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(spec.workers)
            .build()
            .map_err(|e| Error::Config(e.to_string()))?;
        pool.install(|| jobs.into_par_iter().map(run).collect::<Result<_>>())?
    };

    let mut rows = Vec::new();
    for chunk in trials.chunks(spec.trials) {
        let finals: Vec<f64> = chunk.iter().map(|t| t.result.best_value).collect();
        let first = &chunk[0];
        rows.push(SummaryRow::from_finals(
            &first.problem.to_string(),
            first.optimizer.id(),
            &finals,
            first.budget,
        ));
    }
    Ok(ExperimentOutput {
        rows,
        trials,
        metadata: metadata(spec)?,
    })
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.display().to_string(),
        source,
    }
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(io_err(path))
}

/// Creates the output directory and checks that it accepts files.
pub fn prepare_output_dir(dir: &Path) -> Result<()> {
    let traces = dir.join("traces");
    fs::create_dir_all(&traces).map_err(io_err(&traces))?;
    let probe = dir.join(".write_probe");
    fs::write(&probe, b"").map_err(io_err(&probe))?;
    fs::remove_file(&probe).map_err(io_err(&probe))
}

/// Writes `summary.csv`, `summary.json`, `metadata.json` and one trace file
/// per trial (plus a points file per trial when point logging is on).
pub fn write_outputs(dir: &Path, output: &ExperimentOutput) -> Result<()> {
    write(&dir.join("summary.csv"), &emit_summary(&output.rows, Format::Csv))?;
    write(&dir.join("summary.json"), &emit_summary(&output.rows, Format::Json))?;
    let mut meta = serde_json::to_string_pretty(&output.metadata).expect("metadata serializes");
    meta.push('\n');
    write(&dir.join("metadata.json"), &meta)?;
    let traces = dir.join("traces");
    for t in &output.trials {
        write(&traces.join(format!("{}.tsv", t.file_stem())), &emit_trace(&t.result))?;
        if let Some(points) = emit_points(&t.result) {
            write(&traces.join(format!("{}_points.tsv", t.file_stem())), &points)?;
        }
    }
    Ok(())
}

/// Validates the spec, checks the output directory, runs every trial and
/// writes the artifacts.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentOutput> {
    spec.validate()?;
    prepare_output_dir(&spec.out_dir)?;
    let output = execute(spec)?;
    write_outputs(&spec.out_dir, &output)?;
    Ok(output)
}
