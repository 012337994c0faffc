use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cmcts::design::DEFAULT_PENALTY;
use cmcts::harness::{emit_summary, run_experiment, ExperimentSpec, Format};
use cmcts::registry::{evaluate_point, OptimizerId, ProblemId};
use cmcts::{BenchmarkId, Error};

#[derive(Parser)]
#[command(name = "cmcts", version, about = "Continuous Monte Carlo tree search experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a seeded sweep and write its artifacts.
    Run {
        /// TOML experiment spec; flags below override its keys
        #[arg(long)]
        spec: Option<PathBuf>,
        /// Master seed
        #[arg(long)]
        seed: Option<u64>,
        /// Evaluations per trial for every problem
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long)]
        trials: Option<usize>,
        /// Output directory
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write every evaluated point
        #[arg(long)]
        log_points: bool,
    },
    /// Evaluate one point (problem units) through a registered problem.
    Eval {
        /// Registry id, see `cmcts list`
        problem: String,
        #[arg(required = true, allow_negative_numbers = true)]
        point: Vec<f64>,
        #[arg(long, default_value_t = DEFAULT_PENALTY)]
        penalty: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print the problem and optimizer registries.
    List,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_) | Error::UnknownId { .. } | Error::Contract(_) | Error::DimensionMismatch { .. } => 2,
        _ => 3,
    }
}

fn run(cli: Cli) -> Result<(), (u8, Error)> {
    let config = |e: Error| (2, e);
    let runtime = |e: Error| (exit_code(&e), e);
    match cli.command {
        Command::Run {
            spec,
            seed,
            budget,
            trials,
            out,
            log_points,
        } => {
            let mut s = match spec {
                Some(path) => ExperimentSpec::load(&path).map_err(config)?,
                None => ExperimentSpec::default(),
            };
            if let Some(v) = seed {
                s.master_seed = v;
            }
            if budget.is_some() {
                s.budget = budget;
            }
            if let Some(v) = trials {
                s.trials = v;
            }
            if let Some(v) = out {
                s.out_dir = v;
            }
            s.log_points |= log_points;
            s.validate().map_err(config)?;
            let output = run_experiment(&s).map_err(runtime)?;
            print!("{}", emit_summary(&output.rows, Format::Text));
            eprintln!("wrote {}", s.out_dir.display());
        }
        Command::Eval {
            problem,
            point,
            penalty,
            seed,
        } => {
            let id: ProblemId = problem.parse().map_err(config)?;
            let report = evaluate_point(id, &point, penalty, seed).map_err(runtime)?;
            println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
        }
        Command::List => {
            println!("problems:");
            for b in BenchmarkId::ALL {
                let (dim, (lo, hi), fmin) = b.table_row();
                println!("  {b:<16} dim {dim:>2}  [{lo}, {hi}]  f_min {fmin}");
            }
            println!("  {:<16} dim  4", "welded_beam");
            println!("  {:<16} dim  4", "pressure_vessel");
            println!("optimizers:");
            for o in OptimizerId::ALL {
                println!("  {o}");
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err((code, e)) => {
            eprintln!("error: {e}");
            ExitCode::from(code)
        }
    }
}
