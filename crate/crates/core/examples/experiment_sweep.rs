//! A small comparison sweep through the harness, writing the same files
//! as `cmcts run`.
//!
//!     cargo run --release --example experiment_sweep -- [out_dir]

use cmcts::harness::{emit_summary, run_experiment, ExperimentSpec, Format};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out_dir = std::env::args().nth(1).unwrap_or_else(|| "results/sweep".into());
    let spec = ExperimentSpec {
        problems: vec!["F16".into(), "F17".into(), "F18".into(), "welded_beam".into()],
        optimizers: vec!["mcts_logistic".into(), "mcts_hypersphere".into(), "random".into(), "pso".into()],
        trials: 3,
        budget: Some(5_000),
        master_seed: 42,
        out_dir: out_dir.clone().into(),
        ..ExperimentSpec::default()
    };
    let output = run_experiment(&spec)?;
    print!("{}", emit_summary(&output.rows, Format::Text));
    println!("{} trials written under {out_dir}", output.trials.len());
    Ok(())
}
