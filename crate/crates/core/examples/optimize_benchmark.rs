//! Runs the tree-search optimizer on one benchmark and prints the
//! convergence trace at a few checkpoints.
//!
//!     cargo run --release --example optimize_benchmark -- [F1..F23] [budget] [seed]

use cmcts::{make_benchmark, optimize, BenchmarkId, Objective, OptimizerConfig, RandomStream};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let id: BenchmarkId = args.next().as_deref().unwrap_or("F17").parse()?;
    let budget: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(20_000);
    let seed: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(1);

    let f = make_benchmark(id);
    println!("{id}: dim {}, tabulated minimum {}", f.space().dim(), f.fmin());

    let cfg = OptimizerConfig::default();
    let result = optimize(&f, budget, &cfg, &RandomStream::new(seed), false)?;

    let mut mark = 10;
    while mark <= result.trace.len() {
        println!("{mark:>8} evals  best {:.10e}", result.trace[mark - 1]);
        mark *= 10;
    }
    println!("{:>8} evals  best {:.10e}", result.evals_used, result.best_value);
    println!("best point {:?}", result.best_point);
    for c in &result.census {
        println!("  {:<10} trees {:>3}  evals {:>7}  best {:.6e}", c.stage, c.trees, c.evals, c.best_value);
    }
    Ok(())
}
