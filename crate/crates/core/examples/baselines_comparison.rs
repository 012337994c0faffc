//! Tree search against uniform random search and particle swarm on a few
//! benchmarks, mean and best over several trials.
//!
//!     cargo run --release --example baselines_comparison -- [budget] [trials]

use cmcts::registry::run_optimizer;
use cmcts::{OptimizerId, OptimizerSettings, ProblemId, RandomStream};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let budget: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(5_000);
    let trials: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(3);

    let settings = OptimizerSettings::default();
    println!("{:<8} {:<17} {:>14} {:>14}", "problem", "optimizer", "mean", "best");
    for name in ["F9", "F15", "F16", "F21"] {
        let problem: ProblemId = name.parse()?;
        let objective = problem.build(cmcts::design::DEFAULT_PENALTY)?;
        for id in OptimizerId::ALL {
            let finals: Vec<f64> = (0..trials)
                .map(|t| run_optimizer(id, objective.as_ref(), budget, &settings, &RandomStream::new(100 + t), false).map(|r| r.best_value))
                .collect::<Result<_, _>>()?;
            let mean = finals.iter().sum::<f64>() / finals.len() as f64;
            let best = finals.iter().copied().fold(f64::INFINITY, f64::min);
            println!("{name:<8} {:<17} {mean:>14.6e} {best:>14.6e}", id.id());
        }
    }
    Ok(())
}
