//! Constrained engineering design: checks the reference designs, then
//! optimizes both problems under the exterior penalty.
//!
//!     cargo run --release --example design_problems -- [budget] [seed]

use cmcts::design::{assess, DEFAULT_PENALTY};
use cmcts::{optimize, DesignKind, DesignProblem, OptimizerConfig, RandomStream};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let budget: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(20_000);
    let seed: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(7);

    let reference = [
        (DesignKind::WeldedBeam, [0.204508, 3.273933, 9.046498, 0.205730]),
        (DesignKind::PressureVessel, [0.779536, 0.385230, 40.332212, 199.959890]),
    ];

    for (kind, x) in reference {
        let (cost, report) = assess(kind, &x)?;
        println!("{} reference design", kind.id());
        for (name, v) in kind.variable_names().iter().zip(&x) {
            println!("  {name:<4} {v}");
        }
        println!("  cost {cost:.6}  feasible {}", report.feasible);
        println!("  g = {:?}", report.values.iter().map(|g| format!("{g:.3e}")).collect::<Vec<_>>());

        let problem = DesignProblem::new(kind, DEFAULT_PENALTY)?;
        let result = optimize(&problem, budget, &OptimizerConfig::default(), &RandomStream::new(seed), false)?;
        let (cost, report) = assess(kind, &result.best_point)?;
        println!("  optimized after {} evals: cost {cost:.6} feasible {} at {:?}", result.evals_used, report.feasible, result.best_point);
        println!();
    }
    Ok(())
}
