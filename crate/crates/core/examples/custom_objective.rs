//! Plugging a user-defined objective into the optimizer.
//!
//! The objective here is a 30-dimensional sphere whose minimum sits away
//! from the center of the box, so nothing about the box geometry gives the
//! answer away.
//!
//!     cargo run --release --example custom_objective -- [budget] [seed] [logistic|hypersphere]

use cmcts::{optimize, Kernel, Objective, OptimizerConfig, RandomStream, SearchSpace};

struct ShiftedSphere {
    space: SearchSpace,
    shift: Vec<f64>,
}

impl ShiftedSphere {
    fn new(dim: usize) -> Self {
        ShiftedSphere {
            space: SearchSpace::uniform(dim, -100.0, 100.0).unwrap(),
            shift: (0..dim).map(|i| 37.0 - 2.5 * i as f64).collect(),
        }
    }
}

impl Objective for ShiftedSphere {
    fn space(&self) -> &SearchSpace {
        &self.space
    }

    fn known_min(&self) -> Option<f64> {
        Some(0.0)
    }

    fn evaluate(&self, p: &[f64], _noise: &mut RandomStream) -> f64 {
        p.iter().zip(&self.shift).map(|(x, s)| (x - s).powi(2)).sum()
    }
}

fn main() {
    let mut args = std::env::args().skip(1);
    let budget: usize = args.next().map_or(100_000, |s| s.parse().expect("budget"));
    let seed: u64 = args.next().map_or(1, |s| s.parse().expect("seed"));

    let f = ShiftedSphere::new(30);
    let kernel = match args.next().as_deref() {
        Some("hypersphere") => Kernel::Hypersphere,
        _ => Kernel::Logistic,
    };
    let cfg = OptimizerConfig::with_kernel(kernel);
    let result = optimize(&f, budget, &cfg, &RandomStream::new(seed), false).unwrap();

    for checkpoint in [1_000, 10_000, 25_000, 50_000, 100_000] {
        if let Some(v) = result.trace.get(checkpoint - 1) {
            println!("after {checkpoint:>7} evaluations: {v:.6e}");
        }
    }
    println!("evaluations used: {}", result.evals_used);
    println!("best value:       {:.6e}", result.best_value);
    let err = result
        .best_point
        .iter()
        .zip(&f.shift)
        .map(|(x, s)| (x - s).abs())
        .fold(0.0, f64::max);
    println!("max |x - x*|:     {err:.3e}");
    for stage in &result.census {
        println!("{:>9}: {} trees, best {:.4e} after {} evals", stage.stage, stage.trees, stage.best_value, stage.evals);
    }
}
