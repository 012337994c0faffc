//! Population-based Monte Carlo tree search for bounded continuous
//! minimization, with the benchmark functions, engineering design problems,
//! baselines and experiment harness used to evaluate it.
//!
//! ```
//! use cmcts::{make_benchmark, optimize, BenchmarkId, OptimizerConfig, RandomStream};
//!
//! let f = make_benchmark(BenchmarkId::F17);
//! let result = optimize(&f, 2_000, &OptimizerConfig::default(), &RandomStream::new(1), false).unwrap();
//! assert_eq!(result.evals_used, 2_000);
//! assert!(result.best_value < 0.5);
//! ```

pub mod baselines;
pub mod benchmarks;
pub mod design;
pub mod error;
pub mod harness;
pub mod orchestrator;
pub mod registry;
pub mod rng;
pub mod sampling;
pub mod space;
pub mod surrogate;
pub mod tree;

pub use baselines::{pso_optimize, random_search, PsoConfig};
pub use benchmarks::{make_benchmark, make_benchmark_with_dim, Benchmark, BenchmarkId};
pub use design::{DesignKind, DesignProblem};
pub use error::{Error, Result};
pub use orchestrator::{optimize, GlobalConfig, LocalConfig, OptimizerConfig, RunResult};
pub use registry::{OptimizerId, OptimizerSettings, ProblemId};
pub use rng::RandomStream;
pub use space::{Budget, Objective, SearchSpace};
pub use surrogate::Kernel;
