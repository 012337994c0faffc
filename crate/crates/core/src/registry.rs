//! String ids for problems and optimizers.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::baselines::{pso_optimize, random_search, PsoConfig};
use crate::benchmarks::{make_benchmark, BenchmarkId};
use crate::design::{assess, DesignKind, DesignProblem};
use crate::error::{Error, Result};
use crate::orchestrator::{optimize, OptimizerConfig, RunResult};
use crate::rng::RandomStream;
use crate::space::Objective;
use crate::surrogate::Kernel;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProblemId {
    Benchmark(BenchmarkId),
    Design(DesignKind),
}

impl ProblemId {
    pub fn all() -> Vec<ProblemId> {
        BenchmarkId::ALL
            .iter()
            .map(|&b| ProblemId::Benchmark(b))
            .chain([
                ProblemId::Design(DesignKind::WeldedBeam),
                ProblemId::Design(DesignKind::PressureVessel),
            ])
            .collect()
    }

    pub fn build(self, penalty: f64) -> Result<Box<dyn Objective>> {
        Ok(match self {
            ProblemId::Benchmark(b) => Box::new(make_benchmark(b)),
            ProblemId::Design(k) => Box::new(DesignProblem::new(k, penalty)?),
        })
    }

    /// Fixed-dimensional problems get the smaller default budget.
    pub fn default_budget(self) -> usize {
        match self {
            ProblemId::Benchmark(b) if b.is_scalable() => 50_000,
            _ => 20_000,
        }
    }
}

impl fmt::Display for ProblemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProblemId::Benchmark(b) => write!(f, "{b}"),
            ProblemId::Design(k) => f.write_str(k.id()),
        }
    }
}

impl FromStr for ProblemId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if let Ok(b) = s.parse::<BenchmarkId>() {
            return Ok(ProblemId::Benchmark(b));
        }
        match s {
            "welded_beam" => Ok(ProblemId::Design(DesignKind::WeldedBeam)),
            "pressure_vessel" => Ok(ProblemId::Design(DesignKind::PressureVessel)),
            _ => Err(Error::UnknownId {
                kind: "problem",
                id: s.to_string(),
                valid: ProblemId::all().iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", "),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OptimizerId {
    MctsLogistic,
    MctsHypersphere,
    Random,
    Pso,
}

impl OptimizerId {
    pub const ALL: [OptimizerId; 4] = [
        OptimizerId::MctsLogistic,
        OptimizerId::MctsHypersphere,
        OptimizerId::Random,
        OptimizerId::Pso,
    ];

    pub fn id(self) -> &'static str {
        match self {
            OptimizerId::MctsLogistic => "mcts_logistic",
            OptimizerId::MctsHypersphere => "mcts_hypersphere",
            OptimizerId::Random => "random",
            OptimizerId::Pso => "pso",
        }
    }
}

impl fmt::Display for OptimizerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for OptimizerId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        OptimizerId::ALL
            .into_iter()
            .find(|o| o.id() == s)
            .ok_or_else(|| Error::UnknownId {
                kind: "optimizer",
                id: s.to_string(),
                valid: OptimizerId::ALL.map(|o| o.id()).join(", "),
            })
    }
}

/// Configuration of every registered optimizer. The MCTS kernel field is
/// ignored; the optimizer id decides it.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct OptimizerSettings {
    pub mcts: OptimizerConfig,
    pub pso: PsoConfig,
}

pub fn run_optimizer(
    id: OptimizerId,
    objective: &dyn Objective,
    max_evals: usize,
    settings: &OptimizerSettings,
    rng: &RandomStream,
    keep_points: bool,
) -> Result<RunResult> {
    let mcts = |kernel| OptimizerConfig {
        kernel,
        ..settings.mcts
    };
    match id {
        OptimizerId::MctsLogistic => optimize(objective, max_evals, &mcts(Kernel::Logistic), rng, keep_points),
        OptimizerId::MctsHypersphere => {
            optimize(objective, max_evals, &mcts(Kernel::Hypersphere), rng, keep_points)
        }
        OptimizerId::Random => random_search(objective, max_evals, rng, keep_points),
        OptimizerId::Pso => pso_optimize(objective, max_evals, &settings.pso, rng, keep_points),
    }
}

/// One point pushed through a problem, in problem units.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointReport {
    pub problem: String,
    pub point: Vec<f64>,
    pub value: f64,
    /// Raw cost and feasibility, for design problems only.
    pub cost: Option<f64>,
    pub feasible: Option<bool>,
    pub constraints: Option<Vec<f64>>,
}

pub fn evaluate_point(problem: ProblemId, point: &[f64], penalty: f64, seed: u64) -> Result<PointReport> {
    let objective = problem.build(penalty)?;
    let dim = objective.space().dim();
    if point.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: point.len(),
        });
    }
    let value = objective.evaluate(point, &mut RandomStream::new(seed));
    let mut report = PointReport {
        problem: problem.to_string(),
        point: point.to_vec(),
        value,
        cost: None,
        feasible: None,
        constraints: None,
    };
    if let ProblemId::Design(kind) = problem {
        let (cost, c) = assess(kind, point)?;
        report.cost = Some(cost);
        report.feasible = Some(c.feasible);
        report.constraints = Some(c.values);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_round_trip() {
        for p in ProblemId::all() {
            assert_eq!(p.to_string().parse::<ProblemId>().unwrap(), p);
        }
        for o in OptimizerId::ALL {
            assert_eq!(o.id().parse::<OptimizerId>().unwrap(), o);
        }
        assert_eq!(ProblemId::all().len(), 25);
    }

    #[test]
    fn unknown_ids_list_valid_ones() {
        let err = "F24".parse::<ProblemId>().unwrap_err().to_string();
        assert!(err.contains("welded_beam") && err.contains("F23"), "{err}");
        let err = "woa".parse::<OptimizerId>().unwrap_err().to_string();
        assert!(err.contains("mcts_logistic"), "{err}");
    }
}
