use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::design::DEFAULT_PENALTY;
use crate::error::{Error, Result};
use crate::registry::{OptimizerId, OptimizerSettings, ProblemId};

/// A sweep over problems and optimizers, read from a TOML file.
///
/// ```toml
/// problems = ["F16", "welded_beam"]
/// optimizers = ["mcts_logistic", "random"]
/// trials = 10
/// budget = 20000
/// master_seed = 7
/// out_dir = "results"
///
/// [optimizer.mcts.local]
/// stages = 8
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentSpec {
    pub problems: Vec<String>,
    pub optimizers: Vec<String>,
    pub trials: usize,
    /// Evaluations per trial. `None` uses 50 000 for the scalable functions
    /// and 20 000 for everything else.
    pub budget: Option<usize>,
    pub master_seed: u64,
    pub out_dir: PathBuf,
    /// Also write the unit-cube coordinates of every evaluation.
    pub log_points: bool,
    pub penalty: f64,
    /// Trials run at once; 0 lets rayon pick.
    pub workers: usize,
    pub optimizer: OptimizerSettings,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        ExperimentSpec {
            problems: vec!["F16".into()],
            optimizers: vec!["mcts_logistic".into()],
            trials: 1,
            budget: None,
            master_seed: 0,
            out_dir: PathBuf::from("results"),
            log_points: false,
            penalty: DEFAULT_PENALTY,
            workers: 0,
            optimizer: OptimizerSettings::default(),
        }
    }
}

impl ExperimentSpec {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_toml_str(&text)
    }

    pub fn problem_ids(&self) -> Result<Vec<ProblemId>> {
        self.problems.iter().map(|p| p.parse()).collect()
    }

    pub fn optimizer_ids(&self) -> Result<Vec<OptimizerId>> {
        self.optimizers.iter().map(|o| o.parse()).collect()
    }

    pub fn budget_for(&self, problem: ProblemId) -> usize {
        self.budget.unwrap_or_else(|| problem.default_budget())
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if self.problems.is_empty() || self.optimizers.is_empty() {
            return Err(Error::Config("the spec lists no problems or no optimizers".into()));
        }
        if self.budget == Some(0) {
            return Err(Error::Config("budget must be at least 1".into()));
        }
        if !(self.penalty > 0.0) {
            return Err(Error::Config("penalty must be positive".into()));
        }
        self.problem_ids()?;
        self.optimizer_ids()?;
        self.optimizer.mcts.validate()?;
        self.optimizer.pso.validate()
    }
}
