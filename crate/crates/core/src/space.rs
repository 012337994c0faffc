//! Search-space geometry, the objective interface and evaluation accounting.
//!
//! Every search component works in the unit cube `[0, 1]^n`; points are mapped
//! back to problem units only when the objective is called.

use crate::error::{Error, Result};
use crate::rng::RandomStream;

/// Box-bounded continuous domain.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchSpace {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl SearchSpace {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.is_empty() {
            return Err(Error::contract("search space needs at least one dimension"));
        }
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch {
                expected: lower.len(),
                got: upper.len(),
            });
        }
        for (i, (lo, hi)) in lower.iter().zip(&upper).enumerate() {
            if !(lo < hi) {
                return Err(Error::contract(format!(
                    "bound {i}: lower {lo} must be strictly below upper {hi}"
                )));
            }
        }
        Ok(SearchSpace { lower, upper })
    }

    /// The same interval repeated over `dim` coordinates.
    pub fn uniform(dim: usize, lower: f64, upper: f64) -> Result<Self> {
        Self::new(vec![lower; dim], vec![upper; dim])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        p.len() == self.dim()
            && p
                .iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(x, (lo, hi))| *lo <= *x && *x <= *hi)
    }

    fn check_dim(&self, len: usize) -> Result<()> {
        if len != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: len,
            });
        }
        Ok(())
    }

    /// Maps a point in problem units onto the unit cube.
    pub fn normalize(&self, p: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(p.len())?;
        Ok(p.iter()
            .zip(self.lower.iter().zip(&self.upper))
            .map(|(x, (lo, hi))| (x - lo) / (hi - lo))
            .collect())
    }

    /// Maps a unit-cube vector back to problem units.
    pub fn denormalize(&self, v: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(v.len())?;
        if let Some((index, &value)) = v
            .iter()
            .enumerate()
            .find(|(_, x)| !(0.0..=1.0).contains(*x))
        {
            return Err(Error::OutsideUnitCube { index, value });
        }
        Ok(v.iter()
            .zip(self.lower.iter().zip(&self.upper))
            .map(|(t, (lo, hi))| {
                // keep the endpoints exact
                if *t == 1.0 {
                    *hi
                } else {
                    lo + t * (hi - lo)
                }
            })
            .collect())
    }
}

/// Clips every component into `[0, 1]`.
pub fn clamp(v: &[f64]) -> Vec<f64> {
    v.iter().map(|x| x.clamp(0.0, 1.0)).collect()
}

pub(crate) fn clamp_in_place(v: &mut [f64]) {
    for x in v {
        *x = x.clamp(0.0, 1.0);
    }
}

/// A scalar function to be minimized over a [`SearchSpace`].
///
/// `noise` is the caller's random stream. Deterministic objectives ignore it;
/// stochastic ones must draw from it and nothing else so that runs replay
/// bit-for-bit.
pub trait Objective: Send + Sync {
    fn space(&self) -> &SearchSpace;

    /// Published optimum value, when one exists.
    fn known_min(&self) -> Option<f64> {
        None
    }

    fn evaluate(&self, p: &[f64], noise: &mut RandomStream) -> f64;
}

impl<T: Objective + ?Sized> Objective for Box<T> {
    fn space(&self) -> &SearchSpace {
        (**self).space()
    }
    fn known_min(&self) -> Option<f64> {
        (**self).known_min()
    }
    fn evaluate(&self, p: &[f64], noise: &mut RandomStream) -> f64 {
        (**self).evaluate(p, noise)
    }
}

/// Counter of objective calls against a hard cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    max_evals: usize,
    used: usize,
}

impl Budget {
    pub fn new(max_evals: usize) -> Self {
        Budget { max_evals, used: 0 }
    }

    pub fn max_evals(&self) -> usize {
        self.max_evals
    }

    pub fn used(&self) -> usize {
        self.used
    }

    pub fn remaining(&self) -> usize {
        self.max_evals - self.used
    }

    pub fn is_exhausted(&self) -> bool {
        self.used >= self.max_evals
    }

    /// Reserves one evaluation.
    pub fn charge(&mut self) -> Result<()> {
        if self.is_exhausted() {
            return Err(Error::BudgetExhausted {
                max_evals: self.max_evals,
            });
        }
        self.used += 1;
        Ok(())
    }

    /// Carves a sub-budget of at most `quota` evaluations out of this one.
    /// The parent is charged later with [`Budget::absorb`].
    pub fn reserve(&self, quota: usize) -> Budget {
        Budget::new(quota.min(self.remaining()))
    }

    /// Charges the evaluations a sub-budget actually spent.
    pub fn absorb(&mut self, child: &Budget) {
        assert!(child.used <= self.remaining(), "sub-budget overspent");
        self.used += child.used;
    }
}

/// Evaluates `obj` at a point in problem units, charging one evaluation.
pub fn evaluate_counted(
    obj: &dyn Objective,
    p: &[f64],
    budget: &mut Budget,
    noise: &mut RandomStream,
) -> Result<f64> {
    if p.len() != obj.space().dim() {
        return Err(Error::DimensionMismatch {
            expected: obj.space().dim(),
            got: p.len(),
        });
    }
    budget.charge()?;
    Ok(obj.evaluate(p, noise))
}

/// One recorded objective call.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalRecord {
    pub value: f64,
    /// Unit-cube coordinates, kept only when point logging is enabled.
    pub point: Option<Vec<f64>>,
}

/// Evaluation front-end used by the search components: takes unit-cube
/// vectors, charges a budget and logs every call in order.
pub struct Evaluator<'a> {
    objective: &'a dyn Objective,
    budget: Budget,
    log: Vec<EvalRecord>,
    keep_points: bool,
}

impl<'a> Evaluator<'a> {
    pub fn new(objective: &'a dyn Objective, budget: Budget, keep_points: bool) -> Self {
        Evaluator {
            objective,
            budget,
            log: Vec::new(),
            keep_points,
        }
    }

    pub fn objective(&self) -> &'a dyn Objective {
        self.objective
    }

    pub fn budget(&self) -> &Budget {
        &self.budget
    }

    pub fn dim(&self) -> usize {
        self.objective.space().dim()
    }

    pub fn eval_unit(&mut self, v: &[f64], rng: &mut RandomStream) -> Result<f64> {
        let p = self.objective.space().denormalize(v)?;
        let value = evaluate_counted(self.objective, &p, &mut self.budget, rng)?;
        self.log.push(EvalRecord {
            value,
            point: self.keep_points.then(|| v.to_vec()),
        });
        Ok(value)
    }

    pub fn log(&self) -> &[EvalRecord] {
        &self.log
    }

    pub fn into_parts(self) -> (Budget, Vec<EvalRecord>) {
        (self.budget, self.log)
    }
}
