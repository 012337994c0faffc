//! Reference optimizers sharing the main optimizer's budget accounting.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::orchestrator::{RunResult, StageCensus};
use crate::rng::RandomStream;
use crate::space::{Budget, Evaluator, Objective};

/// Uniform i.i.d. draws over the bounds.
pub fn random_search(
    objective: &dyn Objective,
    max_evals: usize,
    rng: &RandomStream,
    keep_points: bool,
) -> Result<RunResult> {
    if max_evals == 0 {
        return Err(Error::Config("random search needs a budget of at least 1".into()));
    }
    let dim = objective.space().dim();
    let mut rng = rng.split(0);
    let mut eval = Evaluator::new(objective, Budget::new(max_evals), keep_points);
    let mut best = (f64::INFINITY, Vec::new());
    while !eval.budget().is_exhausted() {
        let x: Vec<f64> = (0..dim).map(|_| rng.random::<f64>()).collect();
        let value = eval.eval_unit(&x, &mut rng)?;
        if value < best.0 {
            best = (value, x);
        }
    }
    let (_, log) = eval.into_parts();
    let census = vec![StageCensus {
        stage: "random".into(),
        trees: 0,
        best_value: best.0,
        evals: log.len(),
    }];
    RunResult::from_log(objective, log, &best.1, census)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PsoConfig {
    pub swarm_size: usize,
    pub inertia: f64,
    pub cognitive: f64,
    pub social: f64,
    /// Velocity cap as a fraction of each coordinate's range.
    pub v_max: f64,
}

impl Default for PsoConfig {
    fn default() -> Self {
        PsoConfig {
            swarm_size: 30,
            inertia: 0.729,
            cognitive: 1.49445,
            social: 1.49445,
            v_max: 0.2,
        }
    }
}

impl PsoConfig {
    pub fn validate(&self) -> Result<()> {
        if self.swarm_size < 2 {
            return Err(Error::contract(format!(
                "a swarm needs at least 2 particles, got {}",
                self.swarm_size
            )));
        }
        if !(self.v_max > 0.0) {
            return Err(Error::Config("v_max must be positive".into()));
        }
        Ok(())
    }
}

struct Particle {
    x: Vec<f64>,
    v: Vec<f64>,
    best_x: Vec<f64>,
    best_f: f64,
}

/// Global-best particle swarm in the unit cube with velocity clipping and
/// position clamping. The last iteration may be partial when the budget is
/// not a multiple of the swarm size.
pub fn pso_optimize(
    objective: &dyn Objective,
    max_evals: usize,
    cfg: &PsoConfig,
    rng: &RandomStream,
    keep_points: bool,
) -> Result<RunResult> {
    cfg.validate()?;
    if max_evals < cfg.swarm_size {
        return Err(Error::Config(format!(
            "budget {max_evals} is smaller than the swarm of {}",
            cfg.swarm_size
        )));
    }
    let dim = objective.space().dim();
    let mut rng = rng.split(0);
    let mut eval = Evaluator::new(objective, Budget::new(max_evals), keep_points);

    let mut swarm = Vec::with_capacity(cfg.swarm_size);
    let (mut g_x, mut g_f) = (Vec::new(), f64::INFINITY);
    for _ in 0..cfg.swarm_size {
        let x: Vec<f64> = (0..dim).map(|_| rng.random::<f64>()).collect();
        let v: Vec<f64> = (0..dim)
            .map(|_| cfg.v_max * (2.0 * rng.random::<f64>() - 1.0))
            .collect();
        let f = eval.eval_unit(&x, &mut rng)?;
        if f < g_f {
            g_f = f;
            g_x = x.clone();
        }
        swarm.push(Particle {
            best_x: x.clone(),
            best_f: f,
            x,
            v,
        });
    }

    'outer: loop {
        for p in swarm.iter_mut() {
            if eval.budget().is_exhausted() {
                break 'outer;
            }
            for j in 0..dim {
                let (r1, r2): (f64, f64) = (rng.random(), rng.random());
                let v = cfg.inertia * p.v[j]
                    + cfg.cognitive * r1 * (p.best_x[j] - p.x[j])
                    + cfg.social * r2 * (g_x[j] - p.x[j]);
                p.v[j] = v.clamp(-cfg.v_max, cfg.v_max);
                p.x[j] = (p.x[j] + p.v[j]).clamp(0.0, 1.0);
            }
            let f = eval.eval_unit(&p.x, &mut rng)?;
            if f < p.best_f {
                p.best_f = f;
                p.best_x.clone_from(&p.x);
            }
            if f < g_f {
                g_f = f;
                g_x.clone_from(&p.x);
            }
        }
    }
    let (_, log) = eval.into_parts();
    let census = vec![StageCensus {
        stage: "pso".into(),
        trees: cfg.swarm_size,
        best_value: g_f,
        evals: log.len(),
    }];
    RunResult::from_log(objective, log, &g_x, census)
}
