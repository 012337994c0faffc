//! Hierarchical tree batches.
//!
//! A global batch of trees is rooted on a Latin hypercube design, each tree
//! with its own window decay rate. Global trees are depth-capped and switch
//! their exploration constant to a large value while they stagnate. The best
//! global candidates then seed rounds of local trees with a negligible
//! exploration constant. Between rounds every seed's window is rescaled by
//! its relative progress toward the target value (or decayed when it made
//! none), seeds that did not improve are pruned, and each survivor's best
//! point becomes the root of its next tree.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::RandomStream;
use crate::sampling::lhs_sample;
use crate::space::{Budget, EvalRecord, Evaluator, Objective};
use crate::surrogate::{Kernel, SurrogateConfig};
use crate::tree::{window_scale, Tree, TreeConfig};

/// Stop once the best value is this close to the target.
pub const TARGET_TOL: f64 = 1e-12;
/// Smallest window handed to a tree.
const MIN_WINDOW: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GlobalConfig {
    pub tree_count: usize,
    /// Range the per-tree decay rate `a` is drawn from.
    pub a_range: (f64, f64),
    /// Initial window radius `b`.
    pub scale: f64,
    pub c_base: f64,
    pub c_large: f64,
    pub max_depth: usize,
    /// Iterations without a new tree best before the exploration constant is
    /// raised and before deepening below a stale node stops.
    pub stagnation_threshold: u64,
    /// `None` sizes the batch from [`OptimizerConfig::global_fraction`].
    pub iterations_per_tree: Option<usize>,
    pub rollouts_per_expansion: usize,
}

impl Default for GlobalConfig {
    fn default() -> Self {
        let c_base = std::f64::consts::SQRT_2;
        GlobalConfig {
            tree_count: 20,
            a_range: (0.05, 0.1),
            scale: 0.5,
            c_base,
            c_large: 1e3 * c_base,
            max_depth: 10,
            stagnation_threshold: 25,
            iterations_per_tree: None,
            rollouts_per_expansion: 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LocalConfig {
    pub seed_count: usize,
    pub stages: usize,
    /// `None` splits the remaining budget evenly over the remaining stages.
    pub iterations_per_stage: Option<usize>,
    pub c_local: f64,
    pub alpha: f64,
    pub epsilon: f64,
    pub delta: f64,
    /// Overrides the objective's known minimum as the window-update target.
    pub f_target: Option<f64>,
    pub rollouts_per_expansion: usize,
}

impl Default for LocalConfig {
    fn default() -> Self {
        LocalConfig {
            seed_count: 5,
            stages: 5,
            iterations_per_stage: None,
            c_local: 1e-9,
            alpha: 1.0,
            epsilon: 1e-9,
            delta: 0.7,
            f_target: None,
            rollouts_per_expansion: 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OptimizerConfig {
    pub kernel: Kernel,
    pub global: GlobalConfig,
    pub local: LocalConfig,
    pub surrogate: SurrogateConfig,
    /// Share of the budget the global batch may spend when its iteration
    /// count is not fixed.
    pub global_fraction: f64,
    /// Run the trees of a batch on the rayon pool.
    pub parallel: bool,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            kernel: Kernel::Logistic,
            global: GlobalConfig::default(),
            local: LocalConfig::default(),
            surrogate: SurrogateConfig::default(),
            global_fraction: 0.25,
            parallel: false,
        }
    }
}

impl OptimizerConfig {
    pub fn with_kernel(kernel: Kernel) -> Self {
        OptimizerConfig {
            kernel,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let g = &self.global;
        let l = &self.local;
        if g.tree_count == 0 || l.seed_count == 0 {
            return Err(Error::Config("tree_count and seed_count must be positive".into()));
        }
        if !(g.a_range.0 > 0.0 && g.a_range.0 <= g.a_range.1) {
            return Err(Error::Config("a_range must be a positive interval".into()));
        }
        if !(g.c_large >= 100.0 * g.c_base) {
            return Err(Error::Config("c_large must be at least 100 x c_base".into()));
        }
        if !(l.c_local <= 1e-6 * g.c_base) {
            return Err(Error::Config("c_local must not exceed 1e-6 x c_base".into()));
        }
        if !(l.delta > 0.0 && l.delta < 1.0) {
            return Err(Error::Config("delta must lie in (0, 1)".into()));
        }
        if !(l.epsilon > 0.0) {
            return Err(Error::Config("epsilon must be positive".into()));
        }
        if !(0.0..=1.0).contains(&self.global_fraction) {
            return Err(Error::Config("global_fraction must lie in [0, 1]".into()));
        }
        TreeConfig {
            exploration: g.c_base,
            decay: g.a_range.0,
            scale: g.scale,
            max_depth: Some(g.max_depth),
            rollouts_per_expansion: g.rollouts_per_expansion,
            growth_patience: None,
        }
        .validate()?;
        if l.rollouts_per_expansion == 0 {
            return Err(Error::Config("rollouts_per_expansion must be at least 1".into()));
        }
        self.surrogate.validate()
    }
}

/// Best point of one global tree.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    /// Unit-cube coordinates.
    pub point: Vec<f64>,
    pub value: f64,
    /// Window decay rate of the originating tree.
    pub decay: f64,
    /// `window_scale(depth of the best node, decay, b)`.
    pub final_window: f64,
    pub tree: usize,
}

/// A local tree lineage carried across stages.
#[derive(Debug, Clone, PartialEq)]
pub struct Seed {
    pub point: Vec<f64>,
    pub value: f64,
    pub decay: f64,
    pub window: f64,
    /// Index of the global tree this lineage descends from.
    pub origin: usize,
    pub improved: bool,
}

impl From<&Candidate> for Seed {
    fn from(c: &Candidate) -> Self {
        Seed {
            point: c.point.clone(),
            value: c.value,
            decay: c.decay,
            window: c.final_window,
            origin: c.tree,
            improved: true,
        }
    }
}

/// Trees alive in one phase of a run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StageCensus {
    pub stage: String,
    pub trees: usize,
    pub best_value: f64,
    pub evals: usize,
}

#[derive(Debug, Clone)]
pub struct RunResult {
    /// Best point in problem units.
    pub best_point: Vec<f64>,
    pub best_value: f64,
    pub evals_used: usize,
    /// `trace[i]` is the best value after evaluation `i + 1`.
    pub trace: Vec<f64>,
    pub census: Vec<StageCensus>,
    pub evaluations: Vec<EvalRecord>,
}

impl RunResult {
    /// Builds the result from the ordered evaluation log.
    pub fn from_log(objective: &dyn Objective, log: Vec<EvalRecord>, best_unit: &[f64], census: Vec<StageCensus>) -> Result<Self> {
        let mut trace = Vec::with_capacity(log.len());
        let mut best = f64::INFINITY;
        for r in &log {
            if r.value < best {
                best = r.value;
            }
            trace.push(best);
        }
        Ok(RunResult {
            best_point: objective.space().denormalize(best_unit)?,
            best_value: best,
            evals_used: log.len(),
            trace,
            census,
            evaluations: log,
        })
    }
}

/// Window update between local stages: scaled by the relative improvement
/// when `f_curr < f_prev`, multiplied by `delta` otherwise.
pub fn adapt_window(
    b_prev: f64,
    f_prev: f64,
    f_curr: f64,
    f_target: f64,
    alpha: f64,
    epsilon: f64,
    delta: f64,
) -> f64 {
    if f_curr < f_prev {
        b_prev * ((f_prev - f_curr + epsilon) / (f_prev - f_target + epsilon)).powf(alpha)
    } else {
        b_prev * delta
    }
}

/// The `m` lowest-valued candidates, ties broken by tree index.
pub fn select_top(candidates: &[Candidate], m: usize) -> Vec<Candidate> {
    let mut sorted = candidates.to_vec();
    sorted.sort_by(|a, b| a.value.total_cmp(&b.value).then(a.tree.cmp(&b.tree)));
    sorted.truncate(m.max(1));
    sorted
}

fn best_seed_index(seeds: &[Seed]) -> Option<usize> {
    (0..seeds.len()).min_by(|&i, &j| {
        seeds[i]
            .value
            .total_cmp(&seeds[j].value)
            .then(seeds[i].origin.cmp(&seeds[j].origin))
    })
}

/// Keeps the seeds that improved in the last stage plus the overall best.
pub fn prune(seeds: Vec<Seed>) -> Vec<Seed> {
    let Some(best) = best_seed_index(&seeds) else {
        return seeds;
    };
    seeds
        .into_iter()
        .enumerate()
        .filter(|(i, s)| s.improved || *i == best)
        .map(|(_, s)| s)
        .collect()
}

struct TreeRun {
    point: Vec<f64>,
    value: f64,
    best_depth: usize,
    budget: Budget,
    log: Vec<EvalRecord>,
}

fn run_tree(
    objective: &dyn Objective,
    mut tree: Tree,
    iterations: usize,
    quota: Budget,
    keep_points: bool,
    mut rng: RandomStream,
    stagnation: Option<(u64, f64, f64)>,
) -> Result<TreeRun> {
    let mut eval = Evaluator::new(objective, quota, keep_points);
    let mut stale = 0u64;
    for _ in 0..iterations {
        let before = tree.best().value;
        match tree.iterate(&mut eval, &mut rng) {
            Ok(_) => {}
            Err(e) if e.is_budget_exhausted() => break,
            Err(e) => return Err(e),
        }
        if let Some((threshold, c_base, c_large)) = stagnation {
            if tree.best().value < before {
                stale = 0;
                tree.set_exploration(c_base);
            } else {
                stale += 1;
                if stale >= threshold {
                    tree.set_exploration(c_large);
                }
            }
        }
    }
    let best = tree.best();
    let (point, value, best_depth) = (best.point.clone(), best.value, best.depth);
    let (budget, log) = eval.into_parts();
    Ok(TreeRun {
        point,
        value,
        best_depth,
        budget,
        log,
    })
}

fn run_all<T, F>(jobs: Vec<T>, parallel: bool, f: F) -> Result<Vec<TreeRun>>
where
    T: Send,
    F: Fn(T) -> Result<TreeRun> + Sync + Send,
{
    if parallel {
        jobs.into_par_iter().map(f).collect()
    } else {
        jobs.into_iter().map(f).collect()
    }
}

/// Accumulates the ordered evaluation log of a run.
pub struct RunLog {
    pub budget: Budget,
    pub records: Vec<EvalRecord>,
    pub keep_points: bool,
}

impl RunLog {
    pub fn new(budget: Budget, keep_points: bool) -> Self {
        RunLog {
            budget,
            records: Vec::new(),
            keep_points,
        }
    }

    fn absorb(&mut self, run: &mut TreeRun) {
        self.budget.absorb(&run.budget);
        self.records.append(&mut run.log);
    }
}

/// Runs the global batch and returns one candidate per tree whose root could
/// be evaluated.
pub fn run_global_batch(
    objective: &dyn Objective,
    cfg: &OptimizerConfig,
    log: &mut RunLog,
    rng: &RandomStream,
) -> Result<Vec<Candidate>> {
    let g = &cfg.global;
    let dim = objective.space().dim();
    let mut design_rng = rng.split(0);
    let roots = lhs_sample(g.tree_count, dim, &mut design_rng)?;
    let decays: Vec<f64> = (0..g.tree_count)
        .map(|_| g.a_range.0 + (g.a_range.1 - g.a_range.0) * uniform(&mut design_rng))
        .collect();

    let mut evaluated = Vec::new();
    let mut eval = Evaluator::new(objective, log.budget.reserve(g.tree_count), log.keep_points);
    for root in roots {
        match eval.eval_unit(&root, &mut design_rng) {
            Ok(v) => evaluated.push((root, v)),
            Err(e) if e.is_budget_exhausted() => break,
            Err(e) => return Err(e),
        }
    }
    let (b, mut records) = eval.into_parts();
    log.budget.absorb(&b);
    log.records.append(&mut records);

    let trees = evaluated.len().max(1);
    let iterations = g.iterations_per_tree.unwrap_or_else(|| {
        let share = (cfg.global_fraction * log.budget.max_evals() as f64) as usize;
        share.saturating_sub(log.budget.used()) / (trees * g.rollouts_per_expansion)
    });
    let per_tree = iterations * g.rollouts_per_expansion;
    let available = log.budget.remaining();

    let jobs: Vec<_> = evaluated
        .into_iter()
        .enumerate()
        .map(|(i, (root, value))| {
            let quota = per_tree.min(available.saturating_sub(i * per_tree));
            (i, root, value, Budget::new(quota))
        })
        .collect();
    let keep_points = log.keep_points;
    let runs = run_all(jobs, cfg.parallel, |(i, root, value, quota)| {
        let tree_cfg = TreeConfig {
            exploration: g.c_base,
            decay: decays[i],
            scale: g.scale,
            max_depth: Some(g.max_depth),
            rollouts_per_expansion: g.rollouts_per_expansion,
            growth_patience: Some(g.stagnation_threshold),
        };
        let tree = Tree::new(root, value, tree_cfg, cfg.kernel, cfg.surrogate)?;
        run_tree(
            objective,
            tree,
            iterations,
            quota,
            keep_points,
            rng.split(1).split(i as u64),
            Some((g.stagnation_threshold, g.c_base, g.c_large)),
        )
    })?;

    let mut candidates = Vec::with_capacity(runs.len());
    for (i, mut run) in runs.into_iter().enumerate() {
        log.absorb(&mut run);
        candidates.push(Candidate {
            final_window: window_scale(run.best_depth, decays[i], g.scale),
            decay: decays[i],
            point: run.point,
            value: run.value,
            tree: i,
        });
    }
    Ok(candidates)
}

/// Runs one local tree per seed for `iterations` iterations and refreshes
/// each seed's point, value and window. Seeds already within
/// [`TARGET_TOL`] of `f_target` are left untouched. `f_target` must not lie
/// above any seed's value; see [`resolve_target`].
pub fn run_local_stage(
    objective: &dyn Objective,
    seeds: Vec<Seed>,
    cfg: &OptimizerConfig,
    iterations: usize,
    f_target: f64,
    log: &mut RunLog,
    rng: &RandomStream,
) -> Result<Vec<Seed>> {
    if seeds.is_empty() {
        return Err(Error::contract("a local stage needs at least one seed"));
    }
    if let Some(s) = seeds.iter().find(|s| s.value < f_target) {
        return Err(Error::contract(format!(
            "target {f_target} lies above the seed value {}",
            s.value
        )));
    }
    let l = &cfg.local;
    let per_tree = iterations * l.rollouts_per_expansion;
    let available = log.budget.remaining();
    let mut offset = 0;
    let mut jobs = Vec::new();
    for (i, seed) in seeds.iter().enumerate() {
        if (seed.value - f_target).abs() <= TARGET_TOL {
            continue;
        }
        let quota = per_tree.min(available.saturating_sub(offset));
        offset += quota;
        jobs.push((i, quota));
    }
    let keep_points = log.keep_points;
    let runs = run_all(jobs.clone(), cfg.parallel, |(i, quota)| {
        let seed = &seeds[i];
        let tree_cfg = TreeConfig {
            exploration: l.c_local,
            decay: seed.decay,
            scale: seed.window.clamp(MIN_WINDOW, 0.5),
            max_depth: None,
            rollouts_per_expansion: l.rollouts_per_expansion,
            growth_patience: None,
        };
        let tree = Tree::new(seed.point.clone(), seed.value, tree_cfg, cfg.kernel, cfg.surrogate)?;
        run_tree(objective, tree, iterations, Budget::new(quota), keep_points, rng.split(seed.origin as u64), None)
    })?;

    let mut seeds = seeds;
    for ((i, _), mut run) in jobs.into_iter().zip(runs) {
        log.absorb(&mut run);
        let seed = &mut seeds[i];
        seed.window = adapt_window(seed.window, seed.value, run.value, f_target, l.alpha, l.epsilon, l.delta);
        seed.improved = run.value < seed.value;
        if seed.improved {
            seed.value = run.value;
            seed.point = run.point;
        }
    }
    Ok(seeds)
}

/// Window-update target: the configured or known minimum when it does not
/// lie above `best`, otherwise `best` lowered by a tenth of the improvement
/// made since the best global root.
pub fn resolve_target(configured: Option<f64>, best: f64, root_best: f64) -> f64 {
    match configured {
        Some(t) if t <= best => t,
        _ => {
            let span = (root_best - best).max(0.0);
            best - (0.1 * span).max(1e-12 * best.abs().max(1.0))
        }
    }
}

/// Full global then local protocol on `objective` with `max_evals`
/// evaluations.
pub fn optimize(
    objective: &dyn Objective,
    max_evals: usize,
    cfg: &OptimizerConfig,
    rng: &RandomStream,
    keep_points: bool,
) -> Result<RunResult> {
    cfg.validate()?;
    if max_evals < cfg.global.tree_count {
        return Err(Error::Config(format!(
            "budget {max_evals} is smaller than the {} global roots",
            cfg.global.tree_count
        )));
    }
    let mut log = RunLog::new(Budget::new(max_evals), keep_points);
    let candidates = run_global_batch(objective, cfg, &mut log, rng)?;
    let root_best = log.records[..cfg.global.tree_count]
        .iter()
        .map(|r| r.value)
        .fold(f64::INFINITY, f64::min);
    let mut census = vec![StageCensus {
        stage: "global".into(),
        trees: candidates.len(),
        best_value: candidates.iter().map(|c| c.value).fold(f64::INFINITY, f64::min),
        evals: log.budget.used(),
    }];

    let configured = cfg.local.f_target.or(objective.known_min());
    let mut seeds: Vec<Seed> = select_top(&candidates, cfg.local.seed_count)
        .iter()
        .map(Seed::from)
        .collect();
    for s in 0..cfg.local.stages {
        let best = seeds.iter().map(|s| s.value).fold(f64::INFINITY, f64::min);
        let f_target = resolve_target(configured, best, root_best);
        if log.budget.is_exhausted() || (best - f_target).abs() <= TARGET_TOL {
            break;
        }
        let active = seeds
            .iter()
            .filter(|s| (s.value - f_target).abs() > TARGET_TOL)
            .count()
            .max(1);
        let iterations = cfg.local.iterations_per_stage.unwrap_or_else(|| {
            log.budget.remaining() / ((cfg.local.stages - s) * active * cfg.local.rollouts_per_expansion)
        });
        let stage_rng = rng.split(100 + s as u64);
        seeds = prune(run_local_stage(objective, seeds, cfg, iterations, f_target, &mut log, &stage_rng)?);
        census.push(StageCensus {
            stage: format!("local_{}", s + 1),
            trees: seeds.len(),
            best_value: seeds.iter().map(|s| s.value).fold(f64::INFINITY, f64::min),
            evals: log.budget.used(),
        });
    }

    let best_unit = best_point(&candidates, &seeds)?;
    RunResult::from_log(objective, log.records, &best_unit, census)
}

fn best_point(candidates: &[Candidate], seeds: &[Seed]) -> Result<Vec<f64>> {
    let from_seeds = seeds.iter().map(|s| (s.value, &s.point));
    let from_global = candidates.iter().map(|c| (c.value, &c.point));
    from_seeds
        .chain(from_global)
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .map(|(_, p)| p.clone())
        .ok_or_else(|| Error::contract("no evaluated point"))
}

fn uniform(rng: &mut RandomStream) -> f64 {
    use rand::Rng;
    rng.random::<f64>()
}
