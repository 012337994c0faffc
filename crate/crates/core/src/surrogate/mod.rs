//! Logistic directional sampler.
//!
//! Every tree node keeps the outcomes of the rollouts it has spawned. Two
//! logistic classifiers are fitted to that history: one over the sign pattern
//! of the displacement (which way to move) and one over Gaussian bumps of its
//! length (how far). New proposals take the most promising sign pattern and a
//! step length drawn from the learned success density by inverse transform.
//! Until a node has `bootstrap_count` trials its proposals follow a fixed
//! schedule: parent momentum, window center, window corner, then isotropic
//! ball draws.

mod logistic;

pub use logistic::{sigmoid, train_logistic, LogisticFit, LogisticModel, TrainConfig};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::RandomStream;
use crate::sampling::{hypersphere_sample, open_unit, HypersphereConfig};
use crate::space::clamp_in_place;

/// Points closer than this to the node are treated as duplicates.
pub const DUPLICATE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SurrogateConfig {
    /// Trials a node collects through the fixed schedule before the models are used.
    pub bootstrap_count: usize,
    /// Retrain whenever the history length is a multiple of this.
    pub retrain_period: usize,
    /// Number of radial basis functions in the step-length model.
    pub rbf_count: usize,
    /// Hill-climb flips per direction search; `None` means `10 * dim`.
    pub hill_climb_iters: Option<usize>,
    /// Grid points of the tabulated step-length CDF.
    pub cdf_grid: usize,
    /// Train on the most recent trials only.
    pub history_window: Option<usize>,
    pub train: TrainConfig,
}

impl Default for SurrogateConfig {
    fn default() -> Self {
        SurrogateConfig {
            bootstrap_count: 8,
            retrain_period: 5,
            rbf_count: 8,
            hill_climb_iters: None,
            cdf_grid: 256,
            history_window: None,
            train: TrainConfig::default(),
        }
    }
}

impl SurrogateConfig {
    pub fn validate(&self) -> Result<()> {
        if self.bootstrap_count < 3 {
            return Err(Error::Config("bootstrap_count must be at least 3".into()));
        }
        if self.retrain_period == 0 {
            return Err(Error::Config("retrain_period must be at least 1".into()));
        }
        if self.rbf_count < 3 {
            return Err(Error::Config("rbf_count must be at least 3".into()));
        }
        if self.cdf_grid < 2 {
            return Err(Error::Config("cdf_grid must be at least 2".into()));
        }
        Ok(())
    }
}

/// One rollout relative to the node it was drawn from.
#[derive(Debug, Clone, PartialEq)]
pub struct Trial {
    pub delta: Vec<f64>,
    pub r: f64,
    pub outcome: f64,
    pub label: bool,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrialHistory {
    entries: Vec<Trial>,
}

impl TrialHistory {
    /// Records a trial at `point` drawn from a node at `origin` whose own
    /// objective value is `node_value`.
    pub fn push(&mut self, origin: &[f64], point: &[f64], outcome: f64, node_value: f64) {
        let delta: Vec<f64> = point.iter().zip(origin).map(|(p, o)| p - o).collect();
        let r = delta.iter().map(|d| d * d).sum::<f64>().sqrt();
        self.entries.push(Trial {
            delta,
            r,
            outcome,
            label: outcome < node_value,
        });
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Trial] {
        &self.entries
    }

    fn recent(&self, window: Option<usize>) -> &[Trial] {
        let start = window.map_or(0, |w| self.entries.len().saturating_sub(w));
        &self.entries[start..]
    }
}

/// Componentwise sign in `{-1, 0, 1}`.
pub fn direction_features(delta: &[f64]) -> Vec<f64> {
    delta
        .iter()
        .map(|d| {
            if *d > 0.0 {
                1.0
            } else if *d < 0.0 {
                -1.0
            } else {
                0.0
            }
        })
        .collect()
}

/// `count` centers evenly spaced on `(0, r_max]`.
pub fn rbf_centers(count: usize, r_max: f64) -> Vec<f64> {
    (1..=count).map(|k| r_max * k as f64 / count as f64).collect()
}

/// `exp(-(r - c_k)^2)` for every center.
pub fn rbf_features(r: f64, centers: &[f64]) -> Vec<f64> {
    centers.iter().map(|c| (-(r - c).powi(2)).exp()).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct DirectionModel {
    pub model: LogisticModel,
}

impl DirectionModel {
    pub fn probability(&self, u: &[f64]) -> f64 {
        self.model.probability(u)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistanceModel {
    pub model: LogisticModel,
    pub centers: Vec<f64>,
}

impl DistanceModel {
    pub fn probability(&self, r: f64) -> f64 {
        self.model.probability(&rbf_features(r, &self.centers))
    }
}

/// Stochastic hill climb over `{-1, +1}^d`, starting from the signs of the
/// weights (zeros broken to +1). A flip is kept only if it strictly raises
/// the predicted success probability.
pub fn optimize_direction(model: &DirectionModel, rng: &mut RandomStream, iters: usize) -> Vec<f64> {
    let w = &model.model.weights;
    let mut u: Vec<f64> = w.iter().map(|x| if *x < 0.0 { -1.0 } else { 1.0 }).collect();
    if u.is_empty() {
        return u;
    }
    let mut logit = model.model.logit(&u);
    let mut best = sigmoid(logit);
    for _ in 0..iters {
        let i = rng.random_range(0..u.len());
        let flipped = logit - 2.0 * w[i] * u[i];
        let p = sigmoid(flipped);
        if p > best {
            best = p;
            logit = flipped;
            u[i] = -u[i];
        }
    }
    u
}

/// Unnormalized CDF of the step-length success density, tabulated on a
/// uniform grid over `[0, r_max]` by the composite trapezoid rule.
#[derive(Debug, Clone, PartialEq)]
pub struct StepCdf {
    pub grid: Vec<f64>,
    pub cdf: Vec<f64>,
}

impl StepCdf {
    pub fn total(&self) -> f64 {
        *self.cdf.last().expect("non-empty grid")
    }

    pub fn r_max(&self) -> f64 {
        *self.grid.last().expect("non-empty grid")
    }

    /// Linear interpolation of the tabulated CDF.
    pub fn eval(&self, r: f64) -> f64 {
        let h = self.grid[1] - self.grid[0];
        let pos = (r / h).clamp(0.0, (self.grid.len() - 1) as f64);
        let i = (pos.floor() as usize).min(self.grid.len() - 2);
        let t = pos - i as f64;
        self.cdf[i] + t * (self.cdf[i + 1] - self.cdf[i])
    }

    /// The step `r` with `CDF(r) = tau`, by inverting the interpolant.
    pub fn invert(&self, tau: f64) -> f64 {
        let i = self.cdf.partition_point(|c| *c < tau).clamp(1, self.cdf.len() - 1);
        let (c0, c1) = (self.cdf[i - 1], self.cdf[i]);
        let (r0, r1) = (self.grid[i - 1], self.grid[i]);
        if c1 > c0 {
            r0 + (tau - c0) / (c1 - c0) * (r1 - r0)
        } else {
            r1
        }
    }
}

pub fn distance_cdf(model: &DistanceModel, r_max: f64, points: usize) -> StepCdf {
    let n = points.max(2);
    let h = r_max / (n - 1) as f64;
    let grid: Vec<f64> = (0..n).map(|i| i as f64 * h).collect();
    let density: Vec<f64> = grid.iter().map(|r| model.probability(*r)).collect();
    let mut cdf = Vec::with_capacity(n);
    cdf.push(0.0);
    for i in 1..n {
        cdf.push(cdf[i - 1] + 0.5 * h * (density[i - 1] + density[i]));
    }
    StepCdf { grid, cdf }
}

/// Inverse-transform draw of a step in `(0, r_max]`; falls back to a uniform
/// step when the tabulated mass is negligible.
pub fn sample_step_size(cdf: &StepCdf, rng: &mut RandomStream) -> f64 {
    let r_max = cdf.r_max();
    if !(cdf.total() > 1e-12 * r_max) {
        return r_max * open_unit(rng);
    }
    loop {
        let r = cdf.invert(open_unit(rng) * cdf.total());
        if r > 0.0 && r <= r_max {
            return r;
        }
    }
}

/// Where a proposal is drawn from.
#[derive(Debug, Clone, Copy)]
pub struct NodeView<'a> {
    pub point: &'a [f64],
    pub value: f64,
    pub parent: Option<&'a [f64]>,
    /// Current window radius in unit-cube coordinates.
    pub radius: f64,
}

impl NodeView<'_> {
    /// The axis-aligned window around the node, cut to the unit cube.
    pub fn window(&self) -> (Vec<f64>, Vec<f64>) {
        let lo = self.point.iter().map(|x| (x - self.radius).max(0.0)).collect();
        let hi = self.point.iter().map(|x| (x + self.radius).min(1.0)).collect();
        (lo, hi)
    }
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

fn ball_draw(node: &NodeView<'_>, rng: &mut RandomStream) -> Vec<f64> {
    hypersphere_sample(node.point, &HypersphereConfig::volume(node.radius), rng)
        .expect("window radius is positive")
}

/// Replaces a proposal that coincides with the node by one ball draw.
fn non_duplicate(x: Vec<f64>, node: &NodeView<'_>, rng: &mut RandomStream) -> Vec<f64> {
    if distance(&x, node.point) > DUPLICATE_TOL {
        x
    } else {
        ball_draw(node, rng)
    }
}

/// Proposal number `index` of the fixed bootstrap schedule.
pub fn bootstrap_proposal(index: usize, node: &NodeView<'_>, rng: &mut RandomStream) -> Vec<f64> {
    let (lo, hi) = node.window();
    let x = match index {
        0 => match node.parent {
            Some(parent) => node
                .point
                .iter()
                .zip(parent)
                .zip(lo.iter().zip(&hi))
                .map(|((x, p), (l, h))| (2.0 * x - p).clamp(*l, *h))
                .collect(),
            None => ball_draw(node, rng),
        },
        1 => lo.iter().zip(&hi).map(|(l, h)| 0.5 * (l + h)).collect(),
        2 => {
            if rng.random::<bool>() {
                hi
            } else {
                lo
            }
        }
        _ => ball_draw(node, rng),
    };
    non_duplicate(x, node, rng)
}

/// The first `k` proposals of the bootstrap schedule.
pub fn bootstrap_proposals(node: &NodeView<'_>, k: usize, rng: &mut RandomStream) -> Result<Vec<Vec<f64>>> {
    if k < 3 {
        return Err(Error::contract("bootstrap schedule needs k >= 3"));
    }
    Ok((0..k).map(|i| bootstrap_proposal(i, node, rng)).collect())
}

/// Which proposal kernel a tree expands with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kernel {
    /// Bootstrap schedule followed by the learned directional sampler.
    Logistic,
    /// Isotropic ball draws only.
    Hypersphere,
}

/// Per-node sampler state: trial history and the fitted models.
#[derive(Debug, Clone, Default)]
pub struct NodeSurrogate {
    history: TrialHistory,
    direction: Option<DirectionModel>,
    distance: Option<(DistanceModel, StepCdf)>,
    informative: bool,
    trainings: Vec<usize>,
}

impl NodeSurrogate {
    pub fn history(&self) -> &TrialHistory {
        &self.history
    }

    /// Whether the fitted models currently steer proposals.
    pub fn is_informative(&self) -> bool {
        self.informative
    }

    /// History lengths at which the models were (re)trained.
    pub fn trainings(&self) -> &[usize] {
        &self.trainings
    }

    pub fn direction_model(&self) -> Option<&DirectionModel> {
        self.direction.as_ref()
    }

    pub fn distance_model(&self) -> Option<&DistanceModel> {
        self.distance.as_ref().map(|(m, _)| m)
    }

    /// Records a rollout and retrains when the schedule says so: first when
    /// the bootstrap schedule completes, then at every multiple of the
    /// retrain period.
    pub fn record(
        &mut self,
        node: &NodeView<'_>,
        point: &[f64],
        outcome: f64,
        cfg: &SurrogateConfig,
        kernel: Kernel,
    ) -> Result<()> {
        self.history.push(node.point, point, outcome, node.value);
        if kernel != Kernel::Logistic {
            return Ok(());
        }
        let n = self.history.len();
        let due = n >= cfg.bootstrap_count
            && (self.trainings.is_empty() || n % cfg.retrain_period == 0);
        if due {
            self.train(node.radius, cfg)?;
        }
        Ok(())
    }

    fn train(&mut self, radius: f64, cfg: &SurrogateConfig) -> Result<()> {
        let trials = self.history.recent(cfg.history_window);
        let labels: Vec<bool> = trials.iter().map(|t| t.label).collect();
        let dir_x: Vec<Vec<f64>> = trials.iter().map(|t| direction_features(&t.delta)).collect();
        let centers = rbf_centers(cfg.rbf_count, radius);
        let dist_x: Vec<Vec<f64>> = trials.iter().map(|t| rbf_features(t.r, &centers)).collect();

        let dir = train_logistic(&dir_x, &labels, &cfg.train)?;
        let dist = train_logistic(&dist_x, &labels, &cfg.train)?;
        self.informative = dir.informative && dist.informative;
        let distance = DistanceModel {
            model: dist.model,
            centers,
        };
        let cdf = distance_cdf(&distance, radius, cfg.cdf_grid);
        self.direction = Some(DirectionModel { model: dir.model });
        self.distance = Some((distance, cdf));
        self.trainings.push(self.history.len());
        Ok(())
    }

    /// Next rollout point for `node`.
    pub fn propose(
        &self,
        node: &NodeView<'_>,
        cfg: &SurrogateConfig,
        kernel: Kernel,
        rng: &mut RandomStream,
    ) -> Vec<f64> {
        if kernel == Kernel::Hypersphere {
            let x = ball_draw(node, rng);
            return non_duplicate(x, node, rng);
        }
        let n = self.history.len();
        if n < cfg.bootstrap_count {
            return bootstrap_proposal(n, node, rng);
        }
        match (&self.direction, &self.distance, self.informative) {
            (Some(dir), Some((_, cdf)), true) => {
                let dim = node.point.len();
                let iters = cfg.hill_climb_iters.unwrap_or(10 * dim);
                let u = optimize_direction(dir, rng, iters);
                let r = sample_step_size(cdf, rng);
                let scale = r / (dim as f64).sqrt();
                let mut x: Vec<f64> = node.point.iter().zip(&u).map(|(p, s)| p + scale * s).collect();
                clamp_in_place(&mut x);
                non_duplicate(x, node, rng)
            }
            _ => non_duplicate(ball_draw(node, rng), node, rng),
        }
    }
}
