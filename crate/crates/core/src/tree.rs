//! Continuous-space Monte Carlo tree.
//!
//! Nodes are points in the unit cube. Selection follows the max-reward UCB
//! score, expansion runs a small batch of rollouts around the selected node
//! and keeps the best one as the new child, and backpropagation raises visit
//! counts and running reward maxima up to the root. The rollout radius of a
//! node shrinks with its depth as `b * exp(-a * depth^2)`.
//!
//! Besides descending into a child, selection may stop at an inner node and
//! widen it: each node competes against its own children with an arm scored
//! by its own reward. Without that arm every node would get exactly one
//! child and the tree would degenerate into a chain.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::RandomStream;
use crate::space::Evaluator;
use crate::surrogate::{Kernel, NodeSurrogate, NodeView, SurrogateConfig};

pub type NodeId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TreeConfig {
    /// UCB exploration constant `C`.
    pub exploration: f64,
    /// Window decay rate `a`.
    pub decay: f64,
    /// Initial window radius `b`.
    pub scale: f64,
    pub max_depth: Option<usize>,
    pub rollouts_per_expansion: usize,
    /// Stop descending below nodes whose subtree has not produced a new tree
    /// best within this many iterations.
    pub growth_patience: Option<u64>,
}

impl Default for TreeConfig {
    fn default() -> Self {
        TreeConfig {
            exploration: std::f64::consts::SQRT_2,
            decay: 0.075,
            scale: 0.5,
            max_depth: None,
            rollouts_per_expansion: 4,
            growth_patience: None,
        }
    }
}

impl TreeConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.scale > 0.0 && self.scale <= 0.5) {
            return Err(Error::Config(format!("window scale {} outside (0, 0.5]", self.scale)));
        }
        if !(self.decay > 0.0) {
            return Err(Error::Config("window decay must be positive".into()));
        }
        if self.rollouts_per_expansion == 0 {
            return Err(Error::Config("rollouts_per_expansion must be at least 1".into()));
        }
        if self.max_depth == Some(0) {
            return Err(Error::Config("max_depth must be at least 1".into()));
        }
        if !(self.exploration >= 0.0) {
            return Err(Error::Config("exploration constant must be non-negative".into()));
        }
        Ok(())
    }
}

/// Minimization is recast as reward maximization.
pub fn reward_of(value: f64) -> f64 {
    -value
}

/// Depth-scaled window radius `b * exp(-a * depth^2)`.
pub fn window_scale(depth: usize, decay: f64, scale: f64) -> f64 {
    let d = depth as f64;
    scale * (-decay * d * d).exp()
}

#[derive(Debug, Clone)]
pub struct TreeNode {
    pub point: Vec<f64>,
    pub value: f64,
    /// Largest reward seen in this node or anywhere below it.
    pub reward_best: f64,
    pub visits: u64,
    pub depth: usize,
    pub children: Vec<NodeId>,
    pub parent: Option<NodeId>,
    pub window_radius: f64,
    pub surrogate: NodeSurrogate,
    /// Times this node itself was expanded.
    pub expansions: u64,
    /// Iteration at which this subtree last produced a new tree best.
    pub last_gain: u64,
}

/// UCB score of `node` under a parent with `parent_visits` visits. Unvisited
/// nodes score `+inf`.
pub fn ucb(node: &TreeNode, parent_visits: u64, c: f64) -> f64 {
    ucb_score(node.reward_best, node.visits as f64, parent_visits as f64, c)
}

/// `reward_best + c * sqrt(ln(parent_visits) / visits)`, `+inf` at zero visits.
pub fn ucb_score(reward_best: f64, visits: f64, parent_visits: f64, c: f64) -> f64 {
    if visits == 0.0 {
        return f64::INFINITY;
    }
    reward_best + c * (parent_visits.ln() / visits).sqrt()
}

#[derive(Debug, Clone)]
pub struct Tree {
    nodes: Vec<TreeNode>,
    config: TreeConfig,
    kernel: Kernel,
    surrogate: SurrogateConfig,
    iteration: u64,
    backprops: u64,
    best: NodeId,
}

impl Tree {
    /// A tree rooted at an already evaluated unit-cube point.
    pub fn new(
        root: Vec<f64>,
        value: f64,
        config: TreeConfig,
        kernel: Kernel,
        surrogate: SurrogateConfig,
    ) -> Result<Self> {
        config.validate()?;
        surrogate.validate()?;
        let window_radius = window_scale(0, config.decay, config.scale);
        Ok(Tree {
            nodes: vec![TreeNode {
                point: root,
                value,
                reward_best: reward_of(value),
                visits: 0,
                depth: 0,
                children: Vec::new(),
                parent: None,
                window_radius,
                surrogate: NodeSurrogate::default(),
                expansions: 0,
                last_gain: 0,
            }],
            config,
            kernel,
            surrogate,
            iteration: 0,
            backprops: 0,
            best: 0,
        })
    }

    pub fn config(&self) -> &TreeConfig {
        &self.config
    }

    pub fn set_exploration(&mut self, c: f64) {
        self.config.exploration = c;
    }

    pub fn node(&self, id: NodeId) -> &TreeNode {
        &self.nodes[id]
    }

    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn root(&self) -> &TreeNode {
        &self.nodes[0]
    }

    pub fn best(&self) -> &TreeNode {
        &self.nodes[self.best]
    }

    pub fn best_id(&self) -> NodeId {
        self.best
    }

    pub fn iteration(&self) -> u64 {
        self.iteration
    }

    pub fn backprops(&self) -> u64 {
        self.backprops
    }

    /// Appends an evaluated child without running rollouts or
    /// backpropagation. The child starts unvisited.
    pub fn add_child(&mut self, parent: NodeId, point: Vec<f64>, value: f64) -> NodeId {
        let depth = self.nodes[parent].depth + 1;
        let id = self.nodes.len();
        self.nodes.push(TreeNode {
            point,
            value,
            reward_best: reward_of(value),
            visits: 0,
            depth,
            children: Vec::new(),
            parent: Some(parent),
            window_radius: window_scale(depth, self.config.decay, self.config.scale),
            surrogate: NodeSurrogate::default(),
            expansions: 0,
            last_gain: self.iteration,
        });
        self.nodes[parent].children.push(id);
        if value < self.nodes[self.best].value {
            self.best = id;
        }
        id
    }

    fn at_max_depth(&self, id: NodeId) -> bool {
        self.config
            .max_depth
            .is_some_and(|m| self.nodes[id].depth >= m)
    }

    fn is_stale(&self, id: NodeId) -> bool {
        self.config
            .growth_patience
            .is_some_and(|p| self.iteration.saturating_sub(self.nodes[id].last_gain) > p)
    }

    fn self_score(&self, id: NodeId) -> f64 {
        let n = &self.nodes[id];
        let own = reward_of(n.value);
        if n.visits == 0 || n.expansions == 0 {
            return own;
        }
        own + self.config.exploration * ((n.visits as f64).ln() / n.expansions as f64).sqrt()
    }

    /// Root-to-node path chosen by the tree policy. Children are compared by
    /// [`ucb`] with ties going to the earliest child; the walk stops at a
    /// leaf, at the depth cap, at a stale node, or where the node's own arm
    /// beats every child.
    pub fn select(&self) -> Vec<NodeId> {
        let c = self.config.exploration;
        let mut path = vec![0];
        let mut cur = 0;
        loop {
            let node = &self.nodes[cur];
            if node.children.is_empty() || self.at_max_depth(cur) || self.is_stale(cur) {
                break;
            }
            let mut choice = None;
            let mut best = f64::NEG_INFINITY;
            for &child in &node.children {
                if self.at_max_depth(child) {
                    continue;
                }
                let score = ucb(&self.nodes[child], node.visits, c);
                if score > best {
                    best = score;
                    choice = Some(child);
                }
            }
            match choice {
                Some(child) if best >= self.self_score(cur) => {
                    path.push(child);
                    cur = child;
                }
                _ => break,
            }
        }
        path
    }

    /// Runs the rollout batch at `id` and attaches the best rollout as a new
    /// child. Returns `Ok(None)` when `id` sits at the depth cap. If the
    /// budget runs out part-way, the child is built from the rollouts that
    /// completed.
    pub fn expand(
        &mut self,
        id: NodeId,
        eval: &mut Evaluator<'_>,
        rng: &mut RandomStream,
    ) -> Result<Option<NodeId>> {
        if self.at_max_depth(id) {
            return Ok(None);
        }
        if eval.budget().is_exhausted() {
            return Err(Error::BudgetExhausted {
                max_evals: eval.budget().max_evals(),
            });
        }
        let node = &self.nodes[id];
        let point = node.point.clone();
        let parent = node.parent.map(|p| self.nodes[p].point.clone());
        let view = NodeView {
            point: &point,
            value: node.value,
            parent: parent.as_deref(),
            radius: node.window_radius,
        };

        let mut best: Option<(Vec<f64>, f64)> = None;
        for _ in 0..self.config.rollouts_per_expansion {
            if eval.budget().is_exhausted() {
                break;
            }
            let x = self.nodes[id]
                .surrogate
                .propose(&view, &self.surrogate, self.kernel, rng);
            let value = eval.eval_unit(&x, rng)?;
            self.nodes[id]
                .surrogate
                .record(&view, &x, value, &self.surrogate, self.kernel)?;
            if best.as_ref().is_none_or(|(_, v)| value < *v) {
                best = Some((x, value));
            }
        }
        let (x, value) = best.expect("at least one rollout ran");
        self.nodes[id].expansions += 1;
        Ok(Some(self.add_child(id, x, value)))
    }

    /// Adds one visit and folds `reward` into the running maximum of every
    /// node on `path`.
    pub fn backpropagate(&mut self, path: &[NodeId], reward: f64) {
        debug_assert_eq!(path.first(), Some(&0), "path must start at the root");
        for &id in path {
            let n = &mut self.nodes[id];
            n.visits += 1;
            n.reward_best = n.reward_best.max(reward);
        }
        self.backprops += 1;
    }

    /// One select / expand / backpropagate cycle. Returns the new child, or
    /// `None` when the selected node could not be expanded.
    pub fn iterate(&mut self, eval: &mut Evaluator<'_>, rng: &mut RandomStream) -> Result<Option<NodeId>> {
        self.iteration += 1;
        let mut path = self.select();
        let leaf = *path.last().expect("path holds the root");
        let previous_best = self.best().value;
        let Some(child) = self.expand(leaf, eval, rng)? else {
            return Ok(None);
        };
        path.push(child);
        self.backpropagate(&path, reward_of(self.nodes[child].value));
        if self.nodes[child].value < previous_best {
            for &id in &path {
                self.nodes[id].last_gain = self.iteration;
            }
        }
        Ok(Some(child))
    }

    /// One line per node: `id parent depth value visits`, parent `-` for the root.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (id, n) in self.nodes.iter().enumerate() {
            let parent = n.parent.map_or_else(|| "-".to_string(), |p| p.to_string());
            let _ = writeln!(out, "{id} {parent} {} {:e} {}", n.depth, n.value, n.visits);
        }
        out
    }
}
