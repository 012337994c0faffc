//! L2-regularized logistic regression fitted by full-batch gradient descent.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainConfig {
    pub step_size: f64,
    pub iterations: usize,
    pub l2: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            step_size: 0.1,
            iterations: 200,
            l2: 1e-3,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LogisticModel {
    pub weights: Vec<f64>,
    pub bias: f64,
}

/// Result of a fit. `informative` is false when the labels were all of one
/// class; the model is then the untrained zero model and must not steer
/// sampling.
#[derive(Debug, Clone, PartialEq)]
pub struct LogisticFit {
    pub model: LogisticModel,
    pub informative: bool,
}

pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

// log(1 + e^z) without overflow
fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

impl LogisticModel {
    pub fn zeros(dim: usize) -> Self {
        LogisticModel {
            weights: vec![0.0; dim],
            bias: 0.0,
        }
    }

    pub fn logit(&self, x: &[f64]) -> f64 {
        self.weights.iter().zip(x).map(|(w, v)| w * v).sum::<f64>() + self.bias
    }

    pub fn probability(&self, x: &[f64]) -> f64 {
        sigmoid(self.logit(x))
    }

    /// Mean log-loss plus `l2/2 * |w|^2` (the bias is not penalized).
    pub fn loss(&self, features: &[Vec<f64>], labels: &[bool], l2: f64) -> f64 {
        let n = features.len() as f64;
        let data: f64 = features
            .iter()
            .zip(labels)
            .map(|(x, &y)| {
                let z = self.logit(x);
                softplus(z) - if y { z } else { 0.0 }
            })
            .sum::<f64>()
            / n;
        data + 0.5 * l2 * self.weights.iter().map(|w| w * w).sum::<f64>()
    }

    /// Analytic gradient of [`LogisticModel::loss`]: weights first, bias last.
    pub fn gradient(&self, features: &[Vec<f64>], labels: &[bool], l2: f64) -> Vec<f64> {
        let n = features.len() as f64;
        let dim = self.weights.len();
        let mut g = vec![0.0; dim + 1];
        for (x, &y) in features.iter().zip(labels) {
            let err = self.probability(x) - if y { 1.0 } else { 0.0 };
            for (gi, xi) in g.iter_mut().zip(x) {
                *gi += err * xi;
            }
            g[dim] += err;
        }
        for gi in &mut g {
            *gi /= n;
        }
        for (gi, w) in g.iter_mut().zip(&self.weights) {
            *gi += l2 * w;
        }
        g
    }
}

/// Fits a logistic model. The step is capped at `1/L`, `L` being the
/// smoothness constant of the loss on this data, so the loss never increases.
pub fn train_logistic(
    features: &[Vec<f64>],
    labels: &[bool],
    cfg: &TrainConfig,
) -> Result<LogisticFit> {
    if features.is_empty() || features.len() != labels.len() {
        return Err(Error::contract(format!(
            "{} feature rows for {} labels",
            features.len(),
            labels.len()
        )));
    }
    let dim = features[0].len();
    if features.iter().any(|x| x.len() != dim) {
        return Err(Error::contract("ragged feature rows"));
    }
    let mut model = LogisticModel::zeros(dim);
    let positives = labels.iter().filter(|y| **y).count();
    if positives == 0 || positives == labels.len() {
        return Ok(LogisticFit {
            model,
            informative: false,
        });
    }

    let max_sq = features
        .iter()
        .map(|x| 1.0 + x.iter().map(|v| v * v).sum::<f64>())
        .fold(0.0, f64::max);
    let smoothness = 0.25 * max_sq + cfg.l2;
    let step = cfg.step_size.min(1.0 / smoothness);

    // Rows are packed with a trailing 1.0 so the bias is just one more weight.
    let stride = dim + 1;
    let mut packed = Vec::with_capacity(features.len() * stride);
    for x in features {
        packed.extend_from_slice(x);
        packed.push(1.0);
    }
    let targets: Vec<f64> = labels.iter().map(|&y| if y { 1.0 } else { 0.0 }).collect();
    let inv_n = 1.0 / features.len() as f64;
    let mut wb = vec![0.0; stride];
    let mut g = vec![0.0; stride];
    for _ in 0..cfg.iterations {
        g.iter_mut().for_each(|v| *v = 0.0);
        for (row, &y) in packed.chunks_exact(stride).zip(&targets) {
            let err = sigmoid(dot(row, &wb)) - y;
            for (gi, xi) in g.iter_mut().zip(row) {
                *gi += err * xi;
            }
        }
        for (i, (w, gi)) in wb.iter_mut().zip(&g).enumerate() {
            let reg = if i < dim { cfg.l2 * *w } else { 0.0 };
            *w -= step * (gi * inv_n + reg);
        }
    }
    model.bias = wb[dim];
    wb.truncate(dim);
    model.weights = wb;
    Ok(LogisticFit {
        model,
        informative: true,
    })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = [0.0f64; 4];
    let (ha, ta) = a.split_at(a.len() / 4 * 4);
    let (hb, tb) = b.split_at(ha.len());
    for (ca, cb) in ha.chunks_exact(4).zip(hb.chunks_exact(4)) {
        for k in 0..4 {
            acc[k] += ca[k] * cb[k];
        }
    }
    let tail: f64 = ta.iter().zip(tb).map(|(x, y)| x * y).sum();
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn separable_one_dimensional_set() {
        let mut features = Vec::new();
        let mut labels = Vec::new();
        for _ in 0..50 {
            features.push(vec![1.0]);
            labels.push(true);
            features.push(vec![-1.0]);
            labels.push(false);
        }
        let fit = train_logistic(&features, &labels, &TrainConfig::default()).unwrap();
        assert!(fit.informative);
        assert!(fit.model.weights[0] > 0.0);
        let correct = features
            .iter()
            .zip(&labels)
            .filter(|(x, y)| (fit.model.probability(x) > 0.5) == **y)
            .count();
        assert_eq!(correct, 100);
    }

    #[test]
    fn constant_features_learn_the_base_rate() {
        let features = vec![vec![1.0, 1.0]; 40];
        let labels: Vec<bool> = (0..40).map(|i| i % 4 == 0).collect();
        let cfg = TrainConfig {
            iterations: 2000,
            ..TrainConfig::default()
        };
        let fit = train_logistic(&features, &labels, &cfg).unwrap();
        let p = fit.model.probability(&[1.0, 1.0]);
        assert!((p - 0.25).abs() < 0.05, "{p}");
    }

    #[test]
    fn single_class_is_uninformative() {
        let fit = train_logistic(&[vec![0.3], vec![0.1]], &[true, true], &TrainConfig::default())
            .unwrap();
        assert!(!fit.informative);
        assert_eq!(fit.model, LogisticModel::zeros(1));
    }

    #[test]
    fn loss_never_increases() {
        let features: Vec<Vec<f64>> = (0..30)
            .map(|i| (0..30).map(|j| if (i * 7 + j * 3) % 5 < 2 { 1.0 } else { -1.0 }).collect())
            .collect();
        let labels: Vec<bool> = (0..30).map(|i| i % 3 == 0).collect();
        let mut prev = f64::INFINITY;
        for iters in [0, 1, 2, 5, 10, 50, 200] {
            let cfg = TrainConfig {
                iterations: iters,
                ..TrainConfig::default()
            };
            let loss = train_logistic(&features, &labels, &cfg)
                .unwrap()
                .model
                .loss(&features, &labels, cfg.l2);
            assert!(loss <= prev + 1e-15, "{iters}: {loss} > {prev}");
            prev = loss;
        }
    }

    #[test]
    fn ragged_input_is_rejected() {
        assert!(train_logistic(&[vec![1.0], vec![1.0, 2.0]], &[true, false], &TrainConfig::default()).is_err());
        assert!(train_logistic(&[], &[], &TrainConfig::default()).is_err());
    }
}
