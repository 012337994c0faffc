//! Space-filling root designs and isotropic proposals around a point.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::rng::RandomStream;
use crate::space::clamp_in_place;

/// Latin hypercube design of `count` points in `[0, 1)^dim`: every coordinate
/// has exactly one point in each of the `count` equal strata.
pub fn lhs_sample(count: usize, dim: usize, rng: &mut RandomStream) -> Result<Vec<Vec<f64>>> {
    if count == 0 || dim == 0 {
        return Err(Error::contract("LHS needs count >= 1 and dim >= 1"));
    }
    let mut points = vec![vec![0.0; dim]; count];
    let width = 1.0 / count as f64;
    let mut strata: Vec<usize> = (0..count).collect();
    for d in 0..dim {
        strata.shuffle(rng);
        for (point, &s) in points.iter_mut().zip(&strata) {
            let u: f64 = rng.random();
            // guard against s + u rounding up onto the next stratum edge
            point[d] = ((s as f64 + u) * width).min((s + 1) as f64 * width - f64::EPSILON);
        }
    }
    Ok(points)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SphereMode {
    /// Uniform over the ball's volume.
    Volume,
    /// On the sphere of radius `r_max`.
    Surface,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypersphereConfig {
    pub r_max: f64,
    pub mode: SphereMode,
}

impl HypersphereConfig {
    pub fn volume(r_max: f64) -> Self {
        HypersphereConfig {
            r_max,
            mode: SphereMode::Volume,
        }
    }
}

/// Uniformly distributed unit vector in `dim` dimensions.
pub fn random_direction(dim: usize, rng: &mut RandomStream) -> Vec<f64> {
    loop {
        let u: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        let norm = u.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 1e-300 {
            return u.into_iter().map(|v| v / norm).collect();
        }
    }
}

/// Uniform draw in the open interval (0, 1).
pub(crate) fn open_unit(rng: &mut RandomStream) -> f64 {
    loop {
        let xi: f64 = rng.random();
        if xi > 0.0 {
            return xi;
        }
    }
}

/// Radius and unit direction of one ball proposal, before it is applied.
pub fn hypersphere_offset(dim: usize, cfg: &HypersphereConfig, rng: &mut RandomStream) -> Vec<f64> {
    let dir = random_direction(dim, rng);
    let radius = match cfg.mode {
        SphereMode::Volume => cfg.r_max * open_unit(rng).powf(1.0 / dim as f64),
        SphereMode::Surface => cfg.r_max,
    };
    dir.into_iter().map(|u| u * radius).collect()
}

/// Proposal around `center`, clamped back into the unit cube.
pub fn hypersphere_sample(
    center: &[f64],
    cfg: &HypersphereConfig,
    rng: &mut RandomStream,
) -> Result<Vec<f64>> {
    if !(cfg.r_max > 0.0) {
        return Err(Error::contract("r_max must be positive"));
    }
    let offset = hypersphere_offset(center.len(), cfg, rng);
    let mut x: Vec<f64> = center.iter().zip(&offset).map(|(c, o)| c + o).collect();
    clamp_in_place(&mut x);
    Ok(x)
}
