//! The classic 23-function test suite: unimodal F1–F7, multimodal F8–F13 and
//! the fixed-dimensional F14–F23.

use std::f64::consts::{E, PI};
use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::RandomStream;
use crate::space::{Objective, SearchSpace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BenchmarkId {
    F1,
    F2,
    F3,
    F4,
    F5,
    F6,
    F7,
    F8,
    F9,
    F10,
    F11,
    F12,
    F13,
    F14,
    F15,
    F16,
    F17,
    F18,
    F19,
    F20,
    F21,
    F22,
    F23,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Category {
    Unimodal,
    Multimodal,
    FixedDimensional,
}

impl BenchmarkId {
    pub const ALL: [BenchmarkId; 23] = [
        BenchmarkId::F1,
        BenchmarkId::F2,
        BenchmarkId::F3,
        BenchmarkId::F4,
        BenchmarkId::F5,
        BenchmarkId::F6,
        BenchmarkId::F7,
        BenchmarkId::F8,
        BenchmarkId::F9,
        BenchmarkId::F10,
        BenchmarkId::F11,
        BenchmarkId::F12,
        BenchmarkId::F13,
        BenchmarkId::F14,
        BenchmarkId::F15,
        BenchmarkId::F16,
        BenchmarkId::F17,
        BenchmarkId::F18,
        BenchmarkId::F19,
        BenchmarkId::F20,
        BenchmarkId::F21,
        BenchmarkId::F22,
        BenchmarkId::F23,
    ];

    /// 1-based function number.
    pub fn number(self) -> usize {
        self as usize + 1
    }

    pub fn category(self) -> Category {
        match self.number() {
            1..=7 => Category::Unimodal,
            8..=13 => Category::Multimodal,
            _ => Category::FixedDimensional,
        }
    }

    pub fn is_scalable(self) -> bool {
        self.number() <= 13
    }

    /// Dimension, symmetric range and tabulated optimum value.
    pub fn table_row(self) -> (usize, (f64, f64), f64) {
        use BenchmarkId::*;
        match self {
            F1 => (30, (-100.0, 100.0), 0.0),
            F2 => (30, (-10.0, 10.0), 0.0),
            F3 => (30, (-100.0, 100.0), 0.0),
            F4 => (30, (-100.0, 100.0), 0.0),
            F5 => (30, (-30.0, 30.0), 0.0),
            F6 => (30, (-100.0, 100.0), 0.0),
            F7 => (30, (-1.28, 1.28), 0.0),
            F8 => (30, (-500.0, 500.0), -418.9829 * 30.0),
            F9 => (30, (-5.12, 5.12), 0.0),
            F10 => (30, (-32.0, 32.0), 0.0),
            F11 => (30, (-600.0, 600.0), 0.0),
            F12 => (30, (-50.0, 50.0), 0.0),
            F13 => (30, (-50.0, 50.0), 0.0),
            F14 => (2, (-65.0, 65.0), 1.0),
            F15 => (4, (-5.0, 5.0), 0.00030),
            F16 => (2, (-5.0, 5.0), -1.0316),
            F17 => (2, (-5.0, 5.0), 0.398),
            F18 => (2, (-2.0, 2.0), 3.0),
            // Hartmann-3 lives on the unit cube; a [1, 3] box would exclude
            // its minimizer.
            F19 => (3, (0.0, 1.0), -3.86),
            F20 => (6, (0.0, 1.0), -3.32),
            F21 => (4, (0.0, 10.0), -10.1532),
            F22 => (4, (0.0, 10.0), -10.4028),
            F23 => (4, (0.0, 10.0), -10.5363),
        }
    }
}

impl fmt::Display for BenchmarkId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F{}", self.number())
    }
}

impl FromStr for BenchmarkId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BenchmarkId::ALL
            .iter()
            .copied()
            .find(|id| id.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownId {
                kind: "benchmark",
                id: s.to_string(),
                valid: "F1..F23".to_string(),
            })
    }
}

/// A benchmark function bound to its search space.
#[derive(Debug, Clone)]
pub struct Benchmark {
    id: BenchmarkId,
    space: SearchSpace,
    fmin: f64,
}

impl Benchmark {
    pub fn id(&self) -> BenchmarkId {
        self.id
    }

    pub fn fmin(&self) -> f64 {
        self.fmin
    }
}

/// Builds benchmark `id` at its tabulated dimension.
pub fn make_benchmark(id: BenchmarkId) -> Benchmark {
    let (dim, _, _) = id.table_row();
    make_benchmark_with_dim(id, dim).expect("tabulated dimension is valid")
}

/// Builds a scalable benchmark (F1–F13) at a different dimension.
pub fn make_benchmark_with_dim(id: BenchmarkId, dim: usize) -> Result<Benchmark> {
    let (table_dim, (lo, hi), fmin) = id.table_row();
    if dim != table_dim && !id.is_scalable() {
        return Err(Error::Config(format!(
            "{id} is fixed-dimensional ({table_dim}); cannot use dim {dim}"
        )));
    }
    let fmin = if id == BenchmarkId::F8 {
        -418.9829 * dim as f64
    } else {
        fmin
    };
    Ok(Benchmark {
        id,
        space: SearchSpace::uniform(dim, lo, hi)?,
        fmin,
    })
}

impl Objective for Benchmark {
    fn space(&self) -> &SearchSpace {
        &self.space
    }

    fn known_min(&self) -> Option<f64> {
        Some(self.fmin)
    }

    fn evaluate(&self, p: &[f64], noise: &mut RandomStream) -> f64 {
        let draw = (self.id == BenchmarkId::F7).then(|| noise.random::<f64>());
        value_unchecked(self.id, p, draw)
    }
}

/// Formula value of benchmark `id` at `p` (problem units). `noise` must be a
/// uniform `[0, 1)` draw for F7 and absent for every other function.
pub fn benchmark_value(id: BenchmarkId, p: &[f64], noise: Option<f64>) -> Result<f64> {
    match (id == BenchmarkId::F7, noise) {
        (true, None) => return Err(Error::contract("F7 needs a noise draw")),
        (false, Some(_)) => return Err(Error::contract(format!("{id} takes no noise"))),
        _ => {}
    }
    let (dim, _, _) = id.table_row();
    if !id.is_scalable() && p.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: p.len(),
        });
    }
    if p.is_empty() {
        return Err(Error::contract("empty point"));
    }
    Ok(value_unchecked(id, p, noise))
}

/// The boundary penalty `u(x, a, k, m)` used by F12 and F13.
pub fn penalty_u(x: f64, a: f64, k: f64, m: f64) -> f64 {
    if x > a {
        k * (x - a).powf(m)
    } else if x < -a {
        k * (-x - a).powf(m)
    } else {
        0.0
    }
}

fn value_unchecked(id: BenchmarkId, x: &[f64], noise: Option<f64>) -> f64 {
    use BenchmarkId::*;
    let n = x.len() as f64;
    match id {
        F1 => x.iter().map(|v| v * v).sum(),
        F2 => {
            x.iter().map(|v| v.abs()).sum::<f64>() + x.iter().map(|v| v.abs()).product::<f64>()
        }
        F3 => {
            let mut partial = 0.0;
            let mut total = 0.0;
            for v in x {
                partial += v;
                total += partial * partial;
            }
            total
        }
        F4 => x.iter().fold(0.0, |m, v| f64::max(m, v.abs())),
        F5 => x
            .windows(2)
            .map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (w[0] - 1.0).powi(2))
            .sum(),
        F6 => x.iter().map(|v| (v + 0.5).floor().powi(2)).sum(),
        F7 => {
            let s: f64 = x
                .iter()
                .enumerate()
                .map(|(i, v)| (i + 1) as f64 * v.powi(4))
                .sum();
            s + noise.unwrap_or(0.0)
        }
        F8 => x.iter().map(|v| -v * v.abs().sqrt().sin()).sum(),
        F9 => x
            .iter()
            .map(|v| v * v - 10.0 * (2.0 * PI * v).cos() + 10.0)
            .sum(),
        F10 => {
            let sq = x.iter().map(|v| v * v).sum::<f64>() / n;
            let cs = x.iter().map(|v| (2.0 * PI * v).cos()).sum::<f64>() / n;
            -20.0 * (-0.2 * sq.sqrt()).exp() - cs.exp() + 20.0 + E
        }
        F11 => {
            let sq = x.iter().map(|v| v * v).sum::<f64>() / 4000.0;
            let pr: f64 = x
                .iter()
                .enumerate()
                .map(|(i, v)| (v / ((i + 1) as f64).sqrt()).cos())
                .product();
            sq - pr + 1.0
        }
        F12 => {
            let y: Vec<f64> = x.iter().map(|v| 1.0 + (v + 1.0) / 4.0).collect();
            let last = y[y.len() - 1];
            let mut s = 10.0 * (PI * y[0]).sin().powi(2);
            for w in y.windows(2) {
                s += (w[0] - 1.0).powi(2) * (1.0 + 10.0 * (PI * w[1]).sin().powi(2));
            }
            s += (last - 1.0).powi(2);
            PI / n * s + x.iter().map(|v| penalty_u(*v, 10.0, 100.0, 4.0)).sum::<f64>()
        }
        F13 => {
            let last = x[x.len() - 1];
            let mut s = (3.0 * PI * x[0]).sin().powi(2);
            for w in x.windows(2) {
                s += (w[0] - 1.0).powi(2) * (1.0 + (3.0 * PI * w[1]).sin().powi(2));
            }
            s += (last - 1.0).powi(2) * (1.0 + (2.0 * PI * last).sin().powi(2));
            0.1 * s + x.iter().map(|v| penalty_u(*v, 5.0, 100.0, 4.0)).sum::<f64>()
        }
        F14 => foxholes(x),
        F15 => kowalik(x),
        F16 => {
            let (a, b) = (x[0], x[1]);
            4.0 * a * a - 2.1 * a.powi(4) + a.powi(6) / 3.0 + a * b - 4.0 * b * b
                + 4.0 * b.powi(4)
        }
        F17 => {
            let (a, b) = (x[0], x[1]);
            (b - 5.1 / (4.0 * PI * PI) * a * a + 5.0 / PI * a - 6.0).powi(2)
                + 10.0 * (1.0 - 1.0 / (8.0 * PI)) * a.cos()
                + 10.0
        }
        F18 => {
            let (a, b) = (x[0], x[1]);
            (1.0 + (a + b + 1.0).powi(2)
                * (19.0 - 14.0 * a + 3.0 * a * a - 14.0 * b + 6.0 * a * b + 3.0 * b * b))
                * (30.0
                    + (2.0 * a - 3.0 * b).powi(2)
                        * (18.0 - 32.0 * a + 12.0 * a * a + 48.0 * b - 36.0 * a * b
                            + 27.0 * b * b))
        }
        F19 => hartmann(x, &H3_A, &H3_P),
        F20 => hartmann(x, &H6_A, &H6_P),
        F21 => shekel(x, 5),
        F22 => shekel(x, 7),
        F23 => shekel(x, 10),
    }
}

fn foxholes(x: &[f64]) -> f64 {
    const GRID: [f64; 5] = [-32.0, -16.0, 0.0, 16.0, 32.0];
    let mut s = 1.0 / 500.0;
    for j in 0..25 {
        let a1 = GRID[j % 5];
        let a2 = GRID[j / 5];
        s += 1.0 / ((j + 1) as f64 + (x[0] - a1).powi(6) + (x[1] - a2).powi(6));
    }
    1.0 / s
}

const KOWALIK_A: [f64; 11] = [
    0.1957, 0.1947, 0.1735, 0.1600, 0.0844, 0.0627, 0.0456, 0.0342, 0.0323, 0.0235, 0.0246,
];
const KOWALIK_INV_B: [f64; 11] = [0.25, 0.5, 1.0, 2.0, 4.0, 6.0, 8.0, 10.0, 12.0, 14.0, 16.0];

fn kowalik(x: &[f64]) -> f64 {
    KOWALIK_A
        .iter()
        .zip(KOWALIK_INV_B)
        .map(|(a, inv)| {
            let b = 1.0 / inv;
            (a - x[0] * (b * b + b * x[1]) / (b * b + b * x[2] + x[3])).powi(2)
        })
        .sum()
}

const HARTMANN_C: [f64; 4] = [1.0, 1.2, 3.0, 3.2];

const H3_A: [[f64; 3]; 4] = [
    [3.0, 10.0, 30.0],
    [0.1, 10.0, 35.0],
    [3.0, 10.0, 30.0],
    [0.1, 10.0, 35.0],
];
const H3_P: [[f64; 3]; 4] = [
    [0.3689, 0.1170, 0.2673],
    [0.4699, 0.4387, 0.7470],
    [0.1091, 0.8732, 0.5547],
    [0.0381, 0.5743, 0.8828],
];

const H6_A: [[f64; 6]; 4] = [
    [10.0, 3.0, 17.0, 3.5, 1.7, 8.0],
    [0.05, 10.0, 17.0, 0.1, 8.0, 14.0],
    [3.0, 3.5, 1.7, 10.0, 17.0, 8.0],
    [17.0, 8.0, 0.05, 10.0, 0.1, 14.0],
];
const H6_P: [[f64; 6]; 4] = [
    [0.1312, 0.1696, 0.5569, 0.0124, 0.8283, 0.5886],
    [0.2329, 0.4135, 0.8307, 0.3736, 0.1004, 0.9991],
    [0.2348, 0.1451, 0.3522, 0.2883, 0.3047, 0.6650],
    [0.4047, 0.8828, 0.8732, 0.5743, 0.1091, 0.0381],
];

fn hartmann<const D: usize>(x: &[f64], a: &[[f64; D]; 4], p: &[[f64; D]; 4]) -> f64 {
    -(0..4)
        .map(|i| {
            let inner: f64 = (0..D).map(|j| a[i][j] * (x[j] - p[i][j]).powi(2)).sum();
            HARTMANN_C[i] * (-inner).exp()
        })
        .sum::<f64>()
}

const SHEKEL_A: [[f64; 4]; 10] = [
    [4.0, 4.0, 4.0, 4.0],
    [1.0, 1.0, 1.0, 1.0],
    [8.0, 8.0, 8.0, 8.0],
    [6.0, 6.0, 6.0, 6.0],
    [3.0, 7.0, 3.0, 7.0],
    [2.0, 9.0, 2.0, 9.0],
    [5.0, 5.0, 3.0, 3.0],
    [8.0, 1.0, 8.0, 1.0],
    [6.0, 2.0, 6.0, 2.0],
    [7.0, 3.6, 7.0, 3.6],
];
const SHEKEL_C: [f64; 10] = [0.1, 0.2, 0.2, 0.4, 0.4, 0.6, 0.3, 0.7, 0.5, 0.5];

fn shekel(x: &[f64], m: usize) -> f64 {
    -(0..m)
        .map(|i| {
            let d: f64 = (0..4).map(|j| (x[j] - SHEKEL_A[i][j]).powi(2)).sum();
            1.0 / (d + SHEKEL_C[i])
        })
        .sum::<f64>()
}
