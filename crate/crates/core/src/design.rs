//! Constrained engineering design problems: the welded beam and the pressure
//! vessel, with their full constraint systems and an exterior penalty.

use std::f64::consts::{PI, SQRT_2};

use crate::error::{Error, Result};
use crate::rng::RandomStream;
use crate::space::{Objective, SearchSpace};

/// Default weight of the linear exterior penalty.
pub const DEFAULT_PENALTY: f64 = 1e6;

/// Signed constraint values, `g_i <= 0` meaning satisfied.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintReport {
    pub values: Vec<f64>,
    pub feasible: bool,
    pub violation: f64,
}

impl ConstraintReport {
    pub fn from_values(values: Vec<f64>) -> Self {
        let violation: f64 = values.iter().map(|g| g.max(0.0)).sum();
        ConstraintReport {
            feasible: violation == 0.0,
            violation,
            values,
        }
    }
}

/// Welded-beam material and load constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeldedBeamConstants {
    /// Young's modulus (psi).
    pub e: f64,
    /// Shear modulus (psi).
    pub g: f64,
    /// Tip load (lbf).
    pub p: f64,
    /// Beam length (in).
    pub l: f64,
}

pub const WELDED_BEAM: WeldedBeamConstants = WeldedBeamConstants {
    e: 30e6,
    g: 12e6,
    p: 6000.0,
    l: 14.0,
};

/// Weld thickness `h`, weld length `l`, bar height `t`, bar thickness `b`,
/// all in inches.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeldedBeamDesign {
    pub h: f64,
    pub l: f64,
    pub t: f64,
    pub b: f64,
}

impl WeldedBeamDesign {
    pub fn from_slice(x: &[f64]) -> Result<Self> {
        match x {
            [h, l, t, b] => Ok(WeldedBeamDesign {
                h: *h,
                l: *l,
                t: *t,
                b: *b,
            }),
            _ => Err(Error::DimensionMismatch {
                expected: 4,
                got: x.len(),
            }),
        }
    }

    pub fn space() -> SearchSpace {
        SearchSpace::new(vec![0.1, 0.1, 0.1, 0.1], vec![2.0, 10.0, 10.0, 2.0])
            .expect("static bounds")
    }
}

pub fn welded_beam_cost(d: &WeldedBeamDesign) -> f64 {
    1.10471 * d.h * d.h * d.l + 0.04811 * d.t * d.b * (14.0 + d.l)
}

/// Shear stress, bending stress, minimum weld, deflection and buckling
/// constraints, in that order after `g1 = h - b`.
pub fn welded_beam_constraints(d: &WeldedBeamDesign) -> Result<ConstraintReport> {
    let WeldedBeamDesign { h, l, t, b } = *d;
    if [h, l, t, b].iter().any(|v| !(*v > 0.0)) {
        return Err(Error::contract("welded beam variables must be positive"));
    }
    let WeldedBeamConstants { e, g, p, l: span } = WELDED_BEAM;

    let tau_p = 6000.0 / (SQRT_2 * h * l);
    let radius = (0.25 * (l * l + (h + t).powi(2))).sqrt();
    let j = 2.0 * SQRT_2 * h * l * (l * l / 12.0 + ((h + t) / 2.0).powi(2));
    let tau_pp = 6000.0 * (14.0 + l / 2.0) * radius / (2.0 * j);
    let tau = (tau_p * tau_p + 2.0 * tau_p * tau_pp * l / (2.0 * radius) + tau_pp * tau_pp).sqrt();
    let sigma = 504000.0 / (t * t * b);
    let delta = 65.0 * 6000.0 * 14f64.powi(3) / (30.0 * e * t.powi(4) * b);
    let pc = 4.013 * e * (t * t * b.powi(6) / 36.0).sqrt() / (span * span)
        * (1.0 - t / (2.0 * span) * (e / (4.0 * g)).sqrt());

    Ok(ConstraintReport::from_values(vec![
        h - b,
        tau - 13600.0,
        sigma - 30000.0,
        0.125 - h,
        delta - 0.25,
        p - pc,
    ]))
}

/// Shell thickness `ts`, head thickness `th`, inner radius `r` and cylinder
/// length `l`, all in inches.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PressureVesselDesign {
    pub ts: f64,
    pub th: f64,
    pub r: f64,
    pub l: f64,
}

impl PressureVesselDesign {
    pub fn from_slice(x: &[f64]) -> Result<Self> {
        match x {
            [ts, th, r, l] => Ok(PressureVesselDesign {
                ts: *ts,
                th: *th,
                r: *r,
                l: *l,
            }),
            _ => Err(Error::DimensionMismatch {
                expected: 4,
                got: x.len(),
            }),
        }
    }

    pub fn space() -> SearchSpace {
        SearchSpace::new(vec![0.0, 0.0, 10.0, 10.0], vec![99.0, 99.0, 200.0, 200.0])
            .expect("static bounds")
    }
}

pub fn pressure_vessel_cost(d: &PressureVesselDesign) -> f64 {
    let PressureVesselDesign { ts, th, r, l } = *d;
    0.6224 * ts * r * l + 1.7781 * th * r * r + 3.1661 * ts * ts * l + 19.84 * ts * ts * r
}

pub fn pressure_vessel_constraints(d: &PressureVesselDesign) -> ConstraintReport {
    let PressureVesselDesign { ts, th, r, l } = *d;
    ConstraintReport::from_values(vec![
        -ts + 0.0193 * r,
        -th + 0.00954 * r,
        -PI * r * r * l - 4.0 / 3.0 * PI * r.powi(3) + 1_296_000.0,
        l - 240.0,
    ])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DesignKind {
    WeldedBeam,
    PressureVessel,
}

impl DesignKind {
    pub fn id(self) -> &'static str {
        match self {
            DesignKind::WeldedBeam => "welded_beam",
            DesignKind::PressureVessel => "pressure_vessel",
        }
    }

    pub fn variable_names(self) -> [&'static str; 4] {
        match self {
            DesignKind::WeldedBeam => ["h", "l", "t", "b"],
            DesignKind::PressureVessel => ["Ts", "Th", "R", "L"],
        }
    }
}

/// Cost and constraints of one design problem at a point in problem units.
pub fn assess(kind: DesignKind, x: &[f64]) -> Result<(f64, ConstraintReport)> {
    match kind {
        DesignKind::WeldedBeam => {
            let d = WeldedBeamDesign::from_slice(x)?;
            Ok((welded_beam_cost(&d), welded_beam_constraints(&d)?))
        }
        DesignKind::PressureVessel => {
            let d = PressureVesselDesign::from_slice(x)?;
            Ok((pressure_vessel_cost(&d), pressure_vessel_constraints(&d)))
        }
    }
}

/// `cost + lambda * sum(max(0, g_i))`.
pub fn penalized_objective(kind: DesignKind, x: &[f64], lambda: f64) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::contract("penalty coefficient must be positive"));
    }
    let (cost, report) = assess(kind, x)?;
    Ok(if report.feasible {
        cost
    } else {
        cost + lambda * report.violation
    })
}

/// A design problem wrapped as an [`Objective`] via the exterior penalty.
#[derive(Debug, Clone)]
pub struct DesignProblem {
    kind: DesignKind,
    space: SearchSpace,
    lambda: f64,
}

impl DesignProblem {
    pub fn new(kind: DesignKind, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) {
            return Err(Error::contract("penalty coefficient must be positive"));
        }
        let space = match kind {
            DesignKind::WeldedBeam => WeldedBeamDesign::space(),
            DesignKind::PressureVessel => PressureVesselDesign::space(),
        };
        Ok(DesignProblem {
            kind,
            space,
            lambda,
        })
    }

    pub fn kind(&self) -> DesignKind {
        self.kind
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }
}

impl Objective for DesignProblem {
    fn space(&self) -> &SearchSpace {
        &self.space
    }

    fn evaluate(&self, p: &[f64], _noise: &mut RandomStream) -> f64 {
        // bounds keep every beam variable >= 0.1, so only a malformed point can fail
        penalized_objective(self.kind, p, self.lambda).unwrap_or(f64::INFINITY)
    }
}
