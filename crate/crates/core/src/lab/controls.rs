//! Negative controls: each drops one hypothesis and must produce violations,
//! showing that the checks can fail.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::check::CheckResult;
use crate::error::{Error, Result};
use crate::geo_convex::{GeoFn, RawFn};
use crate::maps::{check_positivity_with, PosMap};
use crate::norms::NormSpec;
use crate::random::{log_uniform, random_isometry, random_spd_with, random_unitary, uniform, LabRng};
use crate::spectral::{CMatrix, HermitianMatrix, SpdMatrix, C64};

use super::corollaries::holder_unchecked;
use super::functional::{check_midpoint_logconvex, geodesic_sum, log_functional_of_sum};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Control {
    /// `g(t) = t/(1+t)`: nondecreasing but not geometrically convex.
    NonGeoConvexG,
    /// `g(t) = 1/t`: geometrically convex but decreasing.
    DecreasingG,
    /// A Schur multiplier by an indefinite `Z`.
    IndefiniteSchur,
    /// The Hölder inequality on pairs that do not commute.
    NonCommutingHolder,
}

impl Control {
    pub const ALL: [Control; 4] = [
        Control::NonGeoConvexG,
        Control::DecreasingG,
        Control::IndefiniteSchur,
        Control::NonCommutingHolder,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Control::NonGeoConvexG => "non_geo_convex_g",
            Control::DecreasingG => "decreasing_g",
            Control::IndefiniteSchur => "indefinite_schur",
            Control::NonCommutingHolder => "non_commuting_holder",
        }
    }
}

impl fmt::Display for Control {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Inputs of one control trial.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "control", rename_all = "snake_case")]
pub enum ControlCase {
    NonGeoConvexG {
        pairs: Vec<(SpdMatrix, SpdMatrix)>,
        map: PosMap,
        norm: NormSpec,
        s: Vec<f64>,
        t: Vec<f64>,
    },
    DecreasingG {
        pairs: Vec<(SpdMatrix, SpdMatrix)>,
        map: PosMap,
        norm: NormSpec,
        s: Vec<f64>,
        t: Vec<f64>,
    },
    IndefiniteSchur {
        z: HermitianMatrix,
        trials: usize,
        seed: u64,
    },
    NonCommutingHolder {
        a: Vec<SpdMatrix>,
        b: Vec<SpdMatrix>,
        p: f64,
        g: GeoFn,
        norm: NormSpec,
    },
}

impl ControlCase {
    pub fn control(&self) -> Control {
        match self {
            ControlCase::NonGeoConvexG { .. } => Control::NonGeoConvexG,
            ControlCase::DecreasingG { .. } => Control::DecreasingG,
            ControlCase::IndefiniteSchur { .. } => Control::IndefiniteSchur,
            ControlCase::NonCommutingHolder { .. } => Control::NonCommutingHolder,
        }
    }

    /// The check the control feeds; a failing result is the expected outcome.
    pub fn run(&self, tol: f64) -> Result<CheckResult> {
        match self {
            ControlCase::NonGeoConvexG { pairs, map, norm, s, t } => raw_midpoint(pairs, map, *norm, RawFn::SATURATING, s, t, tol),
            ControlCase::DecreasingG { pairs, map, norm, s, t } => raw_midpoint(pairs, map, *norm, RawFn::RECIPROCAL, s, t, tol),
            ControlCase::IndefiniteSchur { z, trials, seed } => {
                // applied as a raw closure: an indefinite Z is not a PosMap
                let zm = z.matrix().clone();
                check_positivity_with(z.dim(), |a| Ok(HermitianMatrix::hermitized(zm.component_mul(a.matrix()))), *trials, *seed)
            }
            ControlCase::NonCommutingHolder { a, b, p, g, norm } => holder_unchecked(a, b, *p, g, *norm, tol),
        }
    }

    pub fn generate(control: Control, rng: &mut LabRng) -> Result<ControlCase> {
        Ok(match control {
            Control::NonGeoConvexG => {
                let n = rng.random_range(1..=3);
                let (pairs, s, t) = one_pair(n, rng)?;
                let norm = [NormSpec::Trace, NormSpec::Operator, NormSpec::Frobenius][rng.random_range(0..3)];
                ControlCase::NonGeoConvexG { pairs, map: PosMap::identity(n)?, norm, s, t }
            }
            Control::DecreasingG => {
                let n = rng.random_range(2..=4);
                let (pairs, s, t) = one_pair(n, rng)?;
                let map = if rng.random_bool(0.5) {
                    PosMap::trace(n)?
                } else {
                    PosMap::compression(random_isometry(n, n - 1, rng))?
                };
                ControlCase::DecreasingG { pairs, map, norm: NormSpec::Trace, s, t }
            }
            Control::IndefiniteSchur => {
                let n = rng.random_range(2..=4);
                let u = random_unitary(n, rng);
                let mut values: Vec<f64> = (0..n).map(|_| uniform(rng, -1.0, 1.0)).collect();
                values[0] = log_uniform(rng, 0.1, 1.0);
                values[n - 1] = -log_uniform(rng, 0.1, 1.0);
                let z = HermitianMatrix::new(compose(&u, &values))?;
                ControlCase::IndefiniteSchur { z, trials: 8, seed: rng.random() }
            }
            Control::NonCommutingHolder => {
                let (a, b) = noncommuting_family(rng)?;
                let g = if rng.random_bool(0.5) { GeoFn::Identity } else { GeoFn::Power(2.0) };
                let p = [3.0, 4.0][rng.random_range(0..2)];
                ControlCase::NonCommutingHolder { a, b, p, g, norm: NormSpec::Operator }
            }
        })
    }
}

fn raw_midpoint(
    pairs: &[(SpdMatrix, SpdMatrix)],
    map: &PosMap,
    norm: NormSpec,
    g: RawFn,
    s: &[f64],
    t: &[f64],
    tol: f64,
) -> Result<CheckResult> {
    if pairs.iter().any(|(a, b)| a.dim() != map.input_dim() || b.dim() != map.input_dim()) {
        return Err(Error::DimensionMismatch { expected: map.input_dim(), found: pairs[0].0.dim() });
    }
    check_midpoint_logconvex(|x| log_functional_of_sum(geodesic_sum(pairs, x)?, map, &g, norm), s, t, tol)
}

type Pairs = Vec<(SpdMatrix, SpdMatrix)>;

fn one_pair(n: usize, rng: &mut LabRng) -> Result<(Pairs, Vec<f64>, Vec<f64>)> {
    let a = random_spd_with(n, 30.0, rng)?;
    let b = random_spd_with(n, 30.0, rng)?;
    let s = vec![uniform(rng, -2.0, 2.0)];
    let t = vec![uniform(rng, -2.0, 2.0)];
    Ok((vec![(a, b)], s, t))
}

fn compose(u: &CMatrix, values: &[f64]) -> CMatrix {
    let mut scaled = u.clone();
    for (j, &v) in values.iter().enumerate() {
        for z in scaled.column_mut(j).iter_mut() {
            *z *= v;
        }
    }
    scaled * u.adjoint()
}

/// `K uu* + εI` for the unit vector at angle `theta`.
fn near_rank_one(theta: f64, rng: &mut LabRng) -> Result<SpdMatrix> {
    let k = uniform(rng, 2.0, 3.0);
    let eps = log_uniform(rng, 1e-2, 1e-1);
    let (c, s) = (theta.cos(), theta.sin());
    let m = CMatrix::from_fn(2, 2, |i, j| {
        let u = [c, s];
        C64::new(k * u[i] * u[j] + if i == j { eps } else { 0.0 }, 0.0)
    });
    SpdMatrix::from_matrix(m)
}

/// Two 2×2 pairs of nearly rank-one matrices. The `A` ranges sit 35°–65°
/// apart and each `B` range is tilted 5°–35° away from the other pair.
fn noncommuting_family(rng: &mut LabRng) -> Result<(Vec<SpdMatrix>, Vec<SpdMatrix>)> {
    let deg = std::f64::consts::PI / 180.0;
    let theta1 = uniform(rng, 0.0, 180.0) * deg;
    let theta2 = theta1 + uniform(rng, 35.0, 65.0) * deg;
    let (w1, w2) = (theta1 - uniform(rng, 5.0, 35.0) * deg, theta2 + uniform(rng, 5.0, 35.0) * deg);
    let a = vec![near_rank_one(theta1, rng)?, near_rank_one(theta2, rng)?];
    let b = vec![near_rank_one(w1, rng)?, near_rank_one(w2, rng)?];
    Ok((a, b))
}
