use crate::check::CheckResult;
use crate::error::{Error, Result};
use crate::geo_convex::{GeoFn, PhiFn, ScalarFn};
use crate::geometry::{congruence, weighted_geomean};
use crate::maps::PosMap;
use crate::norms::NormSpec;
use crate::spectral::{HermitianMatrix, SpdMatrix};

use super::instance::{CongruenceInstance, CongruenceTerm, GeodesicInstance, Instance};

/// `ln ‖g(M)‖` from the eigenvalues of `M`, never forming `g(M)`: the
/// singular values of `g(M)` are the `g(λⱼ)`.
pub fn log_norm_of_g(m: &SpdMatrix, g: &dyn ScalarFn, norm: NormSpec) -> Result<f64> {
    let logs = log_g_values(m.spectrum().eigenvalues(), g)?;
    norm.log_gauge(&logs)
}

/// `ln g(λⱼ)` sorted nonincreasing.
pub fn log_g_values(values: &[f64], g: &dyn ScalarFn) -> Result<Vec<f64>> {
    let mut logs = values.iter().map(|&l| g.log_eval(l)).collect::<Result<Vec<_>>>()?;
    logs.sort_by(|a, b| b.total_cmp(a));
    Ok(logs)
}

/// `Σ Aᵢ #_{tᵢ} Bᵢ`.
pub fn geodesic_sum(pairs: &[(SpdMatrix, SpdMatrix)], t: &[f64]) -> Result<HermitianMatrix> {
    arity(pairs.len(), t)?;
    let terms = pairs
        .iter()
        .zip(t)
        .map(|((a, b), &ti)| weighted_geomean(a, b, ti))
        .collect::<Result<Vec<_>>>()?;
    HermitianMatrix::sum(terms.iter().map(SpdMatrix::as_hermitian))
}

/// `Σ Xᵢ* Aᵢ^{tᵢ} Xᵢ`, computed directly from powers of `Aᵢ`.
pub fn congruence_sum(terms: &[CongruenceTerm], t: &[f64]) -> Result<HermitianMatrix> {
    arity(terms.len(), t)?;
    let parts = terms
        .iter()
        .zip(t)
        .map(|(term, &ti)| congruence(&term.x, term.a.power(ti)?.as_hermitian()))
        .collect::<Result<Vec<_>>>()?;
    HermitianMatrix::sum(parts.iter())
}

fn arity(m: usize, t: &[f64]) -> Result<()> {
    if t.len() != m {
        return Err(Error::DimensionMismatch { expected: m, found: t.len() });
    }
    Ok(())
}

/// `ln ‖g(Φ(S))‖` for a positive definite inner sum `S`.
pub fn log_functional_of_sum(sum: HermitianMatrix, map: &PosMap, g: &dyn ScalarFn, norm: NormSpec) -> Result<f64> {
    let sum = SpdMatrix::new(sum).map_err(|e| match e {
        Error::NotPositiveDefinite { min, max, .. } => {
            Error::Degenerate(format!("inner sum has eigenvalues in [{min:e}, {max:e}]"))
        }
        other => other,
    })?;
    log_norm_of_g(&map.apply_spd(&sum)?, g, norm)
}

/// A functional `t ↦ ‖g(Φ(S(t)))‖` over `m` exponents, with `S(t)` a sum of
/// geodesic or congruence terms.
pub trait Functional: Send + Sync {
    fn arity(&self) -> usize;

    /// The positive definite sum `S(t)` before the map.
    fn inner_sum(&self, t: &[f64]) -> Result<HermitianMatrix>;

    fn map(&self) -> &PosMap;

    fn g(&self) -> &GeoFn;

    fn norm(&self) -> NormSpec;

    fn log_value(&self, t: &[f64]) -> Result<f64> {
        log_functional_of_sum(self.inner_sum(t)?, self.map(), self.g(), self.norm())
    }

    /// `exp` of [`Functional::log_value`]; a range error if that overflows.
    fn value(&self, t: &[f64]) -> Result<f64> {
        let l = self.log_value(t)?;
        let v = l.exp();
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Range(format!("functional value e^{l:.6e} at t = {t:?}")))
        }
    }

    /// `Tr φ(S(t))`, on the inner sum without the map.
    fn trace_phi(&self, phi: &PhiFn, t: &[f64]) -> Result<f64> {
        let s = self.inner_sum(t)?;
        s.eig()?.eigenvalues().iter().map(|&l| phi.eval(l)).sum()
    }
}

impl Functional for GeodesicInstance {
    fn arity(&self) -> usize {
        self.pairs.len()
    }

    fn inner_sum(&self, t: &[f64]) -> Result<HermitianMatrix> {
        geodesic_sum(&self.pairs, t)
    }

    fn map(&self) -> &PosMap {
        &self.map
    }

    fn g(&self) -> &GeoFn {
        &self.g
    }

    fn norm(&self) -> NormSpec {
        self.norm
    }
}

impl Functional for CongruenceInstance {
    fn arity(&self) -> usize {
        self.terms.len()
    }

    fn inner_sum(&self, t: &[f64]) -> Result<HermitianMatrix> {
        congruence_sum(&self.terms, t)
    }

    fn map(&self) -> &PosMap {
        &self.map
    }

    fn g(&self) -> &GeoFn {
        &self.g
    }

    fn norm(&self) -> NormSpec {
        self.norm
    }
}

impl Functional for Instance {
    fn arity(&self) -> usize {
        match self {
            Instance::Geodesic(i) => i.arity(),
            Instance::Congruence(i) => i.arity(),
        }
    }

    fn inner_sum(&self, t: &[f64]) -> Result<HermitianMatrix> {
        match self {
            Instance::Geodesic(i) => i.inner_sum(t),
            Instance::Congruence(i) => i.inner_sum(t),
        }
    }

    fn map(&self) -> &PosMap {
        Instance::map(self)
    }

    fn g(&self) -> &GeoFn {
        match self {
            Instance::Geodesic(i) => &i.g,
            Instance::Congruence(i) => &i.g,
        }
    }

    fn norm(&self) -> NormSpec {
        match self {
            Instance::Geodesic(i) => i.norm,
            Instance::Congruence(i) => i.norm,
        }
    }
}

/// `‖g(Φ(Σ Aᵢ #_{tᵢ} Bᵢ))‖`.
pub fn functional_geodesic(inst: &GeodesicInstance, t: &[f64]) -> Result<f64> {
    inst.value(t)
}

/// `‖g(Φ(Σ Xᵢ* Aᵢ^{tᵢ} Xᵢ))‖`.
pub fn functional_congruence(inst: &CongruenceInstance, t: &[f64]) -> Result<f64> {
    inst.value(t)
}

/// `Tr φ(S(t))` for either instance kind.
pub fn trace_functional(inst: &dyn Functional, phi: &PhiFn, t: &[f64]) -> Result<f64> {
    inst.trace_phi(phi, t)
}

pub(crate) fn midpoint(s: &[f64], t: &[f64]) -> Vec<f64> {
    s.iter().zip(t).map(|(a, b)| (a + b) / 2.0).collect()
}

/// Tags an evaluation error with the point where it happened.
pub(crate) fn at_point(point: &[f64]) -> impl Fn(Error) -> Error + '_ {
    move |e| match e {
        Error::Range(m) => Error::Range(format!("{m} (at t = {point:?})")),
        Error::Degenerate(m) => Error::Degenerate(format!("{m} (at t = {point:?})")),
        other => other,
    }
}

fn three_points<F>(f: &F, s: &[f64], t: &[f64]) -> Result<[f64; 3]>
where
    F: Fn(&[f64]) -> Result<f64> + ?Sized,
{
    if s.len() != t.len() {
        return Err(Error::DimensionMismatch { expected: s.len(), found: t.len() });
    }
    let mid = midpoint(s, t);
    Ok([f(s).map_err(at_point(s))?, f(t).map_err(at_point(t))?, f(&mid).map_err(at_point(&mid))?])
}

/// Midpoint log-convexity from a closure returning `ln f`. Slack is
/// `(ln f(s) + ln f(t))/2 − ln f((s+t)/2)`; the tolerance scales with
/// `max(1, |ln f|)`.
pub fn check_midpoint_logconvex<F>(log_f: F, s: &[f64], t: &[f64], tol: f64) -> Result<CheckResult>
where
    F: Fn(&[f64]) -> Result<f64>,
{
    midpoint_check(&log_f, s, t, tol)
}

/// Midpoint convexity: slack `(f(s) + f(t))/2 − f((s+t)/2)`, tolerance
/// scaled by `max(1, |f|)`.
pub fn check_midpoint_convex<F>(f: F, s: &[f64], t: &[f64], tol: f64) -> Result<CheckResult>
where
    F: Fn(&[f64]) -> Result<f64>,
{
    midpoint_check(&f, s, t, tol)
}

fn midpoint_check<F>(f: &F, s: &[f64], t: &[f64], tol: f64) -> Result<CheckResult>
where
    F: Fn(&[f64]) -> Result<f64> + ?Sized,
{
    let [fs, ft, fm] = three_points(f, s, t)?;
    let scale = 1f64.max(fs.abs()).max(ft.abs()).max(fm.abs());
    let slack = (fs + ft) / 2.0 - fm;
    Ok(CheckResult::new(slack, tol * scale).with_witness(serde_json::json!({ "values": [fs, ft, fm] })))
}

/// The polar bridge: the congruence functional evaluated directly and
/// through its geodesic form. Slack is `−|ln F₁ − ln F₂|`, a relative gap.
pub fn check_polar_bridge(inst: &CongruenceInstance, t: &[f64], tol: f64) -> Result<CheckResult> {
    let direct = inst.log_value(t).map_err(at_point(t))?;
    let bridged = inst.to_geodesic()?.log_value(t).map_err(at_point(t))?;
    Ok(CheckResult::new(-(direct - bridged).abs(), tol).with_witness(serde_json::json!({ "log_values": [direct, bridged] })))
}
