//! Eigenvalue orderings and the weak / weak-log majorization relations.

use serde::{Deserialize, Serialize};

use crate::check::CheckResult;
use crate::error::{Error, Result};
use crate::norms::log_sum_exp;
use crate::spectral::{singular_values, CMatrix, HermitianMatrix, EPS_PD};

/// Default relative tolerance for majorization checks.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumKind {
    Eigenvalues,
    SingularValues,
}

/// Real values sorted nonincreasing.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumVector {
    values: Vec<f64>,
    kind: SpectrumKind,
}

impl SpectrumVector {
    pub fn new(mut values: Vec<f64>, kind: SpectrumKind) -> Result<Self> {
        if values.iter().any(|v| v.is_nan()) {
            return Err(Error::NonFinite);
        }
        if kind == SpectrumKind::SingularValues && values.iter().any(|&v| v < 0.0) {
            return Err(Error::Precondition("singular values must be nonnegative".into()));
        }
        values.sort_by(|a, b| b.total_cmp(a));
        Ok(SpectrumVector { values, kind })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn kind(&self) -> SpectrumKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Applies `f` entrywise and re-sorts.
    pub fn map<F: Fn(f64) -> f64>(&self, f: F) -> Result<Self> {
        SpectrumVector::new(self.values.iter().map(|&v| f(v)).collect(), self.kind)
    }
}

pub fn eigvals_desc(s: &HermitianMatrix) -> Result<SpectrumVector> {
    Ok(SpectrumVector {
        values: s.eig()?.eigenvalues().to_vec(),
        kind: SpectrumKind::Eigenvalues,
    })
}

pub fn singvals_desc(m: &CMatrix) -> Result<SpectrumVector> {
    Ok(SpectrumVector {
        values: singular_values(m)?,
        kind: SpectrumKind::SingularValues,
    })
}

/// `S↓`: the diagonal matrix of eigenvalues in nonincreasing order.
pub fn diag_down(s: &HermitianMatrix) -> Result<HermitianMatrix> {
    Ok(HermitianMatrix::from_diagonal(s.eig()?.eigenvalues()))
}

/// Prefix sums `Σ_{j≤k} xⱼ ≤ Σ_{j≤k} yⱼ`; component `k` is
/// `(Yₖ − Xₖ) / max(|Xₖ|, |Yₖ|)`.
pub fn weak_majorize_slack(x: &SpectrumVector, y: &SpectrumVector, tol: f64) -> Result<CheckResult> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch { expected: x.len(), found: y.len() });
    }
    let (mut sx, mut sy) = (0.0, 0.0);
    let components = x
        .values
        .iter()
        .zip(&y.values)
        .map(|(a, b)| {
            sx += a;
            sy += b;
            let scale = sx.abs().max(sy.abs());
            if scale > 0.0 {
                (sy - sx) / scale
            } else {
                0.0
            }
        })
        .collect();
    Ok(CheckResult::from_components(components, tol))
}

pub fn weak_majorize(x: &SpectrumVector, y: &SpectrumVector, tol: f64) -> Result<bool> {
    Ok(weak_majorize_slack(x, y, tol)?.passed)
}

/// Weak majorization of `exp(log_x)` by `exp(log_y)` computed on logs, for
/// values too large to form. Both sides are sorted; component `k` is
/// `ln Σ_{j≤k} yⱼ − ln Σ_{j≤k} xⱼ`, a relative gap.
pub fn weak_majorize_logs_slack(log_x: &[f64], log_y: &[f64], tol: f64) -> Result<CheckResult> {
    if log_x.len() != log_y.len() {
        return Err(Error::DimensionMismatch { expected: log_x.len(), found: log_y.len() });
    }
    if log_x.iter().chain(log_y).any(|v| v.is_nan()) {
        return Err(Error::NonFinite);
    }
    let desc = |v: &[f64]| {
        let mut v = v.to_vec();
        v.sort_by(|a, b| b.total_cmp(a));
        v
    };
    let (lx, ly) = (desc(log_x), desc(log_y));
    let components = (1..=lx.len())
        .map(|k| {
            let (px, py) = (log_sum_exp(&lx[..k]), log_sum_exp(&ly[..k]));
            if px == f64::NEG_INFINITY {
                0.0
            } else {
                py - px
            }
        })
        .collect();
    Ok(CheckResult::from_components(components, tol))
}

/// Logs of nonnegative nonincreasing values, `-inf` below `EPS_PD · v₁`.
fn floored_logs(values: &[f64]) -> Vec<f64> {
    let top = values.first().copied().unwrap_or(0.0);
    values
        .iter()
        .map(|&v| if v > 0.0 && v > EPS_PD * top { v.ln() } else { f64::NEG_INFINITY })
        .collect()
}

/// Prefix log-products of `x` against `y`, both nonnegative and
/// nonincreasing. Component `k` is `Σ_{j≤k} ln yⱼ − Σ_{j≤k} ln xⱼ`.
pub fn log_majorize_values_slack(x: &[f64], y: &[f64], tol: f64) -> Result<CheckResult> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch { expected: x.len(), found: y.len() });
    }
    let (lx, ly) = (floored_logs(x), floored_logs(y));
    let (mut px, mut py) = (0.0f64, 0.0f64);
    let components = lx
        .iter()
        .zip(&ly)
        .map(|(a, b)| {
            px += a;
            py += b;
            match (px == f64::NEG_INFINITY, py == f64::NEG_INFINITY) {
                (true, true) => 0.0,
                (true, false) => f64::INFINITY,
                (false, true) => f64::NEG_INFINITY,
                (false, false) => py - px,
            }
        })
        .collect();
    Ok(CheckResult::from_components(components, tol))
}

fn psd_eigenvalues(s: &HermitianMatrix, tol: f64, name: &str) -> Result<Vec<f64>> {
    let d = s.eig()?;
    let scale = d.max().abs().max(d.min().abs());
    if d.min() < -tol * scale {
        return Err(Error::Domain {
            eigenvalue: d.min(),
            domain: format!("[0, inf) for {name}"),
        });
    }
    Ok(d.eigenvalues().iter().map(|&v| v.max(0.0)).collect())
}

/// `S ≺_wlog T`: `∏_{j≤k} λⱼ(S) ≤ ∏_{j≤k} λⱼ(T)` for every `k`, with
/// relative slack `tol`.
pub fn weak_log_majorize_slack(s: &HermitianMatrix, t: &HermitianMatrix, tol: f64) -> Result<CheckResult> {
    if s.dim() != t.dim() {
        return Err(Error::DimensionMismatch { expected: s.dim(), found: t.dim() });
    }
    let x = psd_eigenvalues(s, tol, "S")?;
    let y = psd_eigenvalues(t, tol, "T")?;
    log_majorize_values_slack(&x, &y, tol)
}

pub fn weak_log_majorize(s: &HermitianMatrix, t: &HermitianMatrix, tol: f64) -> Result<bool> {
    Ok(weak_log_majorize_slack(s, t, tol)?.passed)
}

/// Horn's inequality: `∏_{j≤k} σⱼ(ST) ≤ ∏_{j≤k} σⱼ(S) σⱼ(T)`. Components
/// are the per-`k` log slacks.
pub fn check_horn(s: &CMatrix, t: &CMatrix, tol: f64) -> Result<CheckResult> {
    if s.shape() != t.shape() {
        return Err(Error::DimensionMismatch { expected: s.nrows(), found: t.nrows() });
    }
    let st = singular_values(&(s * t))?;
    let ss = singular_values(s)?;
    let ts = singular_values(t)?;
    let bound: Vec<f64> = ss.iter().zip(&ts).map(|(a, b)| a * b).collect();
    log_majorize_values_slack(&st, &bound, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_gaussian, random_hermitian, rng_from_seed};

    #[test]
    fn log_domain_weak_majorization() {
        let r = weak_majorize_logs_slack(&[2f64.ln(), 1f64.ln()], &[3f64.ln(), 0.5f64.ln()], 1e-12).unwrap();
        assert!(r.passed);
        assert!((r.components[0] - 1.5f64.ln()).abs() < 1e-15);
        assert!((r.components[1] - (3.5f64 / 3.0).ln()).abs() < 1e-15);
        let r = weak_majorize_logs_slack(&[1e4, 0.0], &[1e4 - 1.0, 5.0], 1e-12).unwrap();
        assert!(!r.passed);
    }

    fn sv(v: &[f64]) -> SpectrumVector {
        SpectrumVector::new(v.to_vec(), SpectrumKind::Eigenvalues).unwrap()
    }

    fn d(v: &[f64]) -> HermitianMatrix {
        HermitianMatrix::from_diagonal(v)
    }

    #[test]
    fn eigvals_sorted() {
        assert_eq!(eigvals_desc(&d(&[1.0, 3.0, 2.0])).unwrap().values(), &[3.0, 2.0, 1.0]);
        assert_eq!(eigvals_desc(&HermitianMatrix::identity(3)).unwrap().values(), &[1.0; 3]);
    }

    #[test]
    fn eigvals_match_decomposition() {
        let mut rng = rng_from_seed(4);
        let h = random_hermitian(5, &mut rng);
        assert_eq!(eigvals_desc(&h).unwrap().values(), h.eig().unwrap().eigenvalues());
    }

    #[test]
    fn diag_down_examples() {
        let s = diag_down(&d(&[1.0, 3.0])).unwrap();
        assert_eq!(s.diagonal(), vec![3.0, 1.0]);
        assert_eq!(diag_down(&s).unwrap(), s);
    }

    #[test]
    fn weak_majorization_arithmetic() {
        assert!(weak_majorize(&sv(&[3.0, 1.0]), &sv(&[3.0, 1.0]), 1e-9).unwrap());
        assert!(!weak_majorize(&sv(&[3.0, 1.0]), &sv(&[2.0, 2.0]), 1e-9).unwrap());
        assert!(weak_majorize(&sv(&[2.0, 2.0]), &sv(&[3.0, 1.0]), 1e-9).unwrap());
        assert!(weak_majorize(&sv(&[1.0]), &sv(&[1.0, 2.0]), 1e-9).is_err());
    }

    #[test]
    fn weak_log_majorization_arithmetic() {
        assert!(weak_log_majorize(&d(&[3.0, 2.0, 1.0]), &d(&[4.0, 2.0, 1.0]), 1e-9).unwrap());
        let s = d(&[5.0, 0.5]);
        assert!(weak_log_majorize(&s, &s, 1e-9).unwrap());
        assert!(!weak_log_majorize(&d(&[4.0, 1.0]), &d(&[3.0, 3.0]), 1e-9).unwrap());
    }

    #[test]
    fn zero_eigenvalue_convention() {
        assert!(weak_log_majorize(&d(&[2.0, 0.0]), &d(&[3.0, 1.0]), 1e-9).unwrap());
        assert!(!weak_log_majorize(&d(&[2.0, 1.0]), &d(&[3.0, 0.0]), 1e-9).unwrap());
        assert!(matches!(
            weak_log_majorize(&d(&[2.0, -1.0]), &d(&[3.0, 1.0]), 1e-9),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn horn_equality_cases() {
        let s = d(&[3.0, 2.0, 0.5]);
        let t = d(&[4.0, 1.0, 0.25]);
        let r = check_horn(s.matrix(), t.matrix(), 1e-12).unwrap();
        assert!(r.components.iter().all(|c| c.abs() < 1e-12), "{:?}", r.components);
        let i = CMatrix::identity(3, 3);
        let r = check_horn(&i, &i, 1e-12).unwrap();
        assert!(r.components.iter().all(|c| c.abs() < 1e-14));
    }

    #[test]
    fn horn_random() {
        let mut rng = rng_from_seed(21);
        for _ in 0..20 {
            let s = random_gaussian(5, 5, &mut rng);
            let t = random_gaussian(5, 5, &mut rng);
            let r = check_horn(&s, &t, DEFAULT_TOL).unwrap();
            assert!(r.passed, "{:?}", r);
        }
    }
}
