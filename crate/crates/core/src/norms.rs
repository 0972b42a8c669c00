//! Unitarily invariant norms, evaluated as symmetric gauge functions of the
//! singular values.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::check::CheckResult;
use crate::error::{Error, Result};
use crate::spectral::{singular_values, CMatrix, HermitianMatrix};

/// Above this exponent Schatten norms are evaluated as the operator norm.
pub const SCHATTEN_MAX_P: f64 = 64.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NormSpec {
    Operator,
    Trace,
    Frobenius,
    Schatten(f64),
    KyFan(usize),
}

impl NormSpec {
    pub fn schatten(p: f64) -> Result<Self> {
        if !(p >= 1.0) || p.is_nan() {
            return Err(Error::Parse(format!("Schatten exponent {p} must be ≥ 1")));
        }
        Ok(NormSpec::Schatten(p))
    }

    pub fn ky_fan(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::Parse("Ky Fan index must be ≥ 1".into()));
        }
        Ok(NormSpec::KyFan(k))
    }

    /// Whether the norm can be evaluated on `dim×dim` matrices.
    pub fn supports_dim(&self, dim: usize) -> bool {
        match *self {
            NormSpec::KyFan(k) => k <= dim,
            _ => true,
        }
    }

    /// Symmetric gauge of nonincreasing, nonnegative values.
    pub fn gauge(&self, values: &[f64]) -> Result<f64> {
        let top = *values.first().ok_or(Error::EmptyMatrix)?;
        match *self {
            NormSpec::Operator => Ok(top),
            NormSpec::Trace => Ok(values.iter().sum()),
            NormSpec::Frobenius => Ok(scaled_power_sum(values, 2.0)),
            NormSpec::Schatten(p) if p > SCHATTEN_MAX_P => Ok(top),
            NormSpec::Schatten(p) => Ok(scaled_power_sum(values, p)),
            NormSpec::KyFan(k) => {
                self.check_k(values.len(), k)?;
                Ok(values[..k].iter().sum())
            }
        }
    }

    /// `ln(gauge(exp(log_values)))` for nonincreasing log-values, without
    /// forming the values themselves. `-inf` entries stand for zeros.
    pub fn log_gauge(&self, log_values: &[f64]) -> Result<f64> {
        let top = *log_values.first().ok_or(Error::EmptyMatrix)?;
        match *self {
            NormSpec::Operator => Ok(top),
            NormSpec::Trace => Ok(log_sum_exp(log_values)),
            NormSpec::Frobenius => Ok(log_power_sum(log_values, 2.0)),
            NormSpec::Schatten(p) if p > SCHATTEN_MAX_P => Ok(top),
            NormSpec::Schatten(p) => Ok(log_power_sum(log_values, p)),
            NormSpec::KyFan(k) => {
                self.check_k(log_values.len(), k)?;
                Ok(log_sum_exp(&log_values[..k]))
            }
        }
    }

    fn check_k(&self, dim: usize, k: usize) -> Result<()> {
        if k == 0 || k > dim {
            return Err(Error::Precondition(format!("Ky Fan index {k} out of range for dimension {dim}")));
        }
        Ok(())
    }
}

fn scaled_power_sum(values: &[f64], p: f64) -> f64 {
    let top = values[0];
    if top == 0.0 {
        return 0.0;
    }
    top * values.iter().map(|v| (v / top).powf(p)).sum::<f64>().powf(1.0 / p)
}

fn log_power_sum(log_values: &[f64], p: f64) -> f64 {
    let scaled: Vec<f64> = log_values.iter().map(|l| p * l).collect();
    log_sum_exp(&scaled) / p
}

pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let m = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m.is_infinite() {
        return m;
    }
    m + xs.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

impl fmt::Display for NormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormSpec::Operator => write!(f, "op"),
            NormSpec::Trace => write!(f, "tr"),
            NormSpec::Frobenius => write!(f, "fro"),
            NormSpec::Schatten(p) => write!(f, "sp:{p}"),
            NormSpec::KyFan(k) => write!(f, "kf:{k}"),
        }
    }
}

impl FromStr for NormSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "op" => return Ok(NormSpec::Operator),
            "tr" => return Ok(NormSpec::Trace),
            "fro" => return Ok(NormSpec::Frobenius),
            _ => {}
        }
        let bad = || Error::Parse(format!("unknown norm \"{s}\" (expected op, tr, fro, sp:<p>, kf:<k>)"));
        let (kind, arg) = s.split_once(':').ok_or_else(bad)?;
        match kind {
            "sp" => NormSpec::schatten(arg.parse().map_err(|_| bad())?),
            "kf" => NormSpec::ky_fan(arg.parse().map_err(|_| bad())?),
            _ => Err(bad()),
        }
    }
}

impl Serialize for NormSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for NormSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Norm of a general square matrix through its singular values.
pub fn evaluate(norm: NormSpec, m: &CMatrix) -> Result<f64> {
    norm.gauge(&singular_values(m)?)
}

/// Norm of a Hermitian matrix from its eigenvalues (`σ = |λ|`).
pub fn evaluate_hermitian(norm: NormSpec, h: &HermitianMatrix) -> Result<f64> {
    let mut s: Vec<f64> = h.eig()?.eigenvalues().iter().map(|l| l.abs()).collect();
    s.sort_by(|a, b| b.total_cmp(a));
    norm.gauge(&s)
}

fn nonincreasing_diagonal(m: &HermitianMatrix, name: &str) -> Result<Vec<f64>> {
    if !m.is_diagonal() {
        return Err(Error::Precondition(format!("{name} must be diagonal")));
    }
    let d = m.diagonal();
    if d.iter().any(|&v| v < 0.0) || d.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::Precondition(format!("{name} must be nonnegative and nonincreasing")));
    }
    Ok(d)
}

/// `‖S^{1/2} T^{1/2}‖ ≤ ‖S‖^{1/2} ‖T‖^{1/2}` for nonincreasing nonnegative
/// diagonals `S = diag(s)`, `T = diag(t)`. Slack is relative to the
/// right-hand side.
pub fn check_cauchy_schwarz(norm: NormSpec, s: &HermitianMatrix, t: &HermitianMatrix, tol: f64) -> Result<CheckResult> {
    let sd = nonincreasing_diagonal(s, "S")?;
    let td = nonincreasing_diagonal(t, "T")?;
    cauchy_schwarz_diagonals(norm, &sd, &td, tol)
}

/// Same inequality on raw nonnegative diagonals in any order; the products
/// `√(sⱼtⱼ)` are taken position by position.
pub fn cauchy_schwarz_diagonals(norm: NormSpec, s: &[f64], t: &[f64], tol: f64) -> Result<CheckResult> {
    if s.len() != t.len() {
        return Err(Error::DimensionMismatch { expected: s.len(), found: t.len() });
    }
    if s.iter().chain(t).any(|&v| !(v >= 0.0)) {
        return Err(Error::Precondition("diagonals must be nonnegative".into()));
    }
    let desc = |v: &mut Vec<f64>| v.sort_by(|a, b| b.total_cmp(a));
    let mut prod: Vec<f64> = s.iter().zip(t).map(|(a, b)| (a * b).sqrt()).collect();
    let (mut ss, mut ts) = (s.to_vec(), t.to_vec());
    desc(&mut prod);
    desc(&mut ss);
    desc(&mut ts);
    let lhs = norm.gauge(&prod)?;
    let rhs = (norm.gauge(&ss)? * norm.gauge(&ts)?).sqrt();
    let slack = if rhs > 0.0 { (rhs - lhs) / rhs } else { -lhs };
    Ok(CheckResult::new(slack, tol).with_witness(serde_json::json!({ "lhs": lhs, "rhs": rhs, "norm": norm.to_string() })))
}

/// [`cauchy_schwarz_diagonals`] on log-values: `ln ‖diag(e^{(sⱼ+tⱼ)/2})‖ ≤
/// (ln ‖diag(e^{sⱼ})‖ + ln ‖diag(e^{tⱼ})‖) / 2`, with `tol` scaled by
/// `max(1, |rhs|)`.
pub fn log_cauchy_schwarz(norm: NormSpec, log_s: &[f64], log_t: &[f64], tol: f64) -> Result<CheckResult> {
    if log_s.len() != log_t.len() {
        return Err(Error::DimensionMismatch { expected: log_s.len(), found: log_t.len() });
    }
    let desc = |mut v: Vec<f64>| {
        v.sort_by(|a, b| b.total_cmp(a));
        v
    };
    let prod = desc(log_s.iter().zip(log_t).map(|(a, b)| (a + b) / 2.0).collect());
    let lhs = norm.log_gauge(&prod)?;
    let rhs = (norm.log_gauge(&desc(log_s.to_vec()))? + norm.log_gauge(&desc(log_t.to_vec()))?) / 2.0;
    Ok(CheckResult::new(rhs - lhs, tol * 1f64.max(rhs.abs())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(v: &[f64]) -> HermitianMatrix {
        HermitianMatrix::from_diagonal(v)
    }

    #[test]
    fn ky_fan_examples() {
        assert_eq!(evaluate_hermitian(NormSpec::KyFan(1), &d(&[3.0, 1.0])).unwrap(), 3.0);
        assert_eq!(evaluate_hermitian(NormSpec::KyFan(2), &d(&[3.0, 1.0])).unwrap(), 4.0);
        assert!(evaluate_hermitian(NormSpec::KyFan(3), &d(&[3.0, 1.0])).is_err());
    }

    #[test]
    fn schatten_two_of_diag() {
        let v = evaluate_hermitian(NormSpec::Schatten(2.0), &d(&[3.0, 4.0])).unwrap();
        assert!((v - 5.0).abs() < 1e-15);
        let f = evaluate_hermitian(NormSpec::Frobenius, &d(&[3.0, 4.0])).unwrap();
        assert!((f - 5.0).abs() < 1e-15);
    }

    #[test]
    fn large_schatten_routes_to_operator() {
        let v = evaluate_hermitian(NormSpec::Schatten(100.0), &d(&[3.0, 2.9])).unwrap();
        assert_eq!(v, 3.0);
    }

    #[test]
    fn parse_and_display() {
        for s in ["op", "tr", "fro", "sp:3", "sp:1.5", "kf:2"] {
            assert_eq!(s.parse::<NormSpec>().unwrap().to_string(), s);
        }
        assert!("sp:0.5".parse::<NormSpec>().is_err());
        assert!("kf:0".parse::<NormSpec>().is_err());
        assert!("l2".parse::<NormSpec>().is_err());
    }

    #[test]
    fn log_gauge_matches_gauge() {
        let v = [5.0, 2.0, 0.5];
        let l: Vec<f64> = v.iter().map(|x: &f64| x.ln()).collect();
        for n in [NormSpec::Operator, NormSpec::Trace, NormSpec::Frobenius, NormSpec::Schatten(3.0), NormSpec::KyFan(2)] {
            let a = n.gauge(&v).unwrap().ln();
            let b = n.log_gauge(&l).unwrap();
            assert!((a - b).abs() < 1e-14, "{n}");
        }
    }

    #[test]
    fn log_form_matches_raw_cauchy_schwarz() {
        let (s, t) = ([5.0, 2.0, 0.5], [0.1, 3.0, 4.0]);
        let ls: Vec<f64> = s.iter().map(|v: &f64| v.ln()).collect();
        let lt: Vec<f64> = t.iter().map(|v: &f64| v.ln()).collect();
        for norm in [NormSpec::Trace, NormSpec::Operator, NormSpec::Schatten(3.0), NormSpec::KyFan(2)] {
            let raw = cauchy_schwarz_diagonals(norm, &s, &t, 1e-12).unwrap();
            let log = log_cauchy_schwarz(norm, &ls, &lt, 1e-12).unwrap();
            assert!(raw.passed && log.passed);
            // ln rhs − ln lhs = −ln(1 − relative slack)
            assert!((log.slack + (1.0 - raw.slack).ln()).abs() < 1e-12);
        }
    }

    #[test]
    fn cauchy_schwarz_examples() {
        let s = d(&[3.0, 1.0]);
        let r = check_cauchy_schwarz(NormSpec::Trace, &s, &s, 1e-12).unwrap();
        assert!(r.slack.abs() < 1e-12 && r.passed);
        let r = cauchy_schwarz_diagonals(NormSpec::Trace, &[4.0, 0.0], &[0.0, 4.0], 1e-12).unwrap();
        assert_eq!(r.witness.as_ref().unwrap()["lhs"], 0.0);
        assert_eq!(r.witness.as_ref().unwrap()["rhs"], 4.0);
        assert!(r.passed);
        assert!(check_cauchy_schwarz(NormSpec::Trace, &d(&[0.0, 4.0]), &s, 1e-9).is_err());
        let mut off = CMatrix::identity(2, 2);
        off[(0, 1)] = crate::spectral::C64::new(0.5, 0.0);
        off[(1, 0)] = crate::spectral::C64::new(0.5, 0.0);
        let off = HermitianMatrix::new(off).unwrap();
        assert!(check_cauchy_schwarz(NormSpec::Trace, &off, &s, 1e-9).is_err());
    }
}
