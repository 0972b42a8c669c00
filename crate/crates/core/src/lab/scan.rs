//! Tabulates a functional along one exponent axis.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::check::CheckResult;
use crate::error::{Error, Result};

use super::functional::Functional;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanAxis {
    /// Which exponent varies.
    pub index: usize,
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl ScanAxis {
    pub fn validate(&self, arity: usize) -> Result<()> {
        if self.index >= arity {
            return Err(Error::Precondition(format!("axis {} out of range for {arity} exponents", self.index)));
        }
        if self.steps < 2 {
            return Err(Error::Precondition("a scan needs at least 2 steps".into()));
        }
        if !(self.lo.is_finite() && self.hi.is_finite() && self.lo < self.hi) {
            return Err(Error::Precondition(format!("invalid range [{}, {}]", self.lo, self.hi)));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        let h = (self.hi - self.lo) / (self.steps - 1) as f64;
        (0..self.steps).map(|k| if k + 1 == self.steps { self.hi } else { self.lo + h * k as f64 }).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanRow {
    pub t: f64,
    /// `ln F(t)`, or the error message for rows that failed to evaluate.
    pub log_f: std::result::Result<f64, String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Scan {
    pub rows: Vec<ScanRow>,
    /// Discrete second differences of `ln F` over consecutive good rows.
    pub convexity: CheckResult,
}

/// Evaluates `ln F` along the axis with the other exponents held at `fixed`.
/// Rows are computed in parallel on the current rayon pool and kept in axis
/// order.
pub fn scan_functional(f: &dyn Functional, axis: &ScanAxis, fixed: &[f64], tol: f64) -> Result<Scan> {
    axis.validate(f.arity())?;
    if fixed.len() != f.arity() {
        return Err(Error::DimensionMismatch { expected: f.arity(), found: fixed.len() });
    }
    let rows: Vec<ScanRow> = axis
        .points()
        .into_par_iter()
        .map(|t| {
            let mut x = fixed.to_vec();
            x[axis.index] = t;
            ScanRow { t, log_f: f.log_value(&x).map_err(|e| e.to_string()) }
        })
        .collect();
    let components = rows
        .windows(3)
        .filter_map(|w| match (&w[0].log_f, &w[1].log_f, &w[2].log_f) {
            (Ok(a), Ok(b), Ok(c)) => Some((a + c - 2.0 * b) / 2.0 / 1f64.max(a.abs()).max(b.abs()).max(c.abs())),
            _ => None,
        })
        .collect();
    Ok(Scan { rows, convexity: CheckResult::from_components(components, tol) })
}

impl Scan {
    /// `t,F,logF` with 17 significant digits; failed rows carry `error`
    /// markers in both value columns.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,F,logF\n");
        for r in &self.rows {
            match &r.log_f {
                Ok(l) => writeln!(out, "{:.16e},{:.16e},{:.16e}", r.t, l.exp(), l),
                Err(_) => writeln!(out, "{:.16e},error,error", r.t),
            }
            .expect("writing to a String");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geo_convex::GeoFn;
    use crate::lab::instance::{random_instance, GeodesicInstance, InstanceKind, Structure};
    use crate::maps::PosMap;
    use crate::norms::NormSpec;
    use crate::spectral::SpdMatrix;

    fn axis(steps: usize) -> ScanAxis {
        ScanAxis { index: 0, lo: -2.0, hi: 2.0, steps }
    }

    #[test]
    fn scalar_scan_is_affine() {
        let s = |v| SpdMatrix::from_diagonal(&[v]).unwrap();
        let inst = GeodesicInstance::new(vec![(s(0.5), s(8.0))], PosMap::identity(1).unwrap(), GeoFn::Identity, NormSpec::Trace)
            .unwrap();
        let scan = scan_functional(&inst, &axis(21), &[0.0], 1e-12).unwrap();
        for r in &scan.rows {
            let want = (1.0 - r.t) * 0.5f64.ln() + r.t * 8f64.ln();
            assert!((r.log_f.as_ref().unwrap() - want).abs() < 1e-12);
        }
        assert!(scan.convexity.passed);
    }

    #[test]
    fn fixed_point_scan_is_constant() {
        let a = SpdMatrix::from_diagonal(&[0.5, 3.0]).unwrap();
        let inst = GeodesicInstance::new(vec![(a.clone(), a)], PosMap::identity(2).unwrap(), GeoFn::Sinh, NormSpec::Operator)
            .unwrap();
        let scan = scan_functional(&inst, &axis(11), &[0.0], 1e-9).unwrap();
        let first = scan.rows[0].log_f.clone().unwrap();
        assert!(scan.rows.iter().all(|r| (r.log_f.as_ref().unwrap() - first).abs() < 1e-13));
    }

    #[test]
    fn random_scan_is_discretely_convex() {
        let inst = random_instance(InstanceKind::Geodesic, 2, 4, 3, 100.0, Structure::Generic).unwrap();
        let scan = scan_functional(&inst, &axis(101), &[0.3, -0.7], 1e-9).unwrap();
        assert!(scan.convexity.passed, "{}", scan.convexity.slack);
        assert_eq!(scan.to_csv().lines().count(), 102);
    }

    #[test]
    fn errors_become_markers() {
        let s = |v| SpdMatrix::from_diagonal(&[v]).unwrap();
        let inst = GeodesicInstance::new(vec![(s(1e-150), s(1e150))], PosMap::identity(1).unwrap(), GeoFn::Identity, NormSpec::Trace)
            .unwrap();
        let scan = scan_functional(&inst, &ScanAxis { index: 0, lo: -2.0, hi: 2.0, steps: 5 }, &[0.0], 1e-9).unwrap();
        let csv = scan.to_csv();
        assert!(csv.contains("error"), "{csv}");
        assert!(csv.lines().nth(1).unwrap().ends_with(",error,error"));
        assert!(csv.lines().nth(3).unwrap().starts_with("0.0000000000000000e0,"));
        assert!(!csv.lines().nth(3).unwrap().contains("error"));
    }

    #[test]
    fn invalid_axes() {
        let inst = random_instance(InstanceKind::Geodesic, 1, 2, 3, 10.0, Structure::Generic).unwrap();
        assert!(scan_functional(&inst, &axis(1), &[0.0], 1e-9).is_err());
        assert!(scan_functional(&inst, &ScanAxis { index: 1, ..axis(5) }, &[0.0], 1e-9).is_err());
    }
}
