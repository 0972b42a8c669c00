//! Outcome of a single inequality check.

use serde::{Deserialize, Serialize};

/// `passed ⟺ slack ≥ −tol_used`. Negative slack is a violation margin.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub passed: bool,
    pub slack: f64,
    pub tol_used: f64,
    /// Per-step slacks (per prefix `k`, per pair, per trial) when the check
    /// has more than one.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub components: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<serde_json::Value>,
}

impl CheckResult {
    pub fn new(slack: f64, tol_used: f64) -> Self {
        let slack = if slack.is_nan() { f64::NEG_INFINITY } else { slack };
        CheckResult {
            passed: slack >= -tol_used,
            slack,
            tol_used,
            components: Vec::new(),
            witness: None,
        }
    }

    /// Slack is the minimum component; NaN counts as a violation.
    pub fn from_components(components: Vec<f64>, tol_used: f64) -> Self {
        let slack = components
            .iter()
            .map(|&s| if s.is_nan() { f64::NEG_INFINITY } else { s })
            .fold(f64::INFINITY, f64::min);
        CheckResult {
            components,
            ..CheckResult::new(slack, tol_used)
        }
    }

    pub fn with_witness(mut self, witness: serde_json::Value) -> Self {
        self.witness = Some(witness);
        self
    }

    /// Margin to failure, `slack + tol_used`.
    pub fn margin(&self) -> f64 {
        self.slack + self.tol_used
    }

    /// The result closest to failing; passes only if all pass.
    pub fn worst_of(results: impl IntoIterator<Item = CheckResult>) -> Option<CheckResult> {
        let mut all_passed = true;
        let worst = results
            .into_iter()
            .inspect(|r| all_passed &= r.passed)
            .min_by(|a, b| a.margin().total_cmp(&b.margin()));
        worst.map(|mut w| {
            w.passed = all_passed && w.passed;
            w
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_iff_slack_within_tol() {
        assert!(CheckResult::new(-1e-10, 1e-9).passed);
        assert!(!CheckResult::new(-1e-8, 1e-9).passed);
        assert!(!CheckResult::new(f64::NAN, 1e-9).passed);
        let r = CheckResult::from_components(vec![0.5, -2e-9, 0.1], 1e-9);
        assert_eq!(r.slack, -2e-9);
        assert!(!r.passed);
    }

    #[test]
    fn worst_of_picks_smallest_margin() {
        let w = CheckResult::worst_of([CheckResult::new(0.1, 1e-9), CheckResult::new(-1e-3, 1e-2)]).unwrap();
        assert_eq!(w.slack, -1e-3);
        assert!(w.passed);
    }
}
