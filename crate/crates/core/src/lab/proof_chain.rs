//! The single-variable log-convexity argument, step by step, on the
//! block-diagonal lift `A = ⊕ Aᵢ #_{sᵢ} Bᵢ`, `B = ⊕ Aᵢ #_{tᵢ} Bᵢ` under
//! `Ψ([Aᵢⱼ]) = Φ(Σ Aᵢᵢ)`:
//!
//! 1. Ando: `Ψ(A # B) ≤ Ψ(A) # Ψ(B)`;
//! 2. `Ψ(A) # Ψ(B) = Ψ(A)^{1/2} V Ψ(B)^{1/2}` with `V` unitary;
//! 3. Horn on the factors `Ψ(A)^{1/2}` and `V Ψ(B)^{1/2}`;
//! 4. `Ψ(A # B) ≺_wlog Ψ(A)^{1/2↓} Ψ(B)^{1/2↓}`;
//! 5. transfer through the convex nondecreasing `g(eᵘ)`:
//!    `g(Ψ(A # B)) ≺_w g(Ψ(A)^{1/2↓} Ψ(B)^{1/2↓})`;
//! 6. geometric convexity: `≺_w g(Ψ(A))^{1/2↓} g(Ψ(B))^{1/2↓}`;
//! 7. Cauchy–Schwarz: `‖g(Ψ(A))^{1/2↓} g(Ψ(B))^{1/2↓}‖ ≤ ‖g(Ψ(A))‖^{1/2} ‖g(Ψ(B))‖^{1/2}`;
//! 8. end to end: midpoint log-convexity of the functional.

use serde::{Deserialize, Serialize};

use crate::check::CheckResult;
use crate::error::{Error, Result};
use crate::geo_convex::ScalarFn;
use crate::geometry::{geomean, weighted_geomean};
use crate::majorization::{check_horn, log_majorize_values_slack, weak_majorize_logs_slack};
use crate::maps::{check_ando, check_unitary_factorization, unitary_factor, PosMap};
use crate::norms::log_cauchy_schwarz;
use crate::spectral::{CMatrix, HermitianMatrix, SpdMatrix};

use super::functional::{check_midpoint_logconvex, log_g_values, Functional};
use super::instance::GeodesicInstance;

pub const STEP_NAMES: [&str; 8] =
    ["ando", "unitary", "horn", "wlog", "transfer", "geo_convex", "cauchy_schwarz", "end_to_end"];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainStep {
    pub name: String,
    pub result: CheckResult,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProofChain {
    pub steps: Vec<ChainStep>,
}

impl ProofChain {
    pub fn step(&self, name: &str) -> Option<&CheckResult> {
        self.steps.iter().find(|s| s.name == name).map(|s| &s.result)
    }

    pub fn end_to_end(&self) -> &CheckResult {
        self.step("end_to_end").expect("chain always has an end-to-end step")
    }

    /// All steps combined: slack is the worst step margin, components are the
    /// per-step slacks in [`STEP_NAMES`] order.
    pub fn overall(&self) -> CheckResult {
        let mut worst = CheckResult::worst_of(self.steps.iter().map(|s| s.result.clone())).expect("non-empty chain");
        worst.components = self.steps.iter().map(|s| s.result.slack).collect();
        let failed: Vec<&str> = self.steps.iter().filter(|s| !s.result.passed).map(|s| s.name.as_str()).collect();
        worst.witness = Some(serde_json::json!({ "failed_steps": failed }));
        worst
    }
}

fn block_diagonal(blocks: &[SpdMatrix]) -> Result<SpdMatrix> {
    let n = blocks[0].dim();
    let mut m = CMatrix::zeros(n * blocks.len(), n * blocks.len());
    for (i, b) in blocks.iter().enumerate() {
        m.view_mut((i * n, i * n), (n, n)).copy_from(b.matrix());
    }
    SpdMatrix::new(HermitianMatrix::hermitized(m))
}

fn lift(inst: &GeodesicInstance, t: &[f64]) -> Result<SpdMatrix> {
    if t.len() != inst.pairs.len() {
        return Err(Error::DimensionMismatch { expected: inst.pairs.len(), found: t.len() });
    }
    let blocks = inst
        .pairs
        .iter()
        .zip(t)
        .map(|((a, b), &ti)| weighted_geomean(a, b, ti))
        .collect::<Result<Vec<_>>>()?;
    block_diagonal(&blocks)
}

/// Runs every step at tolerance `tol` (relative, log-relative for the
/// majorization steps).
pub fn proof_chain(inst: &GeodesicInstance, s: &[f64], t: &[f64], tol: f64) -> Result<ProofChain> {
    let a = lift(inst, s)?;
    let b = lift(inst, t)?;
    let psi = PosMap::block_sum(inst.map.clone(), inst.pairs.len())?;
    let pa = psi.apply_spd(&a)?;
    let pb = psi.apply_spd(&b)?;
    let mean_image = psi.apply(geomean(&a, &b)?.as_hermitian())?;
    let g = &inst.g;

    let ando = check_ando(&psi, &a, &b, tol)?;
    let unitary = check_unitary_factorization(&psi, &a, &b, tol)?;

    let v = unitary_factor(&pa, &pb)?;
    let horn = check_horn(pa.sqrt()?.matrix(), &(v * pb.sqrt()?.matrix()), tol)?;

    let (la, lb) = (pa.spectrum().eigenvalues(), pb.spectrum().eigenvalues());
    let roots: Vec<f64> = la.iter().zip(lb).map(|(x, y)| (x * y).sqrt()).collect();
    let lower: Vec<f64> = mean_image.eig()?.eigenvalues().iter().map(|&x| x.max(0.0)).collect();
    let wlog = log_majorize_values_slack(&lower, &roots, tol)?;

    let g_lower = log_g_values(&lower, g)?;
    let g_roots = log_g_values(&roots, g)?;
    let transfer = weak_majorize_logs_slack(&g_lower, &g_roots, tol)?;

    // position by position: ln g(√(aⱼbⱼ)) against (ln g(aⱼ) + ln g(bⱼ)) / 2
    let per_root = roots.iter().map(|&r| g.log_eval(r)).collect::<Result<Vec<_>>>()?;
    let ga = la.iter().map(|&x| g.log_eval(x)).collect::<Result<Vec<_>>>()?;
    let gb = lb.iter().map(|&x| g.log_eval(x)).collect::<Result<Vec<_>>>()?;
    let half: Vec<f64> = ga.iter().zip(&gb).map(|(x, y)| (x + y) / 2.0).collect();
    let geo_convex = weak_majorize_logs_slack(&per_root, &half, tol)?;

    let cauchy_schwarz = log_cauchy_schwarz(inst.norm, &ga, &gb, tol)?;
    let end_to_end = check_midpoint_logconvex(|x| inst.log_value(x), s, t, tol)?;

    let results = [ando, unitary, horn, wlog, transfer, geo_convex, cauchy_schwarz, end_to_end];
    Ok(ProofChain {
        steps: STEP_NAMES
            .iter()
            .zip(results)
            .map(|(name, result)| ChainStep { name: name.to_string(), result })
            .collect(),
    })
}
