//! Consequences of the log-convexity theorems, each checked in log form.

use serde_json::json;

use crate::check::CheckResult;
use crate::error::{Error, Result};
use crate::geo_convex::{GeoFn, PhiFn, ScalarFn};
use crate::geometry::COMMUTE_TOL;
use crate::maps::PosMap;
use crate::norms::{log_sum_exp, NormSpec};
use crate::spectral::{commutator_norm, HermitianMatrix, SpdMatrix};

use super::functional::{at_point, log_functional_of_sum, log_g_values, log_norm_of_g, midpoint, Functional};
use super::instance::{CongruenceInstance, GeodesicInstance};

/// Smallest exponent accepted by [`check_det_limit`].
pub const ALPHA_MIN: f64 = 1e-8;

/// Default exponents `1, 1/2, …, 1/64` for the determinant limit.
pub fn default_alphas() -> Vec<f64> {
    (0..7).map(|k| 0.5f64.powi(k)).collect()
}

fn scaled(slack: f64, tol: f64, terms: &[f64]) -> CheckResult {
    let scale = terms.iter().fold(1f64, |m, v| m.max(v.abs()));
    CheckResult::new(slack, tol * scale)
}

/// `‖g(Z∘I)‖² ≤ ‖g(Z∘A)‖ ‖g(Z∘A⁻¹)‖` for PSD `Z` with positive diagonal.
pub fn check_corollary_schur(z: &HermitianMatrix, a: &SpdMatrix, g: &GeoFn, norm: NormSpec, tol: f64) -> Result<CheckResult> {
    let map = PosMap::schur(z.clone())?;
    let log_at = |m: &SpdMatrix| log_norm_of_g(&map.apply_spd(m)?, g, norm);
    let l_id = log_at(&SpdMatrix::identity(a.dim()))?;
    let l_a = log_at(a)?;
    let l_inv = log_at(&a.inverse()?)?;
    let slack = (l_a + l_inv) / 2.0 - l_id;
    Ok(scaled(slack, tol, &[l_id, l_a, l_inv]).with_witness(json!({ "log_norms": [l_id, l_a, l_inv] })))
}

/// `‖g(Φ(Σ Xᵢ*Xᵢ))‖² ≤ ‖g(Φ(Σ Xᵢ*AᵢXᵢ))‖ ‖g(Φ(Σ Xᵢ*Aᵢ⁻¹Xᵢ))‖`, the
/// congruence functional at `t = 0, 1, −1`.
pub fn check_corollary_congruence(inst: &CongruenceInstance, tol: f64) -> Result<CheckResult> {
    let m = inst.terms.len();
    let at = |t: f64| inst.log_value(&vec![t; m]).map_err(at_point(&[t]));
    let (l0, l1, lm1) = (at(0.0)?, at(1.0)?, at(-1.0)?);
    let slack = (l1 + lm1) / 2.0 - l0;
    Ok(scaled(slack, tol, &[l0, l1, lm1]).with_witness(json!({ "log_norms": [l0, l1, lm1] })))
}

fn check_weights(weights: &[f64], len: usize) -> Result<()> {
    if weights.len() != len {
        return Err(Error::DimensionMismatch { expected: len, found: weights.len() });
    }
    let sum: f64 = weights.iter().sum();
    if weights.iter().any(|&w| !(w > 0.0)) || (sum - 1.0).abs() > 1e-12 {
        return Err(Error::Precondition(format!("weights must be positive and sum to 1, got sum {sum}")));
    }
    Ok(())
}

fn conjugate(p: f64) -> Result<f64> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::Precondition(format!("exponent p = {p} must exceed 1")));
    }
    Ok(p / (p - 1.0))
}

fn weighted_sum(terms: &[SpdMatrix], weights: &[f64], power: f64) -> Result<HermitianMatrix> {
    let parts = terms
        .iter()
        .zip(weights)
        .map(|(a, &w)| Ok(a.power(power)?.as_hermitian().scale(w)))
        .collect::<Result<Vec<_>>>()?;
    HermitianMatrix::sum(parts.iter())
}

/// `‖g(Σ λᵢAᵢ)‖ ≤ ‖g(I)‖^{1/q} ‖g(Σ λᵢAᵢᵖ)‖^{1/p}` with `1/p + 1/q = 1`.
pub fn check_corollary_weighted_power(
    a: &[SpdMatrix],
    weights: &[f64],
    p: f64,
    g: &GeoFn,
    norm: NormSpec,
    tol: f64,
) -> Result<CheckResult> {
    let first = a.first().ok_or_else(|| Error::Precondition("need at least one matrix".into()))?;
    check_weights(weights, a.len())?;
    let q = conjugate(p)?;
    let id = PosMap::identity(first.dim())?;
    let lhs = log_functional_of_sum(weighted_sum(a, weights, 1.0)?, &id, g, norm)?;
    let l_id = log_norm_of_g(&SpdMatrix::identity(first.dim()), g, norm)?;
    let l_pow = log_functional_of_sum(weighted_sum(a, weights, p)?, &id, g, norm)?;
    let rhs = l_id / q + l_pow / p;
    Ok(scaled(rhs - lhs, tol, &[lhs, l_id, l_pow]).with_witness(json!({ "lhs": lhs, "rhs": rhs })))
}

/// Logs of `‖g(Σ AᵢBᵢ)‖`, `‖g(Σ Aᵢᵖ)‖`, `‖g(Σ Bᵢ^q)‖` with `AᵢBᵢ` formed as
/// the Hermitian `Aᵢ^{1/2} Bᵢ Aᵢ^{1/2}`, which equals `AᵢBᵢ` for commuting
/// pairs. Does not check commutation.
pub(crate) fn holder_log_terms(
    a: &[SpdMatrix],
    b: &[SpdMatrix],
    p: f64,
    g: &dyn ScalarFn,
    norm: NormSpec,
) -> Result<(f64, f64, f64)> {
    let first = a.first().ok_or_else(|| Error::Precondition("need at least one pair".into()))?;
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch { expected: a.len(), found: b.len() });
    }
    let q = conjugate(p)?;
    let id = PosMap::identity(first.dim())?;
    let products = a
        .iter()
        .zip(b)
        .map(|(ai, bi)| {
            let h = ai.sqrt()?;
            Ok(HermitianMatrix::hermitized(h.matrix() * bi.matrix() * h.matrix()))
        })
        .collect::<Result<Vec<_>>>()?;
    let power_sum = |ms: &[SpdMatrix], e: f64| -> Result<HermitianMatrix> {
        let parts = ms.iter().map(|m| Ok(m.power(e)?.into_hermitian())).collect::<Result<Vec<_>>>()?;
        HermitianMatrix::sum(parts.iter())
    };
    let lhs = log_functional_of_sum(HermitianMatrix::sum(products.iter())?, &id, g, norm)?;
    let la = log_functional_of_sum(power_sum(a, p)?, &id, g, norm)?;
    let lb = log_functional_of_sum(power_sum(b, q)?, &id, g, norm)?;
    Ok((lhs, la, lb))
}

/// Log-form slack of the Hölder inequality without the commutation check,
/// for negative controls.
pub(crate) fn holder_unchecked(a: &[SpdMatrix], b: &[SpdMatrix], p: f64, g: &dyn ScalarFn, norm: NormSpec, tol: f64) -> Result<CheckResult> {
    let q = conjugate(p)?;
    let (lhs, la, lb) = holder_log_terms(a, b, p, g, norm)?;
    let rhs = la / p + lb / q;
    Ok(scaled(rhs - lhs, tol, &[lhs, la, lb]).with_witness(json!({ "lhs": lhs, "rhs": rhs })))
}

/// `‖g(Σ AᵢBᵢ)‖ ≤ ‖g(Σ Aᵢᵖ)‖^{1/p} ‖g(Σ Bᵢ^q)‖^{1/q}` for pairwise commuting
/// `Aᵢ`, `Bᵢ`.
pub fn check_corollary_holder(a: &[SpdMatrix], b: &[SpdMatrix], p: f64, g: &GeoFn, norm: NormSpec, tol: f64) -> Result<CheckResult> {
    for (ai, bi) in a.iter().zip(b) {
        let residual = commutator_norm(ai.matrix(), bi.matrix())?;
        let limit = COMMUTE_TOL * ai.max_eigenvalue() * bi.max_eigenvalue();
        if residual > limit {
            return Err(Error::NotCommuting { residual, limit });
        }
    }
    holder_unchecked(a, b, p, g, norm, tol)
}

/// `ln (n⁻¹ Σ e^{α xⱼ})^{1/α}`, the log of the power mean of `e^{xⱼ}`,
/// centred at the mean of `x` so that small `α` stays accurate. Wide spreads
/// go through log-sum-exp instead.
pub fn power_mean_log(log_values: &[f64], alpha: f64) -> f64 {
    let n = log_values.len() as f64;
    let c = log_values.iter().sum::<f64>() / n;
    let ys: Vec<f64> = log_values.iter().map(|x| alpha * (x - c)).collect();
    if ys.iter().all(|&y| y <= 1.0) {
        let m = ys.iter().map(|y| y.exp_m1()).sum::<f64>() / n;
        c + m.ln_1p() / alpha
    } else {
        c + (log_sum_exp(&ys) - n.ln()) / alpha
    }
}

/// `ln det^{1/n} g(M)`, the mean of `ln g(λⱼ(M))`.
pub fn log_det_root_of_g(values: &[f64], g: &dyn ScalarFn) -> Result<f64> {
    let logs = log_g_values(values, g)?;
    Ok(logs.iter().sum::<f64>() / logs.len() as f64)
}

/// The determinant limit behind the trace-form convexity:
///
/// 1. `(n⁻¹ Tr g^α(M))^{1/α}` decreases to `det^{1/n} g(M)` along the
///    decreasing `alphas`, with `M = Σ Aᵢ #_{sᵢ} Bᵢ`;
/// 2. `t ↦ det^{1/n} g(Σ Aᵢ #_{tᵢ} Bᵢ)` is midpoint log-convex between `s`
///    and `t`.
///
/// Components are normalized by `max(1, |ln det^{1/n} g|)`.
pub fn check_det_limit(inst: &GeodesicInstance, alphas: &[f64], s: &[f64], t: &[f64], tol: f64) -> Result<CheckResult> {
    if alphas.is_empty() || alphas.windows(2).any(|w| !(w[1] < w[0])) || alphas[0] <= 0.0 {
        return Err(Error::Precondition("alphas must be positive and strictly decreasing".into()));
    }
    if let Some(&a) = alphas.iter().find(|&&a| a < ALPHA_MIN) {
        return Err(Error::Range(format!("exponent α = {a:e} is below the floor {ALPHA_MIN:e}")));
    }
    let g = &inst.g;
    let eig = |x: &[f64]| -> Result<Vec<f64>> { Ok(inst.inner_sum(x)?.eig()?.eigenvalues().to_vec()) };
    let logs = log_g_values(&eig(s)?, g)?;
    let det = logs.iter().sum::<f64>() / logs.len() as f64;
    let errs: Vec<f64> = alphas.iter().map(|&a| power_mean_log(&logs, a) - det).collect();
    let norm = 1f64.max(det.abs());
    let mut components: Vec<f64> = errs.iter().map(|e| e / norm).collect();
    components.extend(errs.windows(2).map(|w| (w[0] - w[1]) / norm));

    let f = |x: &[f64]| log_det_root_of_g(&eig(x)?, g).map_err(at_point(x));
    let mid = midpoint(s, t);
    let (ds, dt, dm) = (f(s)?, f(t)?, f(&mid)?);
    components.push(((ds + dt) / 2.0 - dm) / 1f64.max(ds.abs()).max(dt.abs()).max(dm.abs()));

    let log_power_means: Vec<f64> = errs.iter().map(|e| e + det).collect();
    Ok(CheckResult::from_components(components, tol).with_witness(json!({
        "alphas": alphas,
        "log_power_means": log_power_means,
        "log_det_root": det,
    })))
}

/// Midpoint convexity of `t ↦ Tr φ(S(t))` with `φ = ln g`.
pub fn check_trace_convexity(inst: &dyn Functional, phi: &PhiFn, s: &[f64], t: &[f64], tol: f64) -> Result<CheckResult> {
    super::functional::check_midpoint_convex(|x| inst.trace_phi(phi, x), s, t, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lab::instance::{random_instance, Instance, InstanceKind, Structure};
    use crate::random::{random_psd, random_spd_with, rng_from_seed};
    use crate::spectral::CMatrix;

    const TOL: f64 = 1e-9;

    #[test]
    fn schur_identity_is_equality() {
        let mut rng = rng_from_seed(1);
        let z = random_psd(3, 3, &mut rng);
        let r = check_corollary_schur(&z, &SpdMatrix::identity(3), &GeoFn::Sinh, NormSpec::Trace, TOL).unwrap();
        assert_eq!(r.slack, 0.0);
    }

    #[test]
    fn schur_with_identity_multiplier() {
        let mut rng = rng_from_seed(2);
        for _ in 0..10 {
            let a = random_spd_with(4, 100.0, &mut rng).unwrap();
            for norm in [NormSpec::Trace, NormSpec::Operator, NormSpec::KyFan(2)] {
                let r = check_corollary_schur(&HermitianMatrix::identity(4), &a, &GeoFn::Power(2.0), norm, TOL).unwrap();
                assert!(r.passed);
            }
        }
    }

    #[test]
    fn schur_random_sinh_trace() {
        let mut rng = rng_from_seed(3);
        for _ in 0..20 {
            let z = random_psd(4, 2, &mut rng);
            let a = random_spd_with(4, 100.0, &mut rng).unwrap();
            assert!(check_corollary_schur(&z, &a, &GeoFn::Sinh, NormSpec::Trace, TOL).unwrap().passed);
        }
    }

    #[test]
    fn congruence_identity_terms_are_equality() {
        let Instance::Congruence(mut c) = random_instance(InstanceKind::Congruence, 2, 3, 4, 50.0, Structure::Generic).unwrap()
        else {
            panic!()
        };
        for t in &mut c.terms {
            t.a = SpdMatrix::identity(3);
        }
        assert!(check_corollary_congruence(&c, TOL).unwrap().slack.abs() < 1e-12);
    }

    #[test]
    fn congruence_single_identity_factor() {
        let mut rng = rng_from_seed(5);
        let a = random_spd_with(3, 100.0, &mut rng).unwrap();
        let c = CongruenceInstance::new(
            vec![super::super::instance::CongruenceTerm { a: a.clone(), x: CMatrix::identity(3, 3) }],
            PosMap::identity(3).unwrap(),
            GeoFn::Sinh,
            NormSpec::Operator,
        )
        .unwrap();
        let r = check_corollary_congruence(&c, TOL).unwrap();
        assert!(r.passed);
        // ‖g(I)‖² ≤ ‖g(A)‖‖g(A⁻¹)‖ by hand
        let rhs = a.max_eigenvalue().sinh() * (1.0 / a.min_eigenvalue()).sinh();
        assert!(1f64.sinh().powi(2) <= rhs);
    }

    #[test]
    fn weighted_power_cases() {
        let id = vec![SpdMatrix::identity(2); 3];
        let r = check_corollary_weighted_power(&id, &[0.2, 0.3, 0.5], 3.0, &GeoFn::Sinh, NormSpec::Trace, TOL).unwrap();
        assert!(r.slack.abs() < 1e-13);
        // m = 1, scalar a: g(a) ≤ g(1)^{1/q} g(aᵖ)^{1/p}
        let (a, p) = (2.5f64, 3.0f64);
        let q = p / (p - 1.0);
        let r = check_corollary_weighted_power(&[SpdMatrix::from_diagonal(&[a]).unwrap()], &[1.0], p, &GeoFn::Sinh, NormSpec::Trace, TOL)
            .unwrap();
        let want = (1f64.sinh().ln() / q + a.powf(p).sinh().ln() / p) - a.sinh().ln();
        assert!((r.slack - want).abs() < 1e-13);
        assert!(r.passed);
        assert!(check_corollary_weighted_power(&id, &[0.5, 0.5, 0.5], 2.0, &GeoFn::Sinh, NormSpec::Trace, TOL).is_err());
        assert!(check_corollary_weighted_power(&id[..1], &[1.0], 1.0, &GeoFn::Sinh, NormSpec::Trace, TOL).is_err());
    }

    #[test]
    fn holder_scalar_is_classical() {
        let s = |v: f64| SpdMatrix::from_diagonal(&[v]).unwrap();
        let (a, b, p) = ([1.0, 2.0, 0.5], [3.0, 0.2, 1.0], 3.0);
        let q = p / (p - 1.0);
        let r = check_corollary_holder(&a.map(s), &b.map(s), p, &GeoFn::Identity, NormSpec::Trace, 1e-12).unwrap();
        let lhs: f64 = a.iter().zip(&b).map(|(x, y)| x * y).sum();
        let rhs = a.iter().map(|x: &f64| x.powf(p)).sum::<f64>().powf(1.0 / p) * b.iter().map(|y: &f64| y.powf(q)).sum::<f64>().powf(1.0 / q);
        assert!((r.slack - (rhs.ln() - lhs.ln())).abs() < 1e-14);
        // equality when bᵢ = aᵢ^{p−1}
        let b: Vec<SpdMatrix> = a.iter().map(|x: &f64| s(x.powf(p - 1.0))).collect();
        let r = check_corollary_holder(&a.map(s), &b, p, &GeoFn::Identity, NormSpec::Trace, 1e-12).unwrap();
        assert!(r.slack.abs() < 1e-12);
    }

    #[test]
    fn holder_identity_partner() {
        let mut rng = rng_from_seed(6);
        let a: Vec<SpdMatrix> = (0..3).map(|_| random_spd_with(3, 30.0, &mut rng).unwrap()).collect();
        let b = vec![SpdMatrix::identity(3); 3];
        assert!(check_corollary_holder(&a, &b, 2.0, &GeoFn::Sinh, NormSpec::Frobenius, TOL).unwrap().passed);
    }

    #[test]
    fn holder_rejects_noncommuting() {
        let mut rng = rng_from_seed(7);
        let a = random_spd_with(3, 30.0, &mut rng).unwrap();
        let b = random_spd_with(3, 30.0, &mut rng).unwrap();
        assert!(matches!(
            check_corollary_holder(&[a], &[b], 2.0, &GeoFn::Sinh, NormSpec::Trace, TOL),
            Err(Error::NotCommuting { .. })
        ));
    }

    #[test]
    fn power_mean_limits() {
        let logs = [1f64.ln(), 4f64.ln()];
        assert!((power_mean_log(&logs, 1.0).exp() - 2.5).abs() < 1e-14);
        let quarter = ((1.0 + 4f64.powf(0.25)) / 2.0).powf(4.0);
        assert!((power_mean_log(&logs, 0.25).exp() - quarter).abs() < 1e-13);
        assert!((quarter - 2.1232).abs() < 1e-4);
        assert!((power_mean_log(&logs, 1e-8).exp() - 2.0).abs() < 1e-7);
        let c = [3f64.ln(); 4];
        for a in default_alphas() {
            assert_eq!(power_mean_log(&c, a), 3f64.ln());
        }
    }

    #[test]
    fn det_limit_checks() {
        let Instance::Geodesic(g) = random_instance(InstanceKind::Geodesic, 2, 3, 8, 50.0, Structure::Generic).unwrap() else {
            panic!()
        };
        let r = check_det_limit(&g, &default_alphas(), &[0.2, -1.0], &[1.5, 0.3], TOL).unwrap();
        assert!(r.passed, "{:?}", r.components);
        assert!(matches!(check_det_limit(&g, &[1.0, 1e-9], &[0.0, 0.0], &[1.0, 1.0], TOL), Err(Error::Range(_))));
        assert!(check_det_limit(&g, &[0.5, 1.0], &[0.0, 0.0], &[1.0, 1.0], TOL).is_err());
    }

    #[test]
    fn det_limit_scalar_matrix() {
        let c = SpdMatrix::from_diagonal(&[2.0, 2.0]).unwrap();
        let g = GeodesicInstance::new(vec![(c.clone(), c)], PosMap::identity(2).unwrap(), GeoFn::Sinh, NormSpec::Trace).unwrap();
        let r = check_det_limit(&g, &default_alphas(), &[0.0], &[1.0], TOL).unwrap();
        assert!(r.components.iter().all(|c| c.abs() < 1e-15), "{:?}", r.components);
    }

    #[test]
    fn trace_convexity_random() {
        let Instance::Congruence(c) = random_instance(InstanceKind::Congruence, 2, 4, 9, 50.0, Structure::Generic).unwrap() else {
            panic!()
        };
        let phi = PhiFn::new("max(const:2, scale:3(pow:2))".parse().unwrap());
        assert!(check_trace_convexity(&c, &phi, &[-1.0, 2.0], &[1.5, -0.5], 1e-8).unwrap().passed);
    }
}
