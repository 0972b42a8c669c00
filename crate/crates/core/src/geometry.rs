//! Geodesics of the positive definite cone: weighted geometric means,
//! congruences and the polar-decomposition bridge between congruence
//! families `X* Aᵗ X` and geodesics `C #ₜ D`.

use crate::error::{Error, Result};
use crate::spectral::{
    commutator_norm, singular_values, CMatrix, HermitianMatrix, SpdMatrix, C64,
};

/// Relative commutation threshold `‖AB − BA‖ ≤ COMMUTE_TOL · ‖A‖‖B‖`.
pub const COMMUTE_TOL: f64 = 1e-10;

/// Smallest accepted ratio `σ_min / σ_max` for matrices that must be invertible.
pub const INVERTIBILITY_FLOOR: f64 = 1e-8;

fn degenerate(context: &str) -> impl Fn(Error) -> Error + '_ {
    move |e| match e {
        Error::NotPositiveDefinite { min, max, .. } => Error::Degenerate(format!(
            "{context} lost positivity (eigenvalues in [{min:e}, {max:e}])"
        )),
        Error::NonFinite => Error::Range(format!("{context} overflowed")),
        other => other,
    }
}

/// `A #ₜ B = A^{1/2} (A^{-1/2} B A^{-1/2})ᵗ A^{1/2}` for any real `t`.
///
/// The better-conditioned argument serves as the base, through
/// `A #ₜ B = B #₁₋ₜ A`; rounding in the base's inverse square root is what
/// limits accuracy.
pub fn weighted_geomean(a: &SpdMatrix, b: &SpdMatrix, t: f64) -> Result<SpdMatrix> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    if b.condition_number() < a.condition_number() {
        based_geomean(b, a, 1.0 - t)
    } else {
        based_geomean(a, b, t)
    }
}

fn based_geomean(a: &SpdMatrix, b: &SpdMatrix, t: f64) -> Result<SpdMatrix> {
    let spec = a.spectrum();
    let half: Vec<f64> = spec.eigenvalues().iter().map(|l| l.sqrt()).collect();
    let inv_half: Vec<f64> = half.iter().map(|h| 1.0 / h).collect();
    let a_half = spec.compose(&half);
    let a_inv_half = spec.compose(&inv_half);

    let inner = HermitianMatrix::hermitized(&a_inv_half * b.matrix() * &a_inv_half);
    let inner = SpdMatrix::new(inner).map_err(degenerate("A^{-1/2} B A^{-1/2}"))?;
    let inner_t = inner.power(t)?;
    let out = HermitianMatrix::hermitized(&a_half * inner_t.matrix() * &a_half);
    SpdMatrix::new(out).map_err(degenerate("A #_t B"))
}

/// The geometric mean `A # B = A #_{1/2} B`.
pub fn geomean(a: &SpdMatrix, b: &SpdMatrix) -> Result<SpdMatrix> {
    weighted_geomean(a, b, 0.5)
}

/// Fails unless `σ_min(X) / σ_max(X) > INVERTIBILITY_FLOOR`.
pub fn check_invertible(x: &CMatrix) -> Result<()> {
    let sv = singular_values(x)?;
    let ratio = sv[sv.len() - 1] / sv[0];
    if !(ratio > INVERTIBILITY_FLOOR) {
        return Err(Error::Singular { ratio, floor: INVERTIBILITY_FLOOR });
    }
    Ok(())
}

/// `X* A X` for invertible `X`.
pub fn congruence(x: &CMatrix, a: &HermitianMatrix) -> Result<HermitianMatrix> {
    if x.nrows() != a.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: x.nrows() });
    }
    check_invertible(x)?;
    Ok(HermitianMatrix::hermitized(x.adjoint() * a.matrix() * x))
}

pub fn congruence_spd(x: &CMatrix, a: &SpdMatrix) -> Result<SpdMatrix> {
    SpdMatrix::new(congruence(x, a.as_hermitian())?).map_err(degenerate("X* A X"))
}

/// `(C, D) = (X*X, X*AX)`, so that `X* Aᵗ X = C #ₜ D` for every `t`.
pub fn polar_geodesic_form(x: &CMatrix, a: &SpdMatrix) -> Result<(SpdMatrix, SpdMatrix)> {
    let c = congruence_spd(x, &SpdMatrix::identity(a.dim()))?;
    let d = congruence_spd(x, a)?;
    Ok((c, d))
}

/// `A^{1−t} Bᵗ` for commuting `A`, `B`, through a simultaneous
/// diagonalization.
pub fn commuting_weighted_geomean(a: &SpdMatrix, b: &SpdMatrix, t: f64) -> Result<SpdMatrix> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    let (na, nb) = (a.max_eigenvalue(), b.max_eigenvalue());
    let residual = commutator_norm(a.matrix(), b.matrix())?;
    let limit = COMMUTE_TOL * na * nb;
    if residual > limit {
        return Err(Error::NotCommuting { residual, limit });
    }
    // A generic combination separates every joint eigenspace.
    let c = 0.618_033_988_749_894_9 * na / nb;
    let combo = HermitianMatrix::hermitized(a.matrix() + b.matrix() * C64::new(c, 0.0));
    let u = combo.eig()?.eigenvectors().clone();
    let da = u.adjoint() * a.matrix() * &u;
    let db = u.adjoint() * b.matrix() * &u;
    let n = a.dim();
    let off = |m: &CMatrix| {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += m[(i, j)].norm_sqr();
                }
            }
        }
        s.sqrt()
    };
    if off(&da) > 1e-8 * na || off(&db) > 1e-8 * nb {
        return Err(Error::Degenerate("simultaneous diagonalization did not separate eigenspaces".into()));
    }
    let values: Vec<f64> = (0..n)
        .map(|i| da[(i, i)].re.powf(1.0 - t) * db[(i, i)].re.powf(t))
        .collect();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Range(format!("A^(1-t) B^t overflows at t = {t}")));
    }
    SpdMatrix::from_eigen(&u, &values).map_err(degenerate("A^(1-t) B^t"))
}
