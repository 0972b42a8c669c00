//! Complex Hermitian linear algebra: validated matrix types, the Hermitian
//! eigendecomposition and the spectral calculus built on it.
//!
//! Every matrix function in the crate (powers, `g(A)`, logarithms) goes
//! through [`eig_hermitian`] followed by [`SpectralDecomposition::compose`];
//! there is no second evaluation path.

use std::fmt;

use nalgebra::{Complex, DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;

/// Relative eigenvalue floor separating positive definite matrices from
/// numerically singular ones: `λ_min > dim · EPS_PD · λ_max`.
pub const EPS_PD: f64 = 1e-12;

/// Maximum relative asymmetry (operator norm) tolerated when building a
/// [`HermitianMatrix`] from a raw matrix.
pub const HERMITIAN_REL_TOL: f64 = 1e-8;

/// Relative tolerance for reconstruction checks `U Λ U* ≈ A`.
pub fn rtol_recon(dim: usize) -> f64 {
    1e-11 * dim as f64
}

/// A dense complex matrix that is exactly self-adjoint.
#[derive(Clone, Debug)]
pub struct HermitianMatrix {
    m: CMatrix,
    asymmetry: f64,
}

// the asymmetry is a construction diagnostic, not part of the value
impl PartialEq for HermitianMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m
    }
}

impl HermitianMatrix {
    /// Replaces `m` by `(m + m*)/2`. Fails if the discarded skew part exceeds
    /// `HERMITIAN_REL_TOL · ‖m‖_op`.
    pub fn new(m: CMatrix) -> Result<Self> {
        check_square(&m)?;
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let adj = m.adjoint();
        let skew = (&m - &adj) * C64::new(0.5, 0.0);
        let skew_fro = skew.norm();
        if skew_fro > 0.0 {
            let n = m.nrows() as f64;
            // ‖K‖_op ≤ ‖K‖_F and ‖M‖_F/√n ≤ ‖M‖_op, so this bound is sufficient.
            if skew_fro > HERMITIAN_REL_TOL * m.norm() / n.sqrt() {
                let skew_op = hermitian_op_norm(&(skew.clone() * C64::new(0.0, 1.0)))?;
                let m_op = general_op_norm(&m)?;
                if skew_op > HERMITIAN_REL_TOL * m_op {
                    return Err(Error::NotHermitian {
                        asymmetry: skew_op,
                        limit: HERMITIAN_REL_TOL * m_op,
                    });
                }
            }
        }
        let h = (&m + &adj) * C64::new(0.5, 0.0);
        Ok(HermitianMatrix {
            m: h,
            asymmetry: skew_fro,
        })
    }

    /// Symmetrizes without the asymmetry check. Only for matrices that are
    /// Hermitian by construction up to round-off.
    pub(crate) fn hermitized(m: CMatrix) -> Self {
        let adj = m.adjoint();
        let skew_fro = ((&m - &adj) * C64::new(0.5, 0.0)).norm();
        HermitianMatrix {
            m: (&m + &adj) * C64::new(0.5, 0.0),
            asymmetry: skew_fro,
        }
    }

    pub fn identity(dim: usize) -> Self {
        HermitianMatrix {
            m: CMatrix::identity(dim, dim),
            asymmetry: 0.0,
        }
    }

    pub fn from_diagonal(values: &[f64]) -> Self {
        let n = values.len();
        let mut m = CMatrix::zeros(n, n);
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = C64::new(v, 0.0);
        }
        HermitianMatrix { m, asymmetry: 0.0 }
    }

    /// Builds from row-major real entries (real symmetric special case).
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::NotSquare {
                rows: n,
                cols: rows.first().map_or(0, |r| r.len()),
            });
        }
        Self::new(CMatrix::from_fn(n, n, |i, j| C64::new(rows[i][j], 0.0)))
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> CMatrix {
        self.m
    }

    /// Frobenius norm of the skew part discarded at construction.
    pub fn asymmetry(&self) -> f64 {
        self.asymmetry
    }

    pub fn eig(&self) -> Result<SpectralDecomposition> {
        eig_hermitian(self)
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.m[(i, i)].re).sum()
    }

    pub fn scale(&self, c: f64) -> Self {
        HermitianMatrix {
            m: &self.m * C64::new(c, 0.0),
            asymmetry: 0.0,
        }
    }

    pub fn add(&self, other: &HermitianMatrix) -> Result<Self> {
        check_same_dim(self.dim(), other.dim())?;
        Ok(HermitianMatrix {
            m: &self.m + &other.m,
            asymmetry: 0.0,
        })
    }

    pub fn sub(&self, other: &HermitianMatrix) -> Result<Self> {
        check_same_dim(self.dim(), other.dim())?;
        Ok(HermitianMatrix {
            m: &self.m - &other.m,
            asymmetry: 0.0,
        })
    }

    /// Sum of a non-empty family of equally sized Hermitian matrices.
    pub fn sum<'a, I>(terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a HermitianMatrix>,
    {
        let mut iter = terms.into_iter();
        let first = iter
            .next()
            .ok_or_else(|| Error::Precondition("empty sum".into()))?;
        let mut acc = first.m.clone();
        for t in iter {
            check_same_dim(first.dim(), t.dim())?;
            acc += &t.m;
        }
        Ok(HermitianMatrix {
            m: acc,
            asymmetry: 0.0,
        })
    }

    /// Largest absolute eigenvalue.
    pub fn op_norm(&self) -> Result<f64> {
        let d = self.eig()?;
        Ok(d.max().abs().max(d.min().abs()))
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(self.eig()?.min())
    }

    /// True if no eigenvalue is below `-tol · ‖A‖_op`.
    pub fn is_psd(&self, tol: f64) -> Result<bool> {
        let d = self.eig()?;
        let scale = d.max().abs().max(d.min().abs());
        Ok(d.min() >= -tol * scale)
    }

    pub fn is_diagonal(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| i == j || self.m[(i, j)] == C64::new(0.0, 0.0)))
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.m[(i, i)].re).collect()
    }

    /// Spectral calculus, see [`apply_scalar_function`].
    pub fn map_spectrum<F: Fn(f64) -> f64>(&self, f: F, domain: Interval) -> Result<Self> {
        apply_scalar_function(self, f, domain)
    }
}

/// Eigenvalues in nonincreasing order with a unitary matrix of eigenvectors
/// (as columns).
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    eigenvectors: CMatrix,
}

impl SpectralDecomposition {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &CMatrix {
        &self.eigenvectors
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues[self.eigenvalues.len() - 1]
    }

    /// `U · diag(values) · U*`, with `values` aligned to the stored eigenvalues.
    pub fn compose(&self, values: &[f64]) -> CMatrix {
        debug_assert_eq!(values.len(), self.dim());
        let mut scaled = self.eigenvectors.clone();
        for (j, &v) in values.iter().enumerate() {
            for z in scaled.column_mut(j).iter_mut() {
                *z *= v;
            }
        }
        scaled * self.eigenvectors.adjoint()
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.compose(&self.eigenvalues)
    }
}

/// Hermitian eigendecomposition with eigenvalues sorted nonincreasing.
pub fn eig_hermitian(a: &HermitianMatrix) -> Result<SpectralDecomposition> {
    let n = a.dim();
    if a.m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Range("matrix has non-finite entries".into()));
    }
    if n == 1 {
        return Ok(SpectralDecomposition {
            eigenvalues: vec![a.m[(0, 0)].re],
            eigenvectors: CMatrix::identity(1, 1),
        });
    }
    let norm = a.m.norm();
    let eig = SymmetricEigen::try_new(a.m.clone(), f64::EPSILON, 1000 * n.max(16))
        .ok_or(Error::NonConvergence { dim: n, norm })?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    if eigenvalues.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonConvergence { dim: n, norm });
    }
    let eigenvectors = CMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// A real interval used as the domain of a scalar function.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval {
    pub const REAL: Interval = Interval {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
        lo_closed: false,
        hi_closed: false,
    };

    pub const POSITIVE: Interval = Interval {
        lo: 0.0,
        hi: f64::INFINITY,
        lo_closed: false,
        hi_closed: false,
    };

    pub const NONNEGATIVE: Interval = Interval {
        lo: 0.0,
        hi: f64::INFINITY,
        lo_closed: true,
        hi_closed: false,
    };

    pub fn closed(lo: f64, hi: f64) -> Self {
        Interval {
            lo,
            hi,
            lo_closed: true,
            hi_closed: true,
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        let above = if self.lo_closed { x >= self.lo } else { x > self.lo };
        let below = if self.hi_closed { x <= self.hi } else { x < self.hi };
        above && below
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}, {}{}",
            if self.lo_closed { '[' } else { '(' },
            self.lo,
            self.hi,
            if self.hi_closed { ']' } else { ')' }
        )
    }
}

/// `U · diag(f(λᵢ)) · U*`. Every eigenvalue must lie in `domain` and every
/// `f(λᵢ)` must be finite.
pub fn apply_scalar_function<F: Fn(f64) -> f64>(
    a: &HermitianMatrix,
    f: F,
    domain: Interval,
) -> Result<HermitianMatrix> {
    let d = a.eig()?;
    let values = mapped_values(&d, &f, domain)?;
    Ok(HermitianMatrix::hermitized(d.compose(&values)))
}

fn mapped_values<F: Fn(f64) -> f64>(
    d: &SpectralDecomposition,
    f: &F,
    domain: Interval,
) -> Result<Vec<f64>> {
    d.eigenvalues()
        .iter()
        .map(|&l| {
            if !domain.contains(l) {
                return Err(Error::Domain {
                    eigenvalue: l,
                    domain: domain.to_string(),
                });
            }
            let v = f(l);
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::Range(format!("f({l:e}) = {v}")))
            }
        })
        .collect()
}

/// A Hermitian positive definite matrix together with its spectral
/// decomposition.
#[derive(Clone, Debug, PartialEq)]
pub struct SpdMatrix {
    base: HermitianMatrix,
    spectrum: SpectralDecomposition,
}

impl SpdMatrix {
    pub fn new(base: HermitianMatrix) -> Result<Self> {
        let spectrum = base.eig()?;
        validate_pd(&spectrum)?;
        Ok(SpdMatrix { base, spectrum })
    }

    pub fn from_matrix(m: CMatrix) -> Result<Self> {
        Self::new(HermitianMatrix::new(m)?)
    }

    pub fn identity(dim: usize) -> Self {
        SpdMatrix {
            base: HermitianMatrix::identity(dim),
            spectrum: SpectralDecomposition {
                eigenvalues: vec![1.0; dim],
                eigenvectors: CMatrix::identity(dim, dim),
            },
        }
    }

    pub fn from_diagonal(values: &[f64]) -> Result<Self> {
        Self::new(HermitianMatrix::from_diagonal(values))
    }

    /// Matrix with prescribed eigenvalues (any order) in the basis `u`.
    pub(crate) fn from_eigen(u: &CMatrix, values: &[f64]) -> Result<Self> {
        let mut order: Vec<usize> = (0..values.len()).collect();
        order.sort_by(|&i, &j| values[j].total_cmp(&values[i]));
        let spectrum = SpectralDecomposition {
            eigenvalues: order.iter().map(|&i| values[i]).collect(),
            eigenvectors: CMatrix::from_fn(u.nrows(), u.ncols(), |r, c| u[(r, order[c])]),
        };
        validate_pd(&spectrum)?;
        let base = HermitianMatrix::hermitized(spectrum.reconstruct());
        Ok(SpdMatrix { base, spectrum })
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn as_hermitian(&self) -> &HermitianMatrix {
        &self.base
    }

    pub fn into_hermitian(self) -> HermitianMatrix {
        self.base
    }

    pub fn matrix(&self) -> &CMatrix {
        self.base.matrix()
    }

    pub fn spectrum(&self) -> &SpectralDecomposition {
        &self.spectrum
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.spectrum.min()
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.spectrum.max()
    }

    pub fn condition_number(&self) -> f64 {
        self.spectrum.max() / self.spectrum.min()
    }

    pub fn power(&self, t: f64) -> Result<SpdMatrix> {
        fractional_power(self, t)
    }

    pub fn sqrt(&self) -> Result<SpdMatrix> {
        fractional_power(self, 0.5)
    }

    pub fn inverse(&self) -> Result<SpdMatrix> {
        fractional_power(self, -1.0)
    }

    /// `U · diag(f(λᵢ)) · U*` reusing the cached decomposition.
    pub fn map_spectrum<F: Fn(f64) -> f64>(&self, f: F, domain: Interval) -> Result<HermitianMatrix> {
        let values = mapped_values(&self.spectrum, &f, domain)?;
        Ok(HermitianMatrix::hermitized(self.spectrum.compose(&values)))
    }
}

fn validate_pd(d: &SpectralDecomposition) -> Result<()> {
    let (min, max) = (d.min(), d.max());
    let floor = d.dim() as f64 * EPS_PD * max;
    if !(min > 0.0 && min > floor && max.is_finite()) {
        return Err(Error::NotPositiveDefinite { min, max, floor });
    }
    Ok(())
}

/// `A^t` through the eigendecomposition. `t = 0` and `t = 1` return `I` and
/// `A` exactly.
pub fn fractional_power(a: &SpdMatrix, t: f64) -> Result<SpdMatrix> {
    if !t.is_finite() {
        return Err(Error::Range(format!("exponent {t}")));
    }
    if t == 0.0 {
        return Ok(SpdMatrix::identity(a.dim()));
    }
    if t == 1.0 {
        return Ok(a.clone());
    }
    let values: Vec<f64> = a.spectrum.eigenvalues().iter().map(|l| l.powf(t)).collect();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Range(format!(
            "A^{t} overflows (eigenvalues in [{:e}, {:e}])",
            a.min_eigenvalue(),
            a.max_eigenvalue()
        )));
    }
    SpdMatrix::from_eigen(a.spectrum.eigenvectors(), &values).map_err(|e| match e {
        Error::NotPositiveDefinite { min, max, .. } => Error::Degenerate(format!(
            "A^{t} has eigenvalues in [{min:e}, {max:e}] (condition of A: {:e})",
            a.condition_number()
        )),
        other => other,
    })
}

/// Operator norm of a Hermitian matrix given as a raw complex matrix.
pub(crate) fn hermitian_op_norm(m: &CMatrix) -> Result<f64> {
    HermitianMatrix::hermitized(m.clone()).op_norm()
}

/// Largest singular value of a general square matrix.
pub fn general_op_norm(m: &CMatrix) -> Result<f64> {
    Ok(singular_values(m)?[0])
}

/// Singular values (nonincreasing) by a direct SVD; going through `M*M`
/// would square the condition number and spoil the small ones.
pub fn singular_values(m: &CMatrix) -> Result<Vec<f64>> {
    check_square(m)?;
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    let svd = m.clone().try_svd(false, false, f64::EPSILON, 10_000).ok_or_else(|| Error::NonConvergence {
        dim: m.nrows(),
        norm: m.norm(),
    })?;
    let mut sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok(sv)
}

/// Operator norm of `AB − BA`.
pub fn commutator_norm(a: &CMatrix, b: &CMatrix) -> Result<f64> {
    let k = a * b - b * a;
    // AB − BA is skew-Hermitian for Hermitian A, B; i·K is Hermitian.
    hermitian_op_norm(&(k * C64::new(0.0, 1.0)))
}

/// Relative Frobenius distance `‖a − b‖_F / max(‖b‖_F, tiny)`.
pub fn rel_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    let scale = b.norm().max(f64::MIN_POSITIVE);
    (a - b).norm() / scale
}

pub(crate) fn check_square(m: &CMatrix) -> Result<()> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Err(Error::EmptyMatrix);
    }
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(())
}

pub(crate) fn check_same_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_spd, random_hermitian, rng_from_seed};

    fn diag(v: &[f64]) -> HermitianMatrix {
        HermitianMatrix::from_diagonal(v)
    }

    #[test]
    fn identity_spectrum() {
        let d = HermitianMatrix::identity(3).eig().unwrap();
        assert_eq!(d.eigenvalues(), &[1.0, 1.0, 1.0]);
        let u = d.eigenvectors();
        assert!(rel_diff(&(u.adjoint() * u), &CMatrix::identity(3, 3)) < 1e-14);
    }

    #[test]
    fn diagonal_sorted_descending() {
        let d = diag(&[1.0, 4.0]).eig().unwrap();
        assert_eq!(d.eigenvalues(), &[4.0, 1.0]);
    }

    #[test]
    fn random_reconstruction_residual() {
        let mut rng = rng_from_seed(11);
        let a = random_hermitian(5, &mut rng);
        let d = a.eig().unwrap();
        let resid = general_op_norm(&(d.reconstruct() - a.matrix())).unwrap();
        assert!(resid / a.op_norm().unwrap() < 1e-12, "{resid}");
        let u = d.eigenvectors();
        assert!(rel_diff(&(u.adjoint() * u), &CMatrix::identity(5, 5)) < rtol_recon(5));
        assert!(d.eigenvalues().windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn hermitian_construction_resymmetrizes() {
        let mut m = CMatrix::from_fn(2, 2, |i, j| C64::new((i + 2 * j) as f64, (i as f64) - (j as f64)));
        m[(0, 1)] = C64::new(2.0, -1.0);
        m[(1, 0)] = C64::new(2.0 + 1e-12, 1.0);
        let h = HermitianMatrix::new(m).unwrap();
        assert_eq!(h.matrix()[(0, 1)], h.matrix()[(1, 0)].conj());
        assert!(h.asymmetry() > 0.0);
    }

    #[test]
    fn hermitian_rejects_large_asymmetry() {
        let m = CMatrix::from_fn(2, 2, |i, j| C64::new(if i < j { 1.0 } else { 0.0 }, 0.0));
        assert!(matches!(HermitianMatrix::new(m), Err(Error::NotHermitian { .. })));
        assert!(matches!(HermitianMatrix::new(CMatrix::zeros(0, 0)), Err(Error::EmptyMatrix)));
    }

    #[test]
    fn sqrt_of_diagonal() {
        let r = apply_scalar_function(&diag(&[1.0, 4.0]), f64::sqrt, Interval::NONNEGATIVE).unwrap();
        assert!(rel_diff(r.matrix(), diag(&[1.0, 2.0]).matrix()) < 1e-15);
    }

    #[test]
    fn identity_function_is_identity() {
        let mut rng = rng_from_seed(5);
        let a = random_hermitian(4, &mut rng);
        let r = a.map_spectrum(|x| x, Interval::REAL).unwrap();
        assert!(rel_diff(r.matrix(), a.matrix()) < 1e-13);
    }

    #[test]
    fn exp_log_round_trip() {
        let a = random_spd(4, 3, 20.0).unwrap();
        let l = a.as_hermitian().map_spectrum(f64::ln, Interval::POSITIVE).unwrap();
        let back = l.map_spectrum(f64::exp, Interval::REAL).unwrap();
        assert!(rel_diff(back.matrix(), a.matrix()) < 1e-10);
    }

    #[test]
    fn domain_error_reports_eigenvalue() {
        let err = diag(&[1.0, -2.0]).map_spectrum(f64::ln, Interval::POSITIVE).unwrap_err();
        match err {
            Error::Domain { eigenvalue, .. } => assert_eq!(eigenvalue, -2.0),
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn function_result_commutes() {
        let a = random_spd(4, 9, 10.0).unwrap();
        let f = a.map_spectrum(|x| x.powi(3) + x.ln(), Interval::POSITIVE).unwrap();
        let c = commutator_norm(a.matrix(), f.matrix()).unwrap();
        assert!(c < 1e-11 * a.max_eigenvalue().powi(4), "{c}");
    }

    #[test]
    fn power_of_diagonal() {
        let a = SpdMatrix::from_diagonal(&[4.0, 9.0]).unwrap();
        let r = a.power(0.5).unwrap();
        assert!(rel_diff(r.matrix(), diag(&[2.0, 3.0]).matrix()) < 1e-15);
    }

    #[test]
    fn power_minus_one_is_inverse() {
        let a = random_spd(5, 1, 50.0).unwrap();
        let inv = a.power(-1.0).unwrap();
        let prod = a.matrix() * inv.matrix();
        assert!(rel_diff(&prod, &CMatrix::identity(5, 5)) < 1e-10);
    }

    #[test]
    fn power_round_trip() {
        let a = random_spd(5, 2, 30.0).unwrap();
        let back = a.power(0.3).unwrap().power(1.0 / 0.3).unwrap();
        assert!(rel_diff(back.matrix(), a.matrix()) < 1e-9);
    }

    #[test]
    fn power_endpoints_exact() {
        let a = random_spd(3, 4, 5.0).unwrap();
        assert_eq!(a.power(1.0).unwrap().matrix(), a.matrix());
        assert_eq!(a.power(0.0).unwrap().matrix(), &CMatrix::identity(3, 3));
    }

    #[test]
    fn power_degeneracy_is_reported() {
        let a = SpdMatrix::from_diagonal(&[1.0, 1e-5]).unwrap();
        assert!(matches!(a.power(3.0), Err(Error::Degenerate(_))));
        let b = SpdMatrix::from_diagonal(&[2.0, 1.0]).unwrap();
        assert!(matches!(b.power(1e300), Err(Error::Range(_))));
    }

    #[test]
    fn spd_rejects_singular() {
        assert!(matches!(
            SpdMatrix::from_diagonal(&[1.0, 0.0]),
            Err(Error::NotPositiveDefinite { .. })
        ));
        assert!(SpdMatrix::from_diagonal(&[-1.0, -2.0]).is_err());
    }
}
