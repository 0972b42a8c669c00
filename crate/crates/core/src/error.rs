use thiserror::Error;

/// Errors raised by matrix construction, spectral calculus and the verification lab.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix dimension must be at least 1")]
    EmptyMatrix,

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("matrix is not Hermitian: asymmetry {asymmetry:.3e} exceeds {limit:.3e}")]
    NotHermitian { asymmetry: f64, limit: f64 },

    #[error("matrix is not positive definite: eigenvalues in [{min:.6e}, {max:.6e}], floor {floor:.3e}")]
    NotPositiveDefinite { min: f64, max: f64, floor: f64 },

    #[error("matrix is not positive semidefinite: smallest eigenvalue {min:.6e}")]
    NotPositiveSemidefinite { min: f64 },

    #[error("eigensolver did not converge (dim {dim}, Frobenius norm {norm:.3e})")]
    NonConvergence { dim: usize, norm: f64 },

    #[error("eigenvalue {eigenvalue:.6e} lies outside the domain {domain}")]
    Domain { eigenvalue: f64, domain: String },

    #[error("value out of floating-point range: {0}")]
    Range(String),

    #[error("degenerate matrix: {0}")]
    Degenerate(String),

    #[error("matrix is not invertible: smallest singular value ratio {ratio:.3e} below {floor:.3e}")]
    Singular { ratio: f64, floor: f64 },

    #[error("matrices do not commute: residual {residual:.3e} exceeds {limit:.3e}")]
    NotCommuting { residual: f64, limit: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// Overflow and degeneracy failures, as opposed to violated inequalities or bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NonConvergence { .. }
                | Error::Range(_)
                | Error::Degenerate(_)
                | Error::Domain { .. }
                | Error::NotPositiveDefinite { .. }
                | Error::NonFinite
        )
    }
}
