//! Positive linear maps `Φ: 𝕄ₙ → 𝕄_d` and the checks used by the
//! log-convexity argument: positivity, Ando's inequality and the unitary
//! factorization of `Φ(A) # Φ(B)`.
//!
//! Maps print and parse in a config syntax:
//!
//! ```text
//! id:<n> | tr:<n> | schur:<file> | comp:<file> | csum:<file>,<file>,... | bsum(<map>, <m>)
//! ```
//!
//! where files hold matrices in the JSON format of [`crate::io`].

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::check::CheckResult;
use crate::error::{Error, Result};
use crate::geometry::geomean;
use crate::io::{self, MatrixJson};
use crate::random::{random_psd, rng_from_seed};
use crate::spectral::{general_op_norm, CMatrix, HermitianMatrix, SpdMatrix, C64};

/// Relative tolerance for PSD outputs: `λ_min(Φ(A)) ≥ −POSITIVITY_TOL · ‖Φ(A)‖`.
pub const POSITIVITY_TOL: f64 = 1e-10;

/// Tolerance for `‖V*V − I‖` when accepting compression isometries.
pub const ISOMETRY_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MapRepr", into = "MapRepr")]
pub enum PosMap {
    Identity { n: usize },
    /// `A ↦ Z ∘ A`; `Z` is checked PSD by [`PosMap::schur`].
    Schur { z: HermitianMatrix },
    /// `A ↦ Σ Xᵢ* A Xᵢ` with `n×d` factors.
    CongruenceSum { factors: Vec<CMatrix> },
    /// `A ↦ V* A V` for an `n×d` isometry `V`.
    Compression { v: CMatrix },
    /// `A ↦ Tr A` as a `1×1` matrix.
    Trace { n: usize },
    /// `[Aᵢⱼ] ↦ inner(Σ Aᵢᵢ)` on `m×m` block matrices.
    BlockSum { inner: Box<PosMap>, blocks: usize },
}

impl PosMap {
    pub fn identity(n: usize) -> Result<Self> {
        nonzero(n)?;
        Ok(PosMap::Identity { n })
    }

    pub fn trace(n: usize) -> Result<Self> {
        nonzero(n)?;
        Ok(PosMap::Trace { n })
    }

    pub fn schur(z: HermitianMatrix) -> Result<Self> {
        let min = z.min_eigenvalue()?;
        let scale = z.op_norm()?;
        if min < -POSITIVITY_TOL * scale.max(f64::MIN_POSITIVE) {
            return Err(Error::NotPositiveSemidefinite { min });
        }
        Ok(PosMap::Schur { z })
    }

    pub fn congruence_sum(factors: Vec<CMatrix>) -> Result<Self> {
        let first = factors.first().ok_or(Error::EmptyMatrix)?;
        let shape = first.shape();
        if shape.0 == 0 || shape.1 == 0 {
            return Err(Error::EmptyMatrix);
        }
        if let Some(bad) = factors.iter().find(|x| x.shape() != shape) {
            return Err(Error::DimensionMismatch { expected: shape.1, found: bad.ncols() });
        }
        for x in &factors {
            if x.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::NonFinite);
            }
        }
        Ok(PosMap::CongruenceSum { factors })
    }

    pub fn compression(v: CMatrix) -> Result<Self> {
        let (n, d) = v.shape();
        if d == 0 {
            return Err(Error::EmptyMatrix);
        }
        if d > n {
            return Err(Error::Precondition(format!("an isometry needs cols ≤ rows, got {n}x{d}")));
        }
        let defect = general_op_norm(&(v.adjoint() * &v - CMatrix::identity(d, d)))?;
        if !(defect <= ISOMETRY_TOL) {
            return Err(Error::Precondition(format!("columns are not orthonormal: ‖V*V − I‖ = {defect:.3e}")));
        }
        Ok(PosMap::Compression { v })
    }

    pub fn block_sum(inner: PosMap, blocks: usize) -> Result<Self> {
        nonzero(blocks)?;
        Ok(PosMap::BlockSum { inner: Box::new(inner), blocks })
    }

    pub fn input_dim(&self) -> usize {
        match self {
            PosMap::Identity { n } | PosMap::Trace { n } => *n,
            PosMap::Schur { z } => z.dim(),
            PosMap::CongruenceSum { factors } => factors[0].nrows(),
            PosMap::Compression { v } => v.nrows(),
            PosMap::BlockSum { inner, blocks } => inner.input_dim() * blocks,
        }
    }

    pub fn output_dim(&self) -> usize {
        match self {
            PosMap::Identity { n } => *n,
            PosMap::Trace { .. } => 1,
            PosMap::Schur { z } => z.dim(),
            PosMap::CongruenceSum { factors } => factors[0].ncols(),
            PosMap::Compression { v } => v.ncols(),
            PosMap::BlockSum { inner, .. } => inner.output_dim(),
        }
    }

    /// Short variant name, as used in reports.
    pub fn kind(&self) -> &'static str {
        match self {
            PosMap::Identity { .. } => "id",
            PosMap::Schur { .. } => "schur",
            PosMap::CongruenceSum { .. } => "csum",
            PosMap::Compression { .. } => "comp",
            PosMap::Trace { .. } => "tr",
            PosMap::BlockSum { .. } => "bsum",
        }
    }

    pub fn apply(&self, a: &HermitianMatrix) -> Result<HermitianMatrix> {
        if a.dim() != self.input_dim() {
            return Err(Error::DimensionMismatch { expected: self.input_dim(), found: a.dim() });
        }
        let m = a.matrix();
        let out = match self {
            PosMap::Identity { .. } => return Ok(a.clone()),
            PosMap::Schur { z } => z.matrix().component_mul(m),
            PosMap::CongruenceSum { factors } => {
                let d = factors[0].ncols();
                factors
                    .iter()
                    .fold(CMatrix::zeros(d, d), |acc, x| acc + x.adjoint() * m * x)
            }
            PosMap::Compression { v } => v.adjoint() * m * v,
            PosMap::Trace { .. } => CMatrix::from_element(1, 1, C64::new(a.trace(), 0.0)),
            PosMap::BlockSum { inner, blocks } => {
                let n = inner.input_dim();
                let sum = (0..*blocks).fold(CMatrix::zeros(n, n), |acc, i| acc + m.view((i * n, i * n), (n, n)));
                return inner.apply(&HermitianMatrix::hermitized(sum));
            }
        };
        Ok(HermitianMatrix::hermitized(out))
    }

    /// `Φ(A)` for SPD `A`, failing with a degeneracy error if the image is not
    /// positive definite.
    pub fn apply_spd(&self, a: &SpdMatrix) -> Result<SpdMatrix> {
        SpdMatrix::new(self.apply(a.as_hermitian())?).map_err(|e| match e {
            Error::NotPositiveDefinite { min, max, .. } => {
                Error::Degenerate(format!("{} map output has eigenvalues in [{min:e}, {max:e}]", self.kind()))
            }
            other => other,
        })
    }

    /// Parses the config syntax, reading matrix files relative to `base`.
    pub fn parse_config(spec: &str, base: &Path) -> Result<Self> {
        let spec = spec.trim();
        if let Some(rest) = spec.strip_prefix("bsum(") {
            let body = rest
                .strip_suffix(')')
                .ok_or_else(|| Error::Parse(format!("unclosed bsum in \"{spec}\"")))?;
            let (inner, m) = body
                .rsplit_once(',')
                .ok_or_else(|| Error::Parse(format!("bsum needs (<map>, <m>) in \"{spec}\"")))?;
            let m = parse_usize(m.trim(), spec)?;
            return PosMap::block_sum(PosMap::parse_config(inner, base)?, m);
        }
        let (kind, arg) = spec
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("map spec \"{spec}\" needs <kind>:<arg>")))?;
        let file = |p: &str| io::read_matrix(base.join(p.trim()));
        match kind.trim() {
            "id" => PosMap::identity(parse_usize(arg, spec)?),
            "tr" => PosMap::trace(parse_usize(arg, spec)?),
            "schur" => PosMap::schur(HermitianMatrix::new(file(arg)?)?),
            "comp" => PosMap::compression(file(arg)?),
            "csum" => PosMap::congruence_sum(arg.split(',').map(file).collect::<Result<_>>()?),
            other => Err(Error::Parse(format!("unknown map kind \"{other}\""))),
        }
    }
}

fn nonzero(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::EmptyMatrix)
    } else {
        Ok(())
    }
}

fn parse_usize(s: &str, spec: &str) -> Result<usize> {
    s.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("expected a positive integer in \"{spec}\"")))
}

impl fmt::Display for PosMap {
    /// Matrix-valued variants print their shape, since their data lives in
    /// files.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PosMap::Identity { n } => write!(f, "id:{n}"),
            PosMap::Trace { n } => write!(f, "tr:{n}"),
            PosMap::Schur { z } => write!(f, "schur[{0}x{0}]", z.dim()),
            PosMap::CongruenceSum { factors } => {
                let (n, d) = factors[0].shape();
                write!(f, "csum[{}x{n}x{d}]", factors.len())
            }
            PosMap::Compression { v } => write!(f, "comp[{}x{}]", v.nrows(), v.ncols()),
            PosMap::BlockSum { inner, blocks } => write!(f, "bsum({inner}, {blocks})"),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum MapRepr {
    Identity { n: usize },
    Schur { z: MatrixJson },
    CongruenceSum { factors: Vec<MatrixJson> },
    Compression { v: MatrixJson },
    Trace { n: usize },
    BlockSum { inner: Box<MapRepr>, blocks: usize },
}

impl TryFrom<MapRepr> for PosMap {
    type Error = Error;

    fn try_from(r: MapRepr) -> Result<Self> {
        match r {
            MapRepr::Identity { n } => PosMap::identity(n),
            MapRepr::Trace { n } => PosMap::trace(n),
            MapRepr::Schur { z } => PosMap::schur(HermitianMatrix::new(z.to_matrix()?)?),
            MapRepr::CongruenceSum { factors } => {
                PosMap::congruence_sum(factors.iter().map(MatrixJson::to_matrix).collect::<Result<_>>()?)
            }
            MapRepr::Compression { v } => PosMap::compression(v.to_matrix()?),
            MapRepr::BlockSum { inner, blocks } => PosMap::block_sum(PosMap::try_from(*inner)?, blocks),
        }
    }
}

impl From<PosMap> for MapRepr {
    fn from(m: PosMap) -> Self {
        match m {
            PosMap::Identity { n } => MapRepr::Identity { n },
            PosMap::Trace { n } => MapRepr::Trace { n },
            PosMap::Schur { z } => MapRepr::Schur { z: MatrixJson::from_matrix(z.matrix()) },
            PosMap::CongruenceSum { factors } => MapRepr::CongruenceSum {
                factors: factors.iter().map(MatrixJson::from_matrix).collect(),
            },
            PosMap::Compression { v } => MapRepr::Compression { v: MatrixJson::from_matrix(&v) },
            PosMap::BlockSum { inner, blocks } => MapRepr::BlockSum {
                inner: Box::new(MapRepr::from(*inner)),
                blocks,
            },
        }
    }
}

/// Samples `trials` seeded random PSD matrices of every rank and reports the
/// worst `λ_min(Φ(A)) / ‖Φ(A)‖`.
pub fn check_positivity(map: &PosMap, trials: usize, seed: u64) -> Result<CheckResult> {
    check_positivity_with(map.input_dim(), |a| map.apply(a), trials, seed)
}

/// [`check_positivity`] for an arbitrary Hermitian-valued linear map given as
/// a closure, so that maps outside [`PosMap`] can be probed.
pub fn check_positivity_with<F>(input_dim: usize, map: F, trials: usize, seed: u64) -> Result<CheckResult>
where
    F: Fn(&HermitianMatrix) -> Result<HermitianMatrix>,
{
    if trials == 0 {
        return Err(Error::Precondition("trials must be at least 1".into()));
    }
    let mut rng = rng_from_seed(seed);
    let mut components = Vec::with_capacity(trials);
    let mut worst: Option<(f64, HermitianMatrix)> = None;
    for trial in 0..trials {
        let rank = 1 + trial % input_dim;
        let a = random_psd(input_dim, rank, &mut rng);
        let out = map(&a)?;
        let scale = out.op_norm()?;
        let slack = if scale == 0.0 { 0.0 } else { out.min_eigenvalue()? / scale };
        components.push(slack);
        if worst.as_ref().is_none_or(|(s, _)| slack < *s) {
            worst = Some((slack, a));
        }
    }
    let mut r = CheckResult::from_components(components, POSITIVITY_TOL);
    if let Some((_, a)) = worst {
        r.witness = Some(serde_json::json!({ "seed": seed, "input": a }));
    }
    Ok(r)
}

/// Ando's inequality `Φ(A # B) ≤ Φ(A) # Φ(B)`. Slack is
/// `λ_min(Φ(A) # Φ(B) − Φ(A # B)) / ‖Φ(A) # Φ(B)‖`.
pub fn check_ando(map: &PosMap, a: &SpdMatrix, b: &SpdMatrix, tol: f64) -> Result<CheckResult> {
    let pa = map.apply_spd(a)?;
    let pb = map.apply_spd(b)?;
    let rhs = geomean(&pa, &pb)?;
    let lhs = map.apply(geomean(a, b)?.as_hermitian())?;
    let gap = rhs.as_hermitian().sub(&lhs)?;
    Ok(CheckResult::new(gap.min_eigenvalue()? / rhs.max_eigenvalue(), tol))
}

/// `V = P^{-1/2} (P # Q) Q^{-1/2}`, the unitary with `P # Q = P^{1/2} V Q^{1/2}`.
pub fn unitary_factor(p: &SpdMatrix, q: &SpdMatrix) -> Result<CMatrix> {
    let mean = geomean(p, q)?;
    Ok(p.power(-0.5)?.matrix() * mean.matrix() * q.power(-0.5)?.matrix())
}

/// Checks that [`unitary_factor`] of `Φ(A), Φ(B)` is unitary; slack is
/// `−‖V*V − I‖`.
pub fn check_unitary_factorization(map: &PosMap, a: &SpdMatrix, b: &SpdMatrix, tol: f64) -> Result<CheckResult> {
    let pa = map.apply_spd(a)?;
    let pb = map.apply_spd(b)?;
    let v = unitary_factor(&pa, &pb)?;
    let d = v.ncols();
    let defect = general_op_norm(&(v.adjoint() * &v - CMatrix::identity(d, d)))?;
    Ok(CheckResult::new(-defect, tol))
}
