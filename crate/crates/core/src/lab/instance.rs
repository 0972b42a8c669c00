use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geo_convex::GeoFn;
use crate::geometry::{check_invertible, polar_geodesic_form};
use crate::maps::PosMap;
use crate::norms::NormSpec;
use crate::random::{
    random_commuting_spd, random_gaussian, random_invertible, random_isometry, random_psd, random_spd_with,
    random_unitary, rng_from_seed,
};
use crate::spectral::{CMatrix, SpdMatrix};

/// Pairs `(Aᵢ, Bᵢ)` for `‖g(Φ(Σ Aᵢ #_{tᵢ} Bᵢ))‖`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeodesicInstance {
    pub pairs: Vec<(SpdMatrix, SpdMatrix)>,
    pub map: PosMap,
    pub g: GeoFn,
    pub norm: NormSpec,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CongruenceTerm {
    pub a: SpdMatrix,
    #[serde(with = "crate::io::cmatrix")]
    pub x: CMatrix,
}

/// Terms `(Aᵢ, Xᵢ)` for `‖g(Φ(Σ Xᵢ* Aᵢ^{tᵢ} Xᵢ))‖`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CongruenceInstance {
    pub terms: Vec<CongruenceTerm>,
    pub map: PosMap,
    pub g: GeoFn,
    pub norm: NormSpec,
}

fn validate_common(m: usize, dims: impl Iterator<Item = usize>, map: &PosMap, g: &GeoFn, norm: NormSpec) -> Result<()> {
    if m == 0 {
        return Err(Error::Precondition("an instance needs at least one term".into()));
    }
    for d in dims {
        if d != map.input_dim() {
            return Err(Error::DimensionMismatch { expected: map.input_dim(), found: d });
        }
    }
    if !norm.supports_dim(map.output_dim()) {
        return Err(Error::Precondition(format!(
            "norm {norm} needs dimension above the map output {}",
            map.output_dim()
        )));
    }
    g.validate()
}

impl GeodesicInstance {
    pub fn new(pairs: Vec<(SpdMatrix, SpdMatrix)>, map: PosMap, g: GeoFn, norm: NormSpec) -> Result<Self> {
        let inst = GeodesicInstance { pairs, map, g, norm };
        inst.validate()?;
        Ok(inst)
    }

    pub fn validate(&self) -> Result<()> {
        let dims = self.pairs.iter().flat_map(|(a, b)| [a.dim(), b.dim()]);
        validate_common(self.pairs.len(), dims, &self.map, &self.g, self.norm)
    }

    pub fn dim(&self) -> usize {
        self.map.input_dim()
    }
}

impl CongruenceInstance {
    pub fn new(terms: Vec<CongruenceTerm>, map: PosMap, g: GeoFn, norm: NormSpec) -> Result<Self> {
        let inst = CongruenceInstance { terms, map, g, norm };
        inst.validate()?;
        Ok(inst)
    }

    pub fn validate(&self) -> Result<()> {
        let dims = self.terms.iter().flat_map(|t| [t.a.dim(), t.x.nrows(), t.x.ncols()]);
        validate_common(self.terms.len(), dims, &self.map, &self.g, self.norm)?;
        self.terms.iter().try_for_each(|t| check_invertible(&t.x))
    }

    pub fn dim(&self) -> usize {
        self.map.input_dim()
    }

    /// The equivalent geodesic instance `Cᵢ = Xᵢ*Xᵢ`, `Dᵢ = Xᵢ*AᵢXᵢ`, for
    /// which `Xᵢ* Aᵢᵗ Xᵢ = Cᵢ #ₜ Dᵢ`.
    pub fn to_geodesic(&self) -> Result<GeodesicInstance> {
        let pairs = self
            .terms
            .iter()
            .map(|t| polar_geodesic_form(&t.x, &t.a))
            .collect::<Result<_>>()?;
        GeodesicInstance::new(pairs, self.map.clone(), self.g.clone(), self.norm)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Instance {
    Geodesic(GeodesicInstance),
    Congruence(CongruenceInstance),
}

impl Instance {
    pub fn validate(&self) -> Result<()> {
        match self {
            Instance::Geodesic(i) => i.validate(),
            Instance::Congruence(i) => i.validate(),
        }
    }

    pub fn kind(&self) -> InstanceKind {
        match self {
            Instance::Geodesic(_) => InstanceKind::Geodesic,
            Instance::Congruence(_) => InstanceKind::Congruence,
        }
    }

    pub fn map(&self) -> &PosMap {
        match self {
            Instance::Geodesic(i) => &i.map,
            Instance::Congruence(i) => &i.map,
        }
    }

    /// Replaces the map, g and norm, revalidating.
    pub fn with_parts(mut self, map: Option<PosMap>, g: Option<GeoFn>, norm: Option<NormSpec>) -> Result<Self> {
        let (m, gg, nn) = match &mut self {
            Instance::Geodesic(i) => (&mut i.map, &mut i.g, &mut i.norm),
            Instance::Congruence(i) => (&mut i.map, &mut i.g, &mut i.norm),
        };
        if let Some(map) = map {
            *m = map;
        }
        if let Some(g) = g {
            *gg = g;
        }
        if let Some(norm) = norm {
            *nn = norm;
        }
        self.validate()?;
        Ok(self)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let inst: Instance = serde_json::from_str(text)?;
        inst.validate()?;
        Ok(inst)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Instance::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InstanceKind {
    Geodesic,
    Congruence,
}

/// How [`random_instance`] builds its matrices and map.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Structure {
    /// Independent random eigenbases, identity map.
    Generic,
    /// Every matrix diagonal in one shared random eigenbasis, identity map.
    Commuting,
    /// Generic matrices under a random Schur multiplier.
    Schur,
    /// Generic matrices under a random compression to `max(1, n − 1)` dims.
    Compression,
}

macro_rules! str_enum {
    ($t:ty { $($v:ident => $s:literal),* $(,)? }) => {
        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(match self { $(Self::$v => $s),* })
            }
        }

        impl FromStr for $t {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($s => Ok(Self::$v),)*
                    _ => Err(Error::Parse(format!(
                        concat!("unknown ", stringify!($t), " \"{}\", expected one of: ", $($s, " "),*),
                        s
                    ))),
                }
            }
        }
    };
}

str_enum!(InstanceKind { Geodesic => "geodesic", Congruence => "congruence" });
str_enum!(Structure {
    Generic => "generic",
    Commuting => "commuting",
    Schur => "schur",
    Compression => "compression",
});

/// Seeded random instance with `g = sinh` and the trace norm. `cond` is the
/// target condition number of every `Aᵢ`, `Bᵢ`; congruence factors `Xᵢ` get
/// `√cond`.
pub fn random_instance(kind: InstanceKind, m: usize, n: usize, seed: u64, cond: f64, structure: Structure) -> Result<Instance> {
    if m == 0 || n == 0 {
        return Err(Error::Precondition(format!("need m, n ≥ 1, got m = {m}, n = {n}")));
    }
    let mut rng = rng_from_seed(seed);
    let map = match structure {
        Structure::Generic | Structure::Commuting => PosMap::identity(n)?,
        Structure::Schur => PosMap::schur(random_psd(n, n, &mut rng))?,
        Structure::Compression => PosMap::compression(random_isometry(n, n.saturating_sub(1).max(1), &mut rng))?,
    };
    let basis = (structure == Structure::Commuting).then(|| random_unitary(n, &mut rng));
    let spd = |rng: &mut crate::random::LabRng, cond: f64| match &basis {
        Some(u) => random_commuting_spd(u, cond, rng),
        None => random_spd_with(n, cond, rng),
    };
    let (g, norm) = (GeoFn::Sinh, NormSpec::Trace);
    let x_cond = cond.sqrt();
    Ok(match kind {
        InstanceKind::Geodesic => {
            let pairs = (0..m)
                .map(|_| Ok((spd(&mut rng, cond)?, spd(&mut rng, cond)?)))
                .collect::<Result<_>>()?;
            Instance::Geodesic(GeodesicInstance::new(pairs, map, g, norm)?)
        }
        InstanceKind::Congruence => {
            let terms = (0..m)
                .map(|_| {
                    let a = spd(&mut rng, cond)?;
                    let x = if basis.is_some() {
                        spd(&mut rng, x_cond)?.matrix().clone()
                    } else {
                        random_invertible(n, x_cond, &mut rng)
                    };
                    Ok(CongruenceTerm { a, x })
                })
                .collect::<Result<_>>()?;
            Instance::Congruence(CongruenceInstance::new(terms, map, g, norm)?)
        }
    })
}

/// The six map variants exercised by the suites.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapVariant {
    Identity,
    Schur,
    CongruenceSum,
    Compression,
    Trace,
    BlockSum,
}

impl MapVariant {
    pub const ALL: [MapVariant; 6] = [
        MapVariant::Identity,
        MapVariant::Schur,
        MapVariant::CongruenceSum,
        MapVariant::Compression,
        MapVariant::Trace,
        MapVariant::BlockSum,
    ];
}

/// Random map of the given variant on `n×n` inputs. Block sums split `n`
/// into its smallest nontrivial factor of blocks.
pub fn random_map<R: Rng>(variant: MapVariant, n: usize, rng: &mut R) -> Result<PosMap> {
    match variant {
        MapVariant::Identity => PosMap::identity(n),
        MapVariant::Schur => {
            let rank = rng.random_range(1..=n);
            PosMap::schur(random_psd(n, rank, rng))
        }
        MapVariant::CongruenceSum => {
            let d = rng.random_range(1..=n);
            let r = rng.random_range(1..=2);
            PosMap::congruence_sum((0..r).map(|_| random_gaussian(n, d, rng)).collect())
        }
        MapVariant::Compression => {
            let d = rng.random_range(1..=n);
            PosMap::compression(random_isometry(n, d, rng))
        }
        MapVariant::Trace => PosMap::trace(n),
        MapVariant::BlockSum => {
            let blocks = (2..=n).find(|b| n.is_multiple_of(*b)).unwrap_or(1);
            let inner = [MapVariant::Identity, MapVariant::Schur, MapVariant::CongruenceSum, MapVariant::Compression]
                [rng.random_range(0..4)];
            PosMap::block_sum(random_map(inner, n / blocks, rng)?, blocks)
        }
    }
}
