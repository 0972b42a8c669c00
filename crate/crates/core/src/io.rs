//! Matrix JSON format: `{"dim": n, "re": [[...]], "im": [[...]]}`, row-major.
//!
//! Rectangular matrices (the `n×d` factors of congruence maps and
//! compressions) use `"rows"`/`"cols"` in place of `"dim"`.

use std::path::Path;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::spectral::{CMatrix, HermitianMatrix, SpdMatrix, C64};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rows: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cols: Option<usize>,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &CMatrix) -> Self {
        let (r, c) = m.shape();
        let re = (0..r).map(|i| (0..c).map(|j| m[(i, j)].re).collect()).collect();
        let im = (0..r).map(|i| (0..c).map(|j| m[(i, j)].im).collect()).collect();
        if r == c {
            MatrixJson { dim: Some(r), rows: None, cols: None, re, im }
        } else {
            MatrixJson { dim: None, rows: Some(r), cols: Some(c), re, im }
        }
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        let (rows, cols) = match (self.dim, self.rows, self.cols) {
            (Some(n), None, None) => (n, n),
            (None, Some(r), Some(c)) => (r, c),
            _ => return Err(Error::Parse("matrix needs either \"dim\" or \"rows\"/\"cols\"".into())),
        };
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyMatrix);
        }
        let shape_ok = |v: &Vec<Vec<f64>>| v.len() == rows && v.iter().all(|r| r.len() == cols);
        if !shape_ok(&self.re) || !shape_ok(&self.im) {
            return Err(Error::Parse(format!("\"re\"/\"im\" must be {rows}x{cols}")));
        }
        Ok(CMatrix::from_fn(rows, cols, |i, j| C64::new(self.re[i][j], self.im[i][j])))
    }
}

impl TryFrom<MatrixJson> for HermitianMatrix {
    type Error = Error;
    fn try_from(j: MatrixJson) -> Result<Self> {
        HermitianMatrix::new(j.to_matrix()?)
    }
}

impl From<HermitianMatrix> for MatrixJson {
    fn from(h: HermitianMatrix) -> Self {
        MatrixJson::from_matrix(h.matrix())
    }
}

impl TryFrom<MatrixJson> for SpdMatrix {
    type Error = Error;
    fn try_from(j: MatrixJson) -> Result<Self> {
        SpdMatrix::from_matrix(j.to_matrix()?)
    }
}

impl From<SpdMatrix> for MatrixJson {
    fn from(a: SpdMatrix) -> Self {
        MatrixJson::from_matrix(a.matrix())
    }
}

macro_rules! serde_via_json {
    ($ty:ty) => {
        impl Serialize for $ty {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                MatrixJson::from_matrix(self.matrix()).serialize(s)
            }
        }

        impl<'de> Deserialize<'de> for $ty {
            fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
                let j = MatrixJson::deserialize(d)?;
                <$ty>::try_from(j).map_err(serde::de::Error::custom)
            }
        }
    };
}

serde_via_json!(HermitianMatrix);
serde_via_json!(SpdMatrix);

/// `#[serde(with = "crate::io::cmatrix")]` for general complex matrices.
pub mod cmatrix {
    use super::*;

    pub fn serialize<S: Serializer>(m: &CMatrix, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson::from_matrix(m).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<CMatrix, D::Error> {
        MatrixJson::deserialize(d)?
            .to_matrix()
            .map_err(serde::de::Error::custom)
    }
}

/// Same as [`cmatrix`] for `Vec<CMatrix>`.
pub mod cmatrix_vec {
    use super::*;

    pub fn serialize<S: Serializer>(ms: &[CMatrix], s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<MatrixJson> = ms.iter().map(MatrixJson::from_matrix).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<CMatrix>, D::Error> {
        Vec::<MatrixJson>::deserialize(d)?
            .iter()
            .map(|j| j.to_matrix().map_err(serde::de::Error::custom))
            .collect()
    }
}

pub fn read_matrix(path: impl AsRef<Path>) -> Result<CMatrix> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str::<MatrixJson>(&text)?.to_matrix()
}

pub fn write_matrix(path: impl AsRef<Path>, m: &CMatrix) -> Result<()> {
    std::fs::write(path, serde_json::to_string_pretty(&MatrixJson::from_matrix(m))?)?;
    Ok(())
}
