//! Seeded generators for matrices and instances.
//!
//! All generators draw from a `ChaCha8Rng`, whose stream is fixed across
//! platforms, so identical seeds give bit-identical matrices.

use nalgebra::Complex;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::spectral::{CMatrix, HermitianMatrix, SpdMatrix, C64};

pub type LabRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> LabRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Sub-seed for trial `index` of a run seeded with `master`.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    splitmix64(master ^ splitmix64(index.wrapping_add(0x5EED)))
}

pub fn log_uniform<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    (rng.random::<f64>() * (hi.ln() - lo.ln()) + lo.ln()).exp()
}

pub fn uniform<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.random::<f64>()
}

fn gaussian<R: Rng>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

/// Complex Ginibre matrix with i.i.d. standard complex Gaussian entries.
pub fn random_gaussian<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    CMatrix::from_fn(rows, cols, |_, _| Complex::new(gaussian(rng) * s, gaussian(rng) * s))
}

/// Haar-distributed unitary from the QR factorization of a Ginibre matrix.
pub fn random_unitary<R: Rng>(n: usize, rng: &mut R) -> CMatrix {
    let g = random_gaussian(n, n, rng);
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for z in q.column_mut(j).iter_mut() {
            *z *= phase;
        }
    }
    q
}

/// `n×d` matrix with orthonormal columns (`d ≤ n`).
pub fn random_isometry<R: Rng>(n: usize, d: usize, rng: &mut R) -> CMatrix {
    random_unitary(n, rng).columns(0, d).into_owned()
}

pub fn random_hermitian<R: Rng>(n: usize, rng: &mut R) -> HermitianMatrix {
    HermitianMatrix::hermitized(random_gaussian(n, n, rng))
}

/// Eigenvalues `√cond` and `1/√cond` at the ends, interior ones log-uniform
/// in between.
fn spread_spectrum<R: Rng>(dim: usize, cond: f64, rng: &mut R) -> Vec<f64> {
    let hi = cond.sqrt();
    let lo = 1.0 / hi;
    if dim == 1 {
        return vec![log_uniform(rng, lo, hi)];
    }
    let mut v = Vec::with_capacity(dim);
    v.push(hi);
    for _ in 1..dim - 1 {
        v.push(log_uniform(rng, lo, hi));
    }
    v.push(lo);
    v
}

/// SPD matrix with a prescribed condition number: a random unitary
/// eigenbasis and log-uniform eigenvalues spanning `cond`.
pub fn random_spd_with<R: Rng>(dim: usize, cond: f64, rng: &mut R) -> Result<SpdMatrix> {
    if dim == 0 {
        return Err(Error::EmptyMatrix);
    }
    if !(cond >= 1.0 && cond.is_finite()) {
        return Err(Error::Precondition(format!("condition target {cond} must be ≥ 1")));
    }
    let u = random_unitary(dim, rng);
    let values = spread_spectrum(dim, cond, rng);
    let mut scaled = u.clone();
    for (j, &v) in values.iter().enumerate() {
        for z in scaled.column_mut(j).iter_mut() {
            *z *= v;
        }
    }
    SpdMatrix::new(HermitianMatrix::hermitized(scaled * u.adjoint()))
}

pub fn random_spd(dim: usize, seed: u64, cond: f64) -> Result<SpdMatrix> {
    random_spd_with(dim, cond, &mut rng_from_seed(seed))
}

/// SPD matrix diagonal in the fixed unitary basis `u`.
pub fn random_commuting_spd<R: Rng>(u: &CMatrix, cond: f64, rng: &mut R) -> Result<SpdMatrix> {
    let mut values = spread_spectrum(u.nrows(), cond, rng);
    // otherwise every member peaks on the same basis vector
    values.shuffle(rng);
    // keep the basis exactly so that the family commutes to round-off
    SpdMatrix::from_eigen(u, &values)
}

/// Invertible matrix `U diag(σ) W*` with singular values spanning `cond`.
pub fn random_invertible<R: Rng>(n: usize, cond: f64, rng: &mut R) -> CMatrix {
    let u = random_unitary(n, rng);
    let w = random_unitary(n, rng);
    let sigma = spread_spectrum(n, cond, rng);
    let mut us = u;
    for (j, &s) in sigma.iter().enumerate() {
        for z in us.column_mut(j).iter_mut() {
            *z *= s;
        }
    }
    us * w.adjoint()
}

/// Positive semidefinite `G G* / rank` with `G` an `n×rank` Ginibre matrix.
pub fn random_psd<R: Rng>(n: usize, rank: usize, rng: &mut R) -> HermitianMatrix {
    let g = random_gaussian(n, rank, rng);
    HermitianMatrix::hermitized(&g * g.adjoint() * C64::new(1.0 / rank as f64, 0.0))
}
