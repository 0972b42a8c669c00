//! Eigendecomposition, matrix powers and scalar functions of Hermitian
//! matrices, plus singular values of a general matrix.

use spdlab::random::{random_invertible, random_spd_with, rng_from_seed};
use spdlab::spectral::{rel_diff, singular_values, HermitianMatrix, Interval, SpdMatrix};

fn main() -> spdlab::Result<()> {
    let h = HermitianMatrix::from_real_rows(&[&[2.0, 1.0, 0.0], &[1.0, 2.0, 1.0], &[0.0, 1.0, 2.0]])?;
    let eig = h.eig()?;
    println!("eigenvalues: {:.6?}", eig.eigenvalues());
    println!("reconstruction error: {:.2e}", rel_diff(&eig.reconstruct(), h.matrix()));

    let a = SpdMatrix::new(h)?;
    let root = a.sqrt()?;
    println!("sqrt(A)^2 vs A: {:.2e}", rel_diff(&(root.matrix() * root.matrix()), a.matrix()));
    let p = a.power(0.3)?.matrix() * a.power(0.7)?.matrix();
    println!("A^0.3 A^0.7 vs A: {:.2e}", rel_diff(&p, a.matrix()));
    println!("condition number: {:.4}", a.condition_number());

    let log_a = a.map_spectrum(f64::ln, Interval::closed(f64::MIN_POSITIVE, f64::INFINITY))?;
    println!("Tr log A = {:.6}, ln det A = {:.6}", log_a.trace(), a.spectrum().eigenvalues().iter().map(|v| v.ln()).sum::<f64>());

    let mut rng = rng_from_seed(3);
    let b = random_spd_with(5, 1e3, &mut rng)?;
    println!("random SPD with condition {:.1}", b.condition_number());
    let x = random_invertible(4, 10.0, &mut rng);
    println!("singular values of X: {:.4?}", singular_values(&x)?);
    Ok(())
}
