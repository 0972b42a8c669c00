//! Symmetric gauges, weak log-majorization and Horn's product inequality.

use spdlab::majorization::{check_horn, eigvals_desc, weak_log_majorize, weak_majorize, SpectrumKind, SpectrumVector};
use spdlab::norms::{evaluate_hermitian, NormSpec};
use spdlab::random::{random_gaussian, random_spd_with, rng_from_seed};
use spdlab::spectral::HermitianMatrix;

fn main() -> spdlab::Result<()> {
    let values = [4.0, 2.0, 1.0, 0.5];
    let norms = [NormSpec::Operator, NormSpec::KyFan(2), NormSpec::Schatten(3.0), NormSpec::Frobenius, NormSpec::Trace];
    for norm in norms {
        println!("{norm:>6}: {:.6}", norm.gauge(&values)?);
    }
    let h = HermitianMatrix::from_diagonal(&values);
    let spec: NormSpec = "sp:1.5".parse()?;
    println!("{spec} of diag: {:.6}", evaluate_hermitian(spec, &h)?);

    // diag(S) is majorized by the eigenvalues of S, not the other way round
    let mut rng = rng_from_seed(11);
    let s = random_spd_with(4, 20.0, &mut rng)?;
    let diag = SpectrumVector::new(s.as_hermitian().diagonal(), SpectrumKind::Eigenvalues)?;
    let eig = eigvals_desc(s.as_hermitian())?;
    println!("diag(S) ≺w λ(S): {}", weak_majorize(&diag, &eig, 1e-12)?);
    println!("λ(S) ≺w diag(S): {}", weak_majorize(&eig, &diag, 1e-12)?);

    // λ(A^½ B A^½) ≺w(log) λ(A) λ(B) entrywise in decreasing order
    let a = random_spd_with(4, 20.0, &mut rng)?;
    let b = random_spd_with(4, 20.0, &mut rng)?;
    let h = a.sqrt()?;
    let prod = HermitianMatrix::new(h.matrix() * b.matrix() * h.matrix())?;
    let bound: Vec<f64> = a.spectrum().eigenvalues().iter().zip(b.spectrum().eigenvalues()).map(|(x, y)| x * y).collect();
    println!("λ(A^½BA^½) ≺w(log) λ(A)λ(B): {}", weak_log_majorize(&prod, &HermitianMatrix::from_diagonal(&bound), 1e-12)?);

    let x = random_gaussian(5, 5, &mut rng);
    let y = random_gaussian(5, 5, &mut rng);
    let r = check_horn(&x, &y, 1e-12)?;
    println!("Horn: passed {}, slack {:.3e}", r.passed, r.slack);
    Ok(())
}
