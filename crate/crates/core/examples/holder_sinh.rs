//! The matrix Hölder inequality with `g = sinh` on commuting families, and the
//! equality case `Bᵢ ∝ Aᵢ^{p−1}` for scalars.

use spdlab::cli::holder_instance;
use spdlab::geo_convex::GeoFn;
use spdlab::lab::check_corollary_holder;
use spdlab::norms::NormSpec;
use spdlab::spectral::SpdMatrix;

fn main() -> spdlab::Result<()> {
    for p in [1.5, 2.0, 3.0] {
        for norm in [NormSpec::Trace, NormSpec::Operator, NormSpec::Schatten(2.0)] {
            let (a, b) = holder_instance(3, 4, p, 17, 4.0, false)?;
            let r = check_corollary_holder(&a, &b, p, &GeoFn::Sinh, norm, 1e-9)?;
            println!("p = {p}, {norm:>5}: log slack {:+.4e}, passed {}", r.slack, r.passed);
        }
    }

    // one scalar term with b = a^{p-1} and g = id: both sides equal a^p
    let p = 3.0;
    let a = SpdMatrix::from_diagonal(&[1.7])?;
    let b = SpdMatrix::from_diagonal(&[1.7f64.powf(p - 1.0)])?;
    let r = check_corollary_holder(&[a], &[b], p, &GeoFn::Identity, NormSpec::Trace, 1e-12)?;
    println!("scalar equality case: slack {:+.2e}", r.slack);
    Ok(())
}
