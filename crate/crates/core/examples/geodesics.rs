//! Weighted geometric means: endpoints, symmetry, the Riccati equation and
//! reparametrization of the geodesic.

use spdlab::geometry::{geomean, weighted_geomean};
use spdlab::random::{random_spd_with, rng_from_seed};
use spdlab::spectral::rel_diff;

fn main() -> spdlab::Result<()> {
    let mut rng = rng_from_seed(7);
    let a = random_spd_with(4, 50.0, &mut rng)?;
    let b = random_spd_with(4, 50.0, &mut rng)?;

    let at0 = weighted_geomean(&a, &b, 0.0)?;
    let at1 = weighted_geomean(&a, &b, 1.0)?;
    println!("A #_0 B vs A: {:.2e}", rel_diff(at0.matrix(), a.matrix()));
    println!("A #_1 B vs B: {:.2e}", rel_diff(at1.matrix(), b.matrix()));

    let g = geomean(&a, &b)?;
    println!("A # B vs B # A: {:.2e}", rel_diff(g.matrix(), geomean(&b, &a)?.matrix()));
    let riccati = g.matrix() * a.inverse()?.matrix() * g.matrix();
    println!("G A^-1 G vs B: {:.2e}", rel_diff(&riccati, b.matrix()));

    // the midpoint of two geodesic points is the geodesic point at the mean parameter
    let (s, t) = (-0.7, 1.6);
    let mid = geomean(&weighted_geomean(&a, &b, s)?, &weighted_geomean(&a, &b, t)?)?;
    let direct = weighted_geomean(&a, &b, (s + t) / 2.0)?;
    println!("midpoint reparametrization: {:.2e}", rel_diff(mid.matrix(), direct.matrix()));

    for t in [-1.0, 0.0, 0.5, 1.0, 2.0] {
        let m = weighted_geomean(&a, &b, t)?;
        println!("t = {t:>4}: eigenvalues {:.4?}", m.spectrum().eigenvalues());
    }
    Ok(())
}
