//! Geometrically convex scalar functions: parsing, evaluation and the
//! numerical convexity and monotonicity checks, with two functions that fail.

use spdlab::geo_convex::{check_geo_convex, check_nondecreasing, default_grid, random_geofn, GeoFn, RawFn, ScalarFn, SCALAR_TOL};
use spdlab::random::rng_from_seed;

fn report(label: &str, g: &dyn ScalarFn) -> spdlab::Result<()> {
    let grid = default_grid(1);
    let xs: Vec<f64> = (0..50).map(|k| 1e-3 * 1.4f64.powi(k)).collect();
    let convex = check_geo_convex(g, &grid, SCALAR_TOL)?;
    let mono = check_nondecreasing(g, &xs, SCALAR_TOL)?;
    println!("{label:<32} geo-convex {:<5} (slack {:+.2e})  nondecreasing {}", convex.passed, convex.slack, mono.passed);
    Ok(())
}

fn main() -> spdlab::Result<()> {
    for text in ["sinh", "exp", "pow:2.5", "sum(pow:0.5, scale:3(pow:2))", "exp_of(pow:1.5)", "max(const:2, scale:3(pow:2))"] {
        let g: GeoFn = text.parse()?;
        report(&g.to_string(), &g)?;
    }
    let mut rng = rng_from_seed(5);
    for _ in 0..3 {
        let g = random_geofn(&mut rng, 2);
        report(&g.to_string(), &g)?;
    }
    report(RawFn::SATURATING.name, &RawFn::SATURATING)?;
    report(RawFn::RECIPROCAL.name, &RawFn::RECIPROCAL)?;
    Ok(())
}
