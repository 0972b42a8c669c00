//! Samples `ln F` along one exponent and checks discrete convexity of the
//! curve, printing the rows as CSV.

use spdlab::geo_convex::GeoFn;
use spdlab::lab::{random_instance, scan_functional, InstanceKind, ScanAxis, Structure};
use spdlab::norms::NormSpec;

fn main() -> spdlab::Result<()> {
    let inst = random_instance(InstanceKind::Congruence, 2, 3, 9, 50.0, Structure::Generic)?
        .with_parts(None, Some(GeoFn::Exp), Some(NormSpec::Operator))?;
    let axis = ScanAxis { index: 0, lo: -2.0, hi: 2.0, steps: 21 };
    let scan = scan_functional(&inst, &axis, &[0.0, 0.5], 1e-9)?;
    print!("{}", scan.to_csv());
    eprintln!("convex along the axis: {} (worst second difference {:+.3e})", scan.convexity.passed, scan.convexity.slack);
    Ok(())
}
