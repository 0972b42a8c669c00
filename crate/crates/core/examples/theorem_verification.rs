//! Midpoint log-convexity of `t ↦ ‖g(Φ(Σ Aᵢ #_{tᵢ} Bᵢ))‖` on one instance,
//! then the same property over a seeded batch of random instances.

use spdlab::geo_convex::GeoFn;
use spdlab::lab::functional::log_functional_of_sum;
use spdlab::lab::{check_midpoint_logconvex, random_instance, search_counterexamples, Instance, InstanceKind, Structure, Suite};
use spdlab::lab::functional::geodesic_sum;
use spdlab::norms::NormSpec;

fn main() -> spdlab::Result<()> {
    let inst = random_instance(InstanceKind::Geodesic, 2, 3, 42, 100.0, Structure::Generic)?;
    let inst = inst.with_parts(None, Some(GeoFn::Sinh), Some(NormSpec::KyFan(2)))?;
    let Instance::Geodesic(geo) = inst else { unreachable!() };
    let log_f = |t: &[f64]| log_functional_of_sum(geodesic_sum(&geo.pairs, t)?, &geo.map, &geo.g, geo.norm);
    for (s, t) in [([-1.0, 0.5], [1.5, -0.5]), ([0.0, 0.0], [2.0, 2.0]), ([-2.0, 1.0], [0.3, 0.3])] {
        let r = check_midpoint_logconvex(log_f, &s, &t, 1e-9)?;
        println!("s = {s:?}, t = {t:?}: slack {:+.4e}, passed {}", r.slack, r.passed);
    }

    for suite in [Suite::GeodesicLogConvexity, Suite::CongruenceLogConvexity, Suite::TraceConvexity] {
        let report = search_counterexamples(suite, 200, 42, None, 2)?;
        println!(
            "{suite}: {} trials, {} violations, {} numerical failures, worst slack {:+.3e}",
            report.trials,
            report.violations,
            report.numerical_failures,
            report.worst_slacks.first().copied().unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
