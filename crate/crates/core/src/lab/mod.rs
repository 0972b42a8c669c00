//! The verification engine: functionals over geodesic and congruence
//! families, midpoint convexity checks, the consequences built on them, and
//! seeded suites with counterexample search.

pub mod controls;
pub mod corollaries;
pub mod functional;
pub mod instance;
pub mod proof_chain;
pub mod scan;
pub mod suites;

pub use controls::{Control, ControlCase};
pub use corollaries::{
    check_corollary_congruence, check_corollary_holder, check_corollary_schur, check_corollary_weighted_power,
    check_det_limit, check_trace_convexity, default_alphas, power_mean_log,
};
pub use functional::{
    check_midpoint_convex, check_midpoint_logconvex, check_polar_bridge, functional_congruence, functional_geodesic,
    trace_functional, Functional,
};
pub use instance::{
    random_instance, random_map, CongruenceInstance, CongruenceTerm, GeodesicInstance, Instance, InstanceKind, MapVariant,
    Structure,
};
pub use proof_chain::{proof_chain, ProofChain};
pub use scan::{scan_functional, Scan, ScanAxis};
pub use suites::{replay, search_counterexamples, Report, Suite, TrialCase, Witness};
