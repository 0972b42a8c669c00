//! Acceptance run: one line per criterion, nonzero exit if any fails.

mod common;

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use common::*;
use spdlab::cli::holder_instance;
use spdlab::geo_convex::{GeoFn, PhiFn};
use spdlab::geometry::{congruence_spd, geomean, weighted_geomean};
use spdlab::lab::corollaries::check_corollary_holder;
use spdlab::lab::functional::{trace_functional, Functional};
use spdlab::lab::instance::{random_instance, random_map, CongruenceInstance, CongruenceTerm, Instance, InstanceKind, MapVariant, Structure};
use spdlab::lab::proof_chain::{proof_chain, STEP_NAMES};
use spdlab::lab::suites::{g_bank, norm_bank, search_counterexamples, Report, Suite, TrialCase};
use spdlab::maps::PosMap;
use spdlab::norms::NormSpec;
use spdlab::random::{derive_seed, log_uniform, random_invertible, random_spd_with, random_unitary, rng_from_seed, uniform};
use spdlab::spectral::SpdMatrix;

const SEED: u64 = 20240601;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn jobs() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1).min(8)
}

fn suite_clean(r: &Report) -> bool {
    r.passed && r.violations == 0 && r.errors.is_empty()
}

fn suite_detail(r: &Report) -> String {
    format!(
        "{}: {} trials, {} violations, {} errors, worst slack {:.3e}",
        r.suite,
        r.trials,
        r.violations,
        r.errors.len(),
        r.worst_slacks.first().copied().unwrap_or(f64::NAN)
    )
}

/// Endpoint, fixed-point, exchange, congruence-equivariance and midpoint
/// identities at relative tolerance 1e-9.
fn geodesic_algebra() -> Outcome {
    let start = Instant::now();
    let worst = (0..500usize)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_from_seed(derive_seed(SEED, i as u64));
            let n = 1 + i % 8;
            let a = random_spd_with(n, log_uniform(&mut rng, 1.0, 20.0), &mut rng).unwrap();
            let b = random_spd_with(n, log_uniform(&mut rng, 1.0, 20.0), &mut rng).unwrap();
            let x = random_invertible(n, log_uniform(&mut rng, 1.0, 4.0), &mut rng);
            let (s, t) = (uniform(&mut rng, -2.0, 2.0), uniform(&mut rng, -2.0, 2.0));
            let gm = |p: &SpdMatrix, q: &SpdMatrix, w: f64| weighted_geomean(p, q, w).unwrap();
            let ab_t = gm(&a, &b, t);
            let errs = [
                rel(gm(&a, &b, 0.0).matrix(), a.matrix()),
                rel(gm(&a, &b, 1.0).matrix(), b.matrix()),
                rel(gm(&a, &a, t).matrix(), a.matrix()),
                rel(ab_t.matrix(), gm(&b, &a, 1.0 - t).matrix()),
                rel(
                    &(x.adjoint() * ab_t.matrix() * &x),
                    gm(&congruence_spd(&x, &a).unwrap(), &congruence_spd(&x, &b).unwrap(), t).matrix(),
                ),
                rel(geomean(&gm(&a, &b, s), &ab_t).unwrap().matrix(), gm(&a, &b, (s + t) / 2.0).matrix()),
            ];
            errs
        })
        .reduce(|| [0.0; 6], |p, q| std::array::from_fn(|k| f64::max(p[k], q[k])));
    let elapsed = start.elapsed();
    let passed = worst.iter().all(|&e| e <= 1e-9) && elapsed < Duration::from_secs(30);
    outcome(
        passed,
        format!(
            "500 instances, worst rel: endpoint0 {:.1e}, endpoint1 {:.1e}, fixed {:.1e}, exchange {:.1e}, congruence {:.1e}, midpoint {:.1e}; {:.2?}",
            worst[0], worst[1], worst[2], worst[3], worst[4], worst[5], elapsed
        ),
    )
}

fn geodesic_log_convexity() -> Outcome {
    let start = Instant::now();
    let r = search_counterexamples(Suite::GeodesicLogConvexity, 1000, SEED, Some(1e-9), jobs()).unwrap();
    let elapsed = start.elapsed();
    outcome(suite_clean(&r) && elapsed < Duration::from_secs(120), format!("{}; {elapsed:.2?}", suite_detail(&r)))
}

/// The congruence functional against its geodesic form on 300 instances
/// spread over maps, functions and norms.
fn polar_bridge() -> Outcome {
    let worst = (0..300usize)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_from_seed(derive_seed(SEED ^ 3, i as u64));
            let (m, n) = (1 + i % 3, 2 + i % 5);
            let inst = random_instance(InstanceKind::Congruence, m, n, rng.random_seed(), log_uniform(&mut rng, 1.0, 100.0), Structure::Generic)
                .unwrap();
            let map = random_map(MapVariant::ALL[i % 6], n, &mut rng).unwrap();
            let g = g_bank()[(i / 6) % 4].clone();
            let norm = match norm_bank()[(i / 24) % 4] {
                NormSpec::KyFan(k) => NormSpec::KyFan(k.min(map.output_dim())),
                other => other,
            };
            let Instance::Congruence(c) = inst.with_parts(Some(map), Some(g), Some(norm)).unwrap() else { unreachable!() };
            let t: Vec<f64> = (0..m).map(|_| uniform(&mut rng, -2.0, 2.0)).collect();
            let geo = c.to_geodesic().unwrap();
            (c.log_value(&t).unwrap() - geo.log_value(&t).unwrap()).abs().exp_m1()
        })
        .reduce(|| 0.0, f64::max);
    outcome(worst <= 1e-9, format!("300 instances, worst relative gap {worst:.2e}"))
}

trait SeedSource {
    fn random_seed(&mut self) -> u64;
}

impl<R: rand::Rng> SeedSource for R {
    fn random_seed(&mut self) -> u64 {
        self.random()
    }
}

/// Hessian of (s, t) ↦ Tr log(X*AˢX + Y*BᵗY) by central differences, then
/// midpoint convexity of the trace functional.
fn trace_convexity() -> Outcome {
    let worst_eig = (0..200usize)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_from_seed(derive_seed(SEED ^ 4, i as u64));
            let n = 1 + i % 4;
            let a = random_spd_with(n, log_uniform(&mut rng, 1.0, 100.0), &mut rng).unwrap();
            let b = random_spd_with(n, log_uniform(&mut rng, 1.0, 100.0), &mut rng).unwrap();
            let x = random_invertible(n, log_uniform(&mut rng, 1.0, 10.0), &mut rng);
            let y = random_invertible(n, log_uniform(&mut rng, 1.0, 10.0), &mut rng);
            let inst = CongruenceInstance::new(
                vec![CongruenceTerm { a, x }, CongruenceTerm { a: b, x: y }],
                PosMap::identity(n).unwrap(),
                GeoFn::Identity,
                NormSpec::Trace,
            )
            .unwrap();
            let p = [uniform(&mut rng, -2.0, 2.0), uniform(&mut rng, -2.0, 2.0)];
            let h = fd_hessian(|z| trace_functional(&inst, &PhiFn::log(), z).unwrap(), &p, 1e-3);
            min_eig_2x2(&h)
        })
        .reduce(|| f64::INFINITY, f64::min);
    let r = search_counterexamples(Suite::TraceConvexity, 500, SEED, Some(1e-8), jobs()).unwrap();
    outcome(
        worst_eig >= -1e-5 && suite_clean(&r),
        format!("200 Hessians, smallest eigenvalue {worst_eig:.3e}; {}", suite_detail(&r)),
    )
}

fn corollaries() -> Outcome {
    let mut passed = true;
    let mut parts = Vec::new();
    for suite in [Suite::SchurInverse, Suite::CongruenceInverse, Suite::WeightedPower, Suite::GeodesicTrace, Suite::Holder] {
        let r = search_counterexamples(suite, 500, SEED, None, jobs()).unwrap();
        passed &= suite_clean(&r);
        parts.push(format!("{} {}/{}", r.suite, r.trials - r.violations - r.errors.len(), r.trials));
    }

    // sinh Hölder on commuting families for each p
    for p in [1.5, 2.0, 3.0] {
        let mut worst = f64::INFINITY;
        for i in 0..100u64 {
            let (m, n) = (1 + i as usize % 3, 1 + i as usize % 5);
            let (a, b) = holder_instance(m, n, p, derive_seed(SEED ^ 5, i), 100.0, false).unwrap();
            let norm = [NormSpec::Trace, NormSpec::Operator, NormSpec::Frobenius, NormSpec::Schatten(3.0)][i as usize % 4];
            let r = check_corollary_holder(&a, &b, p, &GeoFn::Sinh, norm, 1e-9).unwrap();
            passed &= r.passed;
            worst = worst.min(r.slack);
        }
        parts.push(format!("sinh p={p} min slack {worst:.2e}"));
    }

    // n = 1, g = id, trace norm: classical Hölder, equality when bᵢ ∝ aᵢ^(p−1)
    let mut worst_eq: f64 = 0.0;
    let mut worst_direct: f64 = 0.0;
    for p in [1.5, 2.0, 3.0] {
        let q = p / (p - 1.0);
        for i in 0..50u64 {
            for proportional in [true, false] {
                let (a, b) = holder_instance(1 + i as usize % 4, 1, p, derive_seed(SEED ^ 6, i), 100.0, proportional).unwrap();
                let r = check_corollary_holder(&a, &b, p, &GeoFn::Identity, NormSpec::Trace, 1e-12).unwrap();
                let w = r.witness.as_ref().unwrap();
                let (lhs, rhs) = (w["lhs"].as_f64().unwrap(), w["rhs"].as_f64().unwrap());
                let ai: Vec<f64> = a.iter().map(|m| m.matrix()[(0, 0)].re).collect();
                let bi: Vec<f64> = b.iter().map(|m| m.matrix()[(0, 0)].re).collect();
                let direct_lhs: f64 = ai.iter().zip(&bi).map(|(x, y)| x * y).sum();
                let direct_rhs = ai.iter().map(|x| x.powf(p)).sum::<f64>().powf(1.0 / p) * bi.iter().map(|y| y.powf(q)).sum::<f64>().powf(1.0 / q);
                worst_direct = worst_direct.max((lhs.exp() / direct_lhs - 1.0).abs()).max((rhs.exp() / direct_rhs - 1.0).abs());
                passed &= r.passed;
                if proportional {
                    worst_eq = worst_eq.max((rhs.exp() / lhs.exp() - 1.0).abs());
                }
            }
        }
    }
    passed &= worst_eq <= 1e-12 && worst_direct <= 1e-12;
    parts.push(format!("scalar equality gap {worst_eq:.1e}, scalar direct gap {worst_direct:.1e}"));
    outcome(passed, parts.join("; "))
}

fn proof_chain_steps() -> Outcome {
    let per_instance: Vec<Vec<(bool, f64)>> = (0..500usize)
        .into_par_iter()
        .map(|i| {
            let TrialCase::ProofChain { instance, s, t } = Suite::ProofChain.generate(derive_seed(SEED, i as u64), i).unwrap() else {
                unreachable!()
            };
            proof_chain(&instance, &s, &t, 1e-9).unwrap().steps.iter().map(|st| (st.result.passed, st.result.slack)).collect()
        })
        .collect();
    let mut passed = true;
    let mut parts = Vec::new();
    for (k, name) in STEP_NAMES.iter().enumerate() {
        let fails = per_instance.iter().filter(|steps| !steps[k].0).count();
        let worst = per_instance.iter().map(|steps| steps[k].1).fold(f64::INFINITY, f64::min);
        passed &= fails == 0;
        parts.push(format!("{name} {fails} fail (min {worst:.1e})"));
    }
    outcome(passed, format!("500 instances: {}", parts.join(", ")))
}

fn negative_controls() -> Outcome {
    let r = search_counterexamples(Suite::NegativeControls, 1000, SEED, None, jobs()).unwrap();
    let counts: Vec<String> = r.controls.iter().map(|(k, v)| format!("{k} {v}")).collect();
    outcome(r.passed && r.controls.len() == 4 && r.controls.values().all(|&v| v > 0), format!("violations per control: {}", counts.join(", ")))
}

fn oracle_equivalence() -> Outcome {
    let commuting = (0..300usize)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_from_seed(derive_seed(SEED ^ 8, i as u64));
            let n = 1 + i % 8;
            let u = random_unitary(n, &mut rng);
            let cond = log_uniform(&mut rng, 1.0, 100.0);
            let mut diag = || (0..n).map(|_| log_uniform(&mut rng, 1.0, cond)).collect::<Vec<f64>>();
            let (da, db) = (diag(), diag());
            let t = uniform(&mut rng, -2.0, 2.0);
            let a = SpdMatrix::from_matrix(compose(&u, &da)).unwrap();
            let b = SpdMatrix::from_matrix(compose(&u, &db)).unwrap();
            rel(weighted_geomean(&a, &b, t).unwrap().matrix(), &geomean_commuting(&u, &da, &db, t))
        })
        .reduce(|| 0.0, f64::max);
    let generic = (0..300usize)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_from_seed(derive_seed(SEED ^ 9, i as u64));
            let n = 1 + i % 8;
            let a = random_spd_with(n, log_uniform(&mut rng, 1.0, 100.0), &mut rng).unwrap();
            let b = random_spd_with(n, log_uniform(&mut rng, 1.0, 100.0), &mut rng).unwrap();
            let t = uniform(&mut rng, -2.0, 2.0);
            rel(weighted_geomean(&a, &b, t).unwrap().matrix(), &geomean_eigen_path(a.matrix(), b.matrix(), t))
        })
        .reduce(|| 0.0, f64::max);
    outcome(commuting <= 1e-10 && generic <= 1e-10, format!("300 commuting worst {commuting:.2e}, 300 generic worst {generic:.2e}"))
}

fn run_bin(args: &[&str]) -> (i32, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_spdlab")).args(args).output().expect("spdlab runs");
    (out.status.code().unwrap_or(-1), out.stdout)
}

fn same_bytes(dir: &Path, name: &str, make: impl Fn(&str, &str) -> Vec<String>) -> (bool, i32) {
    let runs: Vec<(i32, Vec<u8>)> = [("1", "a"), ("1", "b"), ("4", "c")]
        .iter()
        .map(|(jobs, tag)| {
            let path = dir.join(format!("{name}-{tag}"));
            let args = make(jobs, path.to_str().unwrap());
            let argv: Vec<&str> = args.iter().map(String::as_str).collect();
            let (code, _) = run_bin(&argv);
            (code, std::fs::read(&path).unwrap_or_default())
        })
        .collect();
    let identical = !runs[0].1.is_empty() && runs.iter().all(|r| r.1 == runs[0].1 && r.0 == runs[0].0);
    (identical, runs[0].0)
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let (verify_same, verify_code) = same_bytes(dir.path(), "verify.json", |jobs, out| {
        ["verify", "thm21", "--trials", "150", "--seed", "7", "--jobs", jobs, "--out", out].map(String::from).to_vec()
    });
    let (controls_same, _) = same_bytes(dir.path(), "controls.json", |jobs, out| {
        ["verify", "negative_controls", "--trials", "120", "--seed", "7", "--jobs", jobs, "--out", out].map(String::from).to_vec()
    });
    let (scan_same, scan_code) = same_bytes(dir.path(), "scan.csv", |jobs, out| {
        ["scan", "--m", "2", "--n", "4", "--seed", "7", "--steps", "101", "--jobs", jobs, "--out", out].map(String::from).to_vec()
    });
    outcome(
        verify_same && controls_same && scan_same && verify_code == 0 && scan_code == 0,
        format!("verify identical {verify_same}, negative_controls identical {controls_same}, scan identical {scan_same}"),
    )
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 9] = [
        ("geodesic algebra", geodesic_algebra),
        ("midpoint log-convexity of the geodesic functional", geodesic_log_convexity),
        ("congruence functional equals its geodesic form", polar_bridge),
        ("trace-log Hessian and trace convexity", trace_convexity),
        ("consequences and matrix Hölder", corollaries),
        ("proof-chain steps", proof_chain_steps),
        ("negative controls have teeth", negative_controls),
        ("oracle equivalence of the weighted mean", oracle_equivalence),
        ("byte-identical verify and scan output", determinism),
    ];
    let mut failures = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = check();
        if !o.passed {
            failures += 1;
        }
        println!("criterion {} {} {name}: {} [{:.1?}]", k + 1, if o.passed { "PASS" } else { "FAIL" }, o.detail, start.elapsed());
    }
    println!("acceptance: {}/9 criteria passed", 9 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
