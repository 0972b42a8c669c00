//! Named verification suites, seeded trial generation and the parallel
//! counterexample search.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::check::CheckResult;
use crate::error::{Error, Result};
use crate::geo_convex::{GeoFn, PhiFn};
use crate::maps::{check_ando, PosMap};
use crate::majorization::check_horn;
use crate::norms::NormSpec;
use crate::random::{derive_seed, log_uniform, random_commuting_spd, random_invertible, random_psd, random_spd_with, random_unitary, rng_from_seed, uniform, LabRng};
use crate::spectral::{CMatrix, HermitianMatrix, SpdMatrix};

use super::controls::{Control, ControlCase};
use super::corollaries::{
    check_corollary_congruence, check_corollary_holder, check_corollary_schur, check_corollary_weighted_power,
    check_det_limit, check_trace_convexity, default_alphas,
};
use super::functional::{check_midpoint_logconvex, check_polar_bridge, Functional};
use super::instance::{random_map, CongruenceInstance, CongruenceTerm, GeodesicInstance, MapVariant};
use super::proof_chain::proof_chain;

/// How many of the worst trials a report keeps.
pub const WORST_KEPT: usize = 10;

/// The functions every convexity suite cycles through.
pub fn g_bank() -> Vec<GeoFn> {
    ["pow:2", "sinh", "max(const:2, scale:3(pow:2))", "sum(pow:1, pow:3)"]
        .iter()
        .map(|s| s.parse().expect("bank entries parse"))
        .collect()
}

/// The norms every convexity suite cycles through.
pub fn norm_bank() -> [NormSpec; 4] {
    [NormSpec::Trace, NormSpec::Operator, NormSpec::KyFan(2), NormSpec::Schatten(3.0)]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    GeodesicLogConvexity,
    CongruenceLogConvexity,
    TraceConvexity,
    SchurInverse,
    CongruenceInverse,
    WeightedPower,
    GeodesicTrace,
    Holder,
    Ando,
    Horn,
    ProofChain,
    NegativeControls,
}

impl Suite {
    pub const ALL: [Suite; 12] = [
        Suite::GeodesicLogConvexity,
        Suite::CongruenceLogConvexity,
        Suite::TraceConvexity,
        Suite::SchurInverse,
        Suite::CongruenceInverse,
        Suite::WeightedPower,
        Suite::GeodesicTrace,
        Suite::Holder,
        Suite::Ando,
        Suite::Horn,
        Suite::ProofChain,
        Suite::NegativeControls,
    ];

    /// Registry name used on the command line.
    pub fn name(self) -> &'static str {
        match self {
            Suite::GeodesicLogConvexity => "thm21",
            Suite::CongruenceLogConvexity => "thm12",
            Suite::TraceConvexity => "thm11",
            Suite::SchurInverse => "cor13",
            Suite::CongruenceInverse => "cor14",
            Suite::WeightedPower => "cor15",
            Suite::GeodesicTrace => "cor22",
            Suite::Holder => "cor23",
            Suite::Ando => "ando",
            Suite::Horn => "horn",
            Suite::ProofChain => "proofchain",
            Suite::NegativeControls => "negative_controls",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Suite::GeodesicLogConvexity => "t ↦ ‖g(Φ(Σ Aᵢ #_tᵢ Bᵢ))‖ is midpoint log-convex",
            Suite::CongruenceLogConvexity => "t ↦ ‖g(Φ(Σ Xᵢ* Aᵢ^tᵢ Xᵢ))‖ is midpoint log-convex and matches its geodesic form",
            Suite::TraceConvexity => "t ↦ Tr φ(Σ Xᵢ* Aᵢ^tᵢ Xᵢ) is midpoint convex for φ = log g",
            Suite::SchurInverse => "‖g(Z∘I)‖² ≤ ‖g(Z∘A)‖ ‖g(Z∘A⁻¹)‖",
            Suite::CongruenceInverse => "‖g(Σ Xᵢ*Xᵢ)‖² ≤ ‖g(Σ Xᵢ*AᵢXᵢ)‖ ‖g(Σ Xᵢ*Aᵢ⁻¹Xᵢ)‖",
            Suite::WeightedPower => "‖g(Σ λᵢAᵢ)‖ ≤ ‖g(I)‖^(1/q) ‖g(Σ λᵢAᵢ^p)‖^(1/p)",
            Suite::GeodesicTrace => "t ↦ Tr φ(Σ Aᵢ #_tᵢ Bᵢ) is midpoint convex; det^(1/n) limit of power means",
            Suite::Holder => "‖g(Σ AᵢBᵢ)‖ ≤ ‖g(Σ Aᵢ^p)‖^(1/p) ‖g(Σ Bᵢ^q)‖^(1/q) for commuting pairs",
            Suite::Ando => "Φ(A # B) ≤ Φ(A) # Φ(B) for positive Φ",
            Suite::Horn => "∏ σⱼ(ST) ≤ ∏ σⱼ(S) σⱼ(T) over every prefix",
            Suite::ProofChain => "each step of the log-convexity argument holds on its own",
            Suite::NegativeControls => "dropping a hypothesis produces violations (passes when every control fails)",
        }
    }

    /// Violation tolerance; looser for the trace-form suites whose values
    /// are sums of many logs.
    pub fn default_tol(self) -> f64 {
        match self {
            Suite::TraceConvexity | Suite::GeodesicTrace => 1e-8,
            _ => 1e-9,
        }
    }

    pub fn expects_violations(self) -> bool {
        self == Suite::NegativeControls
    }

    /// The seeded inputs of trial `index`; `seed` is already the per-trial
    /// sub-seed.
    pub fn generate(self, seed: u64, index: usize) -> Result<TrialCase> {
        let mut rng = rng_from_seed(seed);
        let rng = &mut rng;
        let bank = g_bank();
        let pick_g = |k: usize| bank[k % bank.len()].clone();
        Ok(match self {
            Suite::GeodesicLogConvexity | Suite::ProofChain => {
                let variant = MapVariant::ALL[index % 6];
                let norm = norm_bank()[(index / 6) % 4];
                let g = pick_g(index / 24);
                let m = rng.random_range(1..=3);
                let n = rng.random_range(2..=6);
                let inst = random_geodesic(m, n, variant, g, norm, rng)?;
                let (s, t) = exponents(m, rng);
                if self == Suite::ProofChain {
                    TrialCase::ProofChain { instance: inst, s, t }
                } else {
                    TrialCase::GeodesicMidpoint { instance: inst, s, t }
                }
            }
            Suite::CongruenceLogConvexity => {
                let variant = MapVariant::ALL[index % 6];
                let norm = norm_bank()[(index / 6) % 4];
                let m = rng.random_range(1..=3);
                let n = rng.random_range(2..=6);
                let inst = random_congruence(m, n, variant, pick_g(index / 24), norm, rng)?;
                let (s, t) = exponents(m, rng);
                TrialCase::CongruenceMidpoint { instance: inst, s, t }
            }
            Suite::TraceConvexity => {
                let m = rng.random_range(1..=3);
                let n = rng.random_range(1..=4);
                let inst = random_congruence(m, n, MapVariant::Identity, pick_g(index), NormSpec::Trace, rng)?;
                let (s, t) = exponents(m, rng);
                TrialCase::TraceMidpoint { instance: inst, s, t }
            }
            Suite::SchurInverse => {
                let n = rng.random_range(1..=6);
                let rank = rng.random_range(1..=n);
                let z = random_psd(n, rank, rng);
                let a = random_spd_with(n, condition(rng), rng)?;
                TrialCase::SchurInverse { z, a, g: pick_g(index), norm: fit_norm(norm_bank()[(index / 4) % 4], n) }
            }
            Suite::CongruenceInverse => {
                let m = rng.random_range(1..=3);
                let n = rng.random_range(1..=6);
                let norm = fit_norm(norm_bank()[(index / 4) % 4], n);
                TrialCase::CongruenceInverse { instance: random_congruence(m, n, MapVariant::Identity, pick_g(index), norm, rng)? }
            }
            Suite::WeightedPower => {
                let m = rng.random_range(1..=3);
                let n = rng.random_range(1..=6);
                let a = (0..m).map(|_| random_spd_with(n, condition(rng), rng)).collect::<Result<Vec<_>>>()?;
                let raw: Vec<f64> = (0..m).map(|_| uniform(rng, 0.1, 1.0)).collect();
                let total: f64 = raw.iter().sum();
                let weights = raw.iter().map(|w| w / total).collect();
                let p = uniform(rng, 1.1, 4.0);
                TrialCase::WeightedPower { a, weights, p, g: pick_g(index), norm: fit_norm(norm_bank()[(index / 4) % 4], n) }
            }
            Suite::GeodesicTrace => {
                let m = rng.random_range(1..=3);
                let n = rng.random_range(1..=5);
                let inst = random_geodesic(m, n, MapVariant::Identity, pick_g(index), NormSpec::Trace, rng)?;
                let (s, t) = exponents(m, rng);
                TrialCase::GeodesicTrace { instance: inst, s, t, alphas: default_alphas() }
            }
            Suite::Holder => {
                let m = rng.random_range(1..=3);
                let n = rng.random_range(1..=5);
                let p = [1.5, 2.0, 3.0][index % 3];
                let norms = [NormSpec::Trace, NormSpec::Operator, NormSpec::Frobenius, NormSpec::KyFan(2), NormSpec::Schatten(3.0)];
                let norm = fit_norm(norms[(index / 3) % 5], n);
                let g = if index.is_multiple_of(2) { GeoFn::Sinh } else { pick_g(index / 2) };
                let u = random_unitary(n, rng);
                let mut family = || (0..m).map(|_| random_commuting_spd(&u, condition(rng), rng)).collect::<Result<Vec<_>>>();
                let a = family()?;
                let b = family()?;
                TrialCase::Holder { a, b, p, g, norm }
            }
            Suite::Ando => {
                let n = rng.random_range(1..=6);
                let map = random_map(MapVariant::ALL[index % 6], n, rng)?;
                let a = random_spd_with(n, condition(rng), rng)?;
                let b = random_spd_with(n, condition(rng), rng)?;
                TrialCase::Ando { map, a, b }
            }
            Suite::Horn => {
                let n = rng.random_range(1..=8);
                let s = random_invertible(n, condition(rng), rng);
                let t = random_invertible(n, condition(rng), rng);
                TrialCase::Horn { s, t }
            }
            Suite::NegativeControls => TrialCase::Control(ControlCase::generate(Control::ALL[index % 4], rng)?),
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite \"{s}\"; see --list")))
    }
}

fn condition(rng: &mut LabRng) -> f64 {
    log_uniform(rng, 1.0, 100.0)
}

fn exponents(m: usize, rng: &mut LabRng) -> (Vec<f64>, Vec<f64>) {
    let s = (0..m).map(|_| uniform(rng, -2.0, 2.0)).collect();
    let t = (0..m).map(|_| uniform(rng, -2.0, 2.0)).collect();
    (s, t)
}

/// Ky Fan `k` needs `k ≤ dim`; fall back to the largest available index.
fn fit_norm(norm: NormSpec, dim: usize) -> NormSpec {
    match norm {
        NormSpec::KyFan(k) if k > dim => NormSpec::KyFan(dim),
        other => other,
    }
}

fn random_geodesic(m: usize, n: usize, variant: MapVariant, g: GeoFn, norm: NormSpec, rng: &mut LabRng) -> Result<GeodesicInstance> {
    let map = random_map(variant, n, rng)?;
    let pairs = (0..m)
        .map(|_| Ok((random_spd_with(n, condition(rng), rng)?, random_spd_with(n, condition(rng), rng)?)))
        .collect::<Result<_>>()?;
    let norm = fit_norm(norm, map.output_dim());
    GeodesicInstance::new(pairs, map, g, norm)
}

fn random_congruence(m: usize, n: usize, variant: MapVariant, g: GeoFn, norm: NormSpec, rng: &mut LabRng) -> Result<CongruenceInstance> {
    let map = random_map(variant, n, rng)?;
    let terms = (0..m)
        .map(|_| {
            let a = random_spd_with(n, condition(rng), rng)?;
            let x = random_invertible(n, condition(rng).sqrt(), rng);
            Ok(CongruenceTerm { a, x })
        })
        .collect::<Result<_>>()?;
    let norm = fit_norm(norm, map.output_dim());
    CongruenceInstance::new(terms, map, g, norm)
}

/// The full inputs of one trial; running it reproduces the result exactly.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "check", rename_all = "snake_case")]
pub enum TrialCase {
    GeodesicMidpoint { instance: GeodesicInstance, s: Vec<f64>, t: Vec<f64> },
    CongruenceMidpoint { instance: CongruenceInstance, s: Vec<f64>, t: Vec<f64> },
    TraceMidpoint { instance: CongruenceInstance, s: Vec<f64>, t: Vec<f64> },
    SchurInverse { z: HermitianMatrix, a: SpdMatrix, g: GeoFn, norm: NormSpec },
    CongruenceInverse { instance: CongruenceInstance },
    WeightedPower { a: Vec<SpdMatrix>, weights: Vec<f64>, p: f64, g: GeoFn, norm: NormSpec },
    GeodesicTrace { instance: GeodesicInstance, s: Vec<f64>, t: Vec<f64>, alphas: Vec<f64> },
    Holder { a: Vec<SpdMatrix>, b: Vec<SpdMatrix>, p: f64, g: GeoFn, norm: NormSpec },
    Ando { map: PosMap, a: SpdMatrix, b: SpdMatrix },
    Horn {
        #[serde(with = "crate::io::cmatrix")]
        s: CMatrix,
        #[serde(with = "crate::io::cmatrix")]
        t: CMatrix,
    },
    ProofChain { instance: GeodesicInstance, s: Vec<f64>, t: Vec<f64> },
    Control(ControlCase),
}

impl TrialCase {
    pub fn run(&self, tol: f64) -> Result<CheckResult> {
        match self {
            TrialCase::GeodesicMidpoint { instance, s, t } => check_midpoint_logconvex(|x| instance.log_value(x), s, t, tol),
            TrialCase::CongruenceMidpoint { instance, s, t } => {
                let midpoint = check_midpoint_logconvex(|x| instance.log_value(x), s, t, tol)?;
                let bridge = check_polar_bridge(instance, s, tol)?;
                Ok(CheckResult::worst_of([midpoint, bridge]).expect("two results"))
            }
            TrialCase::TraceMidpoint { instance, s, t } => {
                check_trace_convexity(instance, &PhiFn::new(instance.g.clone()), s, t, tol)
            }
            TrialCase::SchurInverse { z, a, g, norm } => check_corollary_schur(z, a, g, *norm, tol),
            TrialCase::CongruenceInverse { instance } => check_corollary_congruence(instance, tol),
            TrialCase::WeightedPower { a, weights, p, g, norm } => check_corollary_weighted_power(a, weights, *p, g, *norm, tol),
            TrialCase::GeodesicTrace { instance, s, t, alphas } => {
                let convex = check_trace_convexity(instance, &PhiFn::new(instance.g.clone()), s, t, tol)?;
                let limit = check_det_limit(instance, alphas, s, t, tol)?;
                Ok(CheckResult::worst_of([convex, limit]).expect("two results"))
            }
            TrialCase::Holder { a, b, p, g, norm } => check_corollary_holder(a, b, *p, g, *norm, tol),
            TrialCase::Ando { map, a, b } => check_ando(map, a, b, tol),
            TrialCase::Horn { s, t } => check_horn(s, t, tol),
            TrialCase::ProofChain { instance, s, t } => Ok(proof_chain(instance, s, t, tol)?.overall()),
            TrialCase::Control(c) => c.run(tol),
        }
    }

    pub fn control(&self) -> Option<Control> {
        match self {
            TrialCase::Control(c) => Some(c.control()),
            _ => None,
        }
    }
}

/// One kept trial: its index, sub-seed, result and full inputs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub suite: String,
    pub trial: usize,
    pub seed: u64,
    pub tol: f64,
    pub slack: f64,
    pub tol_used: f64,
    pub passed: bool,
    pub case: TrialCase,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialError {
    pub trial: usize,
    pub seed: u64,
    pub numerical: bool,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub trials: usize,
    pub seed: u64,
    pub tol: f64,
    pub passed: bool,
    pub violations: usize,
    pub numerical_failures: usize,
    pub other_errors: usize,
    /// Slacks of the kept trials, worst first (ordered by `slack / tol_used`).
    pub worst_slacks: Vec<f64>,
    pub witnesses: Vec<Witness>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub errors: Vec<TrialError>,
    /// Violations per control, for the negative-control suite.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub controls: BTreeMap<String, usize>,
}

impl Report {
    /// `0` passed, `1` violation (or a control that failed to fail), `3`
    /// numerical failures in at least half of the trials.
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else if 2 * self.numerical_failures >= self.trials {
            3
        } else {
            1
        }
    }
}

fn normalized(r: &CheckResult) -> f64 {
    if r.tol_used > 0.0 {
        r.slack / r.tol_used
    } else {
        r.slack
    }
}

type Outcome = (usize, u64, Result<(TrialCase, CheckResult)>);

/// Runs `trials` seeded trials of `suite` on `jobs` threads. Trial `i` uses
/// the sub-seed `derive_seed(seed, i)`, so the report does not depend on
/// `jobs`.
pub fn search_counterexamples(suite: Suite, trials: usize, seed: u64, tol: Option<f64>, jobs: usize) -> Result<Report> {
    if trials == 0 {
        return Err(Error::Precondition("trials must be at least 1".into()));
    }
    let tol = tol.unwrap_or_else(|| suite.default_tol());
    if !(tol >= 0.0) {
        return Err(Error::Precondition(format!("tolerance {tol} must be nonnegative")));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Precondition(format!("thread pool: {e}")))?;
    let outcomes: Vec<Outcome> = pool.install(|| {
        (0..trials)
            .into_par_iter()
            .map(|i| {
                let sub = derive_seed(seed, i as u64);
                let out = suite.generate(sub, i).and_then(|case| {
                    let r = case.run(tol)?;
                    Ok((case, r))
                });
                (i, sub, out)
            })
            .collect()
    });

    let mut violations = 0;
    let mut numerical_failures = 0;
    let mut errors = Vec::new();
    let mut controls: BTreeMap<String, usize> = BTreeMap::new();
    if suite.expects_violations() {
        for c in Control::ALL {
            controls.insert(c.name().to_string(), 0);
        }
    }
    let mut kept: Vec<(f64, usize, u64, &TrialCase, &CheckResult)> = Vec::new();
    for (i, sub, out) in &outcomes {
        match out {
            Ok((case, r)) => {
                if !r.passed {
                    violations += 1;
                    if let Some(c) = case.control() {
                        *controls.entry(c.name().to_string()).or_default() += 1;
                    }
                }
                kept.push((normalized(r), *i, *sub, case, r));
            }
            Err(e) => {
                let numerical = e.is_numerical();
                if numerical {
                    numerical_failures += 1;
                }
                errors.push(TrialError { trial: *i, seed: *sub, numerical, message: e.to_string() });
            }
        }
    }
    kept.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    kept.truncate(WORST_KEPT);
    let witnesses: Vec<Witness> = kept
        .iter()
        .map(|(_, i, sub, case, r)| Witness {
            suite: suite.name().to_string(),
            trial: *i,
            seed: *sub,
            tol,
            slack: r.slack,
            tol_used: r.tol_used,
            passed: r.passed,
            case: (*case).clone(),
        })
        .collect();
    let other_errors = errors.len() - numerical_failures;
    let passed = if suite.expects_violations() {
        controls.values().all(|&v| v > 0)
    } else {
        violations == 0 && other_errors == 0 && 2 * numerical_failures < trials
    };
    Ok(Report {
        suite: suite.name().to_string(),
        trials,
        seed,
        tol,
        passed,
        violations,
        numerical_failures,
        other_errors,
        worst_slacks: witnesses.iter().map(|w| w.slack).collect(),
        witnesses,
        errors,
        controls,
    })
}

/// Re-runs a witness at its recorded tolerance.
pub fn replay(witness: &Witness) -> Result<CheckResult> {
    witness.case.run(witness.tol)
}
