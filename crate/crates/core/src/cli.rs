//! Command-line front end. [`run`] takes the argument list and two writers
//! and returns the process exit status, so the binary is a thin shim.
//!
//! Exit status: 0 passed, 1 violation found, 2 usage or configuration
//! error, 3 numerical failures dominated the run.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::geo_convex::GeoFn;
use crate::lab::instance::{random_instance, Instance, InstanceKind, Structure};
use crate::lab::scan::{scan_functional, ScanAxis};
use crate::lab::suites::{replay, search_counterexamples, Report, Suite, Witness};
use crate::lab::corollaries::check_corollary_holder;
use crate::lab::functional::Functional;
use crate::maps::PosMap;
use crate::norms::NormSpec;
use crate::random::{log_uniform, random_commuting_spd, random_unitary, rng_from_seed};
use crate::spectral::SpdMatrix;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

const DEFAULT_SEED: &str = "42";

#[derive(Debug, Parser)]
#[command(name = "spdlab", version, about = "Seeded verification of convexity inequalities on positive definite matrices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a verification suite and write its JSON report.
    Verify(VerifyArgs),
    /// Tabulate ln F along one exponent axis as CSV.
    Scan(ScanArgs),
    /// Evaluate both sides of the matrix Hölder inequality on a commuting instance.
    Holder(HolderArgs),
    /// Write a seeded random instance as JSON.
    Gen(GenArgs),
    /// Re-run witnesses from a report or witness file.
    Replay(ReplayArgs),
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Suite name; see --list.
    #[arg(value_parser = parse::<Suite>, required_unless_present = "list")]
    pub suite: Option<Suite>,
    /// Print the registered suites and exit.
    #[arg(long)]
    pub list: bool,
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    #[arg(long, env = "SPDLAB_SEED", default_value = DEFAULT_SEED)]
    pub seed: u64,
    /// Violation tolerance; defaults to the suite's own.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Report path; stdout when absent. Failing witnesses go next to it.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Where an instance comes from: a JSON file or the seeded generator, with
/// optional overrides of its map, `g` and norm.
#[derive(Debug, Args)]
pub struct InstanceArgs {
    #[arg(long, conflicts_with_all = ["kind", "m", "n", "cond", "structure"])]
    pub instance: Option<PathBuf>,
    #[arg(long, value_parser = parse::<InstanceKind>)]
    pub kind: Option<InstanceKind>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, env = "SPDLAB_SEED", default_value = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long)]
    pub cond: Option<f64>,
    #[arg(long, value_parser = parse::<Structure>)]
    pub structure: Option<Structure>,
    /// Positive map, e.g. `id:3`, `tr:3`, `schur:z.json`, `bsum(tr:3, 2)`.
    #[arg(long)]
    pub map: Option<String>,
    #[arg(long, value_parser = parse::<GeoFn>)]
    pub g: Option<GeoFn>,
    #[arg(long, value_parser = parse::<NormSpec>)]
    pub norm: Option<NormSpec>,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub source: InstanceArgs,
    /// Index of the exponent that varies.
    #[arg(long, default_value_t = 0)]
    pub axis: usize,
    #[arg(long, default_value_t = -2.0, allow_negative_numbers = true)]
    pub lo: f64,
    #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
    pub hi: f64,
    #[arg(long, default_value_t = 101)]
    pub steps: usize,
    /// Values of the other exponents, comma separated; zeros by default.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub fixed: Option<Vec<f64>>,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// CSV path; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct HolderArgs {
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    #[arg(long, default_value_t = 2)]
    pub m: usize,
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    #[arg(long, env = "SPDLAB_SEED", default_value = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = 100.0)]
    pub cond: f64,
    #[arg(long, value_parser = parse::<GeoFn>, default_value = "sinh")]
    pub g: GeoFn,
    #[arg(long, value_parser = parse::<NormSpec>, default_value = "tr")]
    pub norm: NormSpec,
    /// Take `Bᵢ = c Aᵢ^(p−1)`, the equality case for `g = id` and the trace norm.
    #[arg(long)]
    pub proportional: bool,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[command(flatten)]
    pub source: InstanceArgs,
    /// Instance path; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    /// A report, a single witness or an array of witnesses.
    pub file: PathBuf,
    /// Overrides the recorded tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
}

fn parse<T: FromStr<Err = Error>>(s: &str) -> std::result::Result<T, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Status for a library error: numerical trouble is 3, everything else is
/// bad input.
pub fn exit_code_for(e: &Error) -> i32 {
    if e.is_numerical() {
        EXIT_NUMERICAL
    } else {
        EXIT_USAGE
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return e.exit_code();
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code_for(&e)
        }
    }
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Verify(a) => verify(a, out, err),
        Command::Scan(a) => scan(a, out, err),
        Command::Holder(a) => holder(a, out),
        Command::Gen(a) => gen(a, out),
        Command::Replay(a) => replay_cmd(a, out),
    }
}

fn emit(path: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn verify(a: VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    if a.list {
        for s in Suite::ALL {
            writeln!(out, "{:<18} {}", s.name(), s.description())?;
        }
        return Ok(EXIT_PASS);
    }
    let suite = a.suite.expect("clap requires a suite without --list");
    let report = search_counterexamples(suite, a.trials, a.seed, a.tol, a.jobs)?;
    let code = report.exit_code();
    emit(a.out.as_deref(), &(serde_json::to_string_pretty(&report)? + "\n"), out)?;
    if code == EXIT_VIOLATION {
        if let Some(path) = &a.out {
            let failing: Vec<&Witness> = report.witnesses.iter().filter(|w| !w.passed).collect();
            fs::write(witness_path(path), serde_json::to_string_pretty(&failing)? + "\n")?;
        }
    }
    writeln!(err, "{}", summary(&report))?;
    Ok(code)
}

/// `report.json` → `report.witnesses.json`.
pub fn witness_path(report: &Path) -> PathBuf {
    let stem = report.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "report".into());
    report.with_file_name(format!("{stem}.witnesses.json"))
}

fn summary(r: &Report) -> String {
    let mut s = format!(
        "{}: {} trials, {} violations, {} numerical failures, {} other errors",
        r.suite, r.trials, r.violations, r.numerical_failures, r.other_errors
    );
    for (name, v) in &r.controls {
        s.push_str(&format!(", {name} {v}"));
    }
    s.push_str(if r.passed { ": passed" } else { ": FAILED" });
    s
}

fn load_instance(src: &InstanceArgs) -> Result<Instance> {
    let (inst, base) = match &src.instance {
        Some(path) => (Instance::load(path)?, path.parent().map(Path::to_path_buf).unwrap_or_default()),
        None => (
            random_instance(
                src.kind.unwrap_or(InstanceKind::Geodesic),
                src.m.unwrap_or(2),
                src.n.unwrap_or(3),
                src.seed,
                src.cond.unwrap_or(100.0),
                src.structure.unwrap_or(Structure::Generic),
            )?,
            PathBuf::from("."),
        ),
    };
    let map = src.map.as_deref().map(|m| PosMap::parse_config(m, &base)).transpose()?;
    inst.with_parts(map, src.g.clone(), src.norm)
}

fn scan(a: ScanArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let inst = load_instance(&a.source)?;
    let axis = ScanAxis { index: a.axis, lo: a.lo, hi: a.hi, steps: a.steps };
    let fixed = a.fixed.clone().unwrap_or_else(|| vec![0.0; inst.arity()]);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(a.jobs.max(1))
        .build()
        .map_err(|e| Error::Precondition(format!("thread pool: {e}")))?;
    let result = pool.install(|| scan_functional(&inst, &axis, &fixed, a.tol))?;
    let failed_rows = result.rows.iter().filter(|r| r.log_f.is_err()).count();
    emit(a.out.as_deref(), &result.to_csv(), out)?;
    let c = &result.convexity;
    writeln!(
        err,
        "scan: {} rows, {} errors, worst second difference {:e} (tol {:e}): {}",
        result.rows.len(),
        failed_rows,
        c.slack,
        c.tol_used,
        if c.passed { "convex" } else { "NOT convex" }
    )?;
    Ok(if 2 * failed_rows >= result.rows.len() {
        EXIT_NUMERICAL
    } else if c.passed {
        EXIT_PASS
    } else {
        EXIT_VIOLATION
    })
}

/// The commuting family used by `holder`: all matrices diagonal in one
/// random basis; with `proportional`, `Bᵢ = c Aᵢ^(p−1)` for one `c`.
pub fn holder_instance(
    m: usize,
    n: usize,
    p: f64,
    seed: u64,
    cond: f64,
    proportional: bool,
) -> Result<(Vec<SpdMatrix>, Vec<SpdMatrix>)> {
    if m == 0 || n == 0 {
        return Err(Error::Precondition(format!("need m, n ≥ 1, got m = {m}, n = {n}")));
    }
    let mut rng = rng_from_seed(seed);
    let u = random_unitary(n, &mut rng);
    let a = (0..m).map(|_| random_commuting_spd(&u, cond, &mut rng)).collect::<Result<Vec<_>>>()?;
    let b = if proportional {
        let c = log_uniform(&mut rng, 0.5, 2.0);
        a.iter().map(|ai| SpdMatrix::new(ai.power(p - 1.0)?.as_hermitian().scale(c))).collect::<Result<Vec<_>>>()?
    } else {
        (0..m).map(|_| random_commuting_spd(&u, cond, &mut rng)).collect::<Result<Vec<_>>>()?
    };
    Ok((a, b))
}

fn holder(a: HolderArgs, out: &mut dyn Write) -> Result<i32> {
    if !(a.p > 1.0 && a.p.is_finite()) {
        return Err(Error::Precondition(format!("p must be a finite number above 1, got {}", a.p)));
    }
    let q = a.p / (a.p - 1.0);
    let (aa, bb) = holder_instance(a.m, a.n, a.p, a.seed, a.cond, a.proportional)?;
    let r = check_corollary_holder(&aa, &bb, a.p, &a.g, a.norm, a.tol)?;
    let w = r.witness.as_ref().expect("holder check records both sides");
    let lhs = w["lhs"].as_f64().unwrap_or(f64::NAN);
    let rhs = w["rhs"].as_f64().unwrap_or(f64::NAN);
    writeln!(out, "p = {}, q = {q}, m = {}, n = {}, g = {}, norm = {}, seed = {}", a.p, a.m, a.n, a.g, a.norm, a.seed)?;
    writeln!(out, "lhs   ‖g(Σ AᵢBᵢ)‖                          = {:.16e}  (ln {:.16e})", lhs.exp(), lhs)?;
    writeln!(out, "rhs   ‖g(Σ Aᵢ^p)‖^(1/p) ‖g(Σ Bᵢ^q)‖^(1/q)  = {:.16e}  (ln {:.16e})", rhs.exp(), rhs)?;
    writeln!(out, "slack ln rhs − ln lhs                      = {:.6e}  (tol {:.1e})", r.slack, r.tol_used)?;
    writeln!(out, "{}", if r.passed { "holds" } else { "VIOLATED" })?;
    Ok(if r.passed { EXIT_PASS } else { EXIT_VIOLATION })
}

fn gen(a: GenArgs, out: &mut dyn Write) -> Result<i32> {
    let inst = load_instance(&a.source)?;
    emit(a.out.as_deref(), &(inst.to_json()? + "\n"), out)?;
    Ok(EXIT_PASS)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum WitnessFile {
    Report(Box<Report>),
    Many(Vec<Witness>),
    One(Box<Witness>),
}

fn replay_cmd(a: ReplayArgs, out: &mut dyn Write) -> Result<i32> {
    let text = fs::read_to_string(&a.file)?;
    let witnesses = match serde_json::from_str::<WitnessFile>(&text)? {
        WitnessFile::Report(r) => r.witnesses,
        WitnessFile::Many(ws) => ws,
        WitnessFile::One(w) => vec![*w],
    };
    let mut code = EXIT_PASS;
    for mut w in witnesses {
        if let Some(t) = a.tol {
            w.tol = t;
        }
        match replay(&w) {
            Ok(r) => {
                // loading recomputes spectra, so agreement is to round-off
                let same = (r.slack - w.slack).abs() <= r.tol_used.max(w.tol_used);
                writeln!(
                    out,
                    "{} trial {} (seed {}): slack {:e}, tol {:e}, {}{}",
                    w.suite,
                    w.trial,
                    w.seed,
                    r.slack,
                    r.tol_used,
                    if r.passed { "passed" } else { "VIOLATED" },
                    if same { String::new() } else { format!(" (recorded slack {:e})", w.slack) }
                )?;
                if !r.passed {
                    code = EXIT_VIOLATION;
                }
            }
            Err(e) => {
                writeln!(out, "{} trial {} (seed {}): error: {e}", w.suite, w.trial, w.seed)?;
                code = code.max(exit_code_for(&e));
            }
        }
    }
    Ok(code)
}
