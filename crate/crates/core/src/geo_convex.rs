//! Geometrically convex scalar functions.
//!
//! A nonnegative `g` on `(0, ∞)` is geometrically convex when
//! `g(√(ab)) ≤ √(g(a) g(b))`, i.e. when `u ↦ ln g(eᵘ)` is convex. [`GeoFn`]
//! is a closed expression tree over atoms and combinators that all preserve
//! this property together with monotonicity, so every tree is a valid `g`.
//!
//! Trees print and parse in a small syntax:
//!
//! ```text
//! sinh | exp | id | pow:<α> | const:<c>
//! sum(f, g, ...) | max(f, g, ...) | prod(f, g, ...)
//! scale:<c>(f) | pow_of:<α>(f) | exp_of(f)
//! ```

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::check::CheckResult;
use crate::error::{Error, Result};
use crate::norms::log_sum_exp;
use crate::random::{log_uniform, rng_from_seed};

/// Absolute tolerance for scalar checks after normalizing by `max(1, |values|)`.
pub const SCALAR_TOL: f64 = 1e-11;

/// A positive scalar function on `(0, ∞)` that can also be evaluated in log
/// form. Implemented by [`GeoFn`], [`PhiFn`] and the unconstrained [`RawFn`].
pub trait ScalarFn: Send + Sync {
    fn eval(&self, t: f64) -> Result<f64>;

    fn log_eval(&self, t: f64) -> Result<f64> {
        Ok(self.eval(t)?.ln())
    }

    fn name(&self) -> String;
}

#[derive(Clone, Debug, PartialEq)]
pub enum GeoFn {
    Power(f64),
    Constant(f64),
    Sinh,
    Exp,
    Identity,
    Sum(Vec<GeoFn>),
    Max(Vec<GeoFn>),
    Product(Vec<GeoFn>),
    Scale(f64, Box<GeoFn>),
    ExpOf(Box<GeoFn>),
    PowerOf(f64, Box<GeoFn>),
}

fn finite(v: f64, what: impl FnOnce() -> String) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Range(what()))
    }
}

impl GeoFn {
    /// `Σ cₖ t^{αₖ}` with `cₖ > 0`, `αₖ ≥ 0`.
    pub fn polynomial(terms: &[(f64, f64)]) -> Result<Self> {
        let g = GeoFn::Sum(
            terms
                .iter()
                .map(|&(c, a)| GeoFn::Scale(c, Box::new(GeoFn::Power(a))))
                .collect(),
        );
        g.validate()?;
        Ok(g)
    }

    /// `max{c, β t^α}`.
    pub fn max_const_power(c: f64, beta: f64, alpha: f64) -> Result<Self> {
        let g = GeoFn::Max(vec![
            GeoFn::Constant(c),
            GeoFn::Scale(beta, Box::new(GeoFn::Power(alpha))),
        ]);
        g.validate()?;
        Ok(g)
    }

    /// Checks parameter ranges: powers `α ≥ 0`, constants and scales `> 0`,
    /// outer powers `α > 0`, non-empty combinator lists.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Parse(msg));
        match self {
            GeoFn::Power(a) if !(*a >= 0.0 && a.is_finite()) => bad(format!("pow:{a} needs α ≥ 0")),
            GeoFn::Constant(c) if !(*c > 0.0 && c.is_finite()) => bad(format!("const:{c} needs c > 0")),
            GeoFn::Sum(v) | GeoFn::Max(v) | GeoFn::Product(v) => {
                if v.is_empty() {
                    return bad("empty combinator".into());
                }
                v.iter().try_for_each(GeoFn::validate)
            }
            GeoFn::Scale(c, f) => {
                if !(*c > 0.0 && c.is_finite()) {
                    return bad(format!("scale:{c} needs c > 0"));
                }
                f.validate()
            }
            GeoFn::PowerOf(a, f) => {
                if !(*a > 0.0 && a.is_finite()) {
                    return bad(format!("pow_of:{a} needs α > 0"));
                }
                f.validate()
            }
            GeoFn::ExpOf(f) => f.validate(),
            _ => Ok(()),
        }
    }

    fn eval_inner(&self, t: f64) -> Result<f64> {
        let v = match self {
            GeoFn::Power(a) => {
                if *a == 0.0 {
                    1.0
                } else {
                    t.powf(*a)
                }
            }
            GeoFn::Constant(c) => *c,
            GeoFn::Sinh => t.sinh(),
            GeoFn::Exp => t.exp(),
            GeoFn::Identity => t,
            GeoFn::Sum(v) => v.iter().map(|f| f.eval_inner(t)).sum::<Result<f64>>()?,
            GeoFn::Max(v) => v
                .iter()
                .map(|f| f.eval_inner(t))
                .try_fold(f64::NEG_INFINITY, |m, x| x.map(|x| m.max(x)))?,
            GeoFn::Product(v) => v.iter().map(|f| f.eval_inner(t)).product::<Result<f64>>()?,
            GeoFn::Scale(c, f) => c * f.eval_inner(t)?,
            GeoFn::ExpOf(f) => f.eval_inner(t)?.exp(),
            GeoFn::PowerOf(a, f) => f.eval_inner(t)?.powf(*a),
        };
        finite(v, || format!("{self} at t = {t:e}"))
    }

    fn log_eval_inner(&self, t: f64) -> Result<f64> {
        let v = match self {
            GeoFn::Power(a) => {
                if *a == 0.0 {
                    0.0
                } else {
                    a * t.ln()
                }
            }
            GeoFn::Constant(c) => c.ln(),
            GeoFn::Sinh => log_sinh(t),
            GeoFn::Exp => t,
            GeoFn::Identity => t.ln(),
            GeoFn::Sum(v) => log_sum_exp(&v.iter().map(|f| f.log_eval_inner(t)).collect::<Result<Vec<_>>>()?),
            GeoFn::Max(v) => v
                .iter()
                .map(|f| f.log_eval_inner(t))
                .try_fold(f64::NEG_INFINITY, |m, x| x.map(|x| m.max(x)))?,
            GeoFn::Product(v) => v.iter().map(|f| f.log_eval_inner(t)).sum::<Result<f64>>()?,
            GeoFn::Scale(c, f) => c.ln() + f.log_eval_inner(t)?,
            GeoFn::ExpOf(f) => f.eval_inner(t)?,
            GeoFn::PowerOf(a, f) => a * f.log_eval_inner(t)?,
        };
        if v.is_nan() || v == f64::INFINITY {
            return Err(Error::Range(format!("ln {self} at t = {t:e}")));
        }
        Ok(v)
    }

    fn fmt_list(f: &mut fmt::Formatter<'_>, name: &str, items: &[GeoFn]) -> fmt::Result {
        write!(f, "{name}(")?;
        for (i, g) in items.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, ")")
    }
}

fn check_arg(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            eigenvalue: t,
            domain: "(0, inf)".into(),
        })
    }
}

/// `ln sinh t`, stable for large `t`.
fn log_sinh(t: f64) -> f64 {
    if t > 20.0 {
        t - std::f64::consts::LN_2 + (-(-2.0 * t).exp()).ln_1p()
    } else {
        t.sinh().ln()
    }
}

impl ScalarFn for GeoFn {
    fn eval(&self, t: f64) -> Result<f64> {
        check_arg(t)?;
        self.eval_inner(t)
    }

    fn log_eval(&self, t: f64) -> Result<f64> {
        check_arg(t)?;
        self.log_eval_inner(t)
    }

    fn name(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for GeoFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeoFn::Power(a) => write!(f, "pow:{a}"),
            GeoFn::Constant(c) => write!(f, "const:{c}"),
            GeoFn::Sinh => write!(f, "sinh"),
            GeoFn::Exp => write!(f, "exp"),
            GeoFn::Identity => write!(f, "id"),
            GeoFn::Sum(v) => GeoFn::fmt_list(f, "sum", v),
            GeoFn::Max(v) => GeoFn::fmt_list(f, "max", v),
            GeoFn::Product(v) => GeoFn::fmt_list(f, "prod", v),
            GeoFn::Scale(c, g) => write!(f, "scale:{c}({g})"),
            GeoFn::ExpOf(g) => write!(f, "exp_of({g})"),
            GeoFn::PowerOf(a, g) => write!(f, "pow_of:{a}({g})"),
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at offset {} in \"{}\"", self.pos, self.src))
    }

    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{c}'")))
        }
    }

    fn ident(&mut self) -> &'a str {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let len = rest
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .unwrap_or(rest.len());
        self.pos += len;
        &rest[..len]
    }

    fn number(&mut self) -> Result<f64> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let len = rest
            .find(|c: char| !(c.is_ascii_digit() || matches!(c, '.' | 'e' | 'E' | '-' | '+')))
            .unwrap_or(rest.len());
        let v = rest[..len].parse().map_err(|_| self.err("expected a number"))?;
        self.pos += len;
        Ok(v)
    }

    fn list(&mut self) -> Result<Vec<GeoFn>> {
        self.expect('(')?;
        let mut items = vec![self.expr()?];
        while self.eat(',') {
            items.push(self.expr()?);
        }
        self.expect(')')?;
        Ok(items)
    }

    fn single(&mut self) -> Result<Box<GeoFn>> {
        self.expect('(')?;
        let g = self.expr()?;
        self.expect(')')?;
        Ok(Box::new(g))
    }

    fn expr(&mut self) -> Result<GeoFn> {
        let start = self.pos;
        let name = self.ident();
        let g = match name {
            "sinh" => GeoFn::Sinh,
            "exp" => GeoFn::Exp,
            "id" | "identity" => GeoFn::Identity,
            "sum" => GeoFn::Sum(self.list()?),
            "max" => GeoFn::Max(self.list()?),
            "prod" => GeoFn::Product(self.list()?),
            "exp_of" => GeoFn::ExpOf(self.single()?),
            "pow" | "const" | "scale" | "pow_of" => {
                self.expect(':')?;
                let x = self.number()?;
                match name {
                    "pow" => GeoFn::Power(x),
                    "const" => GeoFn::Constant(x),
                    "scale" => GeoFn::Scale(x, self.single()?),
                    _ => GeoFn::PowerOf(x, self.single()?),
                }
            }
            _ => {
                self.pos = start;
                return Err(self.err(&format!("unknown function \"{name}\"")));
            }
        };
        Ok(g)
    }
}

impl FromStr for GeoFn {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser { src: s, pos: 0 };
        let g = p.expr()?;
        p.skip_ws();
        if p.pos != s.len() {
            return Err(p.err("trailing input"));
        }
        g.validate()?;
        Ok(g)
    }
}

impl Serialize for GeoFn {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GeoFn {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// `φ = ln g` for a geometrically convex `g`: nondecreasing with `φ(eᵗ)`
/// convex.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhiFn {
    pub underlying: GeoFn,
}

impl PhiFn {
    pub fn new(underlying: GeoFn) -> Self {
        PhiFn { underlying }
    }

    /// `φ = ln`, i.e. `g = id`.
    pub fn log() -> Self {
        PhiFn::new(GeoFn::Identity)
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        self.underlying.log_eval(t)
    }
}

/// An arbitrary positive function with no convexity guarantee, used for
/// negative controls.
#[derive(Clone, Copy)]
pub struct RawFn {
    pub name: &'static str,
    pub f: fn(f64) -> f64,
}

impl RawFn {
    /// `t / (1 + t)`: nondecreasing but `ln g(eᵘ)` is concave.
    pub const SATURATING: RawFn = RawFn {
        name: "t/(1+t)",
        f: saturating,
    };

    /// `1 / t`: geometrically convex but decreasing.
    pub const RECIPROCAL: RawFn = RawFn {
        name: "1/t",
        f: reciprocal,
    };

    pub fn by_name(name: &str) -> Option<RawFn> {
        [RawFn::SATURATING, RawFn::RECIPROCAL]
            .into_iter()
            .find(|r| r.name == name)
    }
}

fn saturating(t: f64) -> f64 {
    t / (1.0 + t)
}

fn reciprocal(t: f64) -> f64 {
    1.0 / t
}

impl fmt::Debug for RawFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RawFn({})", self.name)
    }
}

impl ScalarFn for RawFn {
    fn eval(&self, t: f64) -> Result<f64> {
        check_arg(t)?;
        finite((self.f)(t), || format!("{} at t = {t:e}", self.name))
    }

    fn name(&self) -> String {
        self.name.to_string()
    }
}

/// `count` pairs `(a, b)` drawn log-uniformly from `[lo, hi]`.
pub fn log_uniform_pairs(count: usize, lo: f64, hi: f64, seed: u64) -> Vec<(f64, f64)> {
    let mut rng = rng_from_seed(seed);
    (0..count)
        .map(|_| (log_uniform(&mut rng, lo, hi), log_uniform(&mut rng, lo, hi)))
        .collect()
}

/// The default certification grid: 200 seeded pairs over `[1e-3, 1e3]`.
pub fn default_grid(seed: u64) -> Vec<(f64, f64)> {
    log_uniform_pairs(200, 1e-3, 1e3, seed)
}

/// `g(√(ab)) ≤ √(g(a) g(b))` on every pair, compared in log form. Slack is
/// `(ln g(a) + ln g(b))/2 − ln g(√(ab))`.
pub fn check_geo_convex(g: &dyn ScalarFn, grid: &[(f64, f64)], tol: f64) -> Result<CheckResult> {
    let mut worst: Option<(f64, f64, (f64, f64))> = None;
    let mut components = Vec::with_capacity(grid.len());
    for &(a, b) in grid {
        let (la, lb, lm) = (g.log_eval(a)?, g.log_eval(b)?, g.log_eval((a * b).sqrt())?);
        let scale = 1f64.max(la.abs()).max(lb.abs()).max(lm.abs());
        let slack = ((la + lb) / 2.0 - lm) / scale;
        components.push(slack);
        if worst.is_none_or(|(s, _, _)| slack < s) {
            worst = Some((slack, scale, (a, b)));
        }
    }
    let witness = worst.map(|(_, _, (a, b))| serde_json::json!({ "g": g.name(), "a": a, "b": b }));
    let mut r = CheckResult::from_components(components, tol);
    r.witness = witness;
    Ok(r)
}

/// `g(a) ≤ g(b)` for consecutive points of the sorted grid, in log form.
pub fn check_nondecreasing(g: &dyn ScalarFn, grid: &[f64], tol: f64) -> Result<CheckResult> {
    let mut pts = grid.to_vec();
    pts.sort_by(f64::total_cmp);
    let logs = pts.iter().map(|&t| g.log_eval(t)).collect::<Result<Vec<_>>>()?;
    let components = logs
        .windows(2)
        .map(|w| (w[1] - w[0]) / 1f64.max(w[0].abs()).max(w[1].abs()))
        .collect();
    Ok(CheckResult::from_components(components, tol).with_witness(serde_json::json!({ "g": g.name() })))
}

/// Random tree of depth at most `depth`. `exp_of` only wraps polynomial-type
/// subtrees so that values stay finite on `[1e-3, 1e3]`.
pub fn random_geofn<R: Rng>(rng: &mut R, depth: usize) -> GeoFn {
    random_tree(rng, depth, true)
}

fn random_tree<R: Rng>(rng: &mut R, depth: usize, allow_fast: bool) -> GeoFn {
    let atom = |rng: &mut R| -> GeoFn {
        let n = if allow_fast { 5 } else { 3 };
        match rng.random_range(0..n) {
            0 => GeoFn::Power((rng.random_range(0..7) as f64) * 0.5),
            1 => GeoFn::Constant(log_uniform(rng, 0.1, 10.0)),
            2 => GeoFn::Identity,
            3 => GeoFn::Sinh,
            _ => GeoFn::Exp,
        }
    };
    if depth <= 1 || rng.random_bool(0.3) {
        return atom(rng);
    }
    let children = |rng: &mut R| -> Vec<GeoFn> {
        let k = rng.random_range(1..=3);
        (0..k).map(|_| random_tree(rng, depth - 1, allow_fast)).collect()
    };
    match rng.random_range(0..6) {
        0 => GeoFn::Sum(children(rng)),
        1 => GeoFn::Max(children(rng)),
        2 => GeoFn::Product(children(rng)),
        3 => GeoFn::Scale(log_uniform(rng, 0.1, 10.0), Box::new(random_tree(rng, depth - 1, allow_fast))),
        4 => GeoFn::PowerOf(log_uniform(rng, 0.25, 3.0), Box::new(random_tree(rng, depth - 1, allow_fast))),
        _ => GeoFn::ExpOf(Box::new(random_tree(rng, (depth - 1).min(2), false))),
    }
}
