//! Named verification suites, each a list of pass/fail checks.

use std::f64::consts::{LN_2, PI};
use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};

use crate::apps;
use crate::aux_h::AuxPair;
use crate::catalog;
use crate::chains;
use crate::classify::{classify, PatternKind, DEFAULT_GRID};
use crate::error::{Error, Result};
use crate::means;
use crate::numerics::{Interval, SmoothFn, ZERO_THRESHOLD};
use crate::series;
use crate::tables;

/// Default last index of the exact recursion check.
pub const DEFAULT_NMAX: u64 = 200;

/// Default grid of the inequality suite.
pub const DEFAULT_CHAIN_GRID: usize = 10_000;

/// Points of the brute-force derivative scan in the classifier battery.
pub const BRUTE_FORCE_POINTS: usize = 10_000;

const IDENTITY_POINTS: usize = 100;
const IDENTITY_TOL: f64 = 1e-11;
const RHO_POINTS: usize = 100;
const RHO_TOL: f64 = 1e-10;
const SYMMETRY_ULPS: u64 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Series,
    Tables,
    Identities,
    Inequalities,
    Classifier,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Series, Suite::Tables, Suite::Identities, Suite::Inequalities, Suite::Classifier];

    pub fn id(self) -> &'static str {
        match self {
            Suite::Series => "series",
            Suite::Tables => "tables",
            Suite::Identities => "identities",
            Suite::Inequalities => "inequalities",
            Suite::Classifier => "classifier",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Suite> {
        Suite::ALL.into_iter().find(|t| t.id() == s).ok_or_else(|| Error::Catalog(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub suite: Suite,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(suite: Suite, name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Check {
        Check { suite, name: name.into(), passed, detail: detail.into() }
    }

    fn from_result(suite: Suite, name: impl Into<String>, r: Result<(bool, String)>) -> Check {
        match r {
            Ok((ok, detail)) => Check::new(suite, name, ok, detail),
            Err(e) => Check::new(suite, name, false, format!("error: {e}")),
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} [{}] {}: {}", self.suite, self.name, self.detail)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteOptions {
    pub grid: usize,
    pub nmax: u64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { grid: DEFAULT_CHAIN_GRID, nmax: DEFAULT_NMAX }
    }
}

pub fn run(suite: Suite, opts: &SuiteOptions) -> Vec<Check> {
    match suite {
        Suite::Series => series_suite(opts.nmax),
        Suite::Tables => tables_suite(),
        Suite::Identities => identities_suite(),
        Suite::Inequalities => inequalities_suite(opts.grid),
        Suite::Classifier => classifier_suite(),
    }
}

/// Signs and exact values of the recursion coefficients `u_n`, and the
/// exact recursion residual for `n = 2..=nmax`.
pub fn series_suite(nmax: u64) -> Vec<Check> {
    let s = Suite::Series;
    let mut out = Vec::new();
    out.push(Check::from_result(s, "u_2 = u_3 = 0", (|| {
        let (a, b) = (series::u_coeff(2)?, series::u_coeff(3)?);
        Ok((a.is_zero() && b.is_zero(), format!("u_2 = {a}, u_3 = {b}")))
    })()));
    out.push(Check::from_result(s, "u_4..u_7 negative", (|| {
        let v = (4..=7).map(series::u_coeff).collect::<Result<Vec<_>>>()?;
        let text: Vec<String> = v.iter().map(|u| u.to_string()).collect();
        Ok((v.iter().all(|u| u.is_negative()), text.join(", ")))
    })()));
    out.push(Check::from_result(s, "u_8 = 212772744", (|| {
        let u = series::u_coeff(8)?;
        Ok((u == 212_772_744u64.into(), format!("u_8 = {u}")))
    })()));
    out.push(Check::from_result(s, format!("recursion residual n = 2..{nmax}"), (|| {
        if nmax < 2 {
            return Err(Error::Precondition(format!("nmax must be at least 2, got {nmax}")));
        }
        let mut nonzero = Vec::new();
        for n in 2..=nmax {
            if !series::u_recursion_residual(n)?.is_zero() {
                nonzero.push(n);
            }
        }
        let count = nmax - 1;
        Ok((nonzero.is_empty(), format!("{count} residuals, nonzero at {nonzero:?}")))
    })()));
    out.push(Check::from_result(s, format!("u_n positive for n = 8..{nmax}"), (|| {
        let bad = (8..=nmax)
            .map(|n| series::u_coeff(n).map(|u| (n, u.is_positive())))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .filter(|&(_, pos)| !pos)
            .map(|(n, _)| n)
            .collect::<Vec<_>>();
        Ok((bad.is_empty(), format!("nonpositive at {bad:?}")))
    })()));
    out
}

/// Every decision-table row against its synthetic pair and a direct scan.
pub fn tables_suite() -> Vec<Check> {
    tables::table_rows()
        .iter()
        .map(|row| {
            let name = format!("{:?} end, row {}", row.end, row.row);
            Check::from_result(Suite::Tables, name, tables::check_row(row).map(|c| {
                let tp = c.verdict.turning_point().map_or(String::new(), |t| format!(" at {t:.6}"));
                (c.passed(), format!("{} via {}{tp}, scan {}", c.verdict.kind(), c.fired_rule, c.scanned))
            }))
        })
        .collect()
}

/// The auxiliary pairs behind the sharp-constant targets.
pub fn catalog_pairs() -> Result<Vec<(String, AuxPair)>> {
    let p0 = apps::cusa_critical_exponent();
    Ok(vec![
        ("lin".into(), apps::lin_pair()?),
        ("stolarsky".into(), apps::stolarsky_pair()?),
        ("identric:0.7".into(), apps::identric_pair(0.7)?),
        ("identric:ln2".into(), apps::identric_pair(LN_2)?),
        ("identric:0.9".into(), apps::identric_pair(0.9)?),
        ("identric-derivative-ratio:0.7".into(), apps::identric_aux_pair(0.7)?),
        ("identric-derivative-ratio:0.9".into(), apps::identric_aux_pair(0.9)?),
        (format!("cusa:{p0}"), apps::cusa_pair(p0)?),
        ("cusa:0.9".into(), apps::cusa_pair(0.9)?),
    ])
}

/// Distance in units in the last place between two finite doubles.
pub fn ulp_distance(a: f64, b: f64) -> u64 {
    if a == b {
        return 0;
    }
    if !(a.is_finite() && b.is_finite()) {
        return u64::MAX;
    }
    let key = |v: f64| {
        let i = v.to_bits() as i64;
        if i < 0 {
            i64::MIN - i
        } else {
            i
        }
    };
    key(a).abs_diff(key(b))
}

/// Mean substitution identities, `rho~ = sgn(g') H` and the sign symmetries
/// of `H` under `f -> -f` and `g -> -g`.
pub fn identities_suite() -> Vec<Check> {
    let s = Suite::Identities;
    let mut out = Vec::new();
    let xs: Vec<f64> =
        (0..IDENTITY_POINTS).map(|k| 0.01 + (10.0 - 0.01) * k as f64 / (IDENTITY_POINTS - 1) as f64).collect();
    let residuals = xs.iter().map(|&x| means::hyperbolic_identity_check(x)).collect::<Result<Vec<_>>>();
    match residuals {
        Ok(r) => {
            for (k, name) in ["L(e^x,e^-x) = sinh(x)/x", "A_1/3(e^x,e^-x) = cosh(x/3)^3", "I(e^x,e^-x) = exp(x coth x - 1)"]
                .into_iter()
                .enumerate()
            {
                let worst = r.iter().map(|v| v[k]).fold(0.0, f64::max);
                out.push(Check::new(s, name, worst <= IDENTITY_TOL, format!("max relative residual {worst:.3e} on {IDENTITY_POINTS} points")));
            }
        }
        Err(e) => out.push(Check::new(s, "mean identities", false, format!("error: {e}"))),
    }
    let pairs = match catalog_pairs() {
        Ok(p) => p,
        Err(e) => {
            out.push(Check::new(s, "catalog pairs", false, format!("error: {e}")));
            return out;
        }
    };
    for (name, pair) in &pairs {
        out.push(Check::from_result(s, format!("rho~ = sgn(g')H for {name}"), rho_check(pair)));
        out.push(Check::from_result(s, format!("H symmetries for {name}"), symmetry_check(pair)));
    }
    out
}

/// Largest `|rho~ - sgn(g') H|`, relative to the size of the two products
/// `f' g` and `f g'` that cancel in both.
fn rho_check(pair: &AuxPair) -> Result<(bool, String)> {
    let sign = pair.g_prime_sign().as_f64();
    let mut worst = 0.0f64;
    for x in pair.domain().margin_grid(RHO_POINTS, 1e-6) {
        let (f, g) = (pair.f(), pair.g());
        let scale = (f.d1(x) * g.value(x)).abs().max((f.value(x) * g.d1(x)).abs()) / g.d1(x).abs();
        let rho = pair.pinelis_rho_tilde(x)?;
        let h = pair.eval_h(x)?;
        worst = worst.max((rho - sign * h).abs() / scale);
    }
    Ok((worst <= RHO_TOL, format!("max relative difference {worst:.3e} on {RHO_POINTS} points")))
}

fn symmetry_check(pair: &AuxPair) -> Result<(bool, String)> {
    let (ng, nf) = (pair.negate_g()?, pair.negate_f()?);
    let mut worst = 0u64;
    for x in pair.domain().margin_grid(RHO_POINTS, 1e-6) {
        let h = pair.eval_h(x)?;
        worst = worst.max(ulp_distance(ng.eval_h(x)?, h)).max(ulp_distance(nf.eval_h(x)?, -h));
    }
    Ok((worst <= SYMMETRY_ULPS, format!("H(f,-g) = H and H(-f,g) = -H within {worst} ulp")))
}

/// The chains checked by the inequality suite, as `key:p` ids.
pub fn chain_catalog() -> Vec<String> {
    let p0 = apps::cusa_critical_exponent();
    let mut ids = vec!["LY-h".to_string(), "S-h".to_string()];
    for p in [0.3, 2.0 / 3.0, 1.0, 2.0] {
        ids.push(format!("I-new1:{p}"));
    }
    for p in [0.7, LN_2, 0.9] {
        ids.push(format!("I-new2:{p}"));
    }
    ids.push("I-new3".into());
    ids.push("I-new4:0.5".into());
    ids.push("Zhu1:1".into());
    ids.push("Zhu2:0.5".into());
    ids.push(format!("Z-Y1:{p0}"));
    ids.push("Z-Y1:0.9".into());
    ids.push("Z-Y2".into());
    ids
}

pub fn inequalities_suite(grid: usize) -> Vec<Check> {
    chain_catalog()
        .into_iter()
        .map(|id| {
            let r = chains::verify_inequality_chain(&id, grid).map(|r| {
                (
                    r.violation_count == 0,
                    format!(
                        "{} violations on {} points, min slack {:.3e} ({}) at x = {:.6e}",
                        r.violation_count, r.grid_n, r.min_slack, r.min_slack_bound, r.min_slack_at
                    ),
                )
            });
            Check::from_result(Suite::Inequalities, id, r)
        })
        .collect()
}

/// A function of the classifier battery with the interval it lives on.
pub struct BatteryEntry {
    pub name: String,
    pub h: SmoothFn,
    pub domain: Interval,
}

/// Twelve functions: the derivative ratios of every target pair plus
/// elementary shapes.
pub fn classifier_battery() -> Result<Vec<BatteryEntry>> {
    let unit = Interval::open(0.0, 1.0)?;
    let entry = |name: &str, h: SmoothFn| {
        let domain = *h.domain();
        BatteryEntry { name: name.into(), h, domain }
    };
    let p0 = apps::cusa_critical_exponent();
    Ok(vec![
        entry("lin f'/g'", apps::lin_pair()?.ratio_fn()?),
        entry("stolarsky f'/g'", apps::stolarsky_pair()?.ratio_fn()?),
        entry("identric:0.7 f'/g'", apps::identric_pair(0.7)?.ratio_fn()?),
        entry("identric:ln2 f'/g'", apps::identric_pair(LN_2)?.ratio_fn()?),
        entry("identric:0.7 (f'/g')' ratio", apps::identric_aux_pair(0.7)?.ratio_fn()?),
        entry("cusa:p0 f'/g'", apps::cusa_pair(p0)?.ratio_fn()?),
        entry("cusa:0.9 f'/g'", apps::cusa_pair(0.9)?.ratio_fn()?),
        entry("(x-0.3)^2", catalog::polynomial(vec![0.09, -0.6, 1.0], unit)?),
        entry("-(x-0.6)^2", catalog::polynomial(vec![-0.36, 1.2, -1.0], unit)?),
        entry("x^3+x", catalog::polynomial(vec![0.0, 1.0, 0.0, 1.0], unit)?),
        entry("sin on (0, pi)", catalog::sine(Interval::open(0.0, PI)?)),
        entry("x coth x - 1", catalog::x_coth_x_minus_one()),
    ])
}

/// Kind and turning point (in sampling coordinates) from the signs of
/// `h'` on [`BRUTE_FORCE_POINTS`] interior points.
pub fn brute_force_kind(h: &SmoothFn, iv: &Interval) -> (PatternKind, Option<f64>) {
    let grid = iv.interior_grid(BRUTE_FORCE_POINTS);
    let signs: Vec<(f64, bool)> = grid
        .iter()
        .map(|&(t, x)| (t, h.d1(x)))
        .filter(|(_, v)| v.abs() > ZERO_THRESHOLD)
        .map(|(t, v)| (t, v > 0.0))
        .collect();
    let Some(&(_, first)) = signs.first() else {
        return (PatternKind::Constant, None);
    };
    let ch: Vec<usize> = (1..signs.len()).filter(|&k| signs[k].1 != signs[k - 1].1).collect();
    match ch.as_slice() {
        [] => (if first { PatternKind::Inc } else { PatternKind::Dec }, None),
        [k] => {
            let kind = if first { PatternKind::IncDec } else { PatternKind::DecInc };
            (kind, Some(0.5 * (signs[k - 1].0 + signs[*k].0)))
        }
        _ => (PatternKind::Unknown, None),
    }
}

fn flipped(k: PatternKind) -> PatternKind {
    match k {
        PatternKind::Inc => PatternKind::Dec,
        PatternKind::Dec => PatternKind::Inc,
        PatternKind::IncDec => PatternKind::DecInc,
        PatternKind::DecInc => PatternKind::IncDec,
        other => other,
    }
}

/// Classifier verdicts against brute-force scans, the sign-flip probe at
/// each turning point, and the pattern of `-h`.
pub fn classifier_suite() -> Vec<Check> {
    let s = Suite::Classifier;
    let battery = match classifier_battery() {
        Ok(b) => b,
        Err(e) => return vec![Check::new(s, "battery", false, format!("error: {e}"))],
    };
    let mut out = Vec::new();
    for e in &battery {
        let (lo, hi, r) = e.domain.sampling_coordinates();
        let spacing = (hi - lo) / (BRUTE_FORCE_POINTS as f64 + 1.0);
        out.push(Check::from_result(s, format!("{} matches scan", e.name), (|| {
            let v = classify(&e.h, &e.domain, DEFAULT_GRID)?;
            let (kind, tp) = brute_force_kind(&e.h, &e.domain);
            let tp_ok = match (v.turning_point(), tp) {
                (Some(a), Some(b)) => (r.inverse(a) - b).abs() <= 2.0 * spacing,
                (None, None) => true,
                _ => false,
            };
            Ok((v.kind() == kind && tp_ok, format!("classifier {v}, scan {kind}")))
        })()));
        out.push(Check::from_result(s, format!("{} sign-flip probe", e.name), (|| {
            let v = classify(&e.h, &e.domain, DEFAULT_GRID)?;
            let Some(tp) = v.turning_point() else {
                return Ok((true, format!("{} has no turning point", v.kind())));
            };
            let t = r.inverse(tp);
            let d = 1e-6 * (hi - lo);
            let (before, after) = (e.h.d1(r.forward(t - d)), e.h.d1(r.forward(t + d)));
            let want_first = v.kind() == PatternKind::IncDec;
            let ok = (before > 0.0) == want_first && (after > 0.0) != want_first && before != 0.0 && after != 0.0;
            Ok((ok, format!("h' = {before:.3e} before and {after:.3e} after {tp}")))
        })()));
        out.push(Check::from_result(s, format!("{} under negation", e.name), (|| {
            let v = classify(&e.h, &e.domain, DEFAULT_GRID)?;
            let n = classify(&e.h.neg(), &e.domain, DEFAULT_GRID)?;
            let ok = n.kind() == flipped(v.kind()) && n.turning_point() == v.turning_point();
            Ok((ok, format!("-h is {n}")))
        })()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chains::ChainId;

    fn all_pass(v: &[Check]) {
        for c in v {
            assert!(c.passed, "{c}");
        }
    }

    #[test]
    fn series_suite_passes() {
        let v = series_suite(60);
        assert_eq!(v.len(), 5);
        all_pass(&v);
        assert!(!series_suite(1)[3].passed);
    }

    #[test]
    fn identities_suite_passes() {
        all_pass(&identities_suite());
    }

    #[test]
    fn classifier_suite_passes() {
        let v = classifier_suite();
        assert_eq!(v.len(), 36);
        all_pass(&v);
    }

    #[test]
    fn ulps() {
        assert_eq!(ulp_distance(1.0, 1.0), 0);
        assert_eq!(ulp_distance(1.0, f64::from_bits(1.0f64.to_bits() + 3)), 3);
        assert_eq!(ulp_distance(-0.0, 0.0), 0);
        assert_eq!(ulp_distance(f64::from_bits(1), -f64::from_bits(1)), 2);
    }

    #[test]
    fn suite_names() {
        for s in Suite::ALL {
            assert_eq!(s.id().parse::<Suite>().unwrap(), s);
        }
        assert!("nosuch".parse::<Suite>().is_err());
        assert_eq!(chain_catalog().len(), 16);
    }

    #[test]
    fn chain_catalog_ids_parse() {
        for id in chain_catalog() {
            assert!(ChainId::parse(&id).is_ok(), "{id}");
        }
    }
}
