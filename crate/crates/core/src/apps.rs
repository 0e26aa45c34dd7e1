//! Sharp constants of hyperbolic, mean and trigonometric inequalities, each
//! obtained as the interior extremum of a quotient `f/g` located by the
//! vanishing-endpoint rules.

use std::f64::consts::{FRAC_2_PI, FRAC_PI_2, LN_2};
use std::fmt;
use std::str::FromStr;

use crate::aux_h::AuxPair;
use crate::catalog::{self, ln_cosh, SERIES_ORDER};
use crate::chains::{self, ChainReport};
use crate::classify::{classify, MonotonePattern, PatternKind, DEFAULT_GRID};
use crate::error::{Endpoint, Error, Result};
use crate::numerics::{Expansion, ExtReal, Taylor};
use crate::roots::{self, Grid, RootOptions, RootResult};
use crate::rules::{self, RuleVerdict};
use crate::series;

/// Sample count of the sign-change search for the root of `H`.
pub const ROOT_GRID: usize = 4096;

/// Grid size used when a reproduction checks its inequality chain.
pub const CHAIN_GRID: usize = 10_000;

/// Largest distance, in sampling coordinates, allowed between the root found
/// by the solver and the turning point reported by the rule engine.
const RULE_AGREEMENT: f64 = 1e-9;

/// Below this distance from the origin `eval_big_g` uses its series.
const BIG_G_SWITCH: f64 = 0.1;

/// The exponent at which the two trigonometric endpoint constants coincide,
/// `1 - (2/pi)^p = 1/3`.
pub fn cusa_critical_exponent() -> f64 {
    (3.0f64.ln() - 2.0f64.ln()) / (std::f64::consts::PI.ln() - 2.0f64.ln())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Target {
    /// `cosh(x/3)^(3 p0) < sinh(x)/x < cosh(x/3)^3` on `(0, inf)`.
    Lin,
    /// `cosh(2x/3)^(3/2) < exp(x coth x - 1) < cosh(2x/3)^(3 p1 / 2)`.
    Stolarsky,
    /// Identric mean against powers of the power mean `A_p(x, 1)`.
    Identric,
    /// `(sin x / x)^p` between convex combinations of `cos(x)^p` and 1.
    Cusa,
}

impl Target {
    pub const ALL: [Target; 4] = [Target::Lin, Target::Stolarsky, Target::Identric, Target::Cusa];

    pub fn id(self) -> &'static str {
        match self {
            Target::Lin => "lin",
            Target::Stolarsky => "stolarsky",
            Target::Identric => "identric",
            Target::Cusa => "cusa",
        }
    }

    /// Open interval of admissible parameters, for targets that take one.
    pub fn parameter_range(self) -> Option<(f64, f64)> {
        match self {
            Target::Lin | Target::Stolarsky => None,
            Target::Identric => Some((2.0 / 3.0, 1.0)),
            Target::Cusa => Some((0.8, 1.0)),
        }
    }

    pub fn check_parameter(self, p: Option<f64>) -> Result<Option<f64>> {
        match (self.parameter_range(), p) {
            (None, None) => Ok(None),
            (None, Some(p)) => Err(Error::Parameter(format!("{self} takes no parameter, got {p}"))),
            (Some(_), None) => Err(Error::Parameter(format!("{self} needs a parameter p"))),
            (Some((lo, hi)), Some(p)) if p > lo && p < hi => Ok(Some(p)),
            (Some((lo, hi)), Some(p)) => Err(Error::Parameter(format!("{self} needs {lo} < p < {hi}, got {p}"))),
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Target> {
        Target::ALL
            .into_iter()
            .find(|t| t.id() == s)
            .ok_or_else(|| Error::Catalog(s.to_string()))
    }
}

/// `f = ln(sinh x / x)`, `g = 3 ln cosh(x/3)` on `(0, inf)`.
pub fn lin_pair() -> Result<AuxPair> {
    let f = catalog::ln_sinh_over_x();
    let g = catalog::ln_cosh_scaled(3.0, 1.0 / 3.0);
    let iv = *f.domain();
    Ok(AuxPair::new(f, g, iv)?
        .with_h_limits(None, Some(ExtReal::PosInf))?
        .with_quotient_limits(Some(ExtReal::Finite(1.0)), Some(ExtReal::Finite(1.0))))
}

/// `f = x coth x - 1`, `g = (3/2) ln cosh(2x/3)` on `(0, inf)`.
pub fn stolarsky_pair() -> Result<AuxPair> {
    let f = catalog::x_coth_x_minus_one();
    let g = catalog::ln_cosh_scaled(1.5, 2.0 / 3.0);
    let iv = *f.domain();
    Ok(AuxPair::new(f, g, iv)?
        .with_h_limits(None, Some(ExtReal::Finite(1.0 - 1.5 * LN_2)))?
        .with_quotient_limits(Some(ExtReal::Finite(1.0)), Some(ExtReal::Finite(1.0))))
}

/// `f = ln I(x, 1)`, `g = ln A_p(x, 1)` on `(0, 1)` for `p > 0`.
pub fn identric_pair(p: f64) -> Result<AuxPair> {
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::Parameter(format!("identric pair needs p > 0, got {p}")));
    }
    let f = catalog::ln_identric();
    let g = catalog::ln_power_mean(p);
    let iv = *f.domain();
    let h_lo = if p < 1.0 { ExtReal::Finite(1.0) } else { ExtReal::NegInf };
    Ok(AuxPair::new(f, g, iv)?
        .with_h_limits(Some(h_lo), None)?
        .with_quotient_limits(Some(ExtReal::Finite(p / LN_2)), Some(ExtReal::Finite(1.0))))
}

/// `f1 = x - 1 - ln x`, `g1 = (x - 1)^2 / (x + x^(1-p))` on `(0, 1)`, whose
/// quotient is the derivative ratio of [`identric_pair`].
pub fn identric_aux_pair(p: f64) -> Result<AuxPair> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Parameter(format!("auxiliary identric pair needs 0 < p < 1, got {p}")));
    }
    let f = catalog::log_excess();
    let g = catalog::log_excess_denominator(p);
    let iv = *f.domain();
    AuxPair::new(f, g, iv)?.with_h_limits(Some(ExtReal::NegInf), None)
}

/// `f = (sin x / x)^p - 1`, `g = cos(x)^p - 1` on `(0, pi/2)` for `0 < p < 1`.
pub fn cusa_pair(p: f64) -> Result<AuxPair> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Parameter(format!("trigonometric pair needs 0 < p < 1, got {p}")));
    }
    let f = catalog::sinc_pow_minus_one(p);
    let g = catalog::cos_pow_minus_one(p);
    let iv = *f.domain();
    let far = 1.0 - FRAC_2_PI.powf(p);
    Ok(AuxPair::new(f, g, iv)?
        .with_h_limits(None, Some(ExtReal::Finite(far)))?
        .with_quotient_limits(Some(ExtReal::Finite(1.0 / 3.0)), Some(ExtReal::Finite(far))))
}

/// `min(p / ln 2, 1)`, the exponent bounding the identric quotient from the
/// endpoint side.
pub fn identric_endpoint_exponent(p: f64) -> f64 {
    (p / LN_2).min(1.0)
}

/// `min(1 - (2/pi)^p, 1/3)`, the weight bounding the trigonometric quotient
/// from the endpoint side.
pub fn cusa_endpoint_weight(p: f64) -> f64 {
    (1.0 - FRAC_2_PI.powf(p)).min(1.0 / 3.0)
}

/// Two terms whose difference is the defining equation of the extremum,
/// written without the auxiliary-function machinery.
pub fn defining_terms(target: Target, p: Option<f64>, x: f64) -> (f64, f64) {
    let p = p.unwrap_or(f64::NAN);
    match target {
        Target::Lin => {
            let a = 3.0 * (x / x.tanh() - 1.0) / (x / 3.0).tanh() * ln_cosh(x / 3.0);
            (a, x * catalog::ln_sinhc(x))
        }
        Target::Stolarsky => {
            let (s, c) = (x.sinh(), x.cosh());
            let a = 1.5 * (c * s - x) / (2.0 * x / 3.0).tanh() * ln_cosh(2.0 * x / 3.0);
            (a, (x * c - s) * s)
        }
        Target::Identric => {
            let u = x - 1.0;
            let ratio = (x + x.powf(1.0 - p)) * (u - x.ln()) / (u * u);
            let a = ratio * (0.5 * (x.powf(p) + 1.0)).ln() / p;
            (a, x * x.ln() / u - 1.0)
        }
        Target::Cusa => {
            let (s, c) = x.sin_cos();
            let a = (s / (x * c)).powf(p - 1.0) * (s - x * c) / (x * x * s) * (c.powf(p) - 1.0);
            (a, (s / x).powf(p) - 1.0)
        }
    }
}

/// The extremum of a quotient `f/g` and how it was located.
#[derive(Debug, Clone, PartialEq)]
pub struct SharpConstantReport {
    pub proposition_id: Target,
    pub parameter: Option<f64>,
    /// Root of `H`, where `f/g` attains its interior extremum.
    pub root: f64,
    /// `f/g` at the root.
    pub constant: f64,
    /// The best constant on the other side, when it is an endpoint value.
    pub endpoint_constant: Option<f64>,
    /// `|A - B| / max(|A|, |B|)` for the defining equation `A = B`.
    pub residual: f64,
    pub bracket: (f64, f64),
    pub converged: bool,
    pub verdict: RuleVerdict,
    pub chains: Vec<ChainReport>,
}

struct Setup {
    pair: AuxPair,
    end: Endpoint,
    ratio: MonotonePattern,
    grid: Grid,
    endpoint_constant: Option<f64>,
}

fn setup(target: Target, p: Option<f64>) -> Result<Setup> {
    let classified = |pair: &AuxPair| classify(&pair.ratio_fn()?, pair.domain(), DEFAULT_GRID);
    Ok(match target {
        Target::Lin | Target::Stolarsky => {
            let pair = if target == Target::Lin { lin_pair()? } else { stolarsky_pair()? };
            let ratio = classified(&pair)?;
            Setup { pair, end: Endpoint::Lower, ratio, grid: Grid::Uniform, endpoint_constant: Some(1.0) }
        }
        Target::Identric => {
            let p = p.expect("checked parameter");
            // Turning point of f1'/g1' from the sign change of w, then the
            // rule for f1/g1 = f'/g'.
            let x1 = series::w_sign_change(p)?.root;
            let inner = MonotonePattern::piecewise(PatternKind::IncDec, x1)?;
            let ratio = rules::lpmr_at_b(&identric_aux_pair(p)?, inner)?.quotient_pattern;
            Setup {
                pair: identric_pair(p)?,
                end: Endpoint::Upper,
                ratio,
                grid: Grid::Geometric { lo: 1e-300, hi: 1.0 - 1e-9 },
                endpoint_constant: Some(identric_endpoint_exponent(p)),
            }
        }
        Target::Cusa => {
            let p = p.expect("checked parameter");
            let pair = cusa_pair(p)?;
            let ratio = classified(&pair)?;
            Setup {
                pair,
                end: Endpoint::Lower,
                ratio,
                grid: Grid::Uniform,
                endpoint_constant: Some(cusa_endpoint_weight(p)),
            }
        }
    })
}

/// Locates the extremum of the target's quotient without checking any
/// inequality chain.
pub fn solve(target: Target, p: Option<f64>) -> Result<SharpConstantReport> {
    solve_with(target, p, &RootOptions::default())
}

/// [`solve`] with explicit root-solver tolerances.
pub fn solve_with(target: Target, p: Option<f64>, opts: &RootOptions) -> Result<SharpConstantReport> {
    let p = target.check_parameter(p)?;
    let s = setup(target, p)?;
    let verdict = match s.end {
        Endpoint::Lower => rules::lpmr_at_a(&s.pair, s.ratio)?,
        Endpoint::Upper => rules::lpmr_at_b(&s.pair, s.ratio)?,
    };
    let turning = verdict.quotient_pattern.turning_point().ok_or_else(|| {
        Error::Evaluation(format!("{target}: quotient is {} without an interior extremum", verdict.quotient_pattern))
    })?;
    let h = |x: f64| s.pair.eval_h_safe(x).unwrap_or(f64::NAN);
    let (r, converged) = match roots::solve(h, s.pair.domain(), s.grid, ROOT_GRID, opts) {
        Ok(r) => (r, true),
        Err(Error::NonConvergence(r)) => (*r, false),
        Err(e) => return Err(e),
    };
    let RootResult { root, bracket_final, .. } = r;
    let (_, _, reparam) = s.pair.domain().sampling_coordinates();
    let gap = (reparam.inverse(root) - reparam.inverse(turning)).abs();
    if converged && gap > RULE_AGREEMENT {
        return Err(Error::Inconsistent(format!(
            "{target}: root of H at {root} but the rule places the turning point at {turning}"
        )));
    }
    let (a, b) = defining_terms(target, p, root);
    let residual = (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE);
    Ok(SharpConstantReport {
        proposition_id: target,
        parameter: p,
        root,
        constant: s.pair.quotient(root)?,
        endpoint_constant: s.endpoint_constant,
        residual,
        bracket: (bracket_final.lo(), bracket_final.hi()),
        converged,
        verdict,
        chains: Vec::new(),
    })
}

/// [`solve`], then checks the inequality chains the constants define on a
/// [`CHAIN_GRID`]-point grid. A violated chain is an error.
pub fn reproduce(target: Target, p: Option<f64>) -> Result<SharpConstantReport> {
    reproduce_with(target, p, &RootOptions::default())
}

/// [`reproduce`] with explicit root-solver tolerances.
pub fn reproduce_with(target: Target, p: Option<f64>, opts: &RootOptions) -> Result<SharpConstantReport> {
    let mut report = solve_with(target, p, opts)?;
    if report.converged {
        check_chains(&mut report)?;
    }
    Ok(report)
}

/// Checks the inequality chains defined by a solved report's constant and
/// records their reports. A violated chain is an error.
pub fn check_chains(report: &mut SharpConstantReport) -> Result<()> {
    let mut list = Vec::new();
    match report.proposition_id {
        Target::Lin => list.push(chains::ly_h(report.constant)?),
        Target::Stolarsky => list.push(chains::stolarsky(report.constant)?),
        Target::Identric => list.push(chains::identric_sharp(report.parameter.unwrap_or(f64::NAN), report.constant)?),
        Target::Cusa => {
            let p = report.parameter.unwrap_or(f64::NAN);
            list.push(chains::cusa_sharp(p, report.constant)?);
            if (p - cusa_critical_exponent()).abs() <= 1e-12 {
                list.push(chains::cusa_critical(report.constant)?);
            }
        }
    }
    report.chains.clear();
    for chain in &list {
        let r = chain.verify(CHAIN_GRID)?;
        if r.violation_count > 0 {
            return Err(Error::Violation(format!("{}: {} violations", r.chain, r.violation_count)));
        }
        report.chains.push(r);
    }
    Ok(())
}

pub fn reproduce_lin_sharp() -> Result<SharpConstantReport> {
    reproduce(Target::Lin, None)
}

pub fn reproduce_stolarsky_sharp() -> Result<SharpConstantReport> {
    reproduce(Target::Stolarsky, None)
}

pub fn reproduce_identric_power(p: f64) -> Result<SharpConstantReport> {
    reproduce(Target::Identric, Some(p))
}

pub fn reproduce_cusa_trig(p: f64) -> Result<SharpConstantReport> {
    reproduce(Target::Cusa, Some(p))
}

/// For `p` outside `(2/3, 1)` the identric quotient is monotone, so its
/// endpoint limits `1` and `p / ln 2` bound it. Checks that chain, which is
/// reversed for `p >= 1`.
pub fn identric_companion(p: f64) -> Result<ChainReport> {
    if p > 2.0 / 3.0 && p < 1.0 {
        return Err(Error::Parameter(format!("p = {p} has an interior extremum; use the sharp mode")));
    }
    chains::identric_endpoint(p)?.verify(CHAIN_GRID)
}

fn big_g_parts(x: f64) -> (f64, f64) {
    let (s, c) = x.sin_cos();
    let num = x * s + c * s * s - 2.0 * x * x * c;
    let den = (x - c * s) * (s - x * c);
    (num, den)
}

fn big_g_series() -> Result<Taylor> {
    let v = Taylor::variable(SERIES_ORDER);
    let (s, c) = v.sin_cos();
    let xs = &v * &s;
    let num = &(&xs + &(&c * &(&s * &s))) - &(&(&v * &v) * &c).scale(2.0);
    let den = &(&v - &(&c * &s)) * &(&s - &(&v * &c));
    num.ratio(&den, 1e-12)
}

/// `(x sin x + cos x sin^2 x - 2 x^2 cos x) / ((x - cos x sin x)(sin x - x cos x))`
/// on `(0, pi/2)`, increasing from `4/5` to `1`.
pub fn eval_big_g(x: f64) -> Result<f64> {
    if !(x > 0.0 && x < FRAC_PI_2) {
        return Err(Error::Domain { what: "G".into(), x });
    }
    if x < BIG_G_SWITCH {
        let e = Expansion::new(0.0, big_g_series()?).with_switch(BIG_G_SWITCH);
        return e.eval(x);
    }
    let (n, d) = big_g_parts(x);
    Ok(n / d)
}
