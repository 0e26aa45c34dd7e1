//! Inequality chains that bound a quotient `f/g` by constants, checked on
//! grids of interior points.

use std::f64::consts::{FRAC_2_PI, LN_2};
use std::fmt;
use std::sync::Arc;

use crate::apps::{self, Target};
use crate::catalog;
use crate::error::{Error, Result};
use crate::numerics::{Expansion, Interval, RealFn, SmoothFn};
use crate::par::map_grid;

/// Smallest grid accepted by [`Chain::verify`] and [`Chain::scan`].
pub const MIN_GRID: usize = 100;

/// Grid margin at each end, as a fraction of the sampling interval.
pub const MARGIN: f64 = 1e-6;

/// Slack below which a bound that is attained at an interior point counts
/// as violated.
pub const ATTAINED_TOL: f64 = 1e-12;

/// Relative size below which a cancelled series coefficient is dropped.
const CANCELLATION_REL: f64 = 1e-12;

/// Widest distance from the expansion center at which a gap series is tried.
const GAP_SERIES_RADIUS: f64 = 0.5;

/// Truncation estimate, relative to the bound's constant, under which the
/// gap series replaces direct evaluation.
const GAP_SERIES_TRUNCATION: f64 = 1e-16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChainId {
    /// `ln(sinh x / x)` between multiples of `3 ln cosh(x/3)`.
    HyperbolicSinc,
    /// `x coth x - 1` between multiples of `(3/2) ln cosh(2x/3)`.
    HyperbolicIdentric,
    /// `I(x, 1)` between `A_p` and `A_p^(p / ln 2)`, reversed for `p >= 1`.
    IdentricEndpoint,
    /// `I(x, 1)` between `A_p^d0` and `A_p^d1` for `2/3 < p < 1`.
    IdentricSharp,
    /// [`ChainId::IdentricSharp`] at `p = ln 2`.
    IdentricLn2,
    /// [`ChainId::IdentricEndpoint`] extended by `e^-1 2^(1/p) A_p`.
    IdentricCoefficient,
    /// `(sin x / x)^p` between `1 - w + w cos(x)^p` for `p >= 1`.
    CusaUpper,
    /// The same for `0 < p <= 4/5`, with the weights swapped.
    CusaLower,
    /// Interior-extremum weight against endpoint weight for `4/5 < p < 1`.
    CusaSharp,
    /// [`ChainId::CusaSharp`] at the exponent where the endpoint weights meet.
    CusaCritical,
}

impl ChainId {
    pub const ALL: [ChainId; 10] = [
        ChainId::HyperbolicSinc,
        ChainId::HyperbolicIdentric,
        ChainId::IdentricEndpoint,
        ChainId::IdentricSharp,
        ChainId::IdentricLn2,
        ChainId::IdentricCoefficient,
        ChainId::CusaUpper,
        ChainId::CusaLower,
        ChainId::CusaSharp,
        ChainId::CusaCritical,
    ];

    pub fn key(self) -> &'static str {
        match self {
            ChainId::HyperbolicSinc => "LY-h",
            ChainId::HyperbolicIdentric => "S-h",
            ChainId::IdentricEndpoint => "I-new1",
            ChainId::IdentricSharp => "I-new2",
            ChainId::IdentricLn2 => "I-new3",
            ChainId::IdentricCoefficient => "I-new4",
            ChainId::CusaUpper => "Zhu1",
            ChainId::CusaLower => "Zhu2",
            ChainId::CusaSharp => "Z-Y1",
            ChainId::CusaCritical => "Z-Y2",
        }
    }

    /// Parameter used when none is given; `None` for chains without one.
    pub fn default_parameter(self) -> Option<f64> {
        match self {
            ChainId::HyperbolicSinc | ChainId::HyperbolicIdentric => None,
            ChainId::IdentricEndpoint | ChainId::IdentricCoefficient | ChainId::CusaLower => Some(0.5),
            ChainId::IdentricSharp => Some(0.7),
            ChainId::IdentricLn2 => Some(LN_2),
            ChainId::CusaUpper => Some(1.0),
            ChainId::CusaSharp => Some(0.9),
            ChainId::CusaCritical => Some(apps::cusa_critical_exponent()),
        }
    }

    /// Parses `key` or `key:p`.
    pub fn parse(s: &str) -> Result<(ChainId, Option<f64>)> {
        let (key, p) = match s.split_once(':') {
            Some((k, p)) => {
                let v: f64 = p.parse().map_err(|_| Error::Catalog(s.to_string()))?;
                (k, Some(v))
            }
            None => (s, None),
        };
        let id = ChainId::ALL
            .into_iter()
            .find(|c| c.key() == key)
            .ok_or_else(|| Error::Catalog(s.to_string()))?;
        Ok((id, p))
    }
}

impl fmt::Display for ChainId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `f/g > c`.
    Above,
    /// `f/g < c`.
    Below,
}

/// `f/g > c` or `f/g < c`. An attained bound holds with equality at the
/// interior extremum and is checked up to [`ATTAINED_TOL`].
#[derive(Debug, Clone)]
pub struct QuotientBound {
    pub label: String,
    pub constant: f64,
    pub side: Side,
    pub attained: bool,
    /// Series of `(f - c g) / g` where `f` and `g` vanish together.
    series: Option<Expansion>,
}

#[derive(Clone)]
struct Member {
    label: String,
    eval: RealFn,
}

#[derive(Clone)]
struct Gap {
    label: String,
    eval: RealFn,
}

/// An ordered chain of members, each strictly below the next, expressed as
/// bounds on `f/g` plus any gaps not of that form.
#[derive(Clone)]
pub struct Chain {
    id: ChainId,
    parameter: Option<f64>,
    domain: Interval,
    f: SmoothFn,
    g: SmoothFn,
    members: Vec<Member>,
    bounds: Vec<QuotientBound>,
    gaps: Vec<Gap>,
}

/// A grid point where a bound fails.
#[derive(Debug, Clone, PartialEq)]
pub struct ViolationAt {
    pub x: f64,
    pub bound: String,
    pub slack: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainReport {
    pub chain: String,
    pub parameter: Option<f64>,
    pub grid_n: usize,
    pub violation_count: usize,
    /// The first few violations in grid order.
    pub violations: Vec<ViolationAt>,
    pub min_slack: f64,
    pub min_slack_at: f64,
    pub min_slack_bound: String,
}

/// Column names and rows of a chain evaluated on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

const REPORTED_VIOLATIONS: usize = 10;

fn gap_series(f: &SmoothFn, g: &SmoothFn, c: f64) -> Option<Expansion> {
    let (ef, eg) = (f.expansion()?, g.expansion()?);
    if ef.center != eg.center {
        return None;
    }
    let cg = eg.series.scale(c);
    let num = ef.series.sub_cancelling(&cg, &ef.series.abs(), &cg.abs(), CANCELLATION_REL);
    let q = num.ratio(&eg.series, CANCELLATION_REL).ok()?;
    Some(Expansion::new(ef.center, q).with_radius(GAP_SERIES_RADIUS))
}

/// The gap series at `x` when its last two terms are negligible next to the
/// rounding error of `f/g - c`.
fn gap_from_series(e: &Expansion, c: f64, x: f64) -> Option<f64> {
    let u = x - e.center;
    if u.abs() > e.radius {
        return None;
    }
    let a = e.series.coeffs();
    let n = a.len();
    let tail: f64 = (n.saturating_sub(2)..n).map(|k| (a[k] * u.powi(k as i32)).abs()).sum();
    (tail <= GAP_SERIES_TRUNCATION * c.abs().max(1.0)).then(|| e.series.eval(u))
}

fn member(label: impl Into<String>, eval: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Member {
    Member { label: label.into(), eval: Arc::new(eval) }
}

impl Chain {
    fn new(id: ChainId, parameter: Option<f64>, f: SmoothFn, g: SmoothFn) -> Chain {
        Chain {
            id,
            parameter,
            domain: *f.domain(),
            f,
            g,
            members: Vec::new(),
            bounds: Vec::new(),
            gaps: Vec::new(),
        }
    }

    fn bound(mut self, label: impl Into<String>, constant: f64, side: Side, attained: bool) -> Chain {
        let series = gap_series(&self.f, &self.g, constant);
        self.bounds.push(QuotientBound { label: label.into(), constant, side, attained, series });
        self
    }

    fn members(mut self, m: Vec<Member>) -> Chain {
        self.members = m;
        self
    }

    pub fn id(&self) -> ChainId {
        self.id
    }

    pub fn parameter(&self) -> Option<f64> {
        self.parameter
    }

    pub fn domain(&self) -> &Interval {
        &self.domain
    }

    pub fn bounds(&self) -> &[QuotientBound] {
        &self.bounds
    }

    pub fn name(&self) -> String {
        match self.parameter {
            Some(p) => format!("{}:{p}", self.id),
            None => self.id.to_string(),
        }
    }

    /// Signed distance of `f/g` from the bound's constant, positive when
    /// the bound holds.
    pub fn bound_slack(&self, b: &QuotientBound, x: f64) -> f64 {
        let d = b
            .series
            .as_ref()
            .and_then(|e| gap_from_series(e, b.constant, x))
            .unwrap_or_else(|| self.f.value(x) / self.g.value(x) - b.constant);
        match b.side {
            Side::Above => d,
            Side::Below => -d,
        }
    }

    /// Slack of every bound and then of every extra gap at `x`.
    pub fn slacks(&self, x: f64) -> Vec<f64> {
        self.bounds
            .iter()
            .map(|b| self.bound_slack(b, x))
            .chain(self.gaps.iter().map(|g| (g.eval)(x)))
            .collect()
    }

    fn labels(&self) -> Vec<(&str, bool)> {
        self.bounds
            .iter()
            .map(|b| (b.label.as_str(), b.attained))
            .chain(self.gaps.iter().map(|g| (g.label.as_str(), false)))
            .collect()
    }

    fn grid(&self, grid_n: usize) -> Result<Vec<f64>> {
        if grid_n < MIN_GRID {
            return Err(Error::Precondition(format!("chain grids need at least {MIN_GRID} points, got {grid_n}")));
        }
        Ok(self.domain.margin_grid(grid_n, MARGIN))
    }

    /// Evaluates every bound on `grid_n` interior points.
    pub fn verify(&self, grid_n: usize) -> Result<ChainReport> {
        let xs = self.grid(grid_n)?;
        let slacks = map_grid(&xs, |x| self.slacks(x));
        let labels = self.labels();
        let mut report = ChainReport {
            chain: self.name(),
            parameter: self.parameter,
            grid_n,
            violation_count: 0,
            violations: Vec::new(),
            min_slack: f64::INFINITY,
            min_slack_at: f64::NAN,
            min_slack_bound: String::new(),
        };
        for (&x, row) in xs.iter().zip(&slacks) {
            for (&s, &(label, attained)) in row.iter().zip(&labels) {
                let bad = s.is_nan() || if attained { s < -ATTAINED_TOL } else { s <= 0.0 };
                if bad {
                    report.violation_count += 1;
                    if report.violations.len() < REPORTED_VIOLATIONS {
                        report.violations.push(ViolationAt { x, bound: label.to_string(), slack: s });
                    }
                }
                if s < report.min_slack || s.is_nan() && !report.min_slack.is_nan() {
                    report.min_slack = s;
                    report.min_slack_at = x;
                    report.min_slack_bound = label.to_string();
                }
            }
        }
        Ok(report)
    }

    /// Members and minimal slack on `grid_n` interior points, one row per
    /// point: `x`, each member in chain order, then the minimal slack.
    pub fn scan(&self, grid_n: usize) -> Result<ScanTable> {
        let xs = self.grid(grid_n)?;
        let rows = map_grid(&xs, |x| {
            let mut row = Vec::with_capacity(self.members.len() + 2);
            row.push(x);
            row.extend(self.members.iter().map(|m| (m.eval)(x)));
            row.push(self.slacks(x).into_iter().fold(f64::INFINITY, f64::min));
            row
        });
        let mut columns = vec!["x".to_string()];
        columns.extend(self.members.iter().map(|m| m.label.clone()));
        columns.push("min_slack".to_string());
        Ok(ScanTable { columns, rows })
    }
}

impl fmt::Debug for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Chain")
            .field("id", &self.id)
            .field("parameter", &self.parameter)
            .field("bounds", &self.bounds)
            .finish()
    }
}

fn values(s: &SmoothFn) -> impl Fn(f64) -> f64 + Send + Sync + 'static {
    let s = s.clone();
    move |x| s.value(x)
}

/// `3 p0 ln cosh(x/3) <= ln(sinh x / x) < 3 ln cosh(x/3)` on `(0, inf)`,
/// in logarithms.
pub fn ly_h(p0: f64) -> Result<Chain> {
    let f = catalog::ln_sinh_over_x();
    let g = catalog::ln_cosh_scaled(3.0, 1.0 / 3.0);
    let (fv, gv, gl) = (values(&f), values(&g), values(&g));
    Ok(Chain::new(ChainId::HyperbolicSinc, None, f, g)
        .members(vec![
            member(format!("ln(cosh(x/3)^(3*{p0}))"), move |x| p0 * gl(x)),
            member("ln(sinh(x)/x)", fv),
            member("ln(cosh(x/3)^3)", gv),
        ])
        .bound("lower exponent", p0, Side::Above, true)
        .bound("upper exponent", 1.0, Side::Below, false))
}

/// `(3/2) ln cosh(2x/3) < x coth x - 1 <= (3 p1 / 2) ln cosh(2x/3)` on
/// `(0, inf)`, in logarithms.
pub fn stolarsky(p1: f64) -> Result<Chain> {
    let f = catalog::x_coth_x_minus_one();
    let g = catalog::ln_cosh_scaled(1.5, 2.0 / 3.0);
    let (fv, gv, gu) = (values(&f), values(&g), values(&g));
    Ok(Chain::new(ChainId::HyperbolicIdentric, None, f, g)
        .members(vec![
            member("ln(cosh(2x/3)^(3/2))", gv),
            member("x*coth(x)-1", fv),
            member(format!("ln(cosh(2x/3)^(3*{p1}/2))"), move |x| p1 * gu(x)),
        ])
        .bound("lower exponent", 1.0, Side::Above, false)
        .bound("upper exponent", p1, Side::Below, true))
}

fn identric_members(p: f64, exponents: [f64; 2]) -> (SmoothFn, SmoothFn, Vec<Member>) {
    let f = catalog::ln_identric();
    let g = catalog::ln_power_mean(p);
    let fv = values(&f);
    let (ga, gb) = (values(&g), values(&g));
    let [a, b] = exponents;
    let m = vec![
        member(format!("A_{p}^{a}"), move |x| (a * ga(x)).exp()),
        member("I", move |x| fv(x).exp()),
        member(format!("A_{p}^{b}"), move |x| (b * gb(x)).exp()),
    ];
    (f, g, m)
}

/// `A_p < I < A_p^(p / ln 2)` on `(0, 1)` for `p <= 2/3`; both reversed for
/// `p >= 1`.
pub fn identric_endpoint(p: f64) -> Result<Chain> {
    if !p.is_finite() || (p > 2.0 / 3.0 && p < 1.0) {
        return Err(Error::Parameter(format!("endpoint identric chain needs p <= 2/3 or p >= 1, got {p}")));
    }
    let e = p / LN_2;
    let reversed = p >= 1.0;
    let order = if reversed { [e, 1.0] } else { [1.0, e] };
    let (f, g, m) = identric_members(p, order);
    // g < 0, so a larger exponent gives a smaller member.
    let chain = Chain::new(ChainId::IdentricEndpoint, Some(p), f, g).members(m);
    Ok(if reversed {
        chain.bound("exponent 1", 1.0, Side::Above, false).bound("exponent p/ln 2", e, Side::Below, false)
    } else {
        chain.bound("exponent p/ln 2", e, Side::Above, false).bound("exponent 1", 1.0, Side::Below, false)
    })
}

/// `A_p^d0 <= I < A_p^d1` on `(0, 1)` for `2/3 < p < 1`, with `d0` the
/// interior extremum of the quotient and `d1 = min(p / ln 2, 1)`.
pub fn identric_sharp(p: f64, d0: f64) -> Result<Chain> {
    if !(p > 2.0 / 3.0 && p < 1.0) {
        return Err(Error::Parameter(format!("sharp identric chain needs 2/3 < p < 1, got {p}")));
    }
    let d1 = apps::identric_endpoint_exponent(p);
    let (f, g, m) = identric_members(p, [d0, d1]);
    let id = if p == LN_2 { ChainId::IdentricLn2 } else { ChainId::IdentricSharp };
    Ok(Chain::new(id, Some(p), f, g)
        .members(m)
        .bound("endpoint exponent", d1, Side::Above, false)
        .bound("interior exponent", d0, Side::Below, true))
}

/// [`identric_endpoint`] followed by `A_p^(p / ln 2) < e^-1 2^(1/p) A_p`,
/// for `0 < p <= 2/3` and reversed for `p >= 1`.
pub fn identric_coefficient(p: f64) -> Result<Chain> {
    if !(p > 0.0) || (p > 2.0 / 3.0 && p < 1.0) || !p.is_finite() {
        return Err(Error::Parameter(format!("identric coefficient chain needs 0 < p <= 2/3 or p >= 1, got {p}")));
    }
    let mut chain = identric_endpoint(p)?;
    chain.id = ChainId::IdentricCoefficient;
    let e = p / LN_2;
    let orient = if p >= 1.0 { -1.0 } else { 1.0 };
    let g = chain.g.clone();
    let gap = move |x: f64| {
        let lg = g.value(x);
        orient * ((-1.0 + LN_2 / p + lg) - e * lg)
    };
    let g4 = chain.g.clone();
    let top = member(format!("e^-1*2^(1/{p})*A_{p}"), move |x| (-1.0 + LN_2 / p + g4.value(x)).exp());
    if orient > 0.0 {
        chain.members.push(top);
    } else {
        chain.members.insert(0, top);
    }
    chain.gaps.push(Gap { label: "coefficient e^-1 2^(1/p)".into(), eval: Arc::new(gap) });
    Ok(chain)
}

/// `((ln 2 - p) / (p ln 2)) ln(x^p + 1)`, the log-gap between the top two
/// members of [`identric_coefficient`].
pub fn identric_coefficient_gap(p: f64, x: f64) -> f64 {
    (LN_2 - p) / (p * LN_2) * x.powf(p).ln_1p()
}

fn cusa_members(p: f64, weights: [f64; 2]) -> (SmoothFn, SmoothFn, Vec<Member>) {
    let f = catalog::sinc_pow_minus_one(p);
    let g = catalog::cos_pow_minus_one(p);
    let fv = values(&f);
    let (ga, gb) = (values(&g), values(&g));
    let [a, b] = weights;
    // 1 - w + w cos^p = 1 + w (cos^p - 1)
    let m = vec![
        member(format!("{a}*cos(x)^{p}+1-{a}"), move |x| 1.0 + a * ga(x)),
        member(format!("(sin(x)/x)^{p}"), move |x| 1.0 + fv(x)),
        member(format!("{b}*cos(x)^{p}+1-{b}"), move |x| 1.0 + b * gb(x)),
    ];
    (f, g, m)
}

/// `1 - xi + xi cos^p < (sin x / x)^p < 1 - eta + eta cos^p` on `(0, pi/2)`
/// for `p >= 1`, with `eta = 1/3` and `xi = 1 - (2/pi)^p`.
pub fn cusa_upper(p: f64) -> Result<Chain> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::Parameter(format!("chain needs p >= 1, got {p}")));
    }
    let (eta, xi) = (1.0 / 3.0, 1.0 - FRAC_2_PI.powf(p));
    // g < 0: a larger weight gives a smaller member.
    let (f, g, m) = cusa_members(p, [xi, eta]);
    Ok(Chain::new(ChainId::CusaUpper, Some(p), f, g)
        .members(m)
        .bound("weight 1/3", eta, Side::Above, false)
        .bound("weight 1-(2/pi)^p", xi, Side::Below, false))
}

/// `1 - eta + eta cos^p < (sin x / x)^p < 1 - xi + xi cos^p` on `(0, pi/2)`
/// for `0 < p <= 4/5`.
pub fn cusa_lower(p: f64) -> Result<Chain> {
    if !(p > 0.0 && p <= 0.8) {
        return Err(Error::Parameter(format!("chain needs 0 < p <= 4/5, got {p}")));
    }
    let (eta, xi) = (1.0 / 3.0, 1.0 - FRAC_2_PI.powf(p));
    let (f, g, m) = cusa_members(p, [eta, xi]);
    Ok(Chain::new(ChainId::CusaLower, Some(p), f, g)
        .members(m)
        .bound("weight 1-(2/pi)^p", xi, Side::Above, false)
        .bound("weight 1/3", eta, Side::Below, false))
}

/// `t0 cos^p + 1 - t0 <= (sin x / x)^p < t1 cos^p + 1 - t1` on `(0, pi/2)`
/// for `4/5 < p < 1`, with `t0` the interior extremum of the quotient and
/// `t1 = min(1 - (2/pi)^p, 1/3)`.
pub fn cusa_sharp(p: f64, t0: f64) -> Result<Chain> {
    if !(p > 0.8 && p < 1.0) {
        return Err(Error::Parameter(format!("sharp trigonometric chain needs 4/5 < p < 1, got {p}")));
    }
    let t1 = apps::cusa_endpoint_weight(p);
    let (f, g, m) = cusa_members(p, [t0, t1]);
    Ok(Chain::new(ChainId::CusaSharp, Some(p), f, g)
        .members(m)
        .bound("endpoint weight", t1, Side::Above, false)
        .bound("interior weight", t0, Side::Below, true))
}

/// [`cusa_sharp`] at the exponent where `1 - (2/pi)^p = 1/3`.
pub fn cusa_critical(t0: f64) -> Result<Chain> {
    let p = apps::cusa_critical_exponent();
    let (f, g, m) = cusa_members(p, [t0, 1.0 / 3.0]);
    Ok(Chain::new(ChainId::CusaCritical, Some(p), f, g)
        .members(m)
        .bound("weight 1/3", 1.0 / 3.0, Side::Above, false)
        .bound("interior weight", t0, Side::Below, true))
}

/// Builds a catalog chain, computing any interior-extremum constant it needs.
pub fn build(id: ChainId, p: Option<f64>) -> Result<Chain> {
    let fixed = |q: f64| match p {
        Some(v) if v != q => Err(Error::Parameter(format!("{id} is defined at p = {q} only, got {v}"))),
        _ => Ok(q),
    };
    let p = p.or(id.default_parameter());
    match id {
        ChainId::HyperbolicSinc | ChainId::HyperbolicIdentric => {
            if let Some(v) = p {
                return Err(Error::Parameter(format!("{id} takes no parameter, got {v}")));
            }
            if id == ChainId::HyperbolicSinc {
                ly_h(apps::solve(Target::Lin, None)?.constant)
            } else {
                stolarsky(apps::solve(Target::Stolarsky, None)?.constant)
            }
        }
        ChainId::IdentricEndpoint => identric_endpoint(p.unwrap_or(f64::NAN)),
        ChainId::IdentricCoefficient => identric_coefficient(p.unwrap_or(f64::NAN)),
        ChainId::IdentricSharp | ChainId::IdentricLn2 => {
            let p = if id == ChainId::IdentricLn2 { fixed(LN_2)? } else { p.unwrap_or(f64::NAN) };
            let d0 = apps::solve(Target::Identric, Some(p))?.constant;
            identric_sharp(p, d0)
        }
        ChainId::CusaUpper => cusa_upper(p.unwrap_or(f64::NAN)),
        ChainId::CusaLower => cusa_lower(p.unwrap_or(f64::NAN)),
        ChainId::CusaSharp => {
            let p = p.unwrap_or(f64::NAN);
            let t0 = apps::solve(Target::Cusa, Some(p))?.constant;
            cusa_sharp(p, t0)
        }
        ChainId::CusaCritical => {
            let p0 = apps::cusa_critical_exponent();
            fixed(p0)?;
            cusa_critical(apps::solve(Target::Cusa, Some(p0))?.constant)
        }
    }
}

/// Parses `key` or `key:p`, builds the chain and checks it on `grid_n`
/// interior points.
pub fn verify_inequality_chain(chain_id: &str, grid_n: usize) -> Result<ChainReport> {
    let (id, p) = ChainId::parse(chain_id)?;
    build(id, p)?.verify(grid_n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn clean(c: &Chain, n: usize) -> ChainReport {
        let r = c.verify(n).unwrap();
        assert_eq!(r.violation_count, 0, "{r:?}");
        r
    }

    #[test]
    fn parse_keys() {
        assert_eq!(ChainId::parse("LY-h").unwrap(), (ChainId::HyperbolicSinc, None));
        assert_eq!(ChainId::parse("I-new1:0.3").unwrap(), (ChainId::IdentricEndpoint, Some(0.3)));
        assert!(matches!(ChainId::parse("nosuch"), Err(Error::Catalog(_))));
        assert!(matches!(ChainId::parse("Zhu1:abc"), Err(Error::Catalog(_))));
        for id in ChainId::ALL {
            assert_eq!(ChainId::parse(id.key()).unwrap().0, id);
        }
    }

    #[test]
    fn hyperbolic_chains_hold() {
        let r = clean(&ly_h(0.88071220551195272881).unwrap(), 2000);
        assert!(r.min_slack >= 0.0 && r.min_slack < 1e-4);
        clean(&stolarsky(1.0139871060144299448).unwrap(), 2000);
        // A slightly larger lower exponent is violated near the extremum.
        let r = ly_h(0.8808).unwrap().verify(2000).unwrap();
        assert!(r.violation_count > 0);
        assert!((r.violations[0].x - 7.7255).abs() < 1.0);
    }

    #[test]
    fn identric_endpoint_chains() {
        for p in [0.3, 2.0 / 3.0, 0.0, -1.0, 1.0, 2.0] {
            clean(&identric_endpoint(p).unwrap(), 2000);
        }
        assert!(identric_endpoint(0.8).is_err());
        // The p = 1/2 chain read in the wrong direction fails everywhere.
        let c = identric_endpoint(0.5).unwrap();
        let flipped = Chain {
            bounds: c.bounds.iter().map(|b| QuotientBound {
                side: if b.side == Side::Above { Side::Below } else { Side::Above },
                ..b.clone()
            }).collect(),
            ..c.clone()
        };
        assert_eq!(flipped.verify(100).unwrap().violation_count, 200);
    }

    #[test]
    fn near_diagonal_slack_uses_series() {
        // At p = 2/3 the quotient approaches 1 to third order at x = 1.
        let c = identric_endpoint(2.0 / 3.0).unwrap();
        let b = &c.bounds()[1];
        for x in [1.0 - 1e-4, 1.0 - 1e-6] {
            let s = c.bound_slack(b, x);
            assert!(s > 0.0, "{x}: {s}");
        }
        // Reference values to 50 digits.
        for (x, want) in [
            (0.998, 2.4773863391796160290e-12),
            (1.0 - 1e-4, 3.0869342190119496862e-16),
            (0.99, 3.1384932068696786352e-10),
            (0.9, 3.6710115512356198334e-7),
        ] {
            let s = c.bound_slack(b, x);
            assert!((s - want).abs() <= 1e-9 * want, "{x}: {s} vs {want}");
        }
    }

    #[test]
    fn coefficient_chain_and_gap() {
        let c = identric_coefficient(0.5).unwrap();
        clean(&c, 2000);
        for x in [1e-3, 0.2, 0.7] {
            let gap = *c.slacks(x).last().unwrap();
            let want = identric_coefficient_gap(0.5, x);
            assert!(want > 0.0 && (gap - want).abs() < 1e-13, "{x}");
        }
        clean(&identric_coefficient(1.0).unwrap(), 1000);
        clean(&identric_coefficient(2.0).unwrap(), 1000);
    }

    #[test]
    fn trigonometric_chains() {
        clean(&cusa_upper(1.0).unwrap(), 2000);
        clean(&cusa_upper(2.0).unwrap(), 1000);
        clean(&cusa_lower(0.5).unwrap(), 2000);
        clean(&cusa_lower(0.8).unwrap(), 1000);
        let p0 = apps::cusa_critical_exponent();
        let t0 = 0.33979125619190090115;
        clean(&cusa_critical(t0).unwrap(), 2000);
        clean(&cusa_sharp(p0, t0).unwrap(), 2000);
        // The smaller interior weight is exceeded near x = 1.3.
        let r = cusa_critical(0.33334).unwrap().verify(2000).unwrap();
        assert!(r.violation_count > 0);
        // Upper member at x = 1 for the critical exponent.
        let (s, c) = 1.0f64.sin_cos();
        assert!(s.powf(p0) < c.powf(p0) / 3.0 + 2.0 / 3.0);
    }

    #[test]
    fn scan_shape() {
        let c = identric_endpoint(0.3).unwrap();
        let t = c.scan(1000).unwrap();
        assert_eq!(t.rows.len(), 1000);
        assert_eq!(t.columns.len(), 5);
        assert!(t.rows.iter().all(|r| r.len() == 5 && r[4] > 0.0));
        assert!(t.rows.iter().all(|r| r[1] < r[2] && r[2] < r[3]));
        assert!(c.scan(10).is_err());
    }

    #[test]
    fn build_rejects_bad_parameters() {
        assert!(matches!(build(ChainId::HyperbolicSinc, Some(1.0)), Err(Error::Parameter(_))));
        assert!(matches!(build(ChainId::IdentricLn2, Some(0.7)), Err(Error::Parameter(_))));
        assert!(matches!(build(ChainId::CusaLower, Some(0.9)), Err(Error::Parameter(_))));
        assert!(matches!(verify_inequality_chain("nosuch", 100), Err(Error::Catalog(_))));
    }

    proptest! {
        #[test]
        fn endpoint_identric_chain_holds(p in 0.05f64..=2.0 / 3.0, x in 1e-6f64..0.999) {
            let c = identric_endpoint(p).unwrap();
            prop_assert!(c.slacks(x).iter().all(|&s| s > 0.0));
        }

        #[test]
        fn reversed_identric_chain_holds(p in 1.0f64..4.0, x in 1e-6f64..0.999) {
            let c = identric_endpoint(p).unwrap();
            prop_assert!(c.slacks(x).iter().all(|&s| s > 0.0));
        }

        #[test]
        fn trigonometric_chains_hold(p in 1.0f64..4.0, q in 0.05f64..=0.8, x in 1e-3f64..1.57) {
            prop_assert!(cusa_upper(p).unwrap().slacks(x).iter().all(|&s| s > 0.0));
            prop_assert!(cusa_lower(q).unwrap().slacks(x).iter().all(|&s| s > 0.0));
        }
    }
}
