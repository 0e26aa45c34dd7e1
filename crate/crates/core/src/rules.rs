//! Monotonicity rules for `f/g` driven by the endpoint signs of `H`.

use std::fmt;

use crate::aux_h::AuxPair;
use crate::classify::{classify, MonotonePattern, PatternKind, DEFAULT_GRID};
use crate::error::{Endpoint, Error, Result};
use crate::numerics::{ExtReal, Sign, ZERO_THRESHOLD};

const BISECTION_TOL: f64 = 1e-14;
const BISECTION_MAX_ITER: usize = 200;

/// Which rule produced a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RuleId {
    /// Monotone ratio, both endpoint limits of `H` nonnegative.
    GlmrNonnegative,
    /// Monotone ratio, both endpoint limits of `H` nonpositive.
    GlmrNonpositive,
    /// Increasing ratio, `H` crosses from negative to positive.
    GlmrIncreasingCrossing,
    /// Decreasing ratio, `H` crosses from positive to negative.
    GlmrDecreasingCrossing,
    /// Constant ratio with `H` vanishing at both ends: `f/g` is constant.
    GlmrDegenerate,
    /// Row 1..=8 of the decision table for `f(a+) = g(a+) = 0`.
    VanishingAtLower(u8),
    /// Row 1..=8 of the decision table for `f(b-) = g(b-) = 0`.
    VanishingAtUpper(u8),
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RuleId::GlmrNonnegative => f.write_str("general rule, H >= 0 at both ends"),
            RuleId::GlmrNonpositive => f.write_str("general rule, H <= 0 at both ends"),
            RuleId::GlmrIncreasingCrossing => f.write_str("general rule, increasing ratio with H crossing upward"),
            RuleId::GlmrDecreasingCrossing => f.write_str("general rule, decreasing ratio with H crossing downward"),
            RuleId::GlmrDegenerate => f.write_str("general rule, H vanishes identically"),
            RuleId::VanishingAtLower(r) => write!(f, "vanishing at lower end, row {r}"),
            RuleId::VanishingAtUpper(r) => write!(f, "vanishing at upper end, row {r}"),
        }
    }
}

/// The quantities a rule decided on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RuleInputs {
    pub g_prime_sign: Sign,
    pub g_sign: Sign,
    pub h_lo: Option<ExtReal>,
    pub h_hi: Option<ExtReal>,
    pub ratio_pattern: MonotonePattern,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RuleVerdict {
    pub quotient_pattern: MonotonePattern,
    pub fired_rule: RuleId,
    pub inputs_used: RuleInputs,
}

/// Direction of the bound `f/g > lambda` or `f/g < lambda`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Greater,
    Less,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Greater => ">",
            Direction::Less => "<",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SharpBoundReport {
    pub lambda: f64,
    pub other_endpoint_limit: ExtReal,
    pub inequality_direction: Direction,
    pub holds_iff: bool,
    /// Location and value of the interior extremum of `f/g`.
    pub interior_extremum: Option<(f64, f64)>,
}

/// Sign of a declared limit of `H`; an exactly declared zero is `Zero`, a
/// nonzero value within the threshold is ambiguous.
fn limit_sign(p: &AuxPair, e: Endpoint) -> Result<Sign> {
    let v = p
        .h_limit(e)
        .ok_or_else(|| Error::Precondition(format!("limit of H at the {e} endpoint is not declared")))?;
    match v {
        ExtReal::Finite(0.0) => Ok(Sign::Zero),
        ExtReal::Finite(x) if x.abs() <= ZERO_THRESHOLD => Err(Error::AmbiguousEndpoint(e, x.abs())),
        other => Ok(other.sign()),
    }
}

fn inputs(p: &AuxPair, g_sign: Sign, ratio: MonotonePattern) -> RuleInputs {
    RuleInputs {
        g_prime_sign: p.g_prime_sign(),
        g_sign,
        h_lo: p.h_limit(Endpoint::Lower),
        h_hi: p.h_limit(Endpoint::Upper),
        ratio_pattern: ratio,
    }
}

/// Bisection on `H` between `lo` and `hi`, where `H` has sign `s_lo` near
/// `lo`, carried out in the domain's sampling coordinates. `None` stands for
/// the corresponding domain endpoint.
fn bisect_h(p: &AuxPair, lo: Option<f64>, hi: Option<f64>, s_lo: Sign) -> Result<f64> {
    let (t0, t1, r) = p.domain().sampling_coordinates();
    let mut a = lo.map_or(t0, |x| r.inverse(x));
    let mut b = hi.map_or(t1, |x| r.inverse(x));
    for _ in 0..BISECTION_MAX_ITER {
        if b - a <= BISECTION_TOL {
            break;
        }
        let t = 0.5 * (a + b);
        let h = p.eval_h_safe(r.forward(t))?;
        if h == 0.0 {
            return Ok(r.forward(t));
        }
        if Sign::strict(h) == s_lo {
            a = t;
        } else {
            b = t;
        }
    }
    Ok(r.forward(0.5 * (a + b)))
}

fn classify_ratio(p: &AuxPair) -> Result<MonotonePattern> {
    classify(&p.ratio_fn()?, p.domain(), DEFAULT_GRID)
}

/// General rule for a monotone ratio `f'/g'` and `g > 0`; the ratio is
/// classified on the default grid.
pub fn glmr(p: &AuxPair) -> Result<RuleVerdict> {
    let ratio = classify_ratio(p)?;
    glmr_with(p, ratio)
}

/// General rule with a caller-supplied pattern of `f'/g'`.
pub fn glmr_with(p: &AuxPair, ratio: MonotonePattern) -> Result<RuleVerdict> {
    match ratio.kind() {
        PatternKind::Inc | PatternKind::Dec | PatternKind::Constant => {}
        k => {
            return Err(Error::WrongRule(format!(
                "ratio f'/g' is {k}; use the piecewise rules"
            )))
        }
    }
    for (_, x) in p.domain().interior_grid(DEFAULT_GRID) {
        let g = p.g().value(x);
        if !(g > 0.0) {
            return Err(Error::Precondition(format!(
                "g must be positive; g({x}) = {g} (pass -g and negate the verdict)"
            )));
        }
    }
    let sa = limit_sign(p, Endpoint::Lower)?;
    let sb = limit_sign(p, Endpoint::Upper)?;
    let sigma = p.g_prime_sign();
    let used = inputs(p, Sign::Pos, ratio);
    let up = |s: Sign| if s == Sign::Pos { PatternKind::Inc } else { PatternKind::Dec };
    let verdict = |kind: PatternKind, tp: Option<f64>, rule: RuleId| -> Result<RuleVerdict> {
        let quotient_pattern = match tp {
            Some(t) => MonotonePattern::piecewise(kind, t)?,
            None => MonotonePattern::simple(kind)?,
        };
        Ok(RuleVerdict { quotient_pattern, fired_rule: rule, inputs_used: used })
    };
    if sa == Sign::Zero && sb == Sign::Zero {
        if ratio.kind() == PatternKind::Constant {
            return verdict(PatternKind::Constant, None, RuleId::GlmrDegenerate);
        }
        return Err(Error::Inconsistent(
            "H vanishes at both ends but f'/g' is strictly monotone".into(),
        ));
    }
    if sa != Sign::Neg && sb != Sign::Neg {
        return verdict(up(sigma), None, RuleId::GlmrNonnegative);
    }
    if sa != Sign::Pos && sb != Sign::Pos {
        return verdict(up(sigma.negate()), None, RuleId::GlmrNonpositive);
    }
    match (ratio.kind(), sa, sb) {
        (PatternKind::Inc, Sign::Neg, Sign::Pos) => {
            let t = bisect_h(p, None, None, Sign::Neg)?;
            let kind = if sigma == Sign::Pos { PatternKind::DecInc } else { PatternKind::IncDec };
            verdict(kind, Some(t), RuleId::GlmrIncreasingCrossing)
        }
        (PatternKind::Dec, Sign::Pos, Sign::Neg) => {
            let t = bisect_h(p, None, None, Sign::Pos)?;
            let kind = if sigma == Sign::Pos { PatternKind::IncDec } else { PatternKind::DecInc };
            verdict(kind, Some(t), RuleId::GlmrDecreasingCrossing)
        }
        (k, a, b) => Err(Error::Inconsistent(format!(
            "ratio {k} cannot produce H limits of signs {a} and {b}"
        ))),
    }
}

fn check_piecewise_ratio(ratio: &MonotonePattern) -> Result<f64> {
    match ratio.turning_point() {
        Some(c) if ratio.kind().is_piecewise() => Ok(c),
        _ => Err(Error::WrongRule(format!(
            "ratio f'/g' is {}; the piecewise rules need one turning point",
            ratio.kind()
        ))),
    }
}

fn check_vanishing(p: &AuxPair, e: Endpoint) -> Result<()> {
    if p.vanishes_at(e) {
        Ok(())
    } else if p.vanishes_at(e.opposite()) {
        Err(Error::WrongEndpoint(e))
    } else {
        Err(Error::Precondition(format!("f and g are not declared to vanish at the {e} endpoint")))
    }
}

/// Piecewise rule for `f(a+) = g(a+) = 0` and a ratio with one turning
/// point `c`. The turning point of `f/g`, when there is one, is the root of
/// `H` on `(c, b)`.
pub fn lpmr_at_a(p: &AuxPair, ratio: MonotonePattern) -> Result<RuleVerdict> {
    check_vanishing(p, Endpoint::Lower)?;
    let c = check_piecewise_ratio(&ratio)?;
    let sb = limit_sign(p, Endpoint::Upper)?;
    let sigma = p.g_prime_sign();
    let s = sigma * sb;
    let inc_dec = ratio.kind() == PatternKind::IncDec;
    let neg = sigma == Sign::Neg;
    let (monotone, row) = if inc_dec {
        (s != Sign::Neg, if neg { 5 } else { 1 })
    } else {
        (s != Sign::Pos, if neg { 7 } else { 3 })
    };
    let used = inputs(p, sigma, ratio);
    if monotone {
        let kind = if inc_dec { PatternKind::Inc } else { PatternKind::Dec };
        return Ok(RuleVerdict {
            quotient_pattern: MonotonePattern::simple(kind)?,
            fired_rule: RuleId::VanishingAtLower(row),
            inputs_used: used,
        });
    }
    let hc = p.eval_h_safe(c)?;
    if Sign::strict(hc) == Sign::strict(sb.as_f64()) || hc == 0.0 {
        return Err(Error::Inconsistent(format!(
            "H({c}) = {hc:e} does not separate from the upper limit sign {sb}"
        )));
    }
    let t = bisect_h(p, Some(c), None, Sign::strict(hc))?;
    let kind = if inc_dec { PatternKind::IncDec } else { PatternKind::DecInc };
    Ok(RuleVerdict {
        quotient_pattern: MonotonePattern::piecewise(kind, t)?,
        fired_rule: RuleId::VanishingAtLower(row + 1),
        inputs_used: used,
    })
}

/// Piecewise rule for `f(b-) = g(b-) = 0`. The turning point of `f/g`, when
/// there is one, is the root of `H` on `(a, c)`.
pub fn lpmr_at_b(p: &AuxPair, ratio: MonotonePattern) -> Result<RuleVerdict> {
    check_vanishing(p, Endpoint::Upper)?;
    let c = check_piecewise_ratio(&ratio)?;
    let sa = limit_sign(p, Endpoint::Lower)?;
    let sigma = p.g_prime_sign();
    let s = sigma * sa;
    let inc_dec = ratio.kind() == PatternKind::IncDec;
    let neg = sigma == Sign::Neg;
    let (monotone, row) = if inc_dec {
        (s != Sign::Pos, if neg { 5 } else { 1 })
    } else {
        (s != Sign::Neg, if neg { 7 } else { 3 })
    };
    let used = inputs(p, sigma.negate(), ratio);
    if monotone {
        let kind = if inc_dec { PatternKind::Dec } else { PatternKind::Inc };
        return Ok(RuleVerdict {
            quotient_pattern: MonotonePattern::simple(kind)?,
            fired_rule: RuleId::VanishingAtUpper(row),
            inputs_used: used,
        });
    }
    let hc = p.eval_h_safe(c)?;
    if Sign::strict(hc) == Sign::strict(sa.as_f64()) || hc == 0.0 {
        return Err(Error::Inconsistent(format!(
            "H({c}) = {hc:e} does not separate from the lower limit sign {sa}"
        )));
    }
    let t = bisect_h(p, None, Some(c), Sign::strict(sa.as_f64()))?;
    let kind = if inc_dec { PatternKind::IncDec } else { PatternKind::DecInc };
    Ok(RuleVerdict {
        quotient_pattern: MonotonePattern::piecewise(kind, t)?,
        fired_rule: RuleId::VanishingAtUpper(row + 1),
        inputs_used: used,
    })
}

/// The sharp bound `f/g > lambda` (increasing-decreasing ratio) or
/// `f/g < lambda` (decreasing-increasing ratio), where `lambda` is the
/// declared limit of `f/g` at the end where both functions vanish. The
/// bound holds on the whole interval iff the limit at the other end does
/// not cross `lambda`.
pub fn sharp_bound(p: &AuxPair, ratio: MonotonePattern, vanishing_end: Endpoint) -> Result<SharpBoundReport> {
    check_vanishing(p, vanishing_end)?;
    let lambda = match p.quotient_limit(vanishing_end) {
        Some(ExtReal::Finite(l)) => l,
        Some(inf) => return Err(Error::Precondition(format!("limit of f/g at the {vanishing_end} endpoint is {inf}"))),
        None => {
            return Err(Error::Precondition(format!(
                "limit of f/g at the {vanishing_end} endpoint is not declared"
            )))
        }
    };
    let other = p.quotient_limit(vanishing_end.opposite()).ok_or_else(|| {
        Error::Precondition(format!(
            "limit of f/g at the {} endpoint is not declared",
            vanishing_end.opposite()
        ))
    })?;
    let (direction, extremum) = match ratio.kind() {
        PatternKind::Constant => {
            let (lo, hi, r) = p.domain().sampling_coordinates();
            let x = r.forward(0.5 * (lo + hi));
            (Direction::Greater, Some((x, p.quotient(x)?)))
        }
        PatternKind::IncDec | PatternKind::DecInc => {
            let v = match vanishing_end {
                Endpoint::Lower => lpmr_at_a(p, ratio)?,
                Endpoint::Upper => lpmr_at_b(p, ratio)?,
            };
            let ext = match v.quotient_pattern.turning_point() {
                Some(t) => Some((t, p.quotient(t)?)),
                None => None,
            };
            let d = if ratio.kind() == PatternKind::IncDec { Direction::Greater } else { Direction::Less };
            (d, ext)
        }
        k => return Err(Error::WrongRule(format!("ratio f'/g' is {k}"))),
    };
    let holds_iff = match direction {
        Direction::Greater => other >= ExtReal::Finite(lambda),
        Direction::Less => other <= ExtReal::Finite(lambda),
    };
    Ok(SharpBoundReport {
        lambda,
        other_endpoint_limit: other,
        inequality_direction: direction,
        holds_iff,
        interior_extremum: extremum,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{Interval, SmoothFn, Taylor};
    use crate::{catalog, tables};

    fn unit() -> Interval {
        Interval::open(0.0, 1.0).unwrap()
    }

    fn poly(c: Vec<f64>) -> SmoothFn {
        catalog::polynomial(c, unit()).unwrap()
    }

    #[test]
    fn glmr_on_simple_pairs() {
        let p = AuxPair::new(poly(vec![0.0, 0.0, 1.0]), poly(vec![0.0, 1.0]), unit())
            .unwrap()
            .with_h_limits(None, Some(ExtReal::Finite(1.0)))
            .unwrap();
        let v = glmr(&p).unwrap();
        assert_eq!(v.quotient_pattern.kind(), PatternKind::Inc);
        assert_eq!(v.fired_rule, RuleId::GlmrNonnegative);

        let iv = Interval::open(0.0, std::f64::consts::FRAC_PI_2).unwrap();
        let sin = catalog::sine(iv).with_limits(Some(ExtReal::Finite(0.0)), Some(ExtReal::Finite(1.0)));
        let x = catalog::polynomial(vec![0.0, 1.0], iv).unwrap();
        let p = AuxPair::new(sin, x, iv).unwrap().with_h_limits(None, Some(ExtReal::Finite(-1.0))).unwrap();
        let v = glmr(&p).unwrap();
        assert_eq!(v.quotient_pattern.kind(), PatternKind::Dec);
        assert_eq!(v.fired_rule, RuleId::GlmrNonpositive);
        let xs: Vec<f64> = (1..=1000).map(|k| k as f64 * 1.5 / 1001.0).collect();
        assert!(xs.windows(2).all(|w| (w[1].sin() / w[1]) < (w[0].sin() / w[0])));
    }

    #[test]
    fn glmr_degenerate_for_equal_functions() {
        let f = poly(vec![0.0, 1.0, 1.0]);
        let p = AuxPair::new(f.clone(), f, unit()).unwrap().with_h_limits(None, Some(ExtReal::Finite(0.0))).unwrap();
        let v = glmr(&p).unwrap();
        assert_eq!(v.quotient_pattern.kind(), PatternKind::Constant);
        assert_eq!(v.fired_rule, RuleId::GlmrDegenerate);
        let p = p.with_quotient_limits(Some(ExtReal::Finite(1.0)), Some(ExtReal::Finite(1.0)));
        let ratio = MonotonePattern::simple(PatternKind::Constant).unwrap();
        let b = sharp_bound(&p, ratio, Endpoint::Lower).unwrap();
        assert!(b.holds_iff);
        assert_eq!(b.lambda, 1.0);
        assert!((b.interior_extremum.unwrap().1 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn glmr_crossing_locates_root_of_h() {
        // f = x^3 - 2x, g = x + 1: f'/g' = 3x^2 - 2 increases and
        // H = 2x^3 + 3x^2 - 2 runs from -2 to 3.
        let p = AuxPair::new(poly(vec![0.0, -2.0, 0.0, 1.0]), poly(vec![1.0, 1.0]), unit())
            .unwrap()
            .with_h_limits(Some(ExtReal::Finite(-2.0)), Some(ExtReal::Finite(3.0)))
            .unwrap();
        let v = glmr(&p).unwrap();
        assert_eq!(v.quotient_pattern.kind(), PatternKind::DecInc);
        let t = v.quotient_pattern.turning_point().unwrap();
        assert!((2.0 * t * t * t + 3.0 * t * t - 2.0).abs() < 1e-12);
    }

    #[test]
    fn glmr_rejects_piecewise_ratio_and_nonpositive_g() {
        let p = tables::synthetic_pair(&tables::table_rows()[1]).unwrap();
        assert!(matches!(glmr(&p), Err(Error::WrongRule(_))));
        let g = poly(vec![-1.0, 0.5]);
        let p = AuxPair::new(poly(vec![0.0, 1.0]), g, unit())
            .unwrap()
            .with_h_limits(Some(ExtReal::Finite(1.0)), Some(ExtReal::Finite(1.0)))
            .unwrap();
        assert!(matches!(glmr(&p), Err(Error::Precondition(_))));
    }

    #[test]
    fn piecewise_rules_reject_monotone_ratio_and_wrong_end() {
        let iv = Interval::open(0.0, 3.0).unwrap();
        let f = catalog::polynomial(vec![0.0, 1.0, 0.0, -1.0 / 6.0], iv).unwrap();
        let g = catalog::polynomial(vec![0.0, 1.0], iv).unwrap();
        let p = AuxPair::new(f, g, iv).unwrap().with_h_limits(None, Some(ExtReal::Finite(-9.0))).unwrap();
        let ratio = classify(&p.ratio_fn().unwrap(), &iv, DEFAULT_GRID).unwrap();
        assert_eq!(ratio.kind(), PatternKind::Dec);
        assert!(matches!(lpmr_at_a(&p, ratio), Err(Error::WrongRule(_))));
        let tp = MonotonePattern::piecewise(PatternKind::IncDec, 1.0).unwrap();
        assert!(matches!(lpmr_at_b(&p, tp), Err(Error::WrongEndpoint(Endpoint::Upper))));
    }

    #[test]
    fn ambiguous_endpoint_is_an_error() {
        let p = tables::synthetic_pair(&tables::table_rows()[1])
            .unwrap()
            .with_h_limits(None, Some(ExtReal::Finite(1e-13)))
            .unwrap();
        let ratio = MonotonePattern::piecewise(PatternKind::IncDec, 0.3).unwrap();
        assert!(matches!(lpmr_at_a(&p, ratio), Err(Error::AmbiguousEndpoint(Endpoint::Upper, _))));
    }

    #[test]
    fn glmr_and_piecewise_rule_agree_on_monotone_quotient() {
        // Ratio IncDec with H(b-) >= 0 gives an increasing quotient; the
        // same pair restricted to the increasing part of the ratio falls
        // under the general rule.
        let p = tables::synthetic_pair(&tables::table_rows()[0]).unwrap();
        let ratio = MonotonePattern::piecewise(PatternKind::IncDec, 0.9).unwrap();
        let v = lpmr_at_a(&p, ratio).unwrap();
        assert_eq!(v.quotient_pattern.kind(), PatternKind::Inc);
        let iv = Interval::open(0.0, 0.9).unwrap();
        let r = Taylor::from_coeffs(vec![0.0, -0.81, 0.9, -1.0 / 3.0]);
        let f = catalog::polynomial(r.coeffs().to_vec(), iv).unwrap();
        let g = catalog::polynomial(vec![0.0, 1.0], iv).unwrap();
        let h_end = -r.eval(0.9);
        let q = AuxPair::new(f, g, iv).unwrap().with_h_limits(None, Some(ExtReal::Finite(h_end))).unwrap();
        let w = glmr(&q).unwrap();
        assert_eq!(w.quotient_pattern.kind(), PatternKind::Inc);
    }
}
