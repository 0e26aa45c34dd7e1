//! The auxiliary function `H = (f'/g') g - f` of a pair `(f, g)`.

use crate::error::{Endpoint, Error, Result};
use crate::numerics::{Expansion, ExtReal, Interval, Sign, SignedValue, SmoothFn, Taylor};

/// Number of interior samples used to confirm that `g'` keeps one sign.
pub const SIGN_CHECK_SAMPLES: usize = 1024;

/// Relative size below which a series coefficient produced by cancellation
/// is treated as zero.
const CANCELLATION_REL: f64 = 1e-12;

fn slot(e: Endpoint) -> usize {
    match e {
        Endpoint::Lower => 0,
        Endpoint::Upper => 1,
    }
}

#[derive(Debug, Clone)]
struct PairSeries {
    h: Expansion,
    dh: Expansion,
    ratio: Expansion,
    dratio: Expansion,
}

/// Two smooth functions on a common open interval with `g'` of one sign.
#[derive(Debug, Clone)]
pub struct AuxPair {
    f: SmoothFn,
    g: SmoothFn,
    domain: Interval,
    g_prime_sign: Sign,
    h_limits: [Option<ExtReal>; 2],
    forced_zero: [bool; 2],
    quotient_limits: [Option<ExtReal>; 2],
    series: Option<PairSeries>,
}

fn contains_interval(outer: &Interval, inner: &Interval) -> bool {
    outer.lo() <= inner.lo() && inner.hi() <= outer.hi()
}

fn vanishes(f: &SmoothFn, e: Endpoint) -> bool {
    f.limit(e) == Some(ExtReal::Finite(0.0))
}

impl AuxPair {
    /// Builds the pair, sampling `g'` at [`SIGN_CHECK_SAMPLES`] interior
    /// points. Where `f` and `g` both have declared zero limits the limit of
    /// `H` there is set to zero, which assumes `f'/g'` stays bounded.
    pub fn new(f: SmoothFn, g: SmoothFn, domain: Interval) -> Result<AuxPair> {
        if !contains_interval(f.domain(), &domain) || !contains_interval(g.domain(), &domain) {
            return Err(Error::Precondition(format!(
                "{domain} is not inside the domains of {} and {}",
                f.name(),
                g.name()
            )));
        }
        let mut seen = [false; 2];
        let mut last_zero = None;
        for (_, x) in domain.interior_grid(SIGN_CHECK_SAMPLES) {
            let d = g.d1(x);
            if d.is_nan() {
                return Err(Error::Evaluation(format!("g' is NaN at x = {x}")));
            }
            match Sign::of(d) {
                Sign::Pos => seen[1] = true,
                Sign::Neg => seen[0] = true,
                Sign::Zero => last_zero = Some(x),
            }
        }
        let g_prime_sign = match seen {
            [true, true] => {
                return Err(Error::Precondition(format!("g' = {} changes sign on {domain}", g.name())))
            }
            [false, true] => Sign::Pos,
            [true, false] => Sign::Neg,
            [false, false] => {
                return Err(Error::DegenerateDerivative { x: last_zero.unwrap_or(f64::NAN) })
            }
        };
        let forced_zero = [
            domain.lo().is_finite() && vanishes(&f, Endpoint::Lower) && vanishes(&g, Endpoint::Lower),
            domain.hi().is_finite() && vanishes(&f, Endpoint::Upper) && vanishes(&g, Endpoint::Upper),
        ];
        let h_limits = forced_zero.map(|z| z.then_some(ExtReal::Finite(0.0)));
        let series = build_series(&f, &g);
        Ok(AuxPair {
            f,
            g,
            domain,
            g_prime_sign,
            h_limits,
            forced_zero,
            quotient_limits: [None, None],
            series,
        })
    }

    /// Declares the one-sided limits of `H`. A nonzero value where both
    /// functions vanish is rejected.
    pub fn with_h_limits(mut self, lo: Option<ExtReal>, hi: Option<ExtReal>) -> Result<AuxPair> {
        for (e, v) in [(Endpoint::Lower, lo), (Endpoint::Upper, hi)] {
            let k = slot(e);
            match v {
                Some(v) if self.forced_zero[k] && v != ExtReal::Finite(0.0) => {
                    return Err(Error::Inconsistent(format!(
                        "H must vanish at the {e} endpoint where f and g both vanish, got {v}"
                    )))
                }
                Some(v) => self.h_limits[k] = Some(v),
                None => {}
            }
        }
        Ok(self)
    }

    /// Declares the one-sided limits of `f/g`.
    pub fn with_quotient_limits(mut self, lo: Option<ExtReal>, hi: Option<ExtReal>) -> AuxPair {
        self.quotient_limits = [lo, hi];
        self
    }

    pub fn f(&self) -> &SmoothFn {
        &self.f
    }

    pub fn g(&self) -> &SmoothFn {
        &self.g
    }

    pub fn domain(&self) -> &Interval {
        &self.domain
    }

    pub fn g_prime_sign(&self) -> Sign {
        self.g_prime_sign
    }

    pub fn h_limit(&self, e: Endpoint) -> Option<ExtReal> {
        self.h_limits[slot(e)]
    }

    pub fn quotient_limit(&self, e: Endpoint) -> Option<ExtReal> {
        self.quotient_limits[slot(e)]
    }

    /// Whether `f` and `g` both have a declared zero limit at `e`.
    pub fn vanishes_at(&self, e: Endpoint) -> bool {
        self.domain.end(e).is_finite() && vanishes(&self.f, e) && vanishes(&self.g, e)
    }

    /// The series of `H` about the common expansion point of `f` and `g`.
    pub fn h_expansion(&self) -> Option<&Expansion> {
        self.series.as_ref().map(|s| &s.h)
    }

    fn in_domain(&self, x: f64) -> Result<()> {
        if self.domain.contains(x) {
            Ok(())
        } else {
            Err(Error::Domain { what: format!("H[{}, {}]", self.f.name(), self.g.name()), x })
        }
    }

    fn finite(&self, what: &str, x: f64, v: f64) -> Result<f64> {
        if v.is_nan() {
            Err(Error::Evaluation(format!("{what} is NaN at x = {x}")))
        } else {
            Ok(v)
        }
    }

    /// `H(x)` from the closed forms of `f, f', g, g'`.
    pub fn eval_h(&self, x: f64) -> Result<f64> {
        self.in_domain(x)?;
        let gp = self.g.d1(x);
        if gp == 0.0 {
            return Err(Error::DegenerateDerivative { x });
        }
        let v = self.f.d1(x) / gp * self.g.value(x) - self.f.value(x);
        self.finite("H", x, v)
    }

    /// `H(x)`, taken from the series of `H` inside its switch region.
    pub fn eval_h_safe(&self, x: f64) -> Result<f64> {
        match &self.series {
            Some(s) if s.h.applies(x) => {
                self.in_domain(x)?;
                s.h.eval(x)
            }
            _ => self.eval_h(x),
        }
    }

    /// `H'(x) = (f'/g')'(x) g(x)`; needs second derivatives of both.
    pub fn eval_h_prime(&self, x: f64) -> Result<f64> {
        self.in_domain(x)?;
        if let Some(s) = &self.series {
            if s.dh.applies(x) {
                return s.dh.eval(x);
            }
        }
        let dr = self.ratio_derivative(x)?;
        let v = dr * self.g.value(x);
        self.finite("H'", x, v)
    }

    /// `f'/g'` at `x`.
    pub fn eval_ratio(&self, x: f64) -> Result<f64> {
        self.in_domain(x)?;
        if let Some(s) = &self.series {
            if s.ratio.applies(x) {
                return s.ratio.eval(x);
            }
        }
        let gp = self.g.d1(x);
        if gp == 0.0 {
            return Err(Error::DegenerateDerivative { x });
        }
        self.finite("f'/g'", x, self.f.d1(x) / gp)
    }

    fn ratio_derivative(&self, x: f64) -> Result<f64> {
        if let Some(s) = &self.series {
            if s.dratio.applies(x) {
                return s.dratio.eval(x);
            }
        }
        let (f2, g2) = match (self.f.d2(x), self.g.d2(x)) {
            (Some(a), Some(b)) => (a, b),
            _ => {
                return Err(Error::Capability(format!(
                    "second derivatives of {} and {} are required",
                    self.f.name(),
                    self.g.name()
                )))
            }
        };
        let (f1, g1) = (self.f.d1(x), self.g.d1(x));
        if g1 == 0.0 {
            return Err(Error::DegenerateDerivative { x });
        }
        self.finite("(f'/g')'", x, (f2 * g1 - f1 * g2) / (g1 * g1))
    }

    /// `(f/g)'(x) = g'/g^2 H`; the sign is `sgn g' * sgn H` with the zero
    /// threshold applied to `H`.
    pub fn quotient_derivative_sign(&self, x: f64) -> Result<SignedValue> {
        self.in_domain(x)?;
        let g = self.g.value(x);
        if g == 0.0 {
            return Err(Error::Division { x });
        }
        let h = self.eval_h_safe(x)?;
        let gp = self.g.d1(x);
        Ok(SignedValue::with_sign(gp / (g * g) * h, Sign::strict(gp) * Sign::of(h)))
    }

    /// `g^2 (f/g)' / |g'|`, computed from the quotient rule directly.
    pub fn pinelis_rho_tilde(&self, x: f64) -> Result<f64> {
        self.in_domain(x)?;
        let gp = self.g.d1(x);
        if gp == 0.0 {
            return Err(Error::DegenerateDerivative { x });
        }
        let v = (self.f.d1(x) * self.g.value(x) - self.f.value(x) * gp) / gp.abs();
        self.finite("rho~", x, v)
    }

    /// `f(x)/g(x)` from the closed forms.
    pub fn quotient(&self, x: f64) -> Result<f64> {
        self.in_domain(x)?;
        let g = self.g.value(x);
        if g == 0.0 {
            return Err(Error::Division { x });
        }
        self.finite("f/g", x, self.f.value(x) / g)
    }

    /// `f'/g'` as a smooth function whose derivative is
    /// `(f'' g' - f' g'') / g'^2`.
    pub fn ratio_fn(&self) -> Result<SmoothFn> {
        if !(self.f.has_d2() && self.g.has_d2()) {
            return Err(Error::Capability(format!(
                "second derivatives of {} and {} are required",
                self.f.name(),
                self.g.name()
            )));
        }
        let a = self.clone();
        let b = self.clone();
        let name = format!("({})'/({})'", self.f.name(), self.g.name());
        Ok(SmoothFn::new(
            name,
            self.domain,
            move |x| a.eval_ratio(x).unwrap_or(f64::NAN),
            move |x| b.ratio_derivative(x).unwrap_or(f64::NAN),
        ))
    }

    /// The pair `(f, -g)`, which has the same `H`.
    pub fn negate_g(&self) -> Result<AuxPair> {
        self.rebuild(self.f.clone(), self.g.neg(), 1.0)
    }

    /// The pair `(-f, g)`, whose `H` is the negative of this one.
    pub fn negate_f(&self) -> Result<AuxPair> {
        self.rebuild(self.f.neg(), self.g.clone(), -1.0)
    }

    fn rebuild(&self, f: SmoothFn, g: SmoothFn, h_scale: f64) -> Result<AuxPair> {
        let scale = |l: Option<ExtReal>| l.map(|v| ExtReal::from(h_scale * v.to_f64()));
        let q = |l: Option<ExtReal>| l.map(|v| ExtReal::from(-v.to_f64()));
        let lo = if self.forced_zero[0] { None } else { scale(self.h_limits[0]) };
        let hi = if self.forced_zero[1] { None } else { scale(self.h_limits[1]) };
        Ok(AuxPair::new(f, g, self.domain)?
            .with_h_limits(lo, hi)?
            .with_quotient_limits(q(self.quotient_limits[0]), q(self.quotient_limits[1])))
    }
}

fn build_series(f: &SmoothFn, g: &SmoothFn) -> Option<PairSeries> {
    let (ef, eg) = (f.expansion()?, g.expansion()?);
    if ef.center != eg.center {
        return None;
    }
    let (fs, gs) = (&ef.series, &eg.series);
    let r = fs.derivative().ratio(&gs.derivative(), CANCELLATION_REL).ok()?;
    let rg = &r * gs;
    let mag = &r.abs() * &gs.abs();
    let h: Taylor = rg.sub_cancelling(fs, &mag, &fs.abs(), CANCELLATION_REL);
    let switch = ef.switch.min(eg.switch);
    let radius = ef.radius.min(eg.radius);
    let mk = |s: Taylor| Expansion::new(ef.center, s).with_switch(switch).with_radius(radius);
    Some(PairSeries {
        dh: mk(h.derivative()),
        h: mk(h),
        dratio: mk(r.derivative()),
        ratio: mk(r),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use proptest::prelude::*;

    fn unit() -> Interval {
        Interval::open(0.0, 1.0).unwrap()
    }

    fn poly(c: Vec<f64>) -> SmoothFn {
        catalog::polynomial(c, unit()).unwrap()
    }

    #[test]
    fn polynomial_pair_h_is_exact() {
        // f = x^3, g = x^2 + 1: H = (3x/2)(x^2 + 1) - x^3 = x^3/2 + 3x/2.
        let p = AuxPair::new(poly(vec![0.0, 0.0, 0.0, 1.0]), poly(vec![1.0, 0.0, 1.0]), unit()).unwrap();
        let h = p.eval_h(0.5).unwrap();
        assert!((h - (0.0625 + 0.75)).abs() < 1e-15);
        assert_eq!(p.g_prime_sign(), Sign::Pos);
    }

    #[test]
    fn g_prime_sign_change_is_rejected() {
        let iv = Interval::open(-1.0, 1.0).unwrap();
        let g = catalog::polynomial(vec![0.0, 0.0, 1.0], iv).unwrap();
        let f = catalog::polynomial(vec![0.0, 1.0], iv).unwrap();
        assert!(matches!(AuxPair::new(f, g, iv), Err(Error::Precondition(_))));
    }

    #[test]
    fn forced_zero_limit_rejects_other_declarations() {
        let p = AuxPair::new(poly(vec![0.0, 0.0, 1.0]), poly(vec![0.0, 1.0]), unit()).unwrap();
        assert_eq!(p.h_limit(Endpoint::Lower), Some(ExtReal::Finite(0.0)));
        assert!(p.clone().with_h_limits(Some(ExtReal::Finite(1.0)), None).is_err());
        assert!(p.with_h_limits(None, Some(ExtReal::Finite(1.0))).is_ok());
    }

    #[test]
    fn quotient_derivative_and_rho() {
        let p = AuxPair::new(poly(vec![0.0, 0.0, 1.0]), poly(vec![0.0, 1.0]), unit()).unwrap();
        // f/g = x, so (f/g)' = 1.
        let s = p.quotient_derivative_sign(0.3).unwrap();
        assert!((s.value - 1.0).abs() < 1e-12);
        assert_eq!(s.sign, Sign::Pos);
        assert!((p.pinelis_rho_tilde(0.3).unwrap() - p.eval_h(0.3).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn missing_second_derivative_is_a_capability_error() {
        let iv = unit();
        let f = SmoothFn::new("x^2", iv, |x| x * x, |x| 2.0 * x);
        let g = SmoothFn::new("x", iv, |x| x, |_| 1.0);
        let p = AuxPair::new(f, g, iv).unwrap();
        assert!(matches!(p.eval_h_prime(0.5), Err(Error::Capability(_))));
        assert!(matches!(p.ratio_fn(), Err(Error::Capability(_))));
    }

    #[test]
    fn outside_domain_and_division() {
        let iv = Interval::open(-1.0, 1.0).unwrap();
        let f = catalog::polynomial(vec![1.0], iv).unwrap();
        let g = catalog::polynomial(vec![0.0, 1.0], iv).unwrap();
        let p = AuxPair::new(f, g, iv).unwrap();
        assert!(matches!(p.eval_h(2.0), Err(Error::Domain { .. })));
        assert!(matches!(p.quotient_derivative_sign(0.0), Err(Error::Division { .. })));
    }

    #[test]
    fn series_of_h_matches_closed_form_near_zero() {
        let f = catalog::sinc_pow_minus_one(0.9);
        let g = catalog::cos_pow_minus_one(0.9);
        let iv = Interval::open(0.0, std::f64::consts::FRAC_PI_2).unwrap();
        let p = AuxPair::new(f, g, iv).unwrap();
        let e = p.h_expansion().unwrap();
        assert_eq!(e.series.valuation(), Some(4));
        let x = 0.05;
        let rel = (e.eval(x).unwrap() - p.eval_h(x).unwrap()).abs() / p.eval_h(x).unwrap().abs();
        assert!(rel < 1e-7, "{rel}");
        assert!(p.eval_h_safe(1e-4).unwrap() < 0.0);
    }

    fn cubic() -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(-3.0f64..3.0, 4)
    }

    proptest! {
        #[test]
        fn sign_of_quotient_derivative_and_symmetries(fc in cubic(), a in 0.5f64..2.0, b in -1.0f64..1.0, x in 0.05f64..0.95) {
            // g = a x + b + 2 is positive with g' = a > 0 on (0, 1).
            let f = poly(fc);
            let g = poly(vec![b + 2.0, a]);
            let p = AuxPair::new(f, g, unit()).unwrap();
            let h = p.eval_h(x).unwrap();
            let s = p.quotient_derivative_sign(x).unwrap();
            prop_assert_eq!(s.sign, Sign::of(h));
            let rho = p.pinelis_rho_tilde(x).unwrap();
            prop_assert!((rho - h).abs() <= 1e-10 * h.abs().max(1e-300) + 1e-13);
            let ng = p.negate_g().unwrap();
            prop_assert!((ng.eval_h(x).unwrap() - h).abs() <= 1e-12 * (1.0 + h.abs()));
            let nf = p.negate_f().unwrap();
            prop_assert!((nf.eval_h(x).unwrap() + h).abs() <= 1e-12 * (1.0 + h.abs()));
        }

        #[test]
        fn h_prime_matches_finite_difference(fc in cubic(), a in 0.5f64..2.0, x in 0.1f64..0.9) {
            let p = AuxPair::new(poly(fc), poly(vec![2.0, a, 0.5]), unit()).unwrap();
            let step = 1e-6;
            let fd = (p.eval_h(x + step).unwrap() - p.eval_h(x - step).unwrap()) / (2.0 * step);
            let d = p.eval_h_prime(x).unwrap();
            prop_assert!((fd - d).abs() <= 1e-6 * (1.0 + d.abs()));
        }
    }
}
