//! Built-in smooth functions with stable closed forms and near-point series.

use std::f64::consts::{FRAC_PI_2, LN_2};

use crate::error::Result;
use crate::numerics::{Expansion, ExtReal, Interval, SmoothFn, Taylor};

/// Order of the near-point series built for catalog functions.
pub const SERIES_ORDER: usize = 24;

fn half_line() -> Interval {
    Interval::open(0.0, f64::INFINITY).expect("valid interval")
}

fn unit() -> Interval {
    Interval::open(0.0, 1.0).expect("valid interval")
}

fn quarter_turn() -> Interval {
    Interval::open(0.0, FRAC_PI_2).expect("valid interval")
}

/// `ln cosh y` without overflow.
pub fn ln_cosh(y: f64) -> f64 {
    let a = y.abs();
    if a < 1.0 {
        let s = (0.5 * a).sinh();
        (2.0 * s * s).ln_1p()
    } else {
        a + (-2.0 * a).exp().ln_1p() - LN_2
    }
}

/// `ln(sinh x / x)` for `x > 0` without overflow.
pub fn ln_sinhc(x: f64) -> f64 {
    if x < 20.0 {
        (x.sinh() / x).ln()
    } else {
        x - LN_2 + (-(-2.0 * x).exp()).ln_1p() - x.ln()
    }
}

/// `1 / sinh^2 x` for `x > 0` without overflow.
pub fn csch2(x: f64) -> f64 {
    if x < 1.0 {
        let s = x.sinh();
        1.0 / (s * s)
    } else {
        let e = (-2.0 * x).exp();
        4.0 * e / ((1.0 - e) * (1.0 - e))
    }
}

/// `1 / cosh^2 y` without overflow.
pub fn sech2(y: f64) -> f64 {
    let e = (-2.0 * y.abs()).exp();
    4.0 * e / ((1.0 + e) * (1.0 + e))
}

fn x_series() -> Taylor {
    Taylor::variable(SERIES_ORDER)
}

/// `sinh x / x` on `(0, inf)`.
pub fn sinh_over_x() -> SmoothFn {
    let f = |x: f64| x.sinh() / x;
    let d1 = |x: f64| (x * x.cosh() - x.sinh()) / (x * x);
    SmoothFn::new("sinh(x)/x", half_line(), f, d1)
        .with_d2(move |x| f(x) - 2.0 * d1(x) / x)
        .with_limits(Some(ExtReal::Finite(1.0)), Some(ExtReal::PosInf))
        .with_expansion(Expansion::new(0.0, Taylor::sinhc(SERIES_ORDER)))
}

/// `ln(sinh x / x)` on `(0, inf)`.
pub fn ln_sinh_over_x() -> SmoothFn {
    let series = Taylor::sinhc(SERIES_ORDER).ln().expect("positive constant term");
    SmoothFn::new("ln(sinh(x)/x)", half_line(), ln_sinhc, |x| 1.0 / x.tanh() - 1.0 / x)
        .with_d2(|x| 1.0 / (x * x) - csch2(x))
        .with_limits(Some(ExtReal::Finite(0.0)), Some(ExtReal::PosInf))
        .with_derivative_limits(Some(ExtReal::Finite(0.0)), Some(ExtReal::Finite(1.0)))
        .with_expansion(Expansion::new(0.0, series))
}

/// `k ln cosh(s x)` on `(0, inf)` for `k, s > 0`.
pub fn ln_cosh_scaled(k: f64, s: f64) -> SmoothFn {
    let (_, ch) = x_series().scale(s).sinh_cosh();
    let series = ch.ln().expect("positive constant term").scale(k);
    SmoothFn::new(
        format!("{k}*ln(cosh({s}*x))"),
        half_line(),
        move |x| k * ln_cosh(s * x),
        move |x| k * s * (s * x).tanh(),
    )
    .with_d2(move |x| k * s * s * sech2(s * x))
    .with_limits(Some(ExtReal::Finite(0.0)), Some(ExtReal::PosInf))
    .with_derivative_limits(Some(ExtReal::Finite(0.0)), Some(ExtReal::Finite(k * s)))
    .with_expansion(Expansion::new(0.0, series))
}

/// `x coth x - 1` on `(0, inf)`.
pub fn x_coth_x_minus_one() -> SmoothFn {
    let v = x_series();
    let (_, ch) = v.sinh_cosh();
    let series = ch.div(&Taylor::sinhc(SERIES_ORDER)).expect("nonzero constant term").add_const(-1.0);
    let f = |x: f64| x / x.tanh() - 1.0;
    SmoothFn::new("x*coth(x)-1", half_line(), f, |x| 1.0 / x.tanh() - x * csch2(x))
        .with_d2(move |x| 2.0 * csch2(x) * f(x))
        .with_limits(Some(ExtReal::Finite(0.0)), Some(ExtReal::PosInf))
        .with_derivative_limits(Some(ExtReal::Finite(0.0)), Some(ExtReal::Finite(1.0)))
        .with_expansion(Expansion::new(0.0, series))
}

/// `ln I(x, 1) = x ln x / (x - 1) - 1` on `(0, 1)`, where `I` is the
/// identric mean.
pub fn ln_identric() -> SmoothFn {
    let u = x_series();
    let series = (&u.add_const(1.0) * &Taylor::ln1p(SERIES_ORDER + 1).shift_down(1, 0.0).expect("zero constant term"))
        .add_const(-1.0);
    let d1 = |x: f64| {
        let u = x - 1.0;
        (u - x.ln()) / (u * u)
    };
    SmoothFn::new("ln I(x,1)", unit(), |x| x * x.ln() / (x - 1.0) - 1.0, d1)
        .with_d2(|x| {
            let u = x - 1.0;
            (u * u / x - 2.0 * (u - x.ln())) / (u * u * u)
        })
        .with_limits(Some(ExtReal::Finite(-1.0)), Some(ExtReal::Finite(0.0)))
        .with_derivative_limits(Some(ExtReal::PosInf), Some(ExtReal::Finite(0.5)))
        .with_expansion(Expansion::new(1.0, series))
}

/// `ln A_p(x, 1) = (1/p) ln((x^p + 1)/2)` on `(0, 1)`, with `ln sqrt(x)` at
/// `p = 0`.
pub fn ln_power_mean(p: f64) -> SmoothFn {
    let l = Taylor::ln1p(SERIES_ORDER);
    let series = if p == 0.0 {
        l.scale(0.5)
    } else {
        l.scale(p).exp().add_const(1.0).scale(0.5).ln().expect("positive constant term").scale(1.0 / p)
    };
    let f = move |x: f64| {
        if p == 0.0 {
            0.5 * x.ln()
        } else {
            (0.5 * (p * x.ln()).exp_m1()).ln_1p() / p
        }
    };
    let lo = if p > 0.0 { ExtReal::Finite(-LN_2 / p) } else { ExtReal::NegInf };
    SmoothFn::new(
        format!("ln A_{p}(x,1)"),
        unit(),
        f,
        move |x| {
            let xp = x.powf(p);
            xp / (x * (xp + 1.0))
        },
    )
    .with_d2(move |x| {
        let xp = x.powf(p);
        xp * (p - 1.0 - xp) / (x * x * (xp + 1.0) * (xp + 1.0))
    })
    .with_limits(Some(lo), Some(ExtReal::Finite(0.0)))
    .with_derivative_limits(None, Some(ExtReal::Finite(0.5)))
    .with_expansion(Expansion::new(1.0, series))
}

/// `(sin x / x)^p - 1` on `(0, pi/2)`.
pub fn sinc_pow_minus_one(p: f64) -> SmoothFn {
    let series = Taylor::sinc(SERIES_ORDER).powf(p).expect("positive constant term").add_const(-1.0);
    let sinc = |x: f64| x.sin() / x;
    let dsinc = |x: f64| (x * x.cos() - x.sin()) / (x * x);
    SmoothFn::new(
        format!("(sin(x)/x)^{p}-1"),
        quarter_turn(),
        move |x| (p * sinc(x).ln()).exp_m1(),
        move |x| p * sinc(x).powf(p - 1.0) * dsinc(x),
    )
    .with_d2(move |x| {
        let (s, ds) = (sinc(x), dsinc(x));
        let dds = -s - 2.0 * ds / x;
        p * (p - 1.0) * s.powf(p - 2.0) * ds * ds + p * s.powf(p - 1.0) * dds
    })
    .with_limits(
        Some(ExtReal::Finite(0.0)),
        Some(ExtReal::Finite((2.0 / std::f64::consts::PI).powf(p) - 1.0)),
    )
    .with_derivative_limits(Some(ExtReal::Finite(0.0)), None)
    .with_expansion(Expansion::new(0.0, series))
}

/// `(cos x)^p - 1` on `(0, pi/2)`.
pub fn cos_pow_minus_one(p: f64) -> SmoothFn {
    let (_, c) = x_series().sin_cos();
    let series = c.powf(p).expect("positive constant term").add_const(-1.0);
    SmoothFn::new(
        format!("cos(x)^{p}-1"),
        quarter_turn(),
        move |x| (p * x.cos().ln()).exp_m1(),
        move |x| -p * x.cos().powf(p - 1.0) * x.sin(),
    )
    .with_d2(move |x| {
        let (s, c) = x.sin_cos();
        p * (p - 1.0) * c.powf(p - 2.0) * s * s - p * c.powf(p)
    })
    .with_limits(Some(ExtReal::Finite(0.0)), Some(ExtReal::Finite(-1.0)))
    .with_derivative_limits(Some(ExtReal::Finite(0.0)), None)
    .with_expansion(Expansion::new(0.0, series))
}

/// `x - 1 - ln x` on `(0, 1)`.
pub fn log_excess() -> SmoothFn {
    let series = &x_series() - &Taylor::ln1p(SERIES_ORDER);
    SmoothFn::new("x-1-ln(x)", unit(), |x| x - 1.0 - x.ln(), |x| 1.0 - 1.0 / x)
        .with_d2(|x| 1.0 / (x * x))
        .with_limits(Some(ExtReal::PosInf), Some(ExtReal::Finite(0.0)))
        .with_derivative_limits(Some(ExtReal::NegInf), Some(ExtReal::Finite(0.0)))
        .with_expansion(Expansion::new(1.0, series))
}

/// `(x - 1)^2 / (x + x^(1-p))` on `(0, 1)` for `p < 1`.
pub fn log_excess_denominator(p: f64) -> SmoothFn {
    let u = x_series();
    let den = &u.add_const(1.0) + &Taylor::ln1p(SERIES_ORDER).scale(1.0 - p).exp();
    let series = (&u * &u).div(&den).expect("nonzero constant term");
    let parts = move |x: f64| {
        let n = (x - 1.0) * (x - 1.0);
        let dn = 2.0 * (x - 1.0);
        let d = x + x.powf(1.0 - p);
        let dd = 1.0 + (1.0 - p) * x.powf(-p);
        (n, dn, d, dd)
    };
    SmoothFn::new(
        format!("(x-1)^2/(x+x^(1-{p}))"),
        unit(),
        move |x| {
            let (n, _, d, _) = parts(x);
            n / d
        },
        move |x| {
            let (n, dn, d, dd) = parts(x);
            (dn * d - n * dd) / (d * d)
        },
    )
    .with_d2(move |x| {
        let (n, dn, d, dd) = parts(x);
        let ddd = -p * (1.0 - p) * x.powf(-p - 1.0);
        (2.0 * d - n * ddd) / (d * d) - 2.0 * dd * (dn * d - n * dd) / (d * d * d)
    })
    .with_limits(Some(ExtReal::PosInf), Some(ExtReal::Finite(0.0)))
    .with_expansion(Expansion::new(1.0, series))
}

/// `sin x` on the given interval.
pub fn sine(domain: Interval) -> SmoothFn {
    SmoothFn::new("sin(x)", domain, f64::sin, f64::cos).with_d2(|x| -x.sin())
}

/// `c_0 + c_1 x + ... + c_n x^n` on the given interval.
pub fn polynomial(coeffs: Vec<f64>, domain: Interval) -> Result<SmoothFn> {
    let t = Taylor::from_coeffs(if coeffs.is_empty() { vec![0.0] } else { coeffs });
    let d = t.derivative();
    let dd = d.derivative();
    let limit = |x: ExtReal| -> Option<ExtReal> {
        match x {
            ExtReal::Finite(v) => Some(ExtReal::Finite(t.eval(v))),
            _ => None,
        }
    };
    let (lo, hi) = (limit(domain.lo()), limit(domain.hi()));
    let name = format!("poly{:?}", t.coeffs());
    Ok(SmoothFn::new(name, domain, move |x| t.eval(x), move |x| d.eval(x))
        .with_d2(move |x| dd.eval(x))
        .with_limits(lo, hi))
}
