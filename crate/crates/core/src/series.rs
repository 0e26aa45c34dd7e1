//! Exact series coefficients and the sign-structure lemmas built on them.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::numerics::Interval;
use crate::roots::{self, Bracket, Grid, RootOptions, RootResult};

/// Arbitrary-precision integer used for exact coefficients.
pub type ExactInt = BigInt;

/// Largest number of terms a [`ZpSeries`] may hold.
pub const MAX_TERMS: usize = 400;

/// Relative size of the tail bound at which series evaluation stops.
const TAIL_REL: f64 = 1e-20;

fn pow(base: u32, e: u64) -> BigInt {
    num_traits::pow(BigInt::from(base), e as usize)
}

/// `u_n = 4^(2n-1) - 2^(2n-1) - 2(2n-1)(n-2) 3^(2n-2) - 2(3n-2)(6n-5)`.
pub fn u_coeff(n: u64) -> Result<ExactInt> {
    if n < 2 {
        return Err(Error::Precondition(format!("u_n is defined for n >= 2, got {n}")));
    }
    let n_big = BigInt::from(n);
    let two = BigInt::from(2);
    Ok(pow(4, 2 * n - 1)
        - pow(2, 2 * n - 1)
        - &two * (&two * &n_big - 1) * (&n_big - 2) * pow(3, 2 * n - 2)
        - &two * (BigInt::from(3) * &n_big - 2) * (BigInt::from(6) * &n_big - 5))
}

/// `u_(n+1) - 16 u_n` minus its closed form
/// `2(14n^2 - 71n + 41) 3^(2n-2) + 6 * 2^(2n) + 6(90n^2 - 147n + 53)`;
/// zero for every `n >= 2`.
pub fn u_recursion_residual(n: u64) -> Result<ExactInt> {
    let lhs = u_coeff(n + 1)? - BigInt::from(16) * u_coeff(n)?;
    let m = BigInt::from(n);
    let sq = &m * &m;
    let rhs = BigInt::from(2) * (BigInt::from(14) * &sq - BigInt::from(71) * &m + 41) * pow(3, 2 * n - 2)
        + BigInt::from(6) * pow(2, 2 * n)
        + BigInt::from(6) * (BigInt::from(90) * &sq - BigInt::from(147) * &m + 53);
    Ok(lhs - rhs)
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

fn ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(0.0)
}

/// `P(x) = sum_(i>m) a_i x^i - sum_(i<=m) a_i x^i` with every `a_i >= 0`,
/// `a_m > 0` and some `a_i > 0` with `i > m`. Such a series has exactly one
/// positive zero, where it changes sign from negative to positive.
#[derive(Debug, Clone, PartialEq)]
pub struct ZpSeries {
    m: usize,
    a: Vec<BigRational>,
    af: Vec<f64>,
}

impl ZpSeries {
    pub fn new(m: usize, a: Vec<BigRational>) -> Result<ZpSeries> {
        if a.len() > MAX_TERMS {
            return Err(Error::InvalidLemmaInput(format!(
                "{} coefficients exceed the cap of {MAX_TERMS}",
                a.len()
            )));
        }
        if let Some(i) = a.iter().position(|v| v.is_negative()) {
            return Err(Error::InvalidLemmaInput(format!("a_{i} is negative")));
        }
        if a.get(m).is_none_or(|v| v.is_zero()) {
            return Err(Error::InvalidLemmaInput(format!("a_{m} must be positive")));
        }
        if a[m + 1..].iter().all(|v| v.is_zero()) {
            return Err(Error::InvalidLemmaInput(format!("no positive coefficient beyond index {m}")));
        }
        let af = a.iter().map(ratio_to_f64).collect();
        Ok(ZpSeries { m, a, af })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.a
    }

    /// Signed coefficient of `x^i` in `P`.
    pub fn signed_coeff(&self, i: usize) -> BigRational {
        let v = self.a.get(i).cloned().unwrap_or_else(BigRational::zero);
        if i <= self.m {
            -v
        } else {
            v
        }
    }

    /// `P(x)` summed until the geometric tail bound drops below `1e-20` of
    /// the running sum, returning the value and the number of terms used.
    pub fn eval_with_count(&self, x: f64) -> (f64, usize) {
        let lx = x.ln();
        let mut sum = 0.0;
        let mut prev: Option<f64> = None;
        for (i, &a) in self.af.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            let mut t = a * x.powi(i as i32);
            if !t.is_finite() {
                t = (a.ln() + i as f64 * lx).exp();
            }
            if i <= self.m {
                t = -t;
            }
            sum += t;
            if i > self.m {
                if let Some(p) = prev {
                    let r = t.abs() / p;
                    if r < 1.0 && t.abs() * r / (1.0 - r) < TAIL_REL * sum.abs() {
                        return (sum, i + 1);
                    }
                }
            }
            prev = Some(t.abs());
        }
        (sum, self.af.len())
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.eval_with_count(x).0
    }
}

/// The unique sign change of `P` on `x_range`, refined to a narrow bracket.
pub fn sign_pattern_zp(p: &ZpSeries, x_range: &Interval) -> Result<Bracket> {
    let h = |x: f64| p.eval(x);
    let xs = roots::grid_points(Grid::Uniform, x_range, 1024)?;
    let changes = roots::sign_changes(h, &xs)?;
    let b = match changes.as_slice() {
        [b] => *b,
        [] => return Err(Error::NoRoot(format!("series has no sign change on {x_range}"))),
        _ => {
            return Err(Error::Evaluation(format!(
                "series changes sign {} times on {x_range}",
                changes.len()
            )))
        }
    };
    let (mut lo, mut hi, mut f_lo, mut f_hi) = (b.lo(), b.hi(), b.f_lo(), b.f_hi());
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= 1e-15 * hi.abs().max(1.0) {
            break;
        }
        let v = h(mid);
        if v == 0.0 {
            break;
        }
        if (v < 0.0) == (f_lo < 0.0) {
            (lo, f_lo) = (mid, v);
        } else {
            (hi, f_hi) = (mid, v);
        }
    }
    Bracket::new(lo, hi, f_lo, f_hi)
}

/// The odd series `sum_(n=2..=n_max) u_n x^(2n-1) / (2n-1)!` in the form
/// expected by [`sign_pattern_zp`].
pub fn lin_series(n_max: u64) -> Result<ZpSeries> {
    let len = (2 * n_max) as usize;
    let mut c = vec![BigRational::zero(); len];
    for n in 2..=n_max {
        let i = (2 * n - 1) as usize;
        c[i] = BigRational::new(u_coeff(n)?, factorial(2 * n - 1));
    }
    let m = c
        .iter()
        .rposition(|v| v.is_negative())
        .ok_or_else(|| Error::InvalidLemmaInput("no negative coefficient".into()))?;
    let a = c.into_iter().map(|v| v.abs()).collect();
    ZpSeries::new(m, a)
}

/// `(8/3) h(3x/2)` with
/// `h(y) = (-3 cosh(y/3) sinh(y/3) - cosh y sinh y) y^2 + y sinh^2 y + 3 cosh(y/3) sinh(y/3) sinh^2 y`.
pub fn lin_series_closed_form(x: f64) -> f64 {
    let y = 1.5 * x;
    let (s3, c3) = ((y / 3.0).sinh(), (y / 3.0).cosh());
    let (s, c) = (y.sinh(), y.cosh());
    let h = (-3.0 * c3 * s3 - c * s) * y * y + y * s * s + 3.0 * c3 * s3 * s * s;
    8.0 / 3.0 * h
}

fn check_w(p: f64, x: f64) -> Result<()> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::Domain { what: "w: parameter p".into(), x: p });
    }
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::Domain { what: "w".into(), x });
    }
    Ok(())
}

/// `w(x) = x^p + p(p-1) x - (p^2 + 2p - 2) - p(p+1) x^(1-p) + (p-1)^2 x^(-p)`.
pub fn eval_w(p: f64, x: f64) -> Result<f64> {
    check_w(p, x)?;
    let xp = x.powf(p);
    Ok(xp + p * (p - 1.0) * x - (p * p + 2.0 * p - 2.0) - p * (p + 1.0) * x / xp
        + (p - 1.0) * (p - 1.0) / xp)
}

/// `w'(x) = p x^(-p-1) (x^(2p) + (p-1) x^(p+1) - (p-1)^2 + (p+1)(p-1) x)`.
pub fn w_prime(p: f64, x: f64) -> Result<f64> {
    check_w(p, x)?;
    let xp = x.powf(p);
    let inner = xp * xp + (p - 1.0) * xp * x - (p - 1.0) * (p - 1.0) + (p + 1.0) * (p - 1.0) * x;
    Ok(p / (xp * x) * inner)
}

/// `w_1(x) = x^(2p) + (p-1)(p+1) - (p^2 + p) x`, so that
/// `w''(x) = p(p-1) w_1(x) / x^(p+2)`.
pub fn w1(p: f64, x: f64) -> Result<f64> {
    check_w(p, x)?;
    let xp = x.powf(p);
    Ok(xp * xp + (p - 1.0) * (p + 1.0) - (p * p + p) * x)
}

pub fn w_second(p: f64, x: f64) -> Result<f64> {
    Ok(p * (p - 1.0) * w1(p, x)? / (x.powf(p) * x * x))
}

/// The unique zero of `w` on `(0, 1)` for `2/3 < p < 1`. The zero moves
/// towards the origin as `p -> 1`, so the search runs on a log-spaced grid.
pub fn w_sign_change(p: f64) -> Result<RootResult> {
    if !(p > 2.0 / 3.0 && p < 1.0) {
        return Err(Error::Precondition(format!("w changes sign only for 2/3 < p < 1, got {p}")));
    }
    let iv = Interval::open(0.0, 1.0)?;
    let grid = Grid::Geometric { lo: 1e-200, hi: 1.0 - 1e-12 };
    let h = |x: f64| eval_w(p, x).unwrap_or(f64::NAN);
    let xs = roots::grid_points(grid, &iv, 4096)?;
    let changes = roots::sign_changes(h, &xs)?;
    if changes.len() != 1 {
        return Err(Error::Evaluation(format!("w changes sign {} times at p = {p}", changes.len())));
    }
    roots::refine_log(h, changes[0], &RootOptions::default())
}
