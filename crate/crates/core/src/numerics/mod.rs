//! Extended reals, intervals, reparametrisation and smooth-function handles.

mod smooth;
pub mod taylor;

use std::cmp::Ordering;
use std::fmt;

pub use smooth::{eval_safe, Expansion, RealFn, SmoothFn};
pub use taylor::Taylor;

use crate::error::{Error, Result};

/// Magnitudes at or below this are treated as numerically zero when a sign
/// has to be decided.
pub const ZERO_THRESHOLD: f64 = 1e-12;

/// A real number or one of the two infinities. NaN is never stored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtReal {
    NegInf,
    Finite(f64),
    PosInf,
}

impl ExtReal {
    /// Maps `±inf` floats to the tagged infinities and rejects NaN.
    pub fn from_f64(v: f64) -> Result<ExtReal> {
        if v.is_nan() {
            Err(Error::Evaluation("NaN is not an extended real".into()))
        } else if v == f64::INFINITY {
            Ok(ExtReal::PosInf)
        } else if v == f64::NEG_INFINITY {
            Ok(ExtReal::NegInf)
        } else {
            Ok(ExtReal::Finite(v))
        }
    }

    pub fn to_f64(self) -> f64 {
        match self {
            ExtReal::NegInf => f64::NEG_INFINITY,
            ExtReal::Finite(v) => v,
            ExtReal::PosInf => f64::INFINITY,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            ExtReal::Finite(v) => Some(v),
            _ => None,
        }
    }

    /// Sign with the zero threshold applied to finite values.
    pub fn sign(self) -> Sign {
        match self {
            ExtReal::NegInf => Sign::Neg,
            ExtReal::PosInf => Sign::Pos,
            ExtReal::Finite(v) => Sign::of(v),
        }
    }
}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.to_f64().partial_cmp(&other.to_f64())
    }
}

impl From<f64> for ExtReal {
    /// Panics on NaN; use [`ExtReal::from_f64`] for untrusted input.
    fn from(v: f64) -> Self {
        ExtReal::from_f64(v).expect("NaN passed to ExtReal::from")
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::NegInf => f.write_str("-inf"),
            ExtReal::PosInf => f.write_str("+inf"),
            ExtReal::Finite(v) => write!(f, "{v}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Neg,
    Zero,
    Pos,
}

impl Sign {
    /// Thresholded sign: `|v| <= ZERO_THRESHOLD` maps to `Zero`.
    pub fn of(v: f64) -> Sign {
        if v > ZERO_THRESHOLD {
            Sign::Pos
        } else if v < -ZERO_THRESHOLD {
            Sign::Neg
        } else {
            Sign::Zero
        }
    }

    /// Strict sign with no threshold; `0.0` maps to `Zero`.
    pub fn strict(v: f64) -> Sign {
        if v > 0.0 {
            Sign::Pos
        } else if v < 0.0 {
            Sign::Neg
        } else {
            Sign::Zero
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Neg => -1,
            Sign::Zero => 0,
            Sign::Pos => 1,
        }
    }

    pub fn as_f64(self) -> f64 {
        f64::from(self.as_i8())
    }

    pub fn negate(self) -> Sign {
        match self {
            Sign::Neg => Sign::Pos,
            Sign::Zero => Sign::Zero,
            Sign::Pos => Sign::Neg,
        }
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        match self.as_i8() * rhs.as_i8() {
            1 => Sign::Pos,
            -1 => Sign::Neg,
            _ => Sign::Zero,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Neg => "-",
            Sign::Zero => "0",
            Sign::Pos => "+",
        })
    }
}

/// A value together with a sign decided under [`ZERO_THRESHOLD`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignedValue {
    pub value: f64,
    pub sign: Sign,
}

impl SignedValue {
    pub fn new(value: f64) -> SignedValue {
        SignedValue { value, sign: Sign::of(value) }
    }

    /// Pairs a value with a sign decided elsewhere, e.g. from the factors of
    /// a product rather than the product itself.
    pub fn with_sign(value: f64, sign: Sign) -> SignedValue {
        SignedValue { value, sign }
    }
}

/// An open interval `(lo, hi)` of the extended real line with `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lo: ExtReal,
    hi: ExtReal,
}

impl Interval {
    pub fn new(lo: ExtReal, hi: ExtReal) -> Result<Interval> {
        if lo == ExtReal::PosInf || hi == ExtReal::NegInf || lo >= hi {
            return Err(Error::Precondition(format!("empty interval ({lo}, {hi})")));
        }
        Ok(Interval { lo, hi })
    }

    /// Open interval between two floats; `±inf` are accepted as endpoints.
    pub fn open(lo: f64, hi: f64) -> Result<Interval> {
        Interval::new(ExtReal::from_f64(lo)?, ExtReal::from_f64(hi)?)
    }

    pub fn lo(&self) -> ExtReal {
        self.lo
    }

    pub fn hi(&self) -> ExtReal {
        self.hi
    }

    pub fn end(&self, e: crate::error::Endpoint) -> ExtReal {
        match e {
            crate::error::Endpoint::Lower => self.lo,
            crate::error::Endpoint::Upper => self.hi,
        }
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn contains(&self, x: f64) -> bool {
        let x = ExtReal::Finite(x);
        self.lo < x && x < self.hi
    }

    /// The finite interval used for sampling together with the map back to
    /// this interval. Bounded intervals map to themselves.
    pub fn sampling_coordinates(&self) -> (f64, f64, Reparam) {
        match (self.lo, self.hi) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => (a, b, Reparam::Identity),
            (ExtReal::Finite(a), ExtReal::PosInf) => (0.0, 1.0, Reparam::UpperInfinite { a }),
            (ExtReal::NegInf, ExtReal::Finite(b)) => (0.0, 1.0, Reparam::LowerInfinite { b }),
            _ => (-1.0, 1.0, Reparam::BothInfinite),
        }
    }

    /// `n` interior points of the sampling coordinates, equally spaced with
    /// spacing `w / (n + 1)`, returned together with their images in `x`.
    pub fn interior_grid(&self, n: usize) -> Vec<(f64, f64)> {
        let (lo, hi, r) = self.sampling_coordinates();
        let step = (hi - lo) / (n as f64 + 1.0);
        (1..=n)
            .map(|k| {
                let t = lo + step * k as f64;
                (t, r.forward(t))
            })
            .collect()
    }

    /// `n >= 2` points of the sampling coordinates from `lo + m` to `hi - m`
    /// with `m = margin * w`, mapped back to `x`.
    pub fn margin_grid(&self, n: usize, margin: f64) -> Vec<f64> {
        let (lo, hi, r) = self.sampling_coordinates();
        let w = hi - lo;
        let (a, b) = (lo + margin * w, hi - margin * w);
        let n = n.max(2);
        (0..n)
            .map(|k| r.forward(a + (b - a) * k as f64 / (n - 1) as f64))
            .collect()
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.lo, self.hi)
    }
}

/// A strictly increasing bijection from a finite sampling interval onto an
/// interval of the extended line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Reparam {
    Identity,
    /// `(0, 1) -> (a, inf)`, `x = a + t / (1 - t)`.
    UpperInfinite { a: f64 },
    /// `(0, 1) -> (-inf, b)`, `x = b - (1 - t) / t`.
    LowerInfinite { b: f64 },
    /// `(-1, 1) -> (-inf, inf)`, `x = t / (1 - t^2)`.
    BothInfinite,
}

impl Reparam {
    pub fn forward(&self, t: f64) -> f64 {
        match *self {
            Reparam::Identity => t,
            Reparam::UpperInfinite { a } => a + t / (1.0 - t),
            Reparam::LowerInfinite { b } => b - (1.0 - t) / t,
            Reparam::BothInfinite => t / (1.0 - t * t),
        }
    }

    pub fn inverse(&self, x: f64) -> f64 {
        match *self {
            Reparam::Identity => x,
            Reparam::UpperInfinite { a } => {
                let d = x - a;
                d / (1.0 + d)
            }
            Reparam::LowerInfinite { b } => 1.0 / (1.0 + (b - x)),
            Reparam::BothInfinite => 2.0 * x / (1.0 + (1.0 + 4.0 * x * x).sqrt()),
        }
    }

    /// `dx/dt`, always positive on the sampling interval.
    pub fn jacobian(&self, t: f64) -> f64 {
        match *self {
            Reparam::Identity => 1.0,
            Reparam::UpperInfinite { .. } => 1.0 / ((1.0 - t) * (1.0 - t)),
            Reparam::LowerInfinite { .. } => 1.0 / (t * t),
            Reparam::BothInfinite => {
                let s = 1.0 - t * t;
                (1.0 + t * t) / (s * s)
            }
        }
    }
}

/// Maps an unbounded interval onto a finite one by a strictly increasing
/// bijection. Bounded input is rejected since it needs no transformation.
pub fn transform_to_finite(iv: &Interval) -> Result<(Interval, Reparam)> {
    if iv.is_bounded() {
        return Err(Error::Precondition(format!(
            "interval {iv} is already bounded"
        )));
    }
    let (lo, hi, r) = iv.sampling_coordinates();
    Ok((Interval::open(lo, hi)?, r))
}
