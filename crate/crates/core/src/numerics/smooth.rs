use std::fmt;
use std::sync::Arc;

use super::{ExtReal, Interval, Taylor};
use crate::error::{Endpoint, Error, Result};

pub type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A truncated power series about `center`, used in place of the closed form
/// when `|x - center| < switch`.
#[derive(Debug, Clone, PartialEq)]
pub struct Expansion {
    pub center: f64,
    pub switch: f64,
    pub radius: f64,
    pub series: Taylor,
}

impl Expansion {
    pub const DEFAULT_SWITCH: f64 = 1e-3;
    pub const DEFAULT_RADIUS: f64 = 0.05;

    pub fn new(center: f64, series: Taylor) -> Expansion {
        Expansion {
            center,
            switch: Self::DEFAULT_SWITCH,
            radius: Self::DEFAULT_RADIUS,
            series,
        }
    }

    pub fn with_switch(mut self, switch: f64) -> Expansion {
        self.switch = switch;
        self.radius = self.radius.max(switch);
        self
    }

    pub fn with_radius(mut self, radius: f64) -> Expansion {
        self.radius = radius;
        self
    }

    pub fn applies(&self, x: f64) -> bool {
        (x - self.center).abs() < self.switch
    }

    /// Evaluates the series; fails outside the validity radius.
    pub fn eval(&self, x: f64) -> Result<f64> {
        if (x - self.center).abs() > self.radius {
            return Err(Error::Evaluation(format!(
                "x = {x} is outside the expansion radius {} about {}",
                self.radius, self.center
            )));
        }
        Ok(self.series.eval(x - self.center))
    }

    pub fn derivative(&self) -> Expansion {
        Expansion { series: self.series.derivative(), ..self.clone() }
    }
}

#[derive(Clone)]
struct Branches {
    value: Expansion,
    d1: Expansion,
    d2: Expansion,
}

/// A real function on an open interval with its first derivative, optionally
/// its second derivative, declared one-sided limits, and an optional series
/// that replaces the closed forms near a point where they cancel.
#[derive(Clone)]
pub struct SmoothFn {
    name: String,
    domain: Interval,
    f: RealFn,
    d1: RealFn,
    d2: Option<RealFn>,
    limits: [Option<ExtReal>; 2],
    d1_limits: [Option<ExtReal>; 2],
    series: Option<Branches>,
}

fn slot(e: Endpoint) -> usize {
    match e {
        Endpoint::Lower => 0,
        Endpoint::Upper => 1,
    }
}

impl SmoothFn {
    pub fn new<F, D>(name: impl Into<String>, domain: Interval, f: F, d1: D) -> SmoothFn
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
        D: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        SmoothFn {
            name: name.into(),
            domain,
            f: Arc::new(f),
            d1: Arc::new(d1),
            d2: None,
            limits: [None, None],
            d1_limits: [None, None],
            series: None,
        }
    }

    pub fn with_d2<F>(mut self, d2: F) -> SmoothFn
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        self.d2 = Some(Arc::new(d2));
        self
    }

    pub fn with_limits(mut self, lo: Option<ExtReal>, hi: Option<ExtReal>) -> SmoothFn {
        self.limits = [lo, hi];
        self
    }

    pub fn with_derivative_limits(mut self, lo: Option<ExtReal>, hi: Option<ExtReal>) -> SmoothFn {
        self.d1_limits = [lo, hi];
        self
    }

    pub fn with_expansion(mut self, e: Expansion) -> SmoothFn {
        let d1 = e.derivative();
        let d2 = d1.derivative();
        self.series = Some(Branches { value: e, d1, d2 });
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> &Interval {
        &self.domain
    }

    pub fn limit(&self, e: Endpoint) -> Option<ExtReal> {
        self.limits[slot(e)]
    }

    pub fn derivative_limit(&self, e: Endpoint) -> Option<ExtReal> {
        self.d1_limits[slot(e)]
    }

    pub fn expansion(&self) -> Option<&Expansion> {
        self.series.as_ref().map(|b| &b.value)
    }

    pub fn has_d2(&self) -> bool {
        self.d2.is_some()
    }

    /// Value at `x`, taken from the series inside its switch region.
    pub fn value(&self, x: f64) -> f64 {
        match &self.series {
            Some(b) if b.value.applies(x) => b.value.series.eval(x - b.value.center),
            _ => (self.f)(x),
        }
    }

    /// The closed form, bypassing any series.
    pub fn closed_form(&self, x: f64) -> f64 {
        (self.f)(x)
    }

    pub fn d1(&self, x: f64) -> f64 {
        match &self.series {
            Some(b) if b.d1.applies(x) => b.d1.series.eval(x - b.d1.center),
            _ => (self.d1)(x),
        }
    }

    pub fn d2(&self, x: f64) -> Option<f64> {
        let d2 = self.d2.as_ref()?;
        Some(match &self.series {
            Some(b) if b.d2.applies(x) => b.d2.series.eval(x - b.d2.center),
            _ => d2(x),
        })
    }

    /// `c * self`, with limits and series scaled to match.
    pub fn scaled(&self, c: f64) -> SmoothFn {
        let f = self.f.clone();
        let d1 = self.d1.clone();
        let scale_lim = |l: Option<ExtReal>| {
            l.map(|v| match v {
                ExtReal::Finite(x) => ExtReal::Finite(c * x),
                _ if c == 0.0 => ExtReal::Finite(0.0),
                inf => ExtReal::from(c * inf.to_f64()),
            })
        };
        SmoothFn {
            name: format!("{c}*{}", self.name),
            domain: self.domain,
            f: Arc::new(move |x| c * f(x)),
            d1: Arc::new(move |x| c * d1(x)),
            d2: self.d2.clone().map(|d2| -> RealFn { Arc::new(move |x| c * d2(x)) }),
            limits: [scale_lim(self.limits[0]), scale_lim(self.limits[1])],
            d1_limits: [scale_lim(self.d1_limits[0]), scale_lim(self.d1_limits[1])],
            series: self.series.as_ref().map(|b| Branches {
                value: Expansion { series: b.value.series.scale(c), ..b.value.clone() },
                d1: Expansion { series: b.d1.series.scale(c), ..b.d1.clone() },
                d2: Expansion { series: b.d2.series.scale(c), ..b.d2.clone() },
            }),
        }
    }

    pub fn neg(&self) -> SmoothFn {
        let mut out = self.scaled(-1.0);
        out.name = format!("-{}", self.name);
        out
    }
}

impl fmt::Debug for SmoothFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SmoothFn")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .field("has_d2", &self.d2.is_some())
            .field("limits", &self.limits)
            .field("has_series", &self.series.is_some())
            .finish()
    }
}

/// Evaluates `f` at `x`, using `expansion` (or the series registered on `f`)
/// inside its switch region. Fails outside the domain and on NaN.
pub fn eval_safe(f: &SmoothFn, x: f64, expansion: Option<&Expansion>) -> Result<f64> {
    if !f.domain().contains(x) {
        return Err(Error::Domain { what: f.name().to_string(), x });
    }
    let v = match expansion {
        Some(e) if e.applies(x) => e.eval(x)?,
        _ => f.value(x),
    };
    if v.is_nan() {
        return Err(Error::Evaluation(format!("{} is NaN at x = {x}", f.name())));
    }
    Ok(v)
}
