//! Grid classification of monotone patterns.

use std::fmt;

use crate::error::{Error, Result};
use crate::numerics::{Interval, Reparam, ZERO_THRESHOLD};
use crate::par::map_grid;

/// Default number of derivative samples used by [`classify`].
pub const DEFAULT_GRID: usize = 1024;

/// Transformed-coordinate tolerance for locating a turning point.
const TURNING_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PatternKind {
    Inc,
    Dec,
    /// Increasing, then decreasing.
    IncDec,
    /// Decreasing, then increasing.
    DecInc,
    /// No sample of the derivative is distinguishable from zero.
    Constant,
    /// Two or more sign changes were observed.
    Unknown,
}

impl PatternKind {
    pub fn is_piecewise(self) -> bool {
        matches!(self, PatternKind::IncDec | PatternKind::DecInc)
    }

    pub fn is_strict(self) -> bool {
        matches!(self, PatternKind::Inc | PatternKind::Dec)
    }
}

impl fmt::Display for PatternKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PatternKind::Inc => "increasing",
            PatternKind::Dec => "decreasing",
            PatternKind::IncDec => "increasing-decreasing",
            PatternKind::DecInc => "decreasing-increasing",
            PatternKind::Constant => "constant",
            PatternKind::Unknown => "unknown",
        })
    }
}

/// A monotone pattern; `turning_point` is set exactly for the two piecewise
/// kinds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonotonePattern {
    kind: PatternKind,
    turning_point: Option<f64>,
}

impl MonotonePattern {
    /// A pattern without a turning point. Piecewise kinds are rejected.
    pub fn simple(kind: PatternKind) -> Result<MonotonePattern> {
        if kind.is_piecewise() {
            return Err(Error::Precondition(format!("{kind} needs a turning point")));
        }
        Ok(MonotonePattern { kind, turning_point: None })
    }

    /// A piecewise pattern with its turning point.
    pub fn piecewise(kind: PatternKind, turning_point: f64) -> Result<MonotonePattern> {
        if !kind.is_piecewise() || !turning_point.is_finite() {
            return Err(Error::Precondition(format!(
                "{kind} cannot carry turning point {turning_point}"
            )));
        }
        Ok(MonotonePattern { kind, turning_point: Some(turning_point) })
    }

    pub fn kind(&self) -> PatternKind {
        self.kind
    }

    pub fn turning_point(&self) -> Option<f64> {
        self.turning_point
    }
}

impl fmt::Display for MonotonePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.turning_point {
            Some(t) => write!(f, "{} (turning point {t})", self.kind),
            None => write!(f, "{}", self.kind),
        }
    }
}

/// Classifies a function from samples of its derivative `dh` at `grid_n`
/// interior points of the interval's sampling coordinates. Samples with
/// `|dh| <= ZERO_THRESHOLD` carry no sign and are skipped.
pub fn classify_derivative<D>(dh: D, iv: &Interval, grid_n: usize) -> Result<MonotonePattern>
where
    D: Fn(f64) -> f64 + Sync + Send,
{
    if grid_n < 2 {
        return Err(Error::Precondition("classification needs at least two samples".into()));
    }
    let grid = iv.interior_grid(grid_n);
    let xs: Vec<f64> = grid.iter().map(|&(_, x)| x).collect();
    let vals = map_grid(&xs, &dh);
    let mut signs: Vec<(f64, bool)> = Vec::new();
    for (&(t, x), &v) in grid.iter().zip(&vals) {
        if v.is_nan() {
            return Err(Error::Evaluation(format!("derivative is NaN at x = {x}")));
        }
        if v.abs() > ZERO_THRESHOLD {
            signs.push((t, v > 0.0));
        }
    }
    let Some(&(_, first)) = signs.first() else {
        return MonotonePattern::simple(PatternKind::Constant);
    };
    let changes: Vec<usize> = (1..signs.len()).filter(|&k| signs[k].1 != signs[k - 1].1).collect();
    match changes.as_slice() {
        [] => MonotonePattern::simple(if first { PatternKind::Inc } else { PatternKind::Dec }),
        [k] => {
            let (_, _, r) = iv.sampling_coordinates();
            let tp = locate_sign_change(&dh, r, signs[k - 1].0, signs[*k].0, first)?;
            let kind = if first { PatternKind::IncDec } else { PatternKind::DecInc };
            MonotonePattern::piecewise(kind, tp)
        }
        _ => MonotonePattern::simple(PatternKind::Unknown),
    }
}

/// Bisection in sampling coordinates for the point where `dh` leaves the
/// sign it has at `t_lo`.
fn locate_sign_change<D>(dh: &D, r: Reparam, mut t_lo: f64, mut t_hi: f64, lo_positive: bool) -> Result<f64>
where
    D: Fn(f64) -> f64,
{
    while t_hi - t_lo > TURNING_TOL * t_lo.abs().max(t_hi.abs()).max(1.0) {
        let t = 0.5 * (t_lo + t_hi);
        if t <= t_lo || t >= t_hi {
            break;
        }
        let v = dh(r.forward(t));
        if v.is_nan() {
            return Err(Error::Evaluation(format!("derivative is NaN at t = {t}")));
        }
        if (v > 0.0) == lo_positive && v != 0.0 {
            t_lo = t;
        } else {
            t_hi = t;
        }
    }
    Ok(r.forward(0.5 * (t_lo + t_hi)))
}

/// Classifies `h` on `iv` from the signs of `h'` on a `grid_n`-point grid.
pub fn classify(h: &crate::numerics::SmoothFn, iv: &Interval, grid_n: usize) -> Result<MonotonePattern> {
    classify_derivative(|x| h.d1(x), iv, grid_n)
}
