//! Synthetic pairs realising every row of the two vanishing-endpoint
//! decision tables, checked against direct scans of `(f/g)'`.

use crate::aux_h::AuxPair;
use crate::catalog;
use crate::classify::{MonotonePattern, PatternKind};
use crate::error::{Endpoint, Result};
use crate::numerics::{ExtReal, Interval, Taylor};
use crate::rules::{self, RuleId};

/// Number of interior points in the direct derivative-sign scan.
pub const SCAN_POINTS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableRow {
    /// Endpoint where `f` and `g` vanish.
    pub end: Endpoint,
    /// Row number 1..=8.
    pub row: u8,
    /// Kind of `f'/g'`, either `IncDec` or `DecInc`.
    pub ratio_kind: PatternKind,
    /// Scale of `g = sigma (x - end)`.
    pub sigma: f64,
    pub expected: PatternKind,
}

/// All sixteen rows, lower-end table first.
pub fn table_rows() -> Vec<TableRow> {
    use PatternKind::*;
    let lower = [(IncDec, Inc), (IncDec, IncDec), (DecInc, Dec), (DecInc, DecInc)];
    let upper = [(IncDec, Dec), (IncDec, IncDec), (DecInc, Inc), (DecInc, DecInc)];
    let mut rows = Vec::with_capacity(16);
    for (end, table) in [(Endpoint::Lower, lower), (Endpoint::Upper, upper)] {
        for (half, sigma) in [(0u8, 1.0), (1, -1.0)] {
            for (k, &(ratio_kind, expected)) in table.iter().enumerate() {
                rows.push(TableRow { end, row: half * 4 + k as u8 + 1, ratio_kind, sigma, expected });
            }
        }
    }
    rows
}

fn unit() -> Interval {
    Interval::open(0.0, 1.0).expect("valid interval")
}

/// Turning point of `f'/g'` that produces the row's expected outcome.
pub fn ratio_turning_point(row: &TableRow) -> f64 {
    match (row.end, row.expected.is_piecewise()) {
        (Endpoint::Lower, true) => 0.3,
        (Endpoint::Lower, false) => 0.9,
        (Endpoint::Upper, true) => 0.7,
        (Endpoint::Upper, false) => 0.1,
    }
}

/// The pair on `(0, 1)` with `g = sigma (x - end)` (`sigma (x - 1)` at the
/// upper end) and `f'/g' = s (x - c)^2`, where `s = -1` gives an
/// increasing-decreasing ratio.
pub fn synthetic_pair(row: &TableRow) -> Result<AuxPair> {
    let c = ratio_turning_point(row);
    let s = if row.ratio_kind == PatternKind::IncDec { -1.0 } else { 1.0 };
    let sigma = row.sigma;
    // R(x) = s (x^3/3 - c x^2 + c^2 x) is an antiderivative of f'/g'.
    let r = Taylor::from_coeffs(vec![0.0, s * c * c, -s * c, s / 3.0]);
    let (fc, gc) = match row.end {
        Endpoint::Lower => (r.scale(sigma), Taylor::from_coeffs(vec![0.0, sigma])),
        Endpoint::Upper => (r.add_const(-r.eval(1.0)).scale(sigma), Taylor::from_coeffs(vec![-sigma, sigma])),
    };
    let zero = Some(ExtReal::Finite(0.0));
    let (lim_lo, lim_hi) = match row.end {
        Endpoint::Lower => (zero, None),
        Endpoint::Upper => (None, zero),
    };
    let h = |x: f64| s * (x - c) * (x - c) * gc.eval(x) - fc.eval(x);
    let f = catalog::polynomial(fc.coeffs().to_vec(), unit())?.with_limits(lim_lo, lim_hi);
    let g = catalog::polynomial(gc.coeffs().to_vec(), unit())?.with_limits(lim_lo, lim_hi);
    let p = AuxPair::new(f, g, unit())?;
    match row.end {
        Endpoint::Lower => p.with_h_limits(None, Some(ExtReal::Finite(h(1.0)))),
        Endpoint::Upper => p.with_h_limits(Some(ExtReal::Finite(h(0.0))), None),
    }
}

/// Kind and first sign-change location of a function sampled through its
/// derivative at [`SCAN_POINTS`] interior points of `(0, 1)`.
pub fn scan_kind(d: impl Fn(f64) -> f64) -> (PatternKind, Option<f64>) {
    let xs: Vec<f64> = (1..=SCAN_POINTS).map(|k| k as f64 / (SCAN_POINTS + 1) as f64).collect();
    let s: Vec<bool> = xs.iter().map(|&x| d(x) > 0.0).collect();
    let ch: Vec<usize> = (1..s.len()).filter(|&k| s[k] != s[k - 1]).collect();
    match ch.as_slice() {
        [] => (if s[0] { PatternKind::Inc } else { PatternKind::Dec }, None),
        [k] => (if s[0] { PatternKind::IncDec } else { PatternKind::DecInc }, Some(xs[*k])),
        _ => (PatternKind::Unknown, None),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RowCheck {
    pub row: TableRow,
    pub fired_rule: RuleId,
    pub verdict: MonotonePattern,
    pub scanned: PatternKind,
    pub scanned_turning_point: Option<f64>,
}

impl RowCheck {
    /// The rule fired the expected row, and the verdict, the expectation
    /// and the scan agree.
    pub fn passed(&self) -> bool {
        let want_rule = match self.row.end {
            Endpoint::Lower => RuleId::VanishingAtLower(self.row.row),
            Endpoint::Upper => RuleId::VanishingAtUpper(self.row.row),
        };
        let tp_ok = match (self.verdict.turning_point(), self.scanned_turning_point) {
            (Some(a), Some(b)) => (a - b).abs() < 2.0 / SCAN_POINTS as f64,
            (None, None) => true,
            _ => false,
        };
        self.fired_rule == want_rule
            && self.verdict.kind() == self.row.expected
            && self.scanned == self.row.expected
            && tp_ok
    }
}

/// Applies the matching rule to the row's synthetic pair and scans `(f/g)'`.
pub fn check_row(row: &TableRow) -> Result<RowCheck> {
    let p = synthetic_pair(row)?;
    let ratio = MonotonePattern::piecewise(row.ratio_kind, ratio_turning_point(row))?;
    let v = match row.end {
        Endpoint::Lower => rules::lpmr_at_a(&p, ratio)?,
        Endpoint::Upper => rules::lpmr_at_b(&p, ratio)?,
    };
    let slope = |x: f64| {
        let (f, g) = (p.f().value(x), p.g().value(x));
        (p.f().d1(x) * g - f * p.g().d1(x)) / (g * g)
    };
    let (scanned, scanned_turning_point) = scan_kind(slope);
    Ok(RowCheck { row: *row, fired_rule: v.fired_rule, verdict: v.quotient_pattern, scanned, scanned_turning_point })
}
