//! Bivariate means and their hyperbolic substitution identities.

use std::fmt;

use crate::catalog;
use crate::error::{Error, Result};

/// Relative gap `|b - a| / min(a, b)` below which a mean is taken from its
/// series about the diagonal.
pub const DIAGONAL_GAP: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MeanKind {
    /// `(a - b) / (ln a - ln b)`.
    Logarithmic,
    /// `e^-1 (b^b / a^a)^(1/(b - a))`.
    Identric,
    /// `((a^p + b^p) / 2)^(1/p)`, the geometric mean at `p = 0`.
    Power(f64),
    /// `sqrt(a b)`.
    Geometric,
}

impl fmt::Display for MeanKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeanKind::Logarithmic => f.write_str("L"),
            MeanKind::Identric => f.write_str("I"),
            MeanKind::Power(p) => write!(f, "A_{p}"),
            MeanKind::Geometric => f.write_str("G"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanValue {
    pub a: f64,
    pub b: f64,
    pub kind: MeanKind,
    pub value: f64,
}

/// The mean of kind `kind` of two positive numbers.
pub fn mean(kind: MeanKind, a: f64, b: f64) -> Result<MeanValue> {
    for v in [a, b] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::Domain { what: format!("mean {kind}"), x: v });
        }
    }
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    // hi = lo (1 + t)
    let t = (hi - lo) / lo;
    let near = t < DIAGONAL_GAP;
    let value = match kind {
        MeanKind::Logarithmic if near => lo * (1.0 + t / 2.0 - t * t / 12.0),
        MeanKind::Logarithmic => lo * t / t.ln_1p(),
        MeanKind::Identric if near => lo * (1.0 + t / 2.0 - t * t / 24.0),
        MeanKind::Identric => lo * ((1.0 + t) * t.ln_1p() / t - 1.0).exp(),
        MeanKind::Power(0.0) => (lo * hi).sqrt(),
        MeanKind::Power(p) => {
            // ((1 + (1 + t)^p) / 2)^(1/p), scaled by lo.
            let s = (p * t.ln_1p()).exp_m1();
            lo * ((0.5 * s).ln_1p() / p).exp()
        }
        MeanKind::Geometric => (lo * hi).sqrt(),
    };
    Ok(MeanValue { a, b, kind, value })
}

/// Relative residuals of `L(e^x, e^-x) = sinh x / x`,
/// `A_1/3(e^x, e^-x) = cosh^3(x/3)` and `I(e^x, e^-x) = exp(x coth x - 1)`.
pub fn hyperbolic_identity_check(x: f64) -> Result<[f64; 3]> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::Domain { what: "hyperbolic identity check".into(), x });
    }
    let (a, b) = (x.exp(), (-x).exp());
    let rel = |u: f64, v: f64| ((u - v) / v).abs();
    let l = mean(MeanKind::Logarithmic, a, b)?.value;
    let p = mean(MeanKind::Power(1.0 / 3.0), a, b)?.value;
    let i = mean(MeanKind::Identric, a, b)?.value;
    let sinhc = catalog::sinh_over_x().value(x);
    let cosh3 = (x / 3.0).cosh().powi(3);
    let ident = catalog::x_coth_x_minus_one().value(x).exp();
    Ok([rel(l, sinhc), rel(p, cosh3), rel(i, ident)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::E;

    fn m(kind: MeanKind, a: f64, b: f64) -> f64 {
        mean(kind, a, b).unwrap().value
    }

    #[test]
    fn known_values() {
        assert!((m(MeanKind::Logarithmic, 1.0, E) - (E - 1.0)).abs() < 1e-15);
        assert!((m(MeanKind::Power(0.0), 4.0, 9.0) - 6.0).abs() < 1e-15);
        assert!((m(MeanKind::Geometric, 4.0, 9.0) - 6.0).abs() < 1e-15);
        assert!((m(MeanKind::Power(1.0), 4.0, 9.0) - 6.5).abs() < 1e-14);
        // I(1, 2) = 4/e.
        assert!((m(MeanKind::Identric, 1.0, 2.0) - 4.0 / E).abs() < 1e-15);
        for kind in [MeanKind::Logarithmic, MeanKind::Identric, MeanKind::Power(0.5)] {
            assert_eq!(m(kind, 3.0, 3.0), 3.0);
            let v = m(kind, 3.0, 3.0 * (1.0 + 1e-10));
            assert!((v - 3.0 * (1.0 + 0.5e-10)).abs() < 1e-15);
        }
        assert!(mean(MeanKind::Identric, 0.0, 1.0).is_err());
        assert!(mean(MeanKind::Logarithmic, 1.0, -1.0).is_err());
    }

    #[test]
    fn series_and_closed_form_meet_at_the_switch() {
        for kind in [MeanKind::Logarithmic, MeanKind::Identric] {
            for k in [0.999, 1.001] {
                let b = 1.0 + k * DIAGONAL_GAP;
                let v = m(kind, 1.0, b);
                assert!((v - (1.0 + (b - 1.0) / 2.0)).abs() < 1e-15, "{kind}");
            }
        }
    }

    #[test]
    fn hyperbolic_identities() {
        for x in [0.01, 0.5, 1.0, 3.0, 10.0] {
            for r in hyperbolic_identity_check(x).unwrap() {
                assert!(r <= 1e-12, "x = {x}: {r}");
            }
        }
        for r in hyperbolic_identity_check(1e-6).unwrap() {
            assert!(r <= 1e-10, "{r}");
        }
        assert!(hyperbolic_identity_check(0.0).is_err());
    }

    #[test]
    fn power_mean_monotone_in_p() {
        let ps: Vec<f64> = (-20..=20).map(|k| k as f64 * 0.25).collect();
        for x in [0.01, 0.3, 0.9] {
            let v: Vec<f64> = ps.iter().map(|&p| m(MeanKind::Power(p), x, 1.0)).collect();
            assert!(v.windows(2).all(|w| w[0] <= w[1]), "x = {x}");
            let d: Vec<f64> = ps
                .iter()
                .filter(|&&p| p > 0.0)
                .map(|&p| ((x.powf(p) + 1.0) / 2.0).powf(1.0 / std::f64::consts::LN_2))
                .collect();
            assert!(d.windows(2).all(|w| w[0] >= w[1]), "x = {x}");
        }
    }

    proptest! {
        #[test]
        fn classical_ordering(a in 1e-3f64..1e3, b in 1e-3f64..1e3) {
            let g = m(MeanKind::Geometric, a, b);
            let l = m(MeanKind::Logarithmic, a, b);
            let i = m(MeanKind::Identric, a, b);
            let ar = m(MeanKind::Power(1.0), a, b);
            let tol = 1e-13 * a.max(b);
            prop_assert!(g <= l + tol && l <= i + tol && i <= ar + tol);
            if (a - b).abs() > 1e-3 * a.max(b) {
                prop_assert!(g < l && l < i && i < ar);
            }
            for v in [g, l, i, ar] {
                prop_assert!(a.min(b) - tol <= v && v <= a.max(b) + tol);
            }
        }

        #[test]
        fn symmetric_in_arguments(a in 1e-3f64..1e3, b in 1e-3f64..1e3, p in -3.0f64..3.0) {
            for kind in [MeanKind::Logarithmic, MeanKind::Identric, MeanKind::Power(p)] {
                prop_assert_eq!(m(kind, a, b), m(kind, b, a));
            }
        }
    }
}
