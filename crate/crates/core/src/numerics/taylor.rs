//! Truncated power series with `f64` coefficients.
//!
//! A `Taylor` of order `n` stores `c_0, ..., c_n` and represents
//! `c_0 + c_1 t + ... + c_n t^n + O(t^(n+1))`. Binary operations truncate to
//! the smaller order of the two operands.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Taylor {
    c: Vec<f64>,
}

fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

impl Taylor {
    pub fn from_coeffs(c: Vec<f64>) -> Taylor {
        assert!(!c.is_empty(), "a series needs at least one coefficient");
        Taylor { c }
    }

    pub fn constant(v: f64, order: usize) -> Taylor {
        let mut c = vec![0.0; order + 1];
        c[0] = v;
        Taylor { c }
    }

    /// The series of the variable `t` itself.
    pub fn variable(order: usize) -> Taylor {
        let mut c = vec![0.0; order + 1];
        if order >= 1 {
            c[1] = 1.0;
        }
        Taylor { c }
    }

    /// `sinh(t)/t`.
    pub fn sinhc(order: usize) -> Taylor {
        Taylor::from_fn(order, |k| if k % 2 == 0 { 1.0 / factorial(k + 1) } else { 0.0 })
    }

    /// `sin(t)/t`.
    pub fn sinc(order: usize) -> Taylor {
        Taylor::from_fn(order, |k| {
            if k % 2 == 0 {
                let s = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
                s / factorial(k + 1)
            } else {
                0.0
            }
        })
    }

    /// `ln(1 + t)`.
    pub fn ln1p(order: usize) -> Taylor {
        Taylor::from_fn(order, |k| {
            if k == 0 {
                0.0
            } else if k % 2 == 1 {
                1.0 / k as f64
            } else {
                -1.0 / k as f64
            }
        })
    }

    pub fn from_fn(order: usize, f: impl Fn(usize) -> f64) -> Taylor {
        Taylor { c: (0..=order).map(f).collect() }
    }

    pub fn order(&self) -> usize {
        self.c.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.c
    }

    pub fn coeff(&self, k: usize) -> f64 {
        self.c.get(k).copied().unwrap_or(0.0)
    }

    /// Index of the first coefficient that is not exactly zero.
    pub fn valuation(&self) -> Option<usize> {
        self.c.iter().position(|&v| v != 0.0)
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.c.iter().rev().fold(0.0, |acc, &v| acc * t + v)
    }

    pub fn derivative(&self) -> Taylor {
        if self.c.len() == 1 {
            return Taylor::constant(0.0, 0);
        }
        Taylor { c: (1..self.c.len()).map(|k| k as f64 * self.c[k]).collect() }
    }

    /// Substitutes `s t` for `t`.
    pub fn scale_var(&self, s: f64) -> Taylor {
        let mut p = 1.0;
        Taylor {
            c: self
                .c
                .iter()
                .map(|&v| {
                    let r = v * p;
                    p *= s;
                    r
                })
                .collect(),
        }
    }

    pub fn scale(&self, s: f64) -> Taylor {
        Taylor { c: self.c.iter().map(|&v| v * s).collect() }
    }

    pub fn add_const(&self, v: f64) -> Taylor {
        let mut out = self.clone();
        out.c[0] += v;
        out
    }

    pub fn truncate(&self, order: usize) -> Taylor {
        Taylor { c: self.c[..=order.min(self.order())].to_vec() }
    }

    /// Coefficientwise absolute values; bounds the rounding noise of
    /// products built from this series.
    pub fn abs(&self) -> Taylor {
        Taylor { c: self.c.iter().map(|v| v.abs()).collect() }
    }

    /// Multiplies by `t^k`, keeping the order.
    pub fn mul_var_pow(&self, k: usize) -> Taylor {
        let n = self.c.len();
        let mut c = vec![0.0; n];
        c[k.min(n)..].copy_from_slice(&self.c[..n - k.min(n)]);
        Taylor { c }
    }

    /// Divides by `t^k`. The dropped coefficients must be zero up to
    /// `tol` times the largest coefficient; the order drops by `k`.
    pub fn shift_down(&self, k: usize, tol: f64) -> Result<Taylor> {
        if k > self.order() {
            return Err(Error::Evaluation(format!(
                "cannot divide an order-{} series by t^{k}",
                self.order()
            )));
        }
        let scale = self.c.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if let Some(j) = (0..k).find(|&j| self.c[j].abs() > tol * scale) {
            return Err(Error::Evaluation(format!(
                "coefficient {j} = {:e} is not negligible",
                self.c[j]
            )));
        }
        Ok(Taylor { c: self.c[k..].to_vec() })
    }

    pub fn recip(&self) -> Result<Taylor> {
        Taylor::constant(1.0, self.order()).div(self)
    }

    pub fn div(&self, other: &Taylor) -> Result<Taylor> {
        let b0 = other.c[0];
        if b0 == 0.0 {
            return Err(Error::Evaluation("series division by a series with zero constant term".into()));
        }
        let n = self.order().min(other.order());
        let mut q = vec![0.0; n + 1];
        for k in 0..=n {
            let s: f64 = (1..=k).map(|j| other.c[j] * q[k - j]).sum();
            q[k] = (self.c[k] - s) / b0;
        }
        Ok(Taylor { c: q })
    }

    /// Quotient of two series that may share leading zero coefficients; the
    /// common valuation is removed first.
    pub fn ratio(&self, other: &Taylor, tol: f64) -> Result<Taylor> {
        let scale = other.c.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let v = (0..other.c.len())
            .find(|&j| other.c[j].abs() > tol * scale)
            .ok_or_else(|| Error::Evaluation("series division by zero".into()))?;
        self.shift_down(v, tol)?.div(&other.shift_down(v, tol)?)
    }

    pub fn exp(&self) -> Taylor {
        let n = self.order();
        let mut b = vec![0.0; n + 1];
        b[0] = self.c[0].exp();
        for k in 1..=n {
            let s: f64 = (1..=k).map(|j| j as f64 * self.c[j] * b[k - j]).sum();
            b[k] = s / k as f64;
        }
        Taylor { c: b }
    }

    pub fn ln(&self) -> Result<Taylor> {
        let a0 = self.c[0];
        if a0 <= 0.0 {
            return Err(Error::Evaluation(format!("series logarithm at constant term {a0}")));
        }
        let n = self.order();
        let mut b = vec![0.0; n + 1];
        b[0] = a0.ln();
        for k in 1..=n {
            let s: f64 = (1..k).map(|j| j as f64 * b[j] * self.c[k - j]).sum();
            b[k] = (self.c[k] - s / k as f64) / a0;
        }
        Ok(Taylor { c: b })
    }

    pub fn powf(&self, p: f64) -> Result<Taylor> {
        Ok(self.ln()?.scale(p).exp())
    }

    /// `(sin a, cos a)` for the series `a`.
    pub fn sin_cos(&self) -> (Taylor, Taylor) {
        self.trig_pair(-1.0)
    }

    /// `(sinh a, cosh a)` for the series `a`.
    pub fn sinh_cosh(&self) -> (Taylor, Taylor) {
        self.trig_pair(1.0)
    }

    fn trig_pair(&self, sgn: f64) -> (Taylor, Taylor) {
        let n = self.order();
        let mut s = vec![0.0; n + 1];
        let mut c = vec![0.0; n + 1];
        if sgn < 0.0 {
            s[0] = self.c[0].sin();
            c[0] = self.c[0].cos();
        } else {
            s[0] = self.c[0].sinh();
            c[0] = self.c[0].cosh();
        }
        for k in 1..=n {
            let mut ss = 0.0;
            let mut cs = 0.0;
            for j in 1..=k {
                let ja = j as f64 * self.c[j];
                ss += ja * c[k - j];
                cs += ja * s[k - j];
            }
            s[k] = ss / k as f64;
            c[k] = sgn * cs / k as f64;
        }
        (Taylor { c: s }, Taylor { c })
    }

    /// `self - other`, zeroing every coefficient whose magnitude is within
    /// `rel` of the magnitudes that cancelled to produce it. `mag_self` and
    /// `mag_other` bound the absolute size of the terms behind each
    /// coefficient; pass `self.abs()` when nothing better is known.
    pub fn sub_cancelling(&self, other: &Taylor, mag_self: &Taylor, mag_other: &Taylor, rel: f64) -> Taylor {
        let n = self.order().min(other.order());
        Taylor {
            c: (0..=n)
                .map(|k| {
                    let d = self.c[k] - other.c[k];
                    let m = mag_self.coeff(k) + mag_other.coeff(k);
                    if d.abs() <= rel * m {
                        0.0
                    } else {
                        d
                    }
                })
                .collect(),
        }
    }
}

impl Add for &Taylor {
    type Output = Taylor;
    fn add(self, rhs: &Taylor) -> Taylor {
        let n = self.order().min(rhs.order());
        Taylor { c: (0..=n).map(|k| self.c[k] + rhs.c[k]).collect() }
    }
}

impl Sub for &Taylor {
    type Output = Taylor;
    fn sub(self, rhs: &Taylor) -> Taylor {
        let n = self.order().min(rhs.order());
        Taylor { c: (0..=n).map(|k| self.c[k] - rhs.c[k]).collect() }
    }
}

impl Mul for &Taylor {
    type Output = Taylor;
    fn mul(self, rhs: &Taylor) -> Taylor {
        let n = self.order().min(rhs.order());
        Taylor {
            c: (0..=n)
                .map(|k| (0..=k).map(|j| self.c[j] * rhs.c[k - j]).sum())
                .collect(),
        }
    }
}

impl Neg for &Taylor {
    type Output = Taylor;
    fn neg(self) -> Taylor {
        self.scale(-1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const N: usize = 20;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1e-300)
    }

    #[test]
    fn exp_and_ln_invert() {
        let t = Taylor::variable(N).scale(0.7).add_const(0.2);
        let back = t.exp().ln().unwrap();
        for k in 0..=N {
            assert!((back.coeff(k) - t.coeff(k)).abs() < 1e-14);
        }
    }

    #[test]
    fn elementary_series_match_libm() {
        let x = 0.3;
        let v = Taylor::variable(N);
        let (s, c) = v.sin_cos();
        assert!(close(s.eval(x), x.sin(), 1e-15));
        assert!(close(c.eval(x), x.cos(), 1e-15));
        let (sh, ch) = v.sinh_cosh();
        assert!(close(sh.eval(x), x.sinh(), 1e-15));
        assert!(close(ch.eval(x), x.cosh(), 1e-15));
        assert!(close(Taylor::sinc(N).eval(x), x.sin() / x, 1e-15));
        assert!(close(Taylor::sinhc(N).eval(x), x.sinh() / x, 1e-15));
        assert!(close(Taylor::ln1p(N).eval(0.01), 0.01f64.ln_1p(), 1e-15));
        let p = Taylor::sinc(N).powf(0.9).unwrap();
        assert!(close(p.eval(x), (x.sin() / x).powf(0.9), 1e-14));
    }

    #[test]
    fn division_and_ratio() {
        let v = Taylor::variable(N);
        let (s, c) = v.sin_cos();
        let tan = s.div(&c).unwrap();
        assert!(close(tan.eval(0.2), 0.2f64.tan(), 1e-14));
        // sin(t) / (t cos t) has a removable zero at the origin.
        let tc = &v * &c;
        let r = s.ratio(&tc, 1e-14).unwrap();
        assert!(close(r.eval(0.2), 0.2f64.tan() / 0.2, 1e-14));
        assert!(c.div(&v).is_err());
    }

    #[test]
    fn shift_down_rejects_nonzero_terms() {
        let t = Taylor::from_coeffs(vec![0.0, 1e-20, 3.0, 1.0]);
        assert_eq!(t.shift_down(2, 1e-14).unwrap().coeffs(), &[3.0, 1.0]);
        assert!(Taylor::from_coeffs(vec![0.1, 1.0]).shift_down(1, 1e-14).is_err());
    }

    #[test]
    fn derivative_and_scaling() {
        let t = Taylor::from_coeffs(vec![1.0, 2.0, 3.0]);
        assert_eq!(t.derivative().coeffs(), &[2.0, 6.0]);
        assert_eq!(t.scale_var(2.0).coeffs(), &[1.0, 4.0, 12.0]);
        assert_eq!(t.mul_var_pow(1).coeffs(), &[0.0, 1.0, 2.0]);
    }

    #[test]
    fn cancelling_subtraction_snaps_noise() {
        let a = Taylor::from_coeffs(vec![1.0, 0.5 + 1e-17, 0.25]);
        let b = Taylor::from_coeffs(vec![1.0, 0.5, 0.125]);
        let d = a.sub_cancelling(&b, &a.abs(), &b.abs(), 1e-12);
        assert_eq!(d.coeffs(), &[0.0, 0.0, 0.125]);
    }
}
