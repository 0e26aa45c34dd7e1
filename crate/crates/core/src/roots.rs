//! Sign-change bracketing and hybrid bisection/secant refinement.

use crate::error::{Error, Result};
use crate::numerics::Interval;
use crate::par::map_grid;

/// An interval whose endpoint values have strictly opposite signs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    lo: f64,
    hi: f64,
    f_lo: f64,
    f_hi: f64,
}

impl Bracket {
    pub fn new(lo: f64, hi: f64, f_lo: f64, f_hi: f64) -> Result<Bracket> {
        if !(lo < hi) {
            return Err(Error::Precondition(format!("bracket [{lo}, {hi}] is empty")));
        }
        if !(f_lo.is_finite() && f_hi.is_finite()) || f_lo * f_hi >= 0.0 || f_lo == 0.0 || f_hi == 0.0 {
            return Err(Error::Precondition(format!(
                "no strict sign change on [{lo}, {hi}]: {f_lo:e}, {f_hi:e}"
            )));
        }
        Ok(Bracket { lo, hi, f_lo, f_hi })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn f_lo(&self) -> f64 {
        self.f_lo
    }

    pub fn f_hi(&self) -> f64 {
        self.f_hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RootResult {
    pub root: f64,
    pub residual: f64,
    pub iterations: usize,
    pub bracket_final: Bracket,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootOptions {
    /// Bracket width at which refinement stops.
    pub tol_x: f64,
    /// Residual at which refinement stops; `None` means `1e-11` times the
    /// larger endpoint magnitude of the initial bracket.
    pub tol_f: Option<f64>,
    pub max_iter: usize,
}

impl Default for RootOptions {
    fn default() -> Self {
        RootOptions { tol_x: 1e-14, tol_f: None, max_iter: 200 }
    }
}

impl RootOptions {
    fn tol_f_for(&self, b: &Bracket) -> f64 {
        self.tol_f
            .unwrap_or_else(|| 1e-11 * b.f_lo.abs().max(b.f_hi.abs()))
    }
}

/// How sample points are laid out when searching for a sign change.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Grid {
    /// Equally spaced interior points of the interval's sampling coordinates.
    Uniform,
    /// Log-spaced points between the given positive bounds, inclusive.
    Geometric { lo: f64, hi: f64 },
}

fn check(x: f64, v: f64) -> Result<f64> {
    if v.is_nan() {
        Err(Error::Evaluation(format!("function is NaN at x = {x}")))
    } else {
        Ok(v)
    }
}

/// Sample points of `grid` over `iv` with `n` points.
pub fn grid_points(grid: Grid, iv: &Interval, n: usize) -> Result<Vec<f64>> {
    match grid {
        Grid::Uniform => Ok(iv.interior_grid(n).into_iter().map(|(_, x)| x).collect()),
        Grid::Geometric { lo, hi } => {
            if !(lo > 0.0 && lo < hi) || !iv.contains(lo) || !iv.contains(hi) || n < 2 {
                return Err(Error::Precondition(format!(
                    "geometric grid [{lo}, {hi}] must be positive and inside {iv}"
                )));
            }
            let (a, b) = (lo.ln(), hi.ln());
            Ok((0..n)
                .map(|k| (a + (b - a) * k as f64 / (n - 1) as f64).exp())
                .collect())
        }
    }
}

/// Every sign change of `h` between consecutive nonzero samples, in order.
pub fn sign_changes<F>(h: F, xs: &[f64]) -> Result<Vec<Bracket>>
where
    F: Fn(f64) -> f64 + Sync + Send,
{
    let vals = map_grid(xs, &h);
    let mut prev: Option<(f64, f64)> = None;
    let mut out = Vec::new();
    for (&x, &v) in xs.iter().zip(&vals) {
        let v = check(x, v)?;
        if v == 0.0 {
            continue;
        }
        if let Some((px, pv)) = prev {
            if pv * v < 0.0 {
                out.push(Bracket::new(px, x, pv, v)?);
            }
        }
        prev = Some((x, v));
    }
    Ok(out)
}

/// The first cell of the grid on which `h` changes sign. Samples that are
/// exactly zero are skipped so the returned bracket never has a zero end.
pub fn find_bracket<F>(h: F, iv: &Interval, grid: Grid, grid_n: usize) -> Result<Bracket>
where
    F: Fn(f64) -> f64 + Sync + Send,
{
    let xs = grid_points(grid, iv, grid_n)?;
    sign_changes(h, &xs)?
        .into_iter()
        .next()
        .ok_or_else(|| Error::NoRoot(format!("{grid_n}-point scan of {iv}")))
}

/// Hybrid bisection/secant on `b`. A secant (Illinois) step that fails to
/// halve the bracket is followed by a bisection, so the width at least
/// halves every two iterations.
pub fn refine<F>(h: F, b: Bracket, opts: &RootOptions) -> Result<RootResult>
where
    F: Fn(f64) -> f64,
{
    refine_scaled(h, b, opts, |lo, hi| hi - lo <= opts.tol_x * lo.abs().max(hi.abs()).max(1.0))
}

/// Refinement in `s = ln x` for brackets of positive numbers; `tol_x` is
/// then a relative tolerance on `x`.
pub fn refine_log<F>(h: F, b: Bracket, opts: &RootOptions) -> Result<RootResult>
where
    F: Fn(f64) -> f64,
{
    if b.lo <= 0.0 {
        return Err(Error::Precondition("logarithmic refinement needs a positive bracket".into()));
    }
    let sb = Bracket::new(b.lo.ln(), b.hi.ln(), b.f_lo, b.f_hi)?;
    let to_x = |r: RootResult| RootResult {
        root: r.root.exp(),
        residual: r.residual,
        iterations: r.iterations,
        bracket_final: Bracket {
            lo: r.bracket_final.lo.exp(),
            hi: r.bracket_final.hi.exp(),
            ..r.bracket_final
        },
    };
    match refine_scaled(|s: f64| h(s.exp()), sb, opts, |lo, hi| hi - lo <= opts.tol_x) {
        Ok(r) => Ok(to_x(r)),
        Err(Error::NonConvergence(r)) => Err(Error::NonConvergence(Box::new(to_x(*r)))),
        Err(e) => Err(e),
    }
}

fn refine_scaled<F, W>(h: F, b: Bracket, opts: &RootOptions, narrow: W) -> Result<RootResult>
where
    F: Fn(f64) -> f64,
    W: Fn(f64, f64) -> bool,
{
    let tol_f = opts.tol_f_for(&b);
    let Bracket { lo: mut a, hi: mut c, f_lo: mut fa, f_hi: mut fc } = b;
    // Illinois weights for the endpoint values used by the secant step.
    let (mut wa, mut wc) = (fa, fc);
    let mut bisect_next = false;
    let mut last_kept: i8 = 0;
    let finish = |a: f64, c: f64, fa: f64, fc: f64, it: usize| {
        let (root, residual) = if fa.abs() <= fc.abs() { (a, fa.abs()) } else { (c, fc.abs()) };
        RootResult { root, residual, iterations: it, bracket_final: Bracket { lo: a, hi: c, f_lo: fa, f_hi: fc } }
    };
    if narrow(a, c) {
        return Ok(finish(a, c, fa, fc, 0));
    }
    for it in 1..=opts.max_iter {
        let width = c - a;
        let mid = 0.5 * (a + c);
        let x = if bisect_next {
            mid
        } else {
            let s = c - wc * (c - a) / (wc - wa);
            if s > a && s < c && s.is_finite() {
                s
            } else {
                mid
            }
        };
        let secant_step = x != mid;
        let fx = check(x, h(x))?;
        if fx == 0.0 || fx.abs() <= tol_f {
            return Ok(RootResult {
                root: x,
                residual: fx.abs(),
                iterations: it,
                bracket_final: Bracket { lo: a, hi: c, f_lo: fa, f_hi: fc },
            });
        }
        if (fx < 0.0) == (fa < 0.0) {
            a = x;
            fa = fx;
            wa = fx;
            if last_kept == 1 {
                wc *= 0.5;
            } else {
                wc = fc;
            }
            last_kept = 1;
        } else {
            c = x;
            fc = fx;
            wc = fx;
            if last_kept == -1 {
                wa *= 0.5;
            } else {
                wa = fa;
            }
            last_kept = -1;
        }
        bisect_next = secant_step && (c - a) > 0.5 * width;
        if narrow(a, c) {
            return Ok(finish(a, c, fa, fc, it));
        }
    }
    Err(Error::NonConvergence(Box::new(finish(a, c, fa, fc, opts.max_iter))))
}

/// Brackets the first sign change on `grid` and refines it, in `ln x` for
/// geometric grids.
pub fn solve<F>(h: F, iv: &Interval, grid: Grid, grid_n: usize, opts: &RootOptions) -> Result<RootResult>
where
    F: Fn(f64) -> f64 + Sync + Send,
{
    let b = find_bracket(&h, iv, grid, grid_n)?;
    match grid {
        Grid::Uniform => refine(&h, b, opts),
        Grid::Geometric { .. } => refine_log(&h, b, opts),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn cubic_root() {
        let iv = Interval::open(0.0, 3.0).unwrap();
        let h = |x: f64| x * x * x - 2.0;
        let r = solve(h, &iv, Grid::Uniform, 64, &RootOptions::default()).unwrap();
        assert!((r.root - 2f64.cbrt()).abs() < 1e-12);
        assert!(r.bracket_final.contains(r.root));
    }

    #[test]
    fn root_on_half_line_uses_transformed_grid() {
        let iv = Interval::open(0.0, f64::INFINITY).unwrap();
        let r = solve(|x| x - 1000.0, &iv, Grid::Uniform, 1024, &RootOptions::default()).unwrap();
        assert!((r.root - 1000.0).abs() < 1e-9);
    }

    #[test]
    fn tiny_root_on_geometric_grid() {
        let iv = Interval::open(0.0, 1.0).unwrap();
        let grid = Grid::Geometric { lo: 1e-30, hi: 0.5 };
        let r = solve(|x| x.ln() + 40.0, &iv, grid, 400, &RootOptions::default()).unwrap();
        assert!(((r.root - (-40f64).exp()) / (-40f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn no_sign_change_is_reported() {
        let iv = Interval::open(0.0, 1.0).unwrap();
        let e = find_bracket(|x| x + 1.0, &iv, Grid::Uniform, 32).unwrap_err();
        assert!(matches!(e, Error::NoRoot(_)));
    }

    #[test]
    fn exact_zero_samples_are_skipped() {
        let iv = Interval::open(0.0, 1.0).unwrap();
        // 0.5 is a grid point of a 3-point interior grid.
        let b = find_bracket(|x| x - 0.5, &iv, Grid::Uniform, 3).unwrap();
        assert_eq!((b.lo(), b.hi()), (0.25, 0.75));
    }

    #[test]
    fn non_convergence_carries_partial_result() {
        let b = Bracket::new(0.0, 1.0, -1.0, 1.0).unwrap();
        let opts = RootOptions { tol_x: 1e-300, tol_f: Some(0.0), max_iter: 3 };
        match refine(|x| x - 0.3, b, &opts) {
            Err(Error::NonConvergence(r)) => assert!(r.bracket_final.width() < 1.0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn nan_is_an_evaluation_error() {
        let iv = Interval::open(0.0, 1.0).unwrap();
        let e = find_bracket(|_| f64::NAN, &iv, Grid::Uniform, 8).unwrap_err();
        assert!(matches!(e, Error::Evaluation(_)));
    }

    proptest! {
        #[test]
        fn refinement_halves_every_two_steps(root in 0.01f64..0.99, k in 1u32..6) {
            let h = move |x: f64| (x - root) * (1.0 + (x - root).powi(2 * k as i32) * 50.0);
            let b = Bracket::new(0.0, 1.0, h(0.0), h(1.0)).unwrap();
            let opts = RootOptions { tol_x: 1e-14, tol_f: Some(0.0), max_iter: 200 };
            let r = refine(h, b, &opts).unwrap();
            prop_assert!((r.root - root).abs() <= 1e-13);
            prop_assert!(r.iterations <= 2 * 47 + 2);
            prop_assert!(r.bracket_final.contains(r.root));
        }
    }
}
