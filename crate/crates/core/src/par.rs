//! Grid evaluation, on rayon when the `parallel` feature is enabled.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maps `f` over `xs`, preserving order. Runs on the rayon pool when the
/// `parallel` feature is enabled and sequentially otherwise.
pub fn map_grid<T, F>(xs: &[f64], f: F) -> Vec<T>
where
    T: Send,
    F: Fn(f64) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        map_grid_parallel(xs, f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_grid_sequential(xs, f)
    }
}

pub fn map_grid_sequential<T, F>(xs: &[f64], f: F) -> Vec<T>
where
    F: Fn(f64) -> T,
{
    xs.iter().map(|&x| f(x)).collect()
}

#[cfg(feature = "parallel")]
pub fn map_grid_parallel<T, F>(xs: &[f64], f: F) -> Vec<T>
where
    T: Send,
    F: Fn(f64) -> T + Sync + Send,
{
    // Small grids are not worth the scheduling overhead.
    if xs.len() < 256 {
        return map_grid_sequential(xs, f);
    }
    xs.par_iter().with_min_len(64).map(|&x| f(x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let xs: Vec<f64> = (0..5000).map(|k| k as f64).collect();
        let ys = map_grid(&xs, |x| 2.0 * x);
        assert_eq!(ys, map_grid_sequential(&xs, |x| 2.0 * x));
        assert_eq!(ys[4999], 9998.0);
    }
}
