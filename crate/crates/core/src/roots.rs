//! Bracketed bisection for monotone scalar equations.

use crate::error::{Error, Result};

/// Default absolute tolerance on the bracket width.
pub const BISECT_ABS_TOL: f64 = 1e-12;
pub const BISECT_MAX_ITER: usize = 200;

/// Finds a root of `f` in `[lo, hi]` given a sign change across the bracket.
///
/// Stops when the bracket is narrower than `abs_tol` or when the midpoint no
/// longer moves in floating point.
pub fn bisect<F>(what: &'static str, f: F, lo: f64, hi: f64, abs_tol: f64, max_iter: usize) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let (mut a, mut b) = (lo, hi);
    let (fa, fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.is_nan() || fb.is_nan() || fa.signum() == fb.signum() {
        return Err(Error::Inconclusive {
            what,
            detail: format!("no sign change on [{lo}, {hi}] (f = {fa}, {fb})"),
        });
    }
    let a_negative = fa < 0.0;
    for _ in 0..max_iter {
        let m = 0.5 * (a + b);
        if b - a <= abs_tol || m <= a || m >= b {
            return Ok(m);
        }
        let fm = f(m);
        if fm == 0.0 {
            return Ok(m);
        }
        if (fm < 0.0) == a_negative {
            a = m;
        } else {
            b = m;
        }
    }
    if b - a <= abs_tol {
        Ok(0.5 * (a + b))
    } else {
        Err(Error::Inconclusive {
            what,
            detail: format!("bisection did not converge in {max_iter} iterations (width {})", b - a),
        })
    }
}

/// Smallest root of `f` on `[lo, hi]`: scans a log-spaced grid for the first
/// sign change, then bisects inside that cell.
pub fn smallest_root_log_scan<F>(what: &'static str, f: F, lo: f64, hi: f64, cells: usize) -> Result<Option<f64>>
where
    F: Fn(f64) -> f64,
{
    debug_assert!(lo > 0.0 && hi > lo);
    let ratio = (hi / lo).ln() / cells as f64;
    let mut prev_x = lo;
    let mut prev_f = f(lo);
    if prev_f == 0.0 {
        return Ok(Some(lo));
    }
    for k in 1..=cells {
        let x = if k == cells { hi } else { lo * (ratio * k as f64).exp() };
        let fx = f(x);
        if fx == 0.0 || fx.signum() != prev_f.signum() {
            return bisect(what, &f, prev_x, x, 0.0, BISECT_MAX_ITER).map(Some);
        }
        prev_x = x;
        prev_f = fx;
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_sqrt_two() {
        let r = bisect("t", |x| x * x - 2.0, 0.0, 2.0, 1e-14, 200).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn rejects_missing_sign_change() {
        assert!(bisect("t", |x| x * x + 1.0, -1.0, 1.0, 1e-12, 200).is_err());
    }

    #[test]
    fn scan_returns_first_root() {
        // roots at 0.1, 0.5 and 0.9
        let f = |x: f64| (x - 0.1) * (x - 0.5) * (x - 0.9);
        let r = smallest_root_log_scan("t", f, 1e-3, 1.0, 200).unwrap().unwrap();
        assert!((r - 0.1).abs() < 1e-14);
    }
}
