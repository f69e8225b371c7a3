//! Bracketing root finders.

use alloc::format;

use crate::error::{Error, Result};

/// Bisection for `g(x) = 0` on `[lo, hi]` with a sign change. Stops when the
/// bracket is narrower than `x_tol` or cannot be split further.
pub fn bisect<F: FnMut(f64) -> f64>(mut g: F, lo: f64, hi: f64, x_tol: f64, max_iter: usize) -> Result<f64> {
    let (mut a, mut b) = (lo, hi);
    let mut ga = g(a);
    let gb = g(b);
    if ga == 0.0 {
        return Ok(a);
    }
    if gb == 0.0 {
        return Ok(b);
    }
    if ga.is_nan() || gb.is_nan() || ga.signum() == gb.signum() {
        return Err(Error::Root(format!(
            "no sign change on [{lo:e}, {hi:e}] (g = {ga:e}, {gb:e})"
        )));
    }
    for _ in 0..max_iter {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b || (b - a) <= x_tol {
            return Ok(mid);
        }
        let gm = g(mid);
        if gm == 0.0 {
            return Ok(mid);
        }
        if gm.is_nan() {
            return Err(Error::Root(format!("function is NaN at {mid:e}")));
        }
        if gm.signum() == ga.signum() {
            a = mid;
            ga = gm;
        } else {
            b = mid;
        }
    }
    if (b - a) <= x_tol.max(1e-300) * 1e3 {
        return Ok(0.5 * (a + b));
    }
    Err(Error::Root(format!(
        "bisection exhausted {max_iter} iterations, bracket [{a:e}, {b:e}]"
    )))
}

/// Expands `hi` geometrically until `g(hi)` has the sign opposite to `g(lo)`.
pub fn expand_bracket<F: FnMut(f64) -> f64>(mut g: F, lo: f64, mut hi: f64, max_steps: usize) -> Result<f64> {
    let s = g(lo).signum();
    for _ in 0..max_steps {
        let v = g(hi);
        if v.is_nan() {
            return Err(Error::Root(format!("function is NaN at {hi:e}")));
        }
        if v.signum() != s || v == 0.0 {
            return Ok(hi);
        }
        hi = lo + 2.0 * (hi - lo);
    }
    Err(Error::Root(format!("could not bracket a root above {lo:e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_cube_root() {
        let x = bisect(|x| x * x * x - 2.0, 0.0, 2.0, 0.0, 200).unwrap();
        assert!((x * x * x - 2.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_missing_sign_change() {
        assert!(bisect(|x| x * x + 1.0, -1.0, 1.0, 0.0, 200).is_err());
    }

    #[test]
    fn expands_bracket() {
        let hi = expand_bracket(|x| x - 100.0, 0.0, 1.0, 20).unwrap();
        assert!(hi >= 100.0);
    }
}
