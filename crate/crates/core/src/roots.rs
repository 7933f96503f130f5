//! Bracketing and bisection.

use crate::error::{Error, Result};

/// Bisection on `[lo, hi]` until the bracket width is below
/// `tol * max(|mid|, tiny)`. The sign change must already be present.
pub fn bisect<F>(f: F, lo: f64, hi: f64, tol: f64, max_iter: usize) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    bisect_with(
        f,
        lo,
        hi,
        |lo, hi| (hi - lo).abs() <= tol * (0.5 * (lo + hi)).abs().max(f64::MIN_POSITIVE),
        max_iter,
    )
}

/// Bisection with a caller-supplied stopping rule on the bracket.
pub fn bisect_with<F, S>(mut f: F, mut lo: f64, mut hi: f64, done: S, max_iter: usize) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
    S: Fn(f64, f64) -> bool,
{
    let mut flo = f(lo)?;
    let fhi = f(hi)?;
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::Bracket(format!(
            "no sign change on [{lo}, {hi}]: f = ({flo:e}, {fhi:e})"
        )));
    }
    for _ in 0..max_iter {
        let mid = 0.5 * (lo + hi);
        if done(lo, hi) || mid == lo || mid == hi {
            return Ok(mid);
        }
        let fm = f(mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Err(Error::NoConvergence {
        iterations: max_iter,
        residual: (hi - lo).abs(),
    })
}

/// Grow `[lo, hi]` geometrically around its center in log space (both ends
/// positive) until `f` changes sign. Returns the bracket.
pub fn expand_log_bracket<F>(
    mut f: F,
    mut lo: f64,
    mut hi: f64,
    factor: f64,
    max_expansions: usize,
    limits: (f64, f64),
) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (mut flo, mut fhi) = (f(lo)?, f(hi)?);
    for _ in 0..max_expansions {
        if flo.signum() != fhi.signum() || flo == 0.0 || fhi == 0.0 {
            return Ok((lo, hi));
        }
        // expand toward the end with the smaller residual
        if (flo.abs() < fhi.abs() && lo / factor >= limits.0) || hi * factor > limits.1 {
            lo /= factor;
            flo = f(lo)?;
        } else {
            hi *= factor;
            fhi = f(hi)?;
        }
        if lo < limits.0 && hi > limits.1 {
            break;
        }
    }
    if flo.signum() != fhi.signum() {
        return Ok((lo, hi));
    }
    Err(Error::Bracket(format!(
        "no sign change found on [{lo:e}, {hi:e}] (f = {flo:e}, {fhi:e})"
    )))
}
