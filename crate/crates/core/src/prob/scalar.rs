//! Scalar binary-entropy helpers.

use crate::error::{Error, Result};

/// Residual `|f(x) − target|` the bisection-based inverses stay within.
pub const INVERSE_TOLERANCE: f64 = 1e-12;
/// Iteration cap for bisection-based inverses.
pub const MAX_BISECTION_ITERS: usize = 200;

fn check_probability(what: &str, x: f64) -> Result<()> {
    if x.is_finite() && (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::Domain(format!("{what} = {x} is not in [0, 1]")))
    }
}

/// `-x log2 x` with the convention `0 log 0 = 0`.
#[inline]
pub fn xlog2x_neg(x: f64) -> f64 {
    if x > 0.0 {
        -x * x.log2()
    } else {
        0.0
    }
}

/// Unchecked binary entropy; callers guarantee `x` in `[0, 1]`.
#[inline]
pub(crate) fn hb(x: f64) -> f64 {
    xlog2x_neg(x) + xlog2x_neg(1.0 - x)
}

/// Unchecked binary convolution `p(1-x) + (1-p)x`.
#[inline]
pub(crate) fn conv(p: f64, x: f64) -> f64 {
    p * (1.0 - x) + (1.0 - p) * x
}

/// Binary entropy `H_b(x)` in bits.
pub fn binary_entropy(x: f64) -> Result<f64> {
    check_probability("x", x)?;
    Ok(hb(x))
}

/// Binary convolution `p * x = p(1-x) + (1-p)x`.
pub fn star(p: f64, x: f64) -> Result<f64> {
    check_probability("p", p)?;
    check_probability("x", x)?;
    Ok(conv(p, x))
}

/// Finds `x` in `[lo, hi]` with `f(x) = target` for a nondecreasing `f`.
///
/// Stops when `|f(x) - target| <= tol` or the bracket collapses to machine
/// precision, whichever comes first, within `max_iters` halvings.
pub fn bisect_increasing<F>(f: F, target: f64, mut lo: f64, mut hi: f64, tol: f64, max_iters: usize) -> f64
where
    F: Fn(f64) -> f64,
{
    let f_lo = f(lo);
    if (f_lo - target).abs() <= tol || target <= f_lo {
        return lo;
    }
    let f_hi = f(hi);
    if (f_hi - target).abs() <= tol || target >= f_hi {
        return hi;
    }
    let mut best = (lo, (f_lo - target).abs());
    for _ in 0..max_iters {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = f(mid);
        let err = (v - target).abs();
        if err < best.1 {
            best = (mid, err);
        }
        if err <= tol {
            return mid;
        }
        if v < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    best.0
}

/// Inverse of the binary entropy restricted to `[0, 0.5]`.
pub fn binary_entropy_inverse(h: f64) -> Result<f64> {
    if !h.is_finite() || !(0.0..=1.0).contains(&h) {
        return Err(Error::Domain(format!("h = {h} is not in [0, 1]")));
    }
    // run to bracket collapse: near 0.5 a 1e-12 residual in h still leaves
    // a visible error in x
    Ok(bisect_increasing(hb, h, 0.0, 0.5, 0.0, MAX_BISECTION_ITERS))
}
