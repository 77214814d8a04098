//! Monotone root finding in `log λ`.

use crate::error::{Error, Result};

/// Initial bracket for `λ`.
pub const INITIAL_BRACKET: (f64, f64) = (1e-6, 1e3);
/// Largest bracket tried before giving up.
pub const MAX_BRACKET: (f64, f64) = (1e-12, 1e8);

/// Finds `λ` with `h(λ) = 0` for `h` strictly decreasing in `λ`, to relative
/// precision `tol` in `λ`. The bracket grows from [`INITIAL_BRACKET`] up to
/// [`MAX_BRACKET`]; `Ok(None)` means `h(MAX_BRACKET.0) < 0`, i.e. the root lies
/// below the bracket.
pub fn decreasing_root<F>(mut h: F, tol: f64, what: &str) -> Result<Option<f64>>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (mut lo, mut hi) = INITIAL_BRACKET;
    let mut h_lo = h(lo)?;
    while h_lo < 0.0 {
        if lo <= MAX_BRACKET.0 {
            return Ok(None);
        }
        hi = lo;
        lo = (lo * 1e-2).max(MAX_BRACKET.0);
        h_lo = h(lo)?;
    }
    let mut h_hi = h(hi)?;
    while h_hi > 0.0 {
        if hi >= MAX_BRACKET.1 {
            return Err(Error::OutOfRange {
                what: what.to_string(),
                lo: MAX_BRACKET.0,
                hi: MAX_BRACKET.1,
            });
        }
        lo = hi;
        h_lo = h_hi;
        hi = (hi * 10.0).min(MAX_BRACKET.1);
        h_hi = h(hi)?;
    }
    if h_lo == 0.0 {
        return Ok(Some(lo));
    }
    if h_hi == 0.0 {
        return Ok(Some(hi));
    }
    // Illinois false position on (ln λ, h), falling back to bisection.
    let (mut a, mut b) = (lo.ln(), hi.ln());
    let (mut fa, mut fb) = (h_lo, h_hi);
    let mut side = 0i8;
    for _ in 0..200 {
        if (b - a) <= tol {
            break;
        }
        let mut m = (a * fb - b * fa) / (fb - fa);
        if !(m > a && m < b) {
            m = 0.5 * (a + b);
        }
        let fm = h(m.exp())?;
        if fm == 0.0 {
            return Ok(Some(m.exp()));
        }
        if fm > 0.0 {
            a = m;
            fa = fm;
            if side == 1 {
                fb *= 0.5;
            }
            side = 1;
        } else {
            b = m;
            fb = fm;
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        }
    }
    Ok(Some((0.5 * (a + b)).exp()))
}

/// Bisection for `h(x) = 0` on `[a, b]` with `h` strictly increasing.
pub fn increasing_bisection<F>(mut h: F, mut a: f64, mut b: f64, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    for _ in 0..300 {
        if b - a <= tol * b.abs().max(f64::MIN_POSITIVE) {
            break;
        }
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        if h(m)? < 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// Golden-section search for a maximum of `f` on `[a, b]`.
pub fn golden_max<F: Fn(f64) -> f64>(
    f: F,
    mut a: f64,
    mut b: f64,
    iterations: usize,
) -> (f64, f64) {
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..iterations {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = f(d);
        }
    }
    if fc > fd {
        (c, fc)
    } else {
        (d, fd)
    }
}
