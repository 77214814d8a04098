//! Eigenvalues of the clamped operator as zeros of the boundary determinant
//! on the characteristic basis `μ^{2r} = (-1)^r λ`. Independent of the
//! Galerkin route.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{invalid, Result};

/// Determinant of the `2r × 2r` clamped homogeneous system in a real basis,
/// divided by the product of its column norms (so it lies in `[-1, 1]`).
///
/// Basis: for each root `μ = aω` with `Im ω > 0`, the real and imaginary parts
/// of `e^{μ(x-A)}`; for each real root, `e^{μ(x-A)}`. The anchor `A` is the
/// end where the exponential is largest (`0` for purely oscillatory roots).
/// Row `s` holds derivatives divided by `a^s`.
pub fn eigen_determinant(r: usize, lambda: f64) -> f64 {
    assert!(r >= 1 && lambda > 0.0);
    let a = lambda.powf(1.0 / (2 * r) as f64);
    let pi = std::f64::consts::PI;
    let omegas: Vec<Complex64> = (0..2 * r)
        .map(|j| {
            let angle = if r % 2 == 0 {
                pi * j as f64 / r as f64
            } else {
                pi * (2 * j + 1) as f64 / (2 * r) as f64
            };
            Complex64::from_polar(1.0, angle)
        })
        .collect();
    // columns: (omega, anchor, part) with part 0 = real/whole, 1 = imaginary
    let mut columns: Vec<(Complex64, f64, u8)> = Vec::with_capacity(2 * r);
    for w in &omegas {
        let anchor = if w.re > 1e-12 {
            1.0
        } else if w.re < -1e-12 {
            -1.0
        } else {
            0.0
        };
        if w.im.abs() < 1e-12 {
            columns.push((Complex64::new(w.re, 0.0), anchor, 0));
        } else if w.im > 0.0 {
            columns.push((*w, anchor, 0));
            columns.push((*w, anchor, 1));
        }
    }
    let n = 2 * r;
    let m = DMatrix::from_fn(n, n, |row, col| {
        let (w, anchor, part) = columns[col];
        let (s, x) = if row < r { (row, -1.0) } else { (row - r, 1.0) };
        let v = w.powu(s as u32) * (w * a * (x - anchor)).exp();
        if part == 0 {
            v.re
        } else {
            v.im
        }
    });
    let scale: f64 = (0..n).map(|j| m.column(j).norm()).product();
    m.determinant() / scale
}

/// The first `count` eigenvalues of `𝒜` located by scanning
/// `a = λ^{1/(2r)}` for sign changes of the determinant and bisecting.
pub fn determinant_eigenvalues(r: usize, count: usize) -> Result<Vec<f64>> {
    if r == 0 {
        return Err(invalid("r must be at least 1"));
    }
    let det = |a: f64| eigen_determinant(r, a.powi(2 * r as i32));
    let step = 0.02;
    let mut roots = Vec::with_capacity(count);
    let mut lo = 0.05;
    let mut f_lo = det(lo);
    while roots.len() < count {
        let hi = lo + step;
        let f_hi = det(hi);
        if f_lo == 0.0 {
            roots.push(lo.powi(2 * r as i32));
        } else if f_lo.signum() != f_hi.signum() {
            let (mut a, mut b, mut fa) = (lo, hi, f_lo);
            for _ in 0..200 {
                let mid = 0.5 * (a + b);
                if mid <= a || mid >= b {
                    break;
                }
                let fm = det(mid);
                if fm == 0.0 {
                    a = mid;
                    b = mid;
                    break;
                }
                if fm.signum() == fa.signum() {
                    a = mid;
                    fa = fm;
                } else {
                    b = mid;
                }
            }
            roots.push((0.5 * (a + b)).powi(2 * r as i32));
        }
        lo = hi;
        f_lo = f_hi;
        if lo > 1e4 {
            break;
        }
    }
    Ok(roots)
}
