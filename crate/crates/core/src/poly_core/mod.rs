//! Polynomial and piecewise-polynomial algebra on [-1, 1], the pointwise
//! Markov-Nikolskii constants, and the polynomial (`λ = 0`) solutions of the
//! endpoint and interior boundary problems.

pub mod legendre;
pub mod piecewise;
pub mod quadrature;

use crate::error::{invalid, Result};
pub use legendre::OrthonormalPolyBasis;
pub use piecewise::{PiecewisePolynomial, Side};

/// Norm of the functional `Q ↦ Q^{(k)}(t)` on polynomials of degree `≤ r-1`
/// with the `L2[-1,1]` norm:
/// `M_t = sqrt(Σ_{n=k}^{r-1} (p_n^{(k)}(t))²)` over the orthonormal Legendre basis.
pub fn markov_constant(r: usize, k: usize, t: f64) -> Result<f64> {
    check_orders(r, k)?;
    if !(-1.0..=1.0).contains(&t) {
        return Err(invalid(format!("t = {t} lies outside [-1, 1]")));
    }
    let values = OrthonormalPolyBasis::new(r).derivatives_at(k, t);
    Ok(values.iter().map(|v| v * v).sum::<f64>().sqrt())
}

pub(crate) fn check_orders(r: usize, k: usize) -> Result<()> {
    if r == 0 {
        return Err(invalid("r must be at least 1"));
    }
    if k >= r {
        return Err(invalid(format!(
            "k = {k} must satisfy k <= r - 1 = {}",
            r - 1
        )));
    }
    Ok(())
}

/// The endpoint data value `(-1)^{k-1}` carried by derivative `r-k-1`.
pub(crate) fn jump_sign(k: usize) -> f64 {
    if k % 2 == 0 {
        -1.0
    } else {
        1.0
    }
}

/// Polynomial of degree `≤ 2r-1` with `u^{(s)}(-1) = (-1)^{k-1} δ_{r-k-1,s}`
/// and `u^{(s)}(1) = 0` for `s = 0..r-1`.
///
/// Stored as two pieces split at 0, each expanded about its own end so that
/// the boundary data at both ends are reproduced exactly; the derivative
/// magnitudes grow factorially in `r` and a single expansion would lose the
/// zeros at `x = 1` to cancellation.
pub fn u0_endpoint(r: usize, k: usize) -> Result<PiecewisePolynomial> {
    check_orders(r, k)?;
    let mut data = vec![0.0; r];
    data[r - k - 1] = jump_sign(k);
    let h = Hermite::new(&data, -2.0);
    let left = h.about_data_end(&data);
    let right = h.about_zero_end();
    PiecewisePolynomial::from_taylor_pieces(vec![-1.0, 0.0, 1.0], |i| {
        if i == 0 {
            (-1.0, left.clone())
        } else {
            (1.0, right.clone())
        }
    })
}

/// Two-piece polynomial on `[-1, t] ∪ [t, 1]` with clamped ends and the jump
/// `u^{(s)}(t+0) - u^{(s)}(t-0) = (-1)^{k-1} δ_{r-k-1,s}`, `s = 0..2r-1`.
///
/// Built as `P + J` with `J(x) = (-1)^{k-1} (x-t)_+^{m} / m!`, `m = r-k-1`,
/// and `P` a global polynomial of degree `≤ 2r-1` cancelling `J` at `x = 1`.
pub fn u0_interior(r: usize, k: usize, t: f64) -> Result<PiecewisePolynomial> {
    check_orders(r, k)?;
    if !(t > -1.0 && t < 1.0) {
        return Err(invalid(format!(
            "interior point t = {t} must lie strictly inside (-1, 1); use the endpoint problem"
        )));
    }
    let m = r - k - 1;
    let sign = jump_sign(k);
    // J about x = 1: sign (y + (1-t))^m / m!, y = x - 1.
    let mut jump = vec![0.0; m + 1];
    for (s, c) in jump.iter_mut().enumerate() {
        *c = sign * (1.0 - t).powi((m - s) as i32) / (factorial(s) * factorial(m - s));
    }
    let data: Vec<f64> = (0..r)
        .map(|s| if s <= m { -jump[s] * factorial(s) } else { 0.0 })
        .collect();
    let h = Hermite::new(&data, 2.0);
    let left = h.about_zero_end();
    let mut right = h.about_data_end(&data);
    for (j, v) in jump.iter().enumerate() {
        right[j] += v;
    }
    for c in right.iter_mut().take(r) {
        *c = 0.0;
    }
    PiecewisePolynomial::from_taylor_pieces(vec![-1.0, t, 1.0], |i| {
        if i == 0 {
            (-1.0, left.clone())
        } else {
            (1.0, right.clone())
        }
    })
}

/// The degree `≤ 2r-1` polynomial with `h^{(s)}(-1) = 0` and
/// `h^{(s)}(1) = data[s]`, `s = 0..r-1`, where `r = data.len()`.
pub(crate) fn clamped_left_polynomial(data: &[f64]) -> PiecewisePolynomial {
    let h = Hermite::new(data, 2.0);
    let coeffs = h.about_data_end(data);
    PiecewisePolynomial::from_taylor_pieces(vec![-1.0, 1.0], |_| (1.0, coeffs.clone()))
        .expect("valid breakpoints")
}

/// The degree `≤ 2r-1` polynomial with prescribed derivatives `0..r-1` at an
/// endpoint `a` and a zero of order `r` at `b = a - d`, written as
/// `P = (y + d)^r Q(y)` with `y = x - a`.
struct Hermite {
    r: usize,
    d: f64,
    /// Taylor coefficients of `Q` about `a`.
    q: Vec<f64>,
}

impl Hermite {
    fn new(data: &[f64], d: f64) -> Self {
        let r = data.len();
        // (y + d)^{-r} = d^{-r} Σ_j C(-r, j) (y/d)^j
        let inv: Vec<f64> = (0..r)
            .map(|j| {
                let c = binomial(r + j - 1, j) * if j % 2 == 0 { 1.0 } else { -1.0 };
                c / d.powi((r + j) as i32)
            })
            .collect();
        let q = (0..r)
            .map(|i| (0..=i).map(|j| data[j] / factorial(j) * inv[i - j]).sum())
            .collect();
        Hermite { r, d, q }
    }

    /// Taylor coefficients of `P` about `a`, with the data entries exact.
    fn about_data_end(&self, data: &[f64]) -> Vec<f64> {
        let r = self.r;
        let mut out = vec![0.0; 2 * r];
        for (i, qi) in self.q.iter().enumerate() {
            for j in 0..=r {
                out[i + j] += qi * binomial(r, j) * self.d.powi((r - j) as i32);
            }
        }
        for s in 0..r {
            out[s] = data[s] / factorial(s);
        }
        out
    }

    /// Taylor coefficients of `P` about `b`: `z^r Q(z - d)`, `z = x - b`.
    fn about_zero_end(&self) -> Vec<f64> {
        let r = self.r;
        let mut out = vec![0.0; 2 * r];
        for i in 0..r {
            out[r + i] = (i..r)
                .map(|j| self.q[j] * binomial(j, i) * (-self.d).powi((j - i) as i32))
                .sum();
        }
        out
    }
}

pub(crate) fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, v| acc * v as f64)
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn markov_small_cases() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        for t in [-1.0, -0.3, 0.0, 0.9] {
            assert!((markov_constant(1, 0, t).unwrap() - s).abs() < 1e-15);
            assert!((markov_constant(2, 1, t).unwrap() - 1.5f64.sqrt()).abs() < 1e-14);
        }
        assert!((markov_constant(2, 0, -1.0).unwrap() - 2f64.sqrt()).abs() < 1e-14);
        assert!(markov_constant(2, 2, 0.0).is_err());
        assert!(markov_constant(2, 0, 1.5).is_err());
    }

    #[test]
    fn markov_brute_force_quadratic_direction() {
        // max over Q = a + b x of |Q(-1)| / ‖Q‖ by scanning the direction angle.
        let mut best: f64 = 0.0;
        for i in 0..200_000 {
            let th = std::f64::consts::PI * i as f64 / 200_000.0;
            let (a, b) = (th.cos(), th.sin());
            let norm = (2.0 * a * a + 2.0 * b * b / 3.0).sqrt();
            best = best.max((a - b).abs() / norm);
        }
        assert!((best - markov_constant(2, 0, -1.0).unwrap()).abs() < 1e-8);
    }

    #[test]
    fn u0_endpoint_linear_case() {
        let u = u0_endpoint(1, 0).unwrap();
        for x in [-1.0, -0.2, 0.5, 1.0] {
            assert!((u.evaluate(x, Side::Right) - (x - 1.0) / 2.0).abs() < 1e-15);
        }
        let d = u.differentiate(1);
        assert!((d.norm() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    }

    fn endpoint_residual(r: usize, k: usize) -> f64 {
        let u = u0_endpoint(r, k).unwrap();
        let mut worst: f64 = 0.0;
        for s in 0..r {
            let target = if s == r - k - 1 { jump_sign(k) } else { 0.0 };
            worst = worst.max((u.derivative_at(s, -1.0, Side::Right) - target).abs());
            worst = worst.max(u.derivative_at(s, 1.0, Side::Left).abs());
        }
        worst
    }

    // Residuals relative to the largest derivative magnitude of the pieces,
    // which grows like (1+t)^{-2r} as t approaches -1.
    fn derivative_scale(u: &PiecewisePolynomial, r: usize, t: f64) -> f64 {
        let mut scale: f64 = 1.0;
        for s in 0..2 * r {
            for x in [-1.0, t, 1.0] {
                for side in [Side::Left, Side::Right] {
                    scale = scale.max(u.derivative_at(s, x, side).abs());
                }
            }
        }
        scale
    }

    fn interior_residual(r: usize, k: usize, t: f64) -> f64 {
        let u = u0_interior(r, k, t).unwrap();
        let scale = derivative_scale(&u, r, t);
        let mut worst: f64 = 0.0;
        for s in 0..r {
            worst = worst.max(u.derivative_at(s, -1.0, Side::Right).abs());
            worst = worst.max(u.derivative_at(s, 1.0, Side::Left).abs());
        }
        for s in 0..2 * r {
            let target = if s == r - k - 1 { jump_sign(k) } else { 0.0 };
            let jump = u.derivative_at(s, t, Side::Right) - u.derivative_at(s, t, Side::Left);
            worst = worst.max((jump - target).abs());
        }
        worst / scale
    }

    #[test]
    fn boundary_residuals_small() {
        for r in 1..=8 {
            for k in 0..r {
                // absolute for moderate r; beyond that the data derivatives
                // reach 1e10 and the bound is taken relative to them
                let res = endpoint_residual(r, k);
                let u = u0_endpoint(r, k).unwrap();
                let tol = if r <= 6 {
                    1e-12
                } else {
                    1e-15 * derivative_scale(&u, r, 0.0)
                };
                assert!(res < tol, "r={r} k={k} residual={res:e}");
                for t in [-0.9, -0.3, 0.0, 0.45, 0.8] {
                    let res = interior_residual(r, k, t);
                    assert!(res < 1e-12, "r={r} k={k} t={t} residual={res:e}");
                }
            }
        }
    }

    #[test]
    fn interior_r_one_at_zero() {
        // u = (1+x)/2 on [-1,0], -(1-x)/2 on [0,1]: jump -1 at 0
        let u = u0_interior(1, 0, 0.0).unwrap();
        assert!((u.evaluate(-0.5, Side::Right) - 0.25).abs() < 1e-15);
        assert!((u.evaluate(0.5, Side::Right) + 0.25).abs() < 1e-15);
    }

    #[test]
    fn r_th_derivative_norm_is_markov_constant() {
        for r in 1..=6 {
            for k in 0..r {
                let u = u0_endpoint(r, k).unwrap();
                let m = markov_constant(r, k, -1.0).unwrap();
                assert!(
                    (u.differentiate(r).norm() - m).abs() < 1e-10 * m,
                    "r={r} k={k}"
                );
                for t in [-0.7, 0.0, 0.3] {
                    let u = u0_interior(r, k, t).unwrap();
                    let m = markov_constant(r, k, t).unwrap();
                    assert!((u.differentiate(r).norm() - m).abs() < 1e-10 * m);
                }
            }
        }
        let u = u0_interior(2, 1, 0.0).unwrap();
        assert!((u.differentiate(2).norm() - 1.5f64.sqrt()).abs() < 1e-13);
        let u = u0_interior(2, 0, 0.0).unwrap();
        assert!((u.differentiate(2).norm() - 0.5f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn interior_higher_derivatives_continuous() {
        for r in 1..=5 {
            for k in 0..r {
                let u = u0_interior(r, k, 0.2).unwrap();
                let scale = derivative_scale(&u, r, 0.2);
                for s in (r - k)..2 * r {
                    let jump =
                        u.derivative_at(s, 0.2, Side::Right) - u.derivative_at(s, 0.2, Side::Left);
                    assert!(jump.abs() < 1e-13 * scale, "r={r} k={k} s={s}");
                }
            }
        }
    }

    #[test]
    fn finite_differences_of_second_derivative() {
        // r = 2, k = 1: p_{-1} = (-1)^r u0
        let p = u0_endpoint(2, 1).unwrap();
        let d2 = p.differentiate(2);
        let h = 1e-4;
        for i in 0..10 {
            let x = -0.9 + 0.2 * i as f64;
            let fd = (p.evaluate(x + h, Side::Right) - 2.0 * p.evaluate(x, Side::Right)
                + p.evaluate(x - h, Side::Right))
                / (h * h);
            assert!((fd - d2.evaluate(x, Side::Right)).abs() < 1e-6);
        }
    }

    #[test]
    fn markov_supremum_sits_at_endpoints() {
        for r in 1..=6 {
            for k in 0..r {
                let end = markov_constant(r, k, -1.0).unwrap();
                let other = markov_constant(r, k, 1.0).unwrap();
                assert!((end - other).abs() < 1e-12 * end);
                for i in 0..=1000 {
                    let t = -1.0 + 2.0 * i as f64 / 1000.0;
                    assert!(markov_constant(r, k, t).unwrap() <= end * (1.0 + 1e-13));
                }
            }
        }
    }

    proptest! {
        #[test]
        fn markov_is_even_in_t(r in 1usize..=6, kk in 0usize..6, t in -1.0f64..=1.0) {
            let k = kk % r;
            let a = markov_constant(r, k, t).unwrap();
            let b = markov_constant(r, k, -t).unwrap();
            prop_assert!((a - b).abs() <= 1e-12 * a.max(1.0));
        }
    }
}
