//! Green's kernel of `𝒜⁻¹`:
//! `𝒜⁻¹u(x) = (-1)^r ∫ K(x,ξ) u(ξ) dξ`,
//! `K(x,ξ) = (x-ξ)_+^{2r-1}/(2r-1)! - row(ξ) · F(x)`,
//! `row(ξ) = ((1-ξ)^{2r-1}/(2r-1)!, ..., (1-ξ)^r/r!)`,
//! `F(x) = M⁻¹ ((x+1)^{r+i}/(r+i)!)_i`, `M_{ij} = 2^{r+i-j}/(r+i-j)!`.

use nalgebra::{DMatrix, DVector, Dyn, FullPivLU};

use crate::error::{invalid, Error, Result};
use crate::poly_core::quadrature::GaussLegendre;
use crate::poly_core::{clamped_left_polynomial, factorial, PiecewisePolynomial, Side};

#[derive(Debug, Clone)]
pub struct GreensKernel {
    r: usize,
    matrix: DMatrix<f64>,
    lu: FullPivLU<f64, Dyn, Dyn>,
}

impl GreensKernel {
    pub fn new(r: usize) -> Result<Self> {
        if r == 0 {
            return Err(invalid("r must be at least 1"));
        }
        let m = DMatrix::from_fn(r, r, |i, j| {
            let p = r + i - j;
            2f64.powi(p as i32) / factorial(p)
        });
        let lu = m.clone().full_piv_lu();
        if !lu.is_invertible() {
            return Err(Error::Internal(format!(
                "kernel matrix singular for r = {r}"
            )));
        }
        Ok(GreensKernel { r, matrix: m, lu })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// The column vector `F(x)`.
    pub fn f_vector(&self, x: f64) -> Vec<f64> {
        let r = self.r;
        let g = DVector::from_fn(r, |i, _| (x + 1.0).powi((r + i) as i32) / factorial(r + i));
        let mut f = self.lu.solve(&g).expect("invertible");
        for _ in 0..2 {
            let residual = &g - &self.matrix * &f;
            f += self.lu.solve(&residual).expect("invertible");
        }
        f.iter().copied().collect()
    }

    pub fn value(&self, x: f64, xi: f64) -> f64 {
        let r = self.r;
        let n = 2 * r - 1;
        let plus = if x > xi {
            (x - xi).powi(n as i32) / factorial(n)
        } else {
            0.0
        };
        let f = self.f_vector(x);
        let row: f64 = (0..r)
            .map(|i| (1.0 - xi).powi((n - i) as i32) / factorial(n - i) * f[i])
            .sum();
        plus - row
    }

    /// `(𝒜⁻¹g)(x)` by Gauss quadrature with `nodes` points on each side of
    /// the kink at `ξ = x`.
    pub fn apply<G: Fn(f64) -> f64>(&self, g: G, x: f64, nodes: usize) -> f64 {
        let rule = GaussLegendre::new(nodes);
        let mut total = 0.0;
        for (a, b) in [(-1.0, x), (x, 1.0)] {
            if b > a {
                total += rule.integrate(a, b, |xi| self.value(x, xi) * g(xi));
            }
        }
        if self.r % 2 == 1 {
            -total
        } else {
            total
        }
    }
}

pub fn kernel_value(ker: &GreensKernel, x: f64, xi: f64) -> f64 {
    ker.value(x, xi)
}

/// Exact `𝒜⁻¹u` for a piecewise polynomial `u`:
/// `(-1)^r I^{2r} u` plus the degree `≤ 2r-1` clamping correction.
pub fn inverse_polynomial(r: usize, u: &PiecewisePolynomial) -> PiecewisePolynomial {
    let mut w = u.clone();
    for _ in 0..2 * r {
        w = w.antiderivative();
    }
    if r % 2 == 1 {
        w = w.scale(-1.0);
    }
    let data: Vec<f64> = (0..r)
        .map(|s| -w.derivative_at(s, 1.0, Side::Left))
        .collect();
    w.combine(1.0, &clamped_left_polynomial(&data), 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn string_green_function() {
        // r = 1: 𝒜⁻¹ 1 solves -w'' = 1, w(±1) = 0, so w = (1 - x²)/2
        let k = GreensKernel::new(1).unwrap();
        for x in [-0.9, -0.2, 0.0, 0.6] {
            let w = k.apply(|_| 1.0, x, 8);
            assert!((w - (1.0 - x * x) / 2.0).abs() < 1e-13);
        }
        let w = inverse_polynomial(1, &PiecewisePolynomial::constant(1.0));
        for x in [-1.0, -0.3, 0.7, 1.0] {
            assert!((w.evaluate(x, Side::Right) - (1.0 - x * x) / 2.0).abs() < 1e-14);
        }
    }

    #[test]
    fn f_vector_endpoint_derivatives() {
        for r in 1..=8 {
            let k = GreensKernel::new(r).unwrap();
            let f = k.f_vector(1.0);
            for (i, v) in f.iter().enumerate() {
                let target = if i == 0 { 1.0 } else { 0.0 };
                assert!((v - target).abs() < 1e-10, "r={r} i={i}");
            }
            assert!(k.f_vector(-1.0).iter().all(|v| v.abs() < 1e-15));
        }
    }

    #[test]
    fn kernel_is_bounded_and_symmetric() {
        for r in 1..=4 {
            let k = GreensKernel::new(r).unwrap();
            for i in 0..=20 {
                for j in 0..=20 {
                    let x = -1.0 + 0.1 * i as f64;
                    let xi = -1.0 + 0.1 * j as f64;
                    let v = k.value(x, xi);
                    assert!(v.abs() < 2f64.powi(2 * r as i32));
                    assert!((v - k.value(xi, x)).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn polynomial_inverse_is_clamped_solution() {
        let u = crate::poly_core::u0_interior(3, 1, 0.2).unwrap();
        let w = inverse_polynomial(3, &u);
        for s in 0..3 {
            assert!(w.derivative_at(s, -1.0, Side::Right).abs() < 1e-13);
            assert!(w.derivative_at(s, 1.0, Side::Left).abs() < 1e-13);
        }
        for x in [-0.7, 0.1, 0.5] {
            let lhs = -w.derivative_at(6, x, Side::Right);
            assert!((lhs - u.evaluate(x, Side::Right)).abs() < 1e-9);
        }
    }
}
