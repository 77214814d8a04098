//! The sharp uniform inequality for `k ∈ {r-2, r-1}` with constants
//! `(‖u₀^{(r)}‖₂, ‖u₀‖₂)`, and grid certificates of the pointwise
//! inequalities behind it.
//!
//! For `k = r-1`, `p₋₁ = (-1)^r u₀` and `p_t = (-1)^r u_{0,t} = p₋₁ - χ_{[-1,t)}`.
//! For `k = r-2`, `p₋₁ = (-1)^{r-1} u₀`, `p₁(x) = p₋₁(-x)`,
//! `p_t = (-1)^{r-1} u_{0,t} = ((1-t)p₋₁ + (1+t)p₁ + δ_t)/2` with
//! `δ_t(x) = -(1-t)(1+x)` on `[-1, t]` and `-(1+t)(1-x)` on `[t, 1]`.

use crate::error::{invalid, Result};
use crate::poly_core::quadrature::GaussLegendre;
use crate::poly_core::{
    check_orders, markov_constant, u0_endpoint, u0_interior, PiecewisePolynomial, Side,
};

/// Default number of points per grid axis.
pub const CERTIFICATE_GRID: usize = 500;

/// Smallest slack `min (rhs - lhs)` of one inequality over its grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridCertificate {
    pub name: &'static str,
    pub min_margin: f64,
    pub t_points: usize,
    pub x_points: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EndpointBoundReport {
    pub r: usize,
    pub k: usize,
    /// `‖u₀^{(r)}‖₂`.
    pub a: f64,
    /// `‖u₀‖₂`.
    pub b: f64,
    pub certificates: Vec<GridCertificate>,
    /// `max_t |2p₋₁(t) + 2p₁(t) - (1 - t²)|` for `k = r-2`; zero up to rounding when `r = 2`.
    pub equality_residual: Option<f64>,
}

impl EndpointBoundReport {
    pub fn min_margin(&self) -> f64 {
        self.certificates
            .iter()
            .map(|c| c.min_margin)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.min_margin() >= -tol
    }
}

pub fn endpoint_bound_certificates(r: usize, k: usize) -> Result<EndpointBoundReport> {
    endpoint_bound_certificates_on_grid(r, k, CERTIFICATE_GRID)
}

pub fn endpoint_bound_certificates_on_grid(
    r: usize,
    k: usize,
    grid: usize,
) -> Result<EndpointBoundReport> {
    check_orders(r, k)?;
    if r < 2 || !(k + 2 == r || k + 1 == r) {
        return Err(invalid(format!(
            "need r ≥ 2 and k ∈ {{r-2, r-1}}, got r = {r}, k = {k}"
        )));
    }
    if grid < 2 {
        return Err(invalid("grid needs at least two points"));
    }
    let u0 = u0_endpoint(r, k)?;
    let a = markov_constant(r, k, -1.0)?;
    let b = u0.norm();
    let (certificates, equality_residual) = if k + 1 == r {
        (top_order(r, &u0, grid)?, None)
    } else {
        let (c, eq) = second_order(r, &u0, grid)?;
        (c, Some(eq))
    };
    Ok(EndpointBoundReport {
        r,
        k,
        a,
        b,
        certificates,
        equality_residual,
    })
}

fn sign(even: bool) -> f64 {
    if even {
        1.0
    } else {
        -1.0
    }
}

/// `∫_{-1}^x (1-τ²)^m dτ` as a polynomial, with its total `γ`.
fn weight_integral(m: usize) -> (PiecewisePolynomial, f64) {
    let mut coeffs = vec![0.0; 2 * m + 1];
    let mut binom = 1.0;
    for j in 0..=m {
        coeffs[2 * j] = sign(j % 2 == 0) * binom;
        binom = binom * (m - j) as f64 / (j + 1) as f64;
    }
    let integral = PiecewisePolynomial::from_monomials(&coeffs).antiderivative();
    let gamma = integral.evaluate(1.0, Side::Left);
    (integral, gamma)
}

fn uniform(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
}

/// `t_j = -1 + j(hi+1)/n`, `j = 1..=n`: excludes `-1`, ends at `hi`.
fn open_left(hi: f64, n: usize) -> impl Iterator<Item = f64> {
    (1..=n).map(move |j| -1.0 + (hi + 1.0) * j as f64 / n as f64)
}

fn top_order(r: usize, u0: &PiecewisePolynomial, n: usize) -> Result<Vec<GridCertificate>> {
    let s = sign(r % 2 == 0);
    let p_left = u0.scale(s);
    let (integral, gamma) = weight_integral(r - 1);
    let formula = uniform(-1.0, 1.0, n)
        .map(|x| {
            let expected = 1.0 - integral.evaluate(x, Side::Right) / gamma;
            -(p_left.evaluate(x, Side::Right) - expected).abs()
        })
        .fold(f64::INFINITY, f64::min);

    let (mut identity, mut bound, mut norm) = (f64::INFINITY, f64::INFINITY, f64::INFINITY);
    let left_norm = p_left.norm();
    // By symmetry only t ≤ 0 is needed; there p₋₁ ≥ 1/2 on [-1, t].
    for t in open_left(0.0, n) {
        let p_t = u0_interior(r, r - 1, t)?.scale(s);
        for x in uniform(-1.0, t, n).map(|x| x.min(t)) {
            let side = if x == t { Side::Left } else { Side::Right };
            let pt = p_t.evaluate(x, side);
            let pl = p_left.evaluate(x, side);
            identity = identity.min(-(pt - (pl - 1.0)).abs());
            bound = bound.min(pl - pt.abs());
        }
        norm = norm.min(left_norm - p_t.norm());
    }
    Ok(vec![
        GridCertificate {
            name: "p_-1 = 1 - (1/gamma) int (1-tau^2)^(r-1)",
            min_margin: formula,
            t_points: 1,
            x_points: n,
        },
        GridCertificate {
            name: "p_t = p_-1 - 1 on [-1,t)",
            min_margin: identity,
            t_points: n,
            x_points: n,
        },
        GridCertificate {
            name: "|p_t| <= p_-1 on [-1,t]",
            min_margin: bound,
            t_points: n,
            x_points: n,
        },
        GridCertificate {
            name: "||p_t|| <= ||p_-1||",
            min_margin: norm,
            t_points: n,
            x_points: 0,
        },
    ])
}

fn delta_t(t: f64, x: f64) -> f64 {
    if x <= t {
        -(1.0 - t) * (1.0 + x)
    } else {
        -(1.0 + t) * (1.0 - x)
    }
}

fn second_order(
    r: usize,
    u0: &PiecewisePolynomial,
    n: usize,
) -> Result<(Vec<GridCertificate>, f64)> {
    let s = sign(r % 2 == 1);
    let p_left = u0.scale(s);
    let p_right = p_left.reflect();

    let (mut identity, mut main) = (f64::INFINITY, f64::INFINITY);
    for t in uniform(-1.0, 1.0, n + 2).skip(1).take(n) {
        let p_t = u0_interior(r, r - 2, t)?.scale(s);
        for x in uniform(-1.0, 1.0, n) {
            let pt = p_t.evaluate(x, Side::Right);
            let split = 0.5
                * ((1.0 - t) * p_left.evaluate(x, Side::Right)
                    + (1.0 + t) * p_right.evaluate(x, Side::Right)
                    + delta_t(t, x));
            identity = identity.min(-(pt - split).abs());
            main = main.min(4.0 * pt - delta_t(t, x));
        }
    }

    let (mut sum_bound, mut equality) = (f64::INFINITY, 0.0f64);
    for t in uniform(-1.0, 1.0, n) {
        let g = 2.0 * p_left.evaluate(t, Side::Right) + 2.0 * p_right.evaluate(t, Side::Right)
            - (1.0 - t * t);
        sum_bound = sum_bound.min(g);
        equality = equality.max(g.abs());
    }

    // (2p₋₁ + 2p₁)'' = -(4/γ')(1-x²)^{r-2}, which makes the sum bound concave-dominated.
    let gamma =
        GaussLegendre::new(r + 2).integrate(-1.0, 1.0, |x| (1.0 - x * x).powi(r as i32 - 2));
    let curvature = uniform(-1.0, 1.0, n)
        .map(|x| {
            let lhs = 2.0 * p_left.derivative_at(2, x, Side::Right)
                + 2.0 * p_right.derivative_at(2, x, Side::Right);
            let rhs = -4.0 / gamma * (1.0 - x * x).powi(r as i32 - 2);
            -(lhs - rhs).abs()
        })
        .fold(f64::INFINITY, f64::min);

    Ok((
        vec![
            GridCertificate {
                name: "p_t = ((1-t)p_-1 + (1+t)p_1 + delta_t)/2",
                min_margin: identity,
                t_points: n,
                x_points: n,
            },
            GridCertificate {
                name: "4p_t >= delta_t",
                min_margin: main,
                t_points: n,
                x_points: n,
            },
            GridCertificate {
                name: "2p_-1(t) + 2p_1(t) >= 1 - t^2",
                min_margin: sum_bound,
                t_points: n,
                x_points: 0,
            },
            GridCertificate {
                name: "(2p_-1 + 2p_1)'' = -(4/gamma)(1-x^2)^(r-2)",
                min_margin: curvature,
                t_points: 0,
                x_points: n,
            },
        ],
        equality,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_integral_gamma() {
        assert!((weight_integral(0).1 - 2.0).abs() < 1e-15);
        assert!((weight_integral(1).1 - 4.0 / 3.0).abs() < 1e-15);
        assert!((weight_integral(2).1 - 16.0 / 15.0).abs() < 1e-15);
    }

    #[test]
    fn r2_certificates() {
        for k in [0, 1] {
            let rep = endpoint_bound_certificates_on_grid(2, k, 60).unwrap();
            assert!(rep.passes(1e-10), "{rep:?}");
            assert!((rep.a - markov_constant(2, k, -1.0).unwrap()).abs() < 1e-15);
        }
        let eq = endpoint_bound_certificates_on_grid(2, 0, 60)
            .unwrap()
            .equality_residual
            .unwrap();
        assert!(eq < 1e-12, "{eq}");
    }

    #[test]
    fn rejects_other_orders() {
        assert!(endpoint_bound_certificates(4, 1).is_err());
        assert!(endpoint_bound_certificates(1, 0).is_err());
    }
}
