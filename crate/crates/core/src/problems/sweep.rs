//! Validity of `|f^{(k)}(t)| ≤ A‖f‖₂ + B‖f^{(r)}‖₂` on a fixed family of
//! smooth test functions.

use std::f64::consts::PI;

use rayon::prelude::*;

use super::TradeoffPoint;
use crate::poly_core::quadrature::GaussLegendre;

/// A smooth function on `[-1, 1]` with closed-form derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TestFunction {
    /// `x^n`.
    Monomial(u32),
    /// `sin(ωx + φ)`.
    Sine { omega: f64, phase: f64 },
    /// `e^{cx}`.
    Exp(f64),
    /// `(1 + x)^n`.
    RisingPower(u32),
    /// `(1 - x)^n`.
    FallingPower(u32),
    /// `1/(a - x)` with `|a| > 1`.
    Pole(f64),
}

fn falling(n: u32, s: usize) -> f64 {
    (0..s as u32).map(|i| (n - i) as f64).product()
}

impl TestFunction {
    /// `f^{(s)}(x)`.
    pub fn derivative(&self, s: usize, x: f64) -> f64 {
        match *self {
            TestFunction::Monomial(n) => {
                if s as u32 > n {
                    0.0
                } else {
                    falling(n, s) * x.powi((n - s as u32) as i32)
                }
            }
            TestFunction::Sine { omega, phase } => {
                omega.powi(s as i32) * (omega * x + phase + s as f64 * PI / 2.0).sin()
            }
            TestFunction::Exp(c) => c.powi(s as i32) * (c * x).exp(),
            TestFunction::RisingPower(n) => {
                if s as u32 > n {
                    0.0
                } else {
                    falling(n, s) * (1.0 + x).powi((n - s as u32) as i32)
                }
            }
            TestFunction::FallingPower(n) => {
                if s as u32 > n {
                    0.0
                } else {
                    let sign = if s % 2 == 0 { 1.0 } else { -1.0 };
                    sign * falling(n, s) * (1.0 - x).powi((n - s as u32) as i32)
                }
            }
            TestFunction::Pole(a) => {
                let fact: f64 = (1..=s).map(|i| i as f64).product();
                fact / (a - x).powi(s as i32 + 1)
            }
        }
    }

    /// `‖f^{(s)}‖₂` by composite Gauss quadrature.
    pub fn norm(&self, s: usize) -> f64 {
        let rule = GaussLegendre::new(24);
        let pieces = 32;
        (0..pieces)
            .map(|i| {
                let lo = -1.0 + 2.0 * i as f64 / pieces as f64;
                let hi = -1.0 + 2.0 * (i + 1) as f64 / pieces as f64;
                rule.integrate(lo, hi, |x| self.derivative(s, x).powi(2))
            })
            .sum::<f64>()
            .sqrt()
    }
}

/// The fixed family of 50 test functions.
pub fn test_functions() -> Vec<TestFunction> {
    let mut out: Vec<TestFunction> = (0..12).map(TestFunction::Monomial).collect();
    for omega in [0.5, 1.0, 2.0, 3.0, 5.0, 8.0] {
        for phase in [0.0, PI / 3.0] {
            out.push(TestFunction::Sine { omega, phase });
        }
    }
    out.extend([-3.0, -2.0, -1.0, -0.5, 0.5, 1.0, 2.0, 3.0].map(TestFunction::Exp));
    out.extend((1..=6).map(TestFunction::RisingPower));
    out.extend((1..=6).map(TestFunction::FallingPower));
    out.extend([1.5, 2.0, 3.0, -1.5, -2.0, -3.0].map(TestFunction::Pole));
    out
}

/// Worst violation `|f^{(k)}(t)| - A‖f‖ - B‖f^{(r)}‖` with `‖f‖ = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepReport {
    pub checked: usize,
    pub max_violation: f64,
    /// `(point index, function index)` of the worst case.
    pub worst: (usize, usize),
}

pub fn inequality_sweep(points: &[TradeoffPoint]) -> SweepReport {
    let family = test_functions();
    let per_point: Vec<(f64, usize)> = points
        .par_iter()
        .map(|p| {
            let (r, k, t) = (p.spec.r, p.spec.k, p.spec.t());
            family
                .iter()
                .enumerate()
                .map(|(j, f)| {
                    let n0 = f.norm(0);
                    let lhs = f.derivative(k, t).abs() / n0;
                    let rhs = p.a + p.b * f.norm(r) / n0;
                    (lhs - rhs, j)
                })
                .fold(
                    (f64::NEG_INFINITY, 0),
                    |acc, v| if v.0 > acc.0 { v } else { acc },
                )
        })
        .collect();
    let mut report = SweepReport {
        checked: points.len() * family.len(),
        max_violation: f64::NEG_INFINITY,
        worst: (0, 0),
    };
    for (i, &(v, j)) in per_point.iter().enumerate() {
        if v > report.max_violation {
            report.max_violation = v;
            report.worst = (i, j);
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bvp::ProblemSpec;
    use crate::problems::gamma_curve;

    #[test]
    fn family_has_fifty_members() {
        assert_eq!(test_functions().len(), 50);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let h = 1e-5;
        for f in test_functions() {
            for s in 0..4 {
                for &x in &[-0.7, 0.1, 0.6] {
                    let fd = (f.derivative(s, x + h) - f.derivative(s, x - h)) / (2.0 * h);
                    let exact = f.derivative(s + 1, x);
                    assert!(
                        (fd - exact).abs() < 1e-5 * exact.abs().max(1.0),
                        "{f:?} s={s}"
                    );
                }
            }
        }
    }

    #[test]
    fn norms_of_simple_functions() {
        assert!((TestFunction::Monomial(1).norm(0) - (2.0f64 / 3.0).sqrt()).abs() < 1e-14);
        assert!(
            (TestFunction::Sine {
                omega: PI,
                phase: 0.0
            }
            .norm(0)
                - 1.0)
                .abs()
                < 1e-13
        );
    }

    #[test]
    fn endpoint_curve_is_valid() {
        let spec = ProblemSpec::endpoint(2, 1).unwrap();
        let pts = gamma_curve(&spec, &[0.0, 1.0, 100.0]).unwrap();
        let rep = inequality_sweep(&pts);
        assert_eq!(rep.checked, 150);
        assert!(rep.max_violation <= 1e-8, "{rep:?}");
    }
}
