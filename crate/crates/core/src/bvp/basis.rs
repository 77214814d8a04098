//! Local solution bases of `u^{(2r)} = σλ u`, `σ = (-1)^{r+1}`, on one piece.
//!
//! Short pieces (`λ^{1/(2r)} L ≤ 4`) use the entire-function Taylor basis
//! `T_m(y) = Σ_n (σλ)^n y^{2rn+m} / (2rn+m)!` about the piece midpoint; longer
//! ones use exponentials `e^{μ(x - anchor)}` anchored at the end where they
//! are largest, so every basis value is bounded by one on the piece.

use num_complex::Complex64;

use crate::poly_core::quadrature::GaussLegendre;

/// Switch from the Taylor to the exponential basis above this `aL`.
pub(crate) const TAYLOR_LIMIT: f64 = 4.0;

/// The `2r` characteristic roots `μ_j`, `μ_j^{2r} = (-1)^{r+1} λ`.
#[derive(Debug, Clone, PartialEq)]
pub struct CharacteristicBasis {
    pub lambda: f64,
    pub roots: Vec<Complex64>,
}

impl CharacteristicBasis {
    pub fn new(r: usize, lambda: f64) -> Self {
        let a = lambda.powf(1.0 / (2 * r) as f64);
        let roots = unit_roots(r).into_iter().map(|w| w * a).collect();
        CharacteristicBasis { lambda, roots }
    }

    /// Index of the conjugate partner of every root.
    pub fn conjugate_index(&self) -> Vec<usize> {
        conjugate_index(&self.roots)
    }

    /// Largest `|μ^{2r} - (-1)^{r+1} λ| / λ` over the roots.
    pub fn root_residual(&self) -> f64 {
        let n = self.roots.len() as i32;
        let sigma = if (n / 2) % 2 == 1 { 1.0 } else { -1.0 };
        self.roots
            .iter()
            .map(|m| (m.powi(n) - sigma * self.lambda).norm() / self.lambda)
            .fold(0.0, f64::max)
    }
}

/// Solutions of `ω^{2r} = (-1)^{r+1}`.
pub(crate) fn unit_roots(r: usize) -> Vec<Complex64> {
    let pi = std::f64::consts::PI;
    (0..2 * r)
        .map(|j| {
            let angle = if r % 2 == 1 {
                pi * j as f64 / r as f64
            } else {
                pi * (2 * j + 1) as f64 / (2 * r) as f64
            };
            Complex64::from_polar(1.0, angle)
        })
        .collect()
}

pub(crate) fn conjugate_index(roots: &[Complex64]) -> Vec<usize> {
    roots
        .iter()
        .map(|m| {
            let target = m.conj();
            (0..roots.len())
                .min_by(|&a, &b| {
                    (roots[a] - target)
                        .norm()
                        .total_cmp(&(roots[b] - target).norm())
                })
                .unwrap()
        })
        .collect()
}

#[derive(Debug, Clone)]
pub(crate) enum PieceBasis {
    Taylor {
        center: f64,
        r: usize,
        /// `σλ`
        scaled_lambda: f64,
    },
    Exponential {
        roots: Vec<Complex64>,
        anchors: Vec<f64>,
    },
}

impl PieceBasis {
    pub(crate) fn new(r: usize, lambda: f64, lo: f64, hi: f64) -> Self {
        let basis = CharacteristicBasis::new(r, lambda);
        let a = lambda.powf(1.0 / (2 * r) as f64);
        if a * (hi - lo) <= TAYLOR_LIMIT {
            let sigma = if r % 2 == 1 { 1.0 } else { -1.0 };
            PieceBasis::Taylor {
                center: 0.5 * (lo + hi),
                r,
                scaled_lambda: sigma * lambda,
            }
        } else {
            let anchors = basis
                .roots
                .iter()
                .map(|m| if m.re > 0.0 { hi } else { lo })
                .collect();
            PieceBasis::Exponential {
                roots: basis.roots,
                anchors,
            }
        }
    }

    pub(crate) fn is_taylor(&self) -> bool {
        matches!(self, PieceBasis::Taylor { .. })
    }

    /// `s`-th derivatives of every basis function at `x`.
    pub(crate) fn column_values(&self, s: usize, x: f64) -> Vec<Complex64> {
        match self {
            PieceBasis::Taylor {
                center,
                r,
                scaled_lambda,
            } => (0..2 * r)
                .map(|m| {
                    Complex64::new(taylor_derivative(*r, *scaled_lambda, m, s, x - center), 0.0)
                })
                .collect(),
            PieceBasis::Exponential { roots, anchors } => roots
                .iter()
                .zip(anchors)
                .map(|(m, &a)| m.powu(s as u32) * (m * (x - a)).exp())
                .collect(),
        }
    }

    pub(crate) fn evaluate(&self, coeffs: &[Complex64], s: usize, x: f64) -> f64 {
        self.column_values(s, x)
            .iter()
            .zip(coeffs)
            .map(|(v, c)| (v * c).re)
            .sum()
    }

    /// `∫_lo^hi (u^{(s)})² dx` for the real function with these coefficients.
    pub(crate) fn norm_squared(&self, coeffs: &[Complex64], s: usize, lo: f64, hi: f64) -> f64 {
        match self {
            PieceBasis::Taylor { .. } => {
                let rule = GaussLegendre::new(40);
                rule.integrate(lo, hi, |x| self.evaluate(coeffs, s, x).powi(2))
            }
            PieceBasis::Exponential { roots, anchors } => {
                let len = hi - lo;
                let d: Vec<Complex64> = roots
                    .iter()
                    .zip(coeffs)
                    .map(|(m, c)| c * m.powu(s as u32))
                    .collect();
                let mut total = Complex64::new(0.0, 0.0);
                for i in 0..roots.len() {
                    for j in 0..roots.len() {
                        let nu = roots[i] + roots[j].conj();
                        let e_lo =
                            roots[i] * (lo - anchors[i]) + roots[j].conj() * (lo - anchors[j]);
                        let e_hi = e_lo + nu * len;
                        let integral = if e_hi.re >= e_lo.re {
                            len * e_hi.exp() * phi1(-nu * len)
                        } else {
                            len * e_lo.exp() * phi1(nu * len)
                        };
                        total += d[i] * d[j].conj() * integral;
                    }
                }
                total.re
            }
        }
    }
}

/// `(e^z - 1) / z`, by series near zero.
pub(crate) fn phi1(z: Complex64) -> Complex64 {
    if z.norm() < 0.1 {
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = term;
        for n in 2..16 {
            term = term * z / n as f64;
            sum += term;
        }
        sum
    } else {
        (z.exp() - 1.0) / z
    }
}

/// `T_m^{(s)}(y)`; each derivative lowers `m` by one, wrapping to
/// `m + 2r - 1` with a factor `σλ`.
pub(crate) fn taylor_derivative(r: usize, scaled_lambda: f64, m: usize, s: usize, y: f64) -> f64 {
    let two_r = 2 * r as i64;
    let mut index = m as i64 - s as i64;
    let mut factor = 1.0;
    while index < 0 {
        index += two_r;
        factor *= scaled_lambda;
    }
    if factor == 0.0 {
        return 0.0;
    }
    factor * taylor_value(r, scaled_lambda, index as usize, y)
}

fn taylor_value(r: usize, scaled_lambda: f64, m: usize, y: f64) -> f64 {
    let mut term = 1.0;
    for i in 1..=m {
        term *= y / i as f64;
    }
    let mut sum = term;
    if scaled_lambda == 0.0 || y == 0.0 {
        return sum;
    }
    let y2r = y.powi(2 * r as i32);
    let mut degree = m;
    for _ in 0..400 {
        let mut ratio = scaled_lambda * y2r;
        for i in 1..=2 * r {
            ratio /= (degree + i) as f64;
        }
        degree += 2 * r;
        term *= ratio;
        sum += term;
        if term.abs() <= 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}
