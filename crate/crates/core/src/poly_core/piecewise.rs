//! Piecewise polynomials on [-1, 1].
//!
//! Each piece `[a, b]` stores coefficients in the scaled monomial basis
//! `s^j`, `s = (x - c)/h`, with `c` the midpoint and `h` the half-length of the
//! piece. Pieces are independent: nothing forces continuity at breakpoints.

use crate::error::{invalid, Result};
use crate::poly_core::quadrature::GaussLegendre;

/// Which one-sided limit to take at a breakpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Side {
    Left,
    #[default]
    Right,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PiecewisePolynomial {
    breakpoints: Vec<f64>,
    pieces: Vec<Vec<f64>>,
}

impl PiecewisePolynomial {
    pub fn new(breakpoints: Vec<f64>, pieces: Vec<Vec<f64>>) -> Result<Self> {
        if breakpoints.len() < 2 {
            return Err(invalid("need at least two breakpoints"));
        }
        if breakpoints[0] != -1.0 || *breakpoints.last().unwrap() != 1.0 {
            return Err(invalid("breakpoints must start at -1 and end at 1"));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid("breakpoints must be strictly increasing"));
        }
        if pieces.len() != breakpoints.len() - 1 {
            return Err(invalid("piece count must equal breakpoint count - 1"));
        }
        let pieces = pieces
            .into_iter()
            .map(|p| if p.is_empty() { vec![0.0] } else { p })
            .collect();
        Ok(Self {
            breakpoints,
            pieces,
        })
    }

    /// Single piece from ordinary monomial coefficients `Σ a_j x^j`.
    pub fn from_monomials(coeffs: &[f64]) -> Self {
        // On [-1, 1] the midpoint is 0 and the half-length 1.
        Self {
            breakpoints: vec![-1.0, 1.0],
            pieces: vec![if coeffs.is_empty() {
                vec![0.0]
            } else {
                coeffs.to_vec()
            }],
        }
    }

    pub fn zero() -> Self {
        Self::from_monomials(&[0.0])
    }

    pub fn constant(c: f64) -> Self {
        Self::from_monomials(&[c])
    }

    /// Builds a piecewise polynomial whose piece `i` equals
    /// `Σ_j a_j (x - x0)^j` for the `(x0, a)` returned by `piece_fn(i)`.
    pub fn from_taylor_pieces<F>(breakpoints: Vec<f64>, mut piece_fn: F) -> Result<Self>
    where
        F: FnMut(usize) -> (f64, Vec<f64>),
    {
        let n = breakpoints.len().saturating_sub(1);
        let mut pieces = Vec::with_capacity(n);
        for i in 0..n {
            let (x0, coeffs) = piece_fn(i);
            let (c, h) = mid_half(breakpoints[i], breakpoints[i + 1]);
            pieces.push(compose_affine(&coeffs, c - x0, h));
        }
        Self::new(breakpoints, pieces)
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[Vec<f64>] {
        &self.pieces
    }

    pub fn piece_count(&self) -> usize {
        self.pieces.len()
    }

    pub fn degree(&self) -> usize {
        self.pieces
            .iter()
            .map(|p| p.iter().rposition(|&c| c != 0.0).unwrap_or(0))
            .max()
            .unwrap_or(0)
    }

    fn piece_index(&self, x: f64, side: Side) -> usize {
        let n = self.pieces.len();
        let interior = &self.breakpoints[1..n];
        let idx = match side {
            Side::Right => interior.partition_point(|&b| b <= x),
            Side::Left => interior.partition_point(|&b| b < x),
        };
        idx.min(n - 1)
    }

    fn interval(&self, i: usize) -> (f64, f64) {
        (self.breakpoints[i], self.breakpoints[i + 1])
    }

    pub fn evaluate(&self, x: f64, side: Side) -> f64 {
        self.derivative_at(0, x, side)
    }

    /// `p^{(s)}(x)` with one-sided semantics at breakpoints.
    pub fn derivative_at(&self, s: usize, x: f64, side: Side) -> f64 {
        let i = self.piece_index(x, side);
        let (a, b) = self.interval(i);
        let (c, h) = mid_half(a, b);
        let coeffs = &self.pieces[i];
        if s >= coeffs.len() {
            return 0.0;
        }
        let y = (x - c) / h;
        let mut acc = 0.0;
        for j in (s..coeffs.len()).rev() {
            acc = acc * y + coeffs[j] * falling(j, s);
        }
        acc / h.powi(s as i32)
    }

    /// The `s`-th derivative, piece by piece.
    pub fn differentiate(&self, s: usize) -> Self {
        let pieces = self
            .pieces
            .iter()
            .enumerate()
            .map(|(i, coeffs)| {
                let (a, b) = self.interval(i);
                let h = mid_half(a, b).1;
                if s >= coeffs.len() {
                    return vec![0.0];
                }
                let scale = h.powi(-(s as i32));
                (s..coeffs.len())
                    .map(|j| coeffs[j] * falling(j, s) * scale)
                    .collect()
            })
            .collect();
        Self {
            breakpoints: self.breakpoints.clone(),
            pieces,
        }
    }

    /// `x ↦ ∫_{-1}^x p`, continuous across breakpoints.
    pub fn antiderivative(&self) -> Self {
        let mut running = 0.0;
        let mut pieces = Vec::with_capacity(self.pieces.len());
        for (i, coeffs) in self.pieces.iter().enumerate() {
            let (a, b) = self.interval(i);
            let h = mid_half(a, b).1;
            let mut out = vec![0.0; coeffs.len() + 1];
            for (j, &c) in coeffs.iter().enumerate() {
                out[j + 1] = h * c / (j + 1) as f64;
            }
            // value at s = -1 must equal the running integral
            let at_left: f64 = out
                .iter()
                .enumerate()
                .map(|(j, &c)| if j % 2 == 0 { c } else { -c })
                .sum();
            out[0] = running - at_left;
            running = out.iter().sum();
            pieces.push(out);
        }
        Self {
            breakpoints: self.breakpoints.clone(),
            pieces,
        }
    }

    /// Re-expresses `self` on a finer set of breakpoints containing its own.
    pub fn refine(&self, breakpoints: &[f64]) -> Result<Self> {
        for b in &self.breakpoints {
            if !breakpoints.iter().any(|x| x == b) {
                return Err(invalid("refinement must contain the existing breakpoints"));
            }
        }
        let mut pieces = Vec::with_capacity(breakpoints.len() - 1);
        for w in breakpoints.windows(2) {
            let mid = 0.5 * (w[0] + w[1]);
            let i = self.piece_index(mid, Side::Right);
            let (c_old, h_old) = mid_half(self.breakpoints[i], self.breakpoints[i + 1]);
            let (c_new, h_new) = mid_half(w[0], w[1]);
            // s_old = alpha + beta * s_new
            let alpha = (c_new - c_old) / h_old;
            let beta = h_new / h_old;
            pieces.push(compose_affine_scaled(&self.pieces[i], alpha, beta));
        }
        Self::new(breakpoints.to_vec(), pieces)
    }

    /// Linear combination `alpha * self + beta * other` on merged breakpoints.
    pub fn combine(&self, alpha: f64, other: &Self, beta: f64) -> Self {
        let merged = merge_breakpoints(&self.breakpoints, &other.breakpoints);
        let p = self
            .refine(&merged)
            .expect("merged breakpoints contain both sets");
        let q = other
            .refine(&merged)
            .expect("merged breakpoints contain both sets");
        let pieces = p
            .pieces
            .iter()
            .zip(&q.pieces)
            .map(|(a, b)| {
                let n = a.len().max(b.len());
                (0..n)
                    .map(|j| {
                        alpha * a.get(j).copied().unwrap_or(0.0)
                            + beta * b.get(j).copied().unwrap_or(0.0)
                    })
                    .collect()
            })
            .collect();
        Self {
            breakpoints: merged,
            pieces,
        }
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            breakpoints: self.breakpoints.clone(),
            pieces: self
                .pieces
                .iter()
                .map(|p| p.iter().map(|c| c * factor).collect())
                .collect(),
        }
    }

    /// Pointwise product on merged breakpoints.
    pub fn multiply(&self, other: &Self) -> Self {
        let merged = merge_breakpoints(&self.breakpoints, &other.breakpoints);
        let p = self
            .refine(&merged)
            .expect("merged breakpoints contain both sets");
        let q = other
            .refine(&merged)
            .expect("merged breakpoints contain both sets");
        let pieces = p
            .pieces
            .iter()
            .zip(&q.pieces)
            .map(|(a, b)| {
                let mut out = vec![0.0; a.len() + b.len() - 1];
                for (i, x) in a.iter().enumerate() {
                    for (j, y) in b.iter().enumerate() {
                        out[i + j] += x * y;
                    }
                }
                out
            })
            .collect();
        Self {
            breakpoints: merged,
            pieces,
        }
    }

    /// `x ↦ p(-x)`.
    pub fn reflect(&self) -> Self {
        let breakpoints: Vec<f64> = self.breakpoints.iter().rev().map(|b| -b).collect();
        let pieces = self
            .pieces
            .iter()
            .rev()
            .map(|p| {
                p.iter()
                    .enumerate()
                    .map(|(j, &c)| if j % 2 == 0 { c } else { -c })
                    .collect()
            })
            .collect();
        Self {
            breakpoints,
            pieces,
        }
    }

    /// `∫_{-1}^1 p q dx` by Gauss-Legendre on the merged breakpoints.
    pub fn inner_product(&self, other: &Self) -> f64 {
        let merged = merge_breakpoints(&self.breakpoints, &other.breakpoints);
        let rule = GaussLegendre::for_degree(self.degree() + other.degree());
        merged
            .windows(2)
            .map(|w| {
                let mid = 0.5 * (w[0] + w[1]);
                let (i, j) = (
                    self.piece_index(mid, Side::Right),
                    other.piece_index(mid, Side::Right),
                );
                rule.mapped(w[0], w[1])
                    .map(|(x, wt)| wt * self.eval_in_piece(i, x) * other.eval_in_piece(j, x))
                    .sum::<f64>()
            })
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.inner_product(self).sqrt()
    }

    /// Integral of `p · g` for a smooth function `g`, per piece with `extra`
    /// additional quadrature nodes on top of the degree of `p`.
    pub fn integrate_against<F: Fn(f64) -> f64>(&self, g: F, extra: usize) -> f64 {
        let rule = GaussLegendre::new(self.degree() / 2 + 1 + extra);
        (0..self.pieces.len())
            .map(|i| {
                let (a, b) = self.interval(i);
                rule.mapped(a, b)
                    .map(|(x, w)| w * self.eval_in_piece(i, x) * g(x))
                    .sum::<f64>()
            })
            .sum()
    }

    fn eval_in_piece(&self, i: usize, x: f64) -> f64 {
        let (a, b) = self.interval(i);
        let (c, h) = mid_half(a, b);
        let y = (x - c) / h;
        self.pieces[i].iter().rev().fold(0.0, |acc, &c| acc * y + c)
    }
}

pub(crate) fn mid_half(a: f64, b: f64) -> (f64, f64) {
    (0.5 * (a + b), 0.5 * (b - a))
}

/// `j (j-1) ... (j-s+1)`.
pub(crate) fn falling(j: usize, s: usize) -> f64 {
    ((j + 1 - s)..=j).fold(1.0, |acc, v| acc * v as f64)
}

/// Sorted union of two breakpoint sets.
pub fn merge_breakpoints(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut all: Vec<f64> = a.iter().chain(b).copied().collect();
    all.sort_by(|x, y| x.partial_cmp(y).unwrap());
    all.dedup();
    all
}

/// Coefficients of `Σ a_j (d + h s)^j` as a polynomial in `s`.
fn compose_affine(coeffs: &[f64], d: f64, h: f64) -> Vec<f64> {
    compose_affine_scaled(coeffs, d, h)
}

/// Coefficients in `s` of `Σ a_j (alpha + beta s)^j` (Horner composition).
fn compose_affine_scaled(coeffs: &[f64], alpha: f64, beta: f64) -> Vec<f64> {
    let mut out = vec![0.0; coeffs.len().max(1)];
    for &a in coeffs.iter().rev() {
        // out <- out * (alpha + beta s) + a
        let mut next = vec![0.0; out.len()];
        for (j, &c) in out.iter().enumerate() {
            next[j] += c * alpha;
            if j + 1 < next.len() {
                next[j + 1] += c * beta;
            }
        }
        next[0] += a;
        out = next;
    }
    out
}
