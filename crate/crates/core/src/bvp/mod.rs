//! Direct solution of `(-1)^r u^{(2r)} + λu = 0` with the endpoint data
//! `u^{(s)}(-1) = (-1)^{k-1} δ_{r-k-1,s}`, `u^{(s)}(1) = 0`, or with clamped
//! ends and the jump data `u^{(s)}(t+0) - u^{(s)}(t-0) = (-1)^{k-1} δ_{r-k-1,s}`.

mod basis;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub use basis::CharacteristicBasis;
use basis::{conjugate_index, PieceBasis};

use crate::error::{invalid, Error, Result};
use crate::linalg::solve_refined;
use crate::poly_core::quadrature::GaussLegendre;
use crate::poly_core::{
    check_orders, jump_sign, u0_endpoint, u0_interior, PiecewisePolynomial, Side,
};

/// Systems whose equilibrated condition estimate exceeds this are rejected.
pub const CONDITION_LIMIT: f64 = 1e12;

/// Where the objective `f^{(k)}(t)` is taken.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Point {
    Left,
    Right,
    Interior(f64),
}

impl Point {
    /// `t = ±1` selects the endpoint problems.
    pub fn from_t(t: f64) -> Result<Point> {
        if t == -1.0 {
            Ok(Point::Left)
        } else if t == 1.0 {
            Ok(Point::Right)
        } else if t > -1.0 && t < 1.0 {
            Ok(Point::Interior(t))
        } else {
            Err(invalid(format!("t = {t} lies outside [-1, 1]")))
        }
    }

    pub fn t(&self) -> f64 {
        match self {
            Point::Left => -1.0,
            Point::Right => 1.0,
            Point::Interior(t) => *t,
        }
    }
}

/// Indices `(r, k)` and the point `t` of one inequality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProblemSpec {
    pub r: usize,
    pub k: usize,
    pub point: Point,
}

impl ProblemSpec {
    pub fn new(r: usize, k: usize, t: f64) -> Result<Self> {
        check_orders(r, k)?;
        Ok(ProblemSpec {
            r,
            k,
            point: Point::from_t(t)?,
        })
    }

    pub fn endpoint(r: usize, k: usize) -> Result<Self> {
        Self::new(r, k, -1.0)
    }

    pub fn t(&self) -> f64 {
        self.point.t()
    }

    /// `M_t`, the `λ = 0` value of `‖u^{(r)}‖₂`.
    pub fn markov_constant(&self) -> f64 {
        crate::poly_core::markov_constant(self.r, self.k, self.t())
            .expect("validated at construction")
    }

    /// The `λ = 0` solution.
    pub fn u0(&self) -> PiecewisePolynomial {
        let u = match self.point {
            Point::Left | Point::Right => u0_endpoint(self.r, self.k),
            Point::Interior(t) => u0_interior(self.r, self.k, t),
        }
        .expect("validated at construction");
        if self.point == Point::Right {
            u.reflect().scale(self.reflection_sign())
        } else {
            u
        }
    }

    /// `(-1)^{r-k}`, relating the `+1` endpoint problem to the `-1` one.
    fn reflection_sign(&self) -> f64 {
        if (self.r - self.k) % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }
}

#[derive(Debug, Clone)]
struct Piece {
    lo: f64,
    hi: f64,
    basis: PieceBasis,
    coeffs: Vec<Complex64>,
}

#[derive(Debug, Clone)]
enum Representation {
    Polynomial(PiecewisePolynomial),
    Characteristic(Vec<Piece>),
}

/// `u_λ` or `u_{λ,t}` with its norms `B = ‖u‖₂` and `A = ‖u^{(r)}‖₂`.
#[derive(Debug, Clone)]
pub struct ExtremalSolution {
    spec: ProblemSpec,
    lambda: f64,
    repr: Representation,
    /// Stored solution is for `-1`; evaluate through `x ↦ -x`.
    reflected: bool,
    condition: f64,
    norm_u: f64,
    norm_ur: f64,
    ur_excess: f64,
}

impl ExtremalSolution {
    pub fn spec(&self) -> &ProblemSpec {
        &self.spec
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// `‖u‖₂`
    pub fn norm_u(&self) -> f64 {
        self.norm_u
    }

    /// `‖u^{(r)}‖₂`
    pub fn norm_ur(&self) -> f64 {
        self.norm_ur
    }

    /// `A² - M_t² = ‖(u - u₀)^{(r)}‖²`, resolved even where the growth of
    /// `A` itself is below its rounding unit.
    pub fn ur_excess(&self) -> f64 {
        self.ur_excess
    }

    /// Condition estimate of the equilibrated boundary system (1 for `λ = 0`).
    pub fn condition(&self) -> f64 {
        self.condition
    }

    /// `true` when the stored pieces are the polynomial `λ = 0` solution.
    pub fn polynomial(&self) -> Option<PiecewisePolynomial> {
        match &self.repr {
            Representation::Polynomial(p) if !self.reflected => Some(p.clone()),
            Representation::Polynomial(p) => Some(p.reflect().scale(self.spec.reflection_sign())),
            _ => None,
        }
    }

    /// Breakpoints of the pieces, in `x`.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self.spec.point {
            Point::Interior(t) => vec![-1.0, t, 1.0],
            _ => vec![-1.0, 1.0],
        }
    }

    /// `u^{(s)}(x)`, one-sided at the jump point.
    pub fn evaluate(&self, s: usize, x: f64, side: Side) -> f64 {
        if self.reflected {
            let flipped = match side {
                Side::Left => Side::Right,
                Side::Right => Side::Left,
            };
            let parity = if s % 2 == 0 { 1.0 } else { -1.0 };
            return self.spec.reflection_sign() * parity * self.evaluate_stored(s, -x, flipped);
        }
        self.evaluate_stored(s, x, side)
    }

    fn evaluate_stored(&self, s: usize, x: f64, side: Side) -> f64 {
        match &self.repr {
            Representation::Polynomial(p) => p.derivative_at(s, x, side),
            Representation::Characteristic(pieces) => {
                let piece = locate(pieces, x, side);
                piece.basis.evaluate(&piece.coeffs, s, x)
            }
        }
    }

    /// `‖u^{(s)}‖₂`.
    pub fn norm(&self, s: usize) -> f64 {
        match &self.repr {
            Representation::Polynomial(p) => p.differentiate(s).norm(),
            Representation::Characteristic(pieces) => pieces
                .iter()
                .map(|p| p.basis.norm_squared(&p.coeffs, s, p.lo, p.hi).max(0.0))
                .sum::<f64>()
                .sqrt(),
        }
    }

    /// `∫ u^{(s)} g` by composite Gauss quadrature on each piece.
    pub fn integrate_against<F: Fn(f64) -> f64>(&self, s: usize, g: F) -> f64 {
        self.quadrature_nodes()
            .into_iter()
            .map(|(x, w)| w * self.evaluate(s, x, Side::Right) * g(x))
            .sum()
    }

    /// Gauss nodes resolving the boundary layers of width `λ^{-1/(2r)}`.
    pub fn quadrature_nodes(&self) -> Vec<(f64, f64)> {
        let a = self.lambda.powf(1.0 / (2 * self.spec.r) as f64);
        let rule = GaussLegendre::new(24);
        let mut out = Vec::new();
        let bps = self.breakpoints();
        for w in bps.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            let n = ((a * (hi - lo)).ceil() as usize).clamp(2, 4000);
            for i in 0..n {
                let a0 = lo + (hi - lo) * i as f64 / n as f64;
                let b0 = lo + (hi - lo) * (i + 1) as f64 / n as f64;
                out.extend(rule.mapped(a0, b0));
            }
        }
        out
    }
}

fn locate(pieces: &[Piece], x: f64, side: Side) -> &Piece {
    for (i, p) in pieces.iter().enumerate() {
        let last = i + 1 == pieces.len();
        let inside = match side {
            Side::Right => x < p.hi || last,
            Side::Left => x <= p.hi || last,
        };
        if inside && (x >= p.lo || i == 0) {
            return p;
        }
    }
    pieces.last().expect("at least one piece")
}

/// Solve for `λ ≥ 0` at any point.
pub fn solve(spec: &ProblemSpec, lambda: f64) -> Result<ExtremalSolution> {
    match spec.point {
        Point::Interior(_) => solve_interior(spec, lambda),
        _ => solve_endpoint(spec, lambda),
    }
}

/// The endpoint problem; `+1` is obtained from `-1` through `(-1)^{r-k} u(-x)`.
pub fn solve_endpoint(spec: &ProblemSpec, lambda: f64) -> Result<ExtremalSolution> {
    let (r, k) = (spec.r, spec.k);
    check_orders(r, k)?;
    check_lambda(lambda)?;
    let reflected = match spec.point {
        Point::Left => false,
        Point::Right => true,
        Point::Interior(_) => return Err(invalid("solve_endpoint needs an endpoint spec")),
    };
    if lambda == 0.0 {
        let u = u0_endpoint(r, k)?;
        return Ok(finish(
            *spec,
            0.0,
            Representation::Polynomial(u),
            reflected,
            1.0,
        ));
    }
    let piece = PieceBasis::new(r, lambda, -1.0, 1.0);
    let mut sys = System::new(r, vec![(-1.0, 1.0, piece)]);
    for s in 0..r {
        let target = if s == r - k - 1 { jump_sign(k) } else { 0.0 };
        sys.condition(&[(0, 1.0)], s, -1.0, target);
        sys.condition(&[(0, 1.0)], s, 1.0, 0.0);
    }
    let (pieces, condition) = sys.solve("endpoint boundary system")?;
    Ok(finish(
        *spec,
        lambda,
        Representation::Characteristic(pieces),
        reflected,
        condition,
    ))
}

/// The interior-point problem: clamped ends and `2r` jump conditions at `t`.
pub fn solve_interior(spec: &ProblemSpec, lambda: f64) -> Result<ExtremalSolution> {
    let (r, k) = (spec.r, spec.k);
    check_orders(r, k)?;
    check_lambda(lambda)?;
    let t = match spec.point {
        Point::Interior(t) => t,
        _ => return Err(invalid("solve_interior needs an interior point")),
    };
    if lambda == 0.0 {
        let u = u0_interior(r, k, t)?;
        return Ok(finish(
            *spec,
            0.0,
            Representation::Polynomial(u),
            false,
            1.0,
        ));
    }
    let left = PieceBasis::new(r, lambda, -1.0, t);
    let right = PieceBasis::new(r, lambda, t, 1.0);
    let mut sys = System::new(r, vec![(-1.0, t, left), (t, 1.0, right)]);
    for s in 0..r {
        sys.condition(&[(0, 1.0)], s, -1.0, 0.0);
        sys.condition(&[(1, 1.0)], s, 1.0, 0.0);
    }
    for s in 0..2 * r {
        let target = if s == r - k - 1 { jump_sign(k) } else { 0.0 };
        sys.condition(&[(1, 1.0), (0, -1.0)], s, t, target);
    }
    let (pieces, condition) = sys.solve("interior jump system")?;
    Ok(finish(
        *spec,
        lambda,
        Representation::Characteristic(pieces),
        false,
        condition,
    ))
}

/// `‖u^{(s)}‖₂` of a solution.
pub fn solution_norm(sol: &ExtremalSolution, s: usize) -> f64 {
    if s == 0 {
        sol.norm_u
    } else if s == sol.spec.r {
        sol.norm_ur
    } else {
        sol.norm(s)
    }
}

/// `u^{(s)}(x)` with one-sided semantics at the jump point.
pub fn evaluate(sol: &ExtremalSolution, s: usize, x: f64, side: Side) -> f64 {
    sol.evaluate(s, x, side)
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(invalid(format!(
            "lambda = {lambda} must be finite and >= 0"
        )));
    }
    Ok(())
}

fn finish(
    spec: ProblemSpec,
    lambda: f64,
    repr: Representation,
    reflected: bool,
    condition: f64,
) -> ExtremalSolution {
    let mut sol = ExtremalSolution {
        spec,
        lambda,
        repr,
        reflected,
        condition,
        norm_u: 0.0,
        norm_ur: 0.0,
        ur_excess: 0.0,
    };
    sol.norm_u = sol.norm(0);
    let m2 = spec.markov_constant().powi(2);
    match &sol.repr {
        Representation::Polynomial(_) => {
            sol.norm_ur = sol.norm(spec.r);
        }
        Representation::Characteristic(pieces) if pieces.iter().all(|p| p.basis.is_taylor()) => {
            let (a0_sq, excess) = sol.norm_ur_by_correction(pieces);
            sol.ur_excess = excess;
            sol.norm_ur = (a0_sq + excess).sqrt();
        }
        Representation::Characteristic(_) => {
            sol.norm_ur = sol.norm(spec.r);
            sol.ur_excess = sol.norm_ur.powi(2) - m2;
        }
    }
    sol
}

impl ExtremalSolution {
    /// `A² = ‖u₀^{(r)}‖² + ‖(u - u₀)^{(r)}‖²`: the cross term vanishes after
    /// `r` integrations by parts, because `u - u₀` is clamped and smooth and
    /// `u₀^{(2r)} = 0`. Resolves the `O(λ²)` growth of `A` for small `λ`.
    fn norm_ur_by_correction(&self, pieces: &[Piece]) -> (f64, f64) {
        let r = self.spec.r;
        let u0 = match self.spec.point {
            Point::Interior(t) => u0_interior(r, self.spec.k, t),
            _ => u0_endpoint(r, self.spec.k),
        }
        .expect("validated at construction");
        let d0 = u0.differentiate(r);
        let rule = GaussLegendre::new(40);
        let correction: f64 = pieces
            .iter()
            .map(|p| {
                let mid = 0.5 * (p.lo + p.hi);
                let side = if mid < p.hi { Side::Right } else { Side::Left };
                rule.integrate(p.lo, p.hi, |x| {
                    (p.basis.evaluate(&p.coeffs, r, x) - d0.evaluate(x, side)).powi(2)
                })
            })
            .sum();
        (d0.norm().powi(2), correction)
    }
}

/// Linear conditions on the coefficients of several pieces.
struct System {
    r: usize,
    pieces: Vec<(f64, f64, PieceBasis)>,
    rows: Vec<Vec<Complex64>>,
    rhs: Vec<f64>,
}

impl System {
    fn new(r: usize, pieces: Vec<(f64, f64, PieceBasis)>) -> Self {
        System {
            r,
            pieces,
            rows: Vec::new(),
            rhs: Vec::new(),
        }
    }

    /// `Σ weight · u_piece^{(s)}(x) = target`.
    fn condition(&mut self, terms: &[(usize, f64)], s: usize, x: f64, target: f64) {
        let width = 2 * self.r;
        let mut row = vec![Complex64::new(0.0, 0.0); width * self.pieces.len()];
        for &(p, weight) in terms {
            for (j, v) in self.pieces[p].2.column_values(s, x).into_iter().enumerate() {
                row[p * width + j] += v * weight;
            }
        }
        self.rows.push(row);
        self.rhs.push(target);
    }

    fn solve(self, context: &str) -> Result<(Vec<Piece>, f64)> {
        let n = self.rows.len();
        debug_assert_eq!(n, 2 * self.r * self.pieces.len());
        let all_taylor = self.pieces.iter().all(|p| p.2.is_taylor());
        let width = 2 * self.r;
        let x: Vec<Complex64>;
        let condition;
        if all_taylor {
            let a = DMatrix::from_fn(n, n, |i, j| self.rows[i][j].re);
            let b = DVector::from_column_slice(&self.rhs);
            let solved = solve_refined(&a, &b, context)?;
            condition = solved.condition;
            x = solved.x.iter().map(|v| Complex64::new(*v, 0.0)).collect();
        } else {
            let a = DMatrix::from_fn(n, n, |i, j| self.rows[i][j]);
            let b = DVector::from_iterator(n, self.rhs.iter().map(|v| Complex64::new(*v, 0.0)));
            let solved = solve_refined(&a, &b, context)?;
            condition = solved.condition;
            x = solved.x.iter().copied().collect();
        }
        if condition > CONDITION_LIMIT {
            return Err(Error::IllConditioned {
                condition,
                context: context.to_string(),
            });
        }
        let pieces = self
            .pieces
            .into_iter()
            .enumerate()
            .map(|(p, (lo, hi, basis))| {
                let mut coeffs = x[p * width..(p + 1) * width].to_vec();
                symmetrize(&basis, &mut coeffs);
                Piece {
                    lo,
                    hi,
                    basis,
                    coeffs,
                }
            })
            .collect();
        Ok((pieces, condition))
    }
}

/// Enforce `c_{conj(j)} = conj(c_j)` so the represented function is real.
fn symmetrize(basis: &PieceBasis, coeffs: &mut [Complex64]) {
    match basis {
        PieceBasis::Taylor { .. } => {
            for c in coeffs.iter_mut() {
                c.im = 0.0;
            }
        }
        PieceBasis::Exponential { roots, .. } => {
            let partner = conjugate_index(roots);
            let original = coeffs.to_vec();
            for (j, &p) in partner.iter().enumerate() {
                coeffs[j] = 0.5 * (original[j] + original[p].conj());
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn r1_closed_form_endpoint() {
        for lambda in [0.01, 1.0, 10.0, 400.0] {
            let a: f64 = f64::sqrt(lambda);
            let spec = ProblemSpec::endpoint(1, 0).unwrap();
            let sol = solve_endpoint(&spec, lambda).unwrap();
            for x in [-1.0, -0.4, 0.3, 0.95, 1.0] {
                let exact = -(a * (1.0 - x)).sinh() / (2.0 * a).sinh();
                assert!(
                    (sol.evaluate(0, x, Side::Right) - exact).abs() < 1e-12,
                    "λ={lambda}"
                );
            }
        }
    }

    #[test]
    fn reflection_sign_of_right_endpoint() {
        let left = solve_endpoint(&ProblemSpec::new(3, 1, -1.0).unwrap(), 7.0).unwrap();
        let right = solve_endpoint(&ProblemSpec::new(3, 1, 1.0).unwrap(), 7.0).unwrap();
        for x in [-0.8, 0.1, 0.6] {
            let expected = left.evaluate(0, -x, Side::Right);
            assert!((right.evaluate(0, x, Side::Right) - expected).abs() < 1e-12);
        }
        assert!((right.norm_u() - left.norm_u()).abs() < 1e-14);
    }

    #[test]
    fn polynomial_delegation() {
        let spec = ProblemSpec::new(3, 0, 0.25).unwrap();
        let sol = solve(&spec, 0.0).unwrap();
        assert_eq!(sol.polynomial().unwrap(), u0_interior(3, 0, 0.25).unwrap());
    }
}
