//! Problem-level solvers: the trade-off curve `Γ_t`, the modulus `Ω_t(δ)`,
//! the Stechkin quantity `E_N`, the uniform case for `r ∈ {1, 2}`, the
//! eigenfunction conjecture check and the `k ∈ {r-2, r-1}` endpoint constants.

mod conjecture;
mod endpoint_bounds;
mod sweep;
mod uniform;

use rayon::prelude::*;

use crate::bvp::{self, ExtremalSolution, ProblemSpec};
use crate::error::{invalid, Result};
use crate::poly_core::Side;
use crate::roots::{decreasing_root, increasing_bisection, INITIAL_BRACKET};

pub use conjecture::{
    check_conjecture, check_conjecture_with, conjecture_figure, conjecture_galerkin_dim,
    norm_domination, ConjectureReport, DominationCheck, Verdict,
};
pub use endpoint_bounds::{endpoint_bound_certificates, EndpointBoundReport, GridCertificate};
pub use sweep::{inequality_sweep, test_functions, SweepReport, TestFunction};
pub use uniform::{
    markov_supremum, uniform_omega, uniform_stechkin, UniformOmega, UniformStechkin,
};

/// Relative tolerance on `λ` for the root finds.
pub const LAMBDA_TOL: f64 = 1e-10;

/// One point `(A, B) = (‖u^{(r)}‖₂, ‖u‖₂)` of `Γ_t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TradeoffPoint {
    pub lambda: f64,
    pub a: f64,
    pub b: f64,
    pub spec: ProblemSpec,
}

/// `Γ_t` sampled at the given `λ` values, in input order.
pub fn gamma_curve(spec: &ProblemSpec, lambdas: &[f64]) -> Result<Vec<TradeoffPoint>> {
    if lambdas.iter().any(|l| !(l.is_finite() && *l >= 0.0)) {
        return Err(invalid("λ values must be finite and non-negative"));
    }
    if lambdas.windows(2).any(|w| w[1] < w[0]) {
        return Err(invalid("λ values must be sorted ascending"));
    }
    lambdas
        .par_iter()
        .map(|&lambda| {
            let sol = bvp::solve(spec, lambda)?;
            Ok(TradeoffPoint {
                lambda,
                a: sol.norm_ur(),
                b: sol.norm_u(),
                spec: *spec,
            })
        })
        .collect()
}

/// Sharpness data of the extremal function `f = u^{(r)}/(λB)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtremalCertificate {
    /// `‖f‖₂`, equal to `δ`.
    pub norm_f: f64,
    /// `‖f^{(r)}‖₂`, equal to 1.
    pub norm_fr: f64,
    /// `|f^{(k)}(t)|`, equal to `Ω_t(δ)`.
    pub value: f64,
}

/// `Ω_t(δ)` with the unique `λ(δ)`.
#[derive(Debug, Clone)]
pub struct OmegaResult {
    pub spec: ProblemSpec,
    pub delta: f64,
    /// `+∞` when `δ = 0`.
    pub lambda_star: f64,
    pub omega: f64,
    pub a: f64,
    pub b: f64,
    /// `None` when `δ = 0`.
    pub extremal: Option<ExtremalSolution>,
}

impl OmegaResult {
    /// `|δλ*B − A| / A`.
    pub fn residual(&self) -> f64 {
        if self.extremal.is_none() {
            return 0.0;
        }
        (self.delta * self.lambda_star * self.b - self.a).abs() / self.a
    }

    /// The optimal recovery error; it equals `Ω_t(δ)`.
    pub fn best_recovery(&self) -> f64 {
        self.omega
    }

    pub fn certificate(&self) -> Option<ExtremalCertificate> {
        self.extremal.as_ref().map(extremal_certificate)
    }
}

/// Norms and objective of `u^{(r)}/(λB)` for `λ > 0`.
pub fn extremal_certificate(sol: &ExtremalSolution) -> ExtremalCertificate {
    let spec = sol.spec();
    let scale = sol.lambda() * sol.norm_u();
    ExtremalCertificate {
        norm_f: sol.norm_ur() / scale,
        norm_fr: sol.norm(2 * spec.r) / scale,
        value: objective_value(sol, spec.r + spec.k) / scale,
    }
}

/// `|u^{(s)}(t)|`, taken from inside `[-1, 1]` at the endpoints.
fn objective_value(sol: &ExtremalSolution, s: usize) -> f64 {
    let t = sol.spec().t();
    let side = if t == 1.0 { Side::Left } else { Side::Right };
    sol.evaluate(s, t, side).abs()
}

/// `Ω_t(δ)` via the root of `ln A − ln λ − ln B − ln δ`, decreasing in `λ`.
pub fn omega(spec: &ProblemSpec, delta: f64) -> Result<OmegaResult> {
    if !(delta.is_finite() && delta >= 0.0) {
        return Err(invalid("δ must be finite and non-negative"));
    }
    if delta == 0.0 {
        return Ok(OmegaResult {
            spec: *spec,
            delta,
            lambda_star: f64::INFINITY,
            omega: 0.0,
            a: f64::NAN,
            b: 0.0,
            extremal: None,
        });
    }
    let ln_delta = delta.ln();
    let h = |lambda: f64| -> Result<f64> {
        let sol = bvp::solve(spec, lambda)?;
        Ok(sol.norm_ur().ln() - lambda.ln() - sol.norm_u().ln() - ln_delta)
    };
    let lambda =
        decreasing_root(h, LAMBDA_TOL, &format!("λ(δ) for δ = {delta:e}"))?.ok_or_else(|| {
            crate::Error::OutOfRange {
                what: format!("λ(δ) for δ = {delta:e}"),
                lo: crate::roots::MAX_BRACKET.0,
                hi: crate::roots::MAX_BRACKET.1,
            }
        })?;
    let sol = bvp::solve(spec, lambda)?;
    Ok(OmegaResult {
        spec: *spec,
        delta,
        lambda_star: lambda,
        omega: sol.norm_ur() * delta + sol.norm_u(),
        a: sol.norm_ur(),
        b: sol.norm_u(),
        extremal: Some(sol),
    })
}

/// Value of the Stechkin problem.
#[derive(Debug, Clone)]
pub enum StechkinValue {
    /// `N < M_t`: no bounded functional of norm `N` approximates `D^k_t`.
    Infinite,
    Finite {
        lambda_n: f64,
        e_n: f64,
        /// `u_{λ_N}`; its `r`-th derivative is the kernel of the optimal functional.
        solution: Box<ExtremalSolution>,
    },
}

#[derive(Debug, Clone)]
pub struct StechkinResult {
    pub spec: ProblemSpec,
    pub n: f64,
    pub value: StechkinValue,
}

impl StechkinResult {
    pub fn is_infinite(&self) -> bool {
        matches!(self.value, StechkinValue::Infinite)
    }

    /// `E_N`, or `+∞`.
    pub fn e_n(&self) -> f64 {
        match &self.value {
            StechkinValue::Infinite => f64::INFINITY,
            StechkinValue::Finite { e_n, .. } => *e_n,
        }
    }

    pub fn lambda_n(&self) -> Option<f64> {
        match &self.value {
            StechkinValue::Infinite => None,
            StechkinValue::Finite { lambda_n, .. } => Some(*lambda_n),
        }
    }

    pub fn solution(&self) -> Option<&ExtremalSolution> {
        match &self.value {
            StechkinValue::Infinite => None,
            StechkinValue::Finite { solution, .. } => Some(solution),
        }
    }

    /// `u^{(r)}_{λ_N}(x)`, the kernel of `S_N f = ∫ u^{(r)} f`.
    pub fn kernel(&self, x: f64) -> Option<f64> {
        self.solution()
            .map(|sol| sol.evaluate(sol.spec().r, x, Side::Right))
    }
}

/// Relative slack below which `N` counts as equal to `M_t`.
const MARKOV_SLACK: f64 = 1e-12;

/// `E_N` with `λ_N` solving `A(λ_N) = N`.
pub fn stechkin(spec: &ProblemSpec, n: f64) -> Result<StechkinResult> {
    if !n.is_finite() {
        return Err(invalid("N must be finite"));
    }
    let m = spec.markov_constant();
    let finite = |lambda: f64| -> Result<StechkinResult> {
        let sol = bvp::solve(spec, lambda)?;
        Ok(StechkinResult {
            spec: *spec,
            n,
            value: StechkinValue::Finite {
                lambda_n: lambda,
                e_n: sol.norm_u(),
                solution: Box::new(sol),
            },
        })
    };
    if n < m * (1.0 - MARKOV_SLACK) {
        return Ok(StechkinResult {
            spec: *spec,
            n,
            value: StechkinValue::Infinite,
        });
    }
    if n <= m * (1.0 + MARKOV_SLACK) {
        return finite(0.0);
    }
    // A² − M² = ‖(u − u₀)^{(r)}‖² is computed without cancellation.
    let target = (n - m) * (n + m);
    let excess = |lambda: f64| -> Result<f64> { Ok(bvp::solve(spec, lambda)?.ur_excess()) };
    let lo = INITIAL_BRACKET.0;
    let lambda = if excess(lo)? >= target {
        increasing_bisection(|l| Ok(excess(l)? - target), 0.0, lo, LAMBDA_TOL)?
    } else {
        let root = decreasing_root(
            |l| Ok(target.ln() - excess(l)?.ln()),
            LAMBDA_TOL,
            &format!("λ_N for N = {n:e}"),
        )?;
        root.unwrap_or(lo)
    };
    finite(lambda)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn endpoint_r1(lambda: f64) -> (f64, f64) {
        let sol = bvp::solve(&ProblemSpec::endpoint(1, 0).unwrap(), lambda).unwrap();
        (sol.norm_ur(), sol.norm_u())
    }

    #[test]
    fn gamma_curve_starts_at_markov_constant() {
        let spec = ProblemSpec::new(2, 1, 0.3).unwrap();
        let pts = gamma_curve(&spec, &[0.0, 1.0, 10.0]).unwrap();
        assert!((pts[0].a - spec.markov_constant()).abs() < 1e-12);
        assert!(pts[1].a > pts[0].a && pts[2].a > pts[1].a);
        assert!(pts[1].b < pts[0].b && pts[2].b < pts[1].b);
        assert!(gamma_curve(&spec, &[1.0, 0.5]).is_err());
        assert!(gamma_curve(&spec, &[-1.0]).is_err());
    }

    #[test]
    fn omega_inverts_defining_relation() {
        let (a, b) = endpoint_r1(1.0);
        let delta = a / b;
        let res = omega(&ProblemSpec::endpoint(1, 0).unwrap(), delta).unwrap();
        assert!((res.lambda_star - 1.0).abs() < 1e-8);
        assert!((res.omega - (a * delta + b)).abs() < 1e-12 * res.omega);
        let cert = res.certificate().unwrap();
        assert!((cert.norm_f - delta).abs() < 1e-7 * delta);
        assert!((cert.norm_fr - 1.0).abs() < 1e-7);
        assert!((cert.value - res.omega).abs() < 1e-7 * res.omega);
    }

    #[test]
    fn omega_at_zero_delta() {
        let res = omega(&ProblemSpec::endpoint(2, 0).unwrap(), 0.0).unwrap();
        assert_eq!(res.omega, 0.0);
        assert!(res.extremal.is_none());
        assert!(omega(&ProblemSpec::endpoint(2, 0).unwrap(), -1.0).is_err());
    }

    #[test]
    fn large_delta_slope_tends_to_markov() {
        let spec = ProblemSpec::endpoint(1, 0).unwrap();
        let res = omega(&spec, 1e3).unwrap();
        let ratio = res.omega / 1e3 / spec.markov_constant();
        assert!((ratio - 1.0).abs() < 0.01, "{ratio}");
    }

    #[test]
    fn stechkin_cases() {
        let spec = ProblemSpec::endpoint(1, 0).unwrap();
        let m = spec.markov_constant();
        assert!(stechkin(&spec, 0.9 * m).unwrap().is_infinite());
        let at_m = stechkin(&spec, m).unwrap();
        assert_eq!(at_m.lambda_n(), Some(0.0));
        assert!((at_m.e_n() - (2.0f64 / 3.0).sqrt()).abs() < 1e-12);
        let (a, b) = endpoint_r1(1.0);
        let res = stechkin(&spec, a).unwrap();
        assert!((res.lambda_n().unwrap() - 1.0).abs() < 1e-8);
        assert!((res.e_n() - b).abs() < 1e-10);
        let near = m * (1.0 + 1e-9);
        let tiny = stechkin(&spec, near).unwrap();
        let a = tiny.solution().unwrap().norm_ur();
        assert!((a - near).abs() < 1e-14, "{a} vs {near}");
    }
}
