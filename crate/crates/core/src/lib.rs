//! Sharp constants and extremal functions for the Landau-Kolmogorov problem on
//! `[-1, 1]` with `L2` constraints on `f` and `f^{(r)}` and the objective
//! `|f^{(k)}(t)|` or `‖f^{(k)}‖_∞`.
//!
//! * [`poly_core`]: piecewise polynomials, Legendre bases, `M_t`, and the
//!   polynomial `λ = 0` solutions.
//! * [`bvp`]: direct solution of the boundary value problems for `λ ≥ 0`.
//! * [`spectral`]: eigenpairs of `(-1)^r D^{2r}` with clamped ends, the
//!   Green's kernel, and series representations of the solutions.
//! * [`problems`]: `Γ` curves, `Ω_t(δ)`, Stechkin's problem, the uniform case
//!   and the endpoint conjecture checks.

pub mod bvp;
pub mod error;
pub mod linalg;
pub mod poly_core;
pub mod problems;
pub mod roots;
pub mod selftest;
pub mod spectral;

pub use error::{Error, Result};

/// Library version, embedded in reproducible output.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
