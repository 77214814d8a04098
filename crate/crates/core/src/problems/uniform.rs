//! The uniform-norm objective `‖f^{(k)}‖_∞` for `r ∈ {1, 2}`.

use log::warn;
use rayon::prelude::*;

use super::{omega, stechkin, StechkinResult};
use crate::bvp::ProblemSpec;
use crate::error::{invalid, Result};
use crate::poly_core::{check_orders, markov_constant};

/// `t_i = -cos(πi/(n-1))`, `i = 0..n`; contains `±1` exactly.
pub fn chebyshev_grid(n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| {
            if i == 0 {
                -1.0
            } else if i + 1 == n {
                1.0
            } else {
                -(std::f64::consts::PI * i as f64 / (n - 1) as f64).cos()
            }
        })
        .collect()
}

fn check_uniform(r: usize, k: usize, grid: usize) -> Result<()> {
    check_orders(r, k)?;
    if !(r == 1 || r == 2) {
        return Err(invalid(format!(
            "the uniform case needs r ∈ {{1, 2}}, got r = {r}"
        )));
    }
    if grid < 2 {
        return Err(invalid("t-grid needs at least two points"));
    }
    Ok(())
}

/// Relative slack within which an interior value counts as tied with the endpoint.
const TIE: f64 = 1e-9;

/// `max_t Ω_t(δ)` over a grid.
#[derive(Debug, Clone)]
pub struct UniformOmega {
    pub omega: f64,
    pub argmax_t: f64,
    /// `Ω_{-1}(δ)`.
    pub endpoint_omega: f64,
    /// `(t, Ω_t(δ))` in grid order.
    pub values: Vec<(f64, f64)>,
}

impl UniformOmega {
    pub fn argmax_at_endpoint(&self) -> bool {
        self.argmax_t.abs() == 1.0
    }
}

/// `Ω(δ) = sup_t Ω_t(δ)` on a Chebyshev grid of `t_grid_size` points
/// including `±1`. Ties go to the endpoint; an interior maximum is logged.
pub fn uniform_omega(r: usize, k: usize, delta: f64, t_grid_size: usize) -> Result<UniformOmega> {
    check_uniform(r, k, t_grid_size)?;
    let grid = chebyshev_grid(t_grid_size);
    let values = grid
        .par_iter()
        .map(|&t| Ok((t, omega(&ProblemSpec::new(r, k, t)?, delta)?.omega)))
        .collect::<Result<Vec<_>>>()?;
    let endpoint_omega = values[0].1.max(values[values.len() - 1].1);
    let (mut argmax_t, mut best) = (-1.0, endpoint_omega);
    for &(t, v) in &values {
        if v > best * (1.0 + TIE) {
            argmax_t = t;
            best = v;
        }
    }
    if argmax_t.abs() != 1.0 {
        warn!("uniform Ω for r={r}, k={k}, δ={delta:e} peaks inside at t={argmax_t}");
    }
    Ok(UniformOmega {
        omega: best,
        argmax_t,
        endpoint_omega,
        values,
    })
}

/// `sup_t M_t` over a Chebyshev grid, with its first location.
pub fn markov_supremum(r: usize, k: usize, t_grid_size: usize) -> Result<(f64, f64)> {
    check_orders(r, k)?;
    let mut best = (f64::NEG_INFINITY, -1.0);
    for t in chebyshev_grid(t_grid_size.max(2)) {
        let m = markov_constant(r, k, t)?;
        if m > best.0 * (1.0 + TIE) {
            best = (m, t);
        }
    }
    Ok(best)
}

/// Uniform Stechkin problem, solved at the endpoint and cross-checked on a grid.
#[derive(Debug, Clone)]
pub struct UniformStechkin {
    /// The endpoint result, which carries the answer.
    pub endpoint: StechkinResult,
    /// `sup_t E_N(D^k_t)` over the grid and where it is attained.
    pub interior_sup: f64,
    pub interior_sup_t: f64,
    /// `sup_t M_t` over the grid and where it is attained.
    pub markov_sup: f64,
    pub markov_sup_t: f64,
}

pub fn uniform_stechkin(r: usize, k: usize, n: f64, t_grid_size: usize) -> Result<UniformStechkin> {
    check_uniform(r, k, t_grid_size)?;
    let (markov_sup, markov_sup_t) = markov_supremum(r, k, t_grid_size)?;
    let endpoint = stechkin(&ProblemSpec::endpoint(r, k)?, n)?;
    let values = chebyshev_grid(t_grid_size)
        .par_iter()
        .map(|&t| Ok((t, stechkin(&ProblemSpec::new(r, k, t)?, n)?.e_n())))
        .collect::<Result<Vec<_>>>()?;
    let (mut interior_sup_t, mut interior_sup) = values[0];
    for &(t, v) in &values {
        if v > interior_sup * (1.0 + TIE) {
            interior_sup_t = t;
            interior_sup = v;
        }
    }
    Ok(UniformStechkin {
        endpoint,
        interior_sup,
        interior_sup_t,
        markov_sup,
        markov_sup_t,
    })
}
