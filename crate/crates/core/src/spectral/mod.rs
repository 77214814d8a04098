//! Eigenpairs of `𝒜u = (-1)^r u^{(2r)}` on the clamped space, the Green's
//! kernel of `𝒜⁻¹`, and the eigen-expansions of `u_λ`, `u_{λ,t}`.
//!
//! The Galerkin trial functions are `b_j = I^r p_{j+r}` (`r`-fold integral
//! from `-1` of a normalized Legendre polynomial). They span the same space as
//! `(1-x²)^r P_{D-1}`, satisfy the clamped conditions identically, and make the
//! stiffness matrix the identity, so `γ_n = 1/λ_n` are the squared singular
//! values of the Legendre coefficient matrix `C` of the `b_j`.

mod determinant;
mod jacobi;
mod kernel;

pub use determinant::{determinant_eigenvalues, eigen_determinant};
pub use kernel::{inverse_polynomial, kernel_value, GreensKernel};

use crate::error::{invalid, Error, Result};
use crate::poly_core::legendre::{clenshaw, differentiate_series, integrate_series, normalization};
use crate::poly_core::quadrature::GaussLegendre;
use crate::poly_core::{PiecewisePolynomial, Side};
use jacobi::preconditioned_jacobi;

/// The lowest `n_modes` eigenpairs of `𝒜`.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    r: usize,
    galerkin_dim: usize,
    eigenvalues: Vec<f64>,
    /// Legendre (`P_m`) coefficients of `φ_n`.
    phi: Vec<Vec<f64>>,
    /// Legendre (`P_m`) coefficients of `φ_n^{(r)}`.
    phi_r: Vec<Vec<f64>>,
}

/// Eigenpairs from a Galerkin space of dimension `galerkin_dim`; the lower
/// half (at most) is kept, as the upper modes are not converged.
pub fn decompose(r: usize, n_modes: usize, galerkin_dim: usize) -> Result<SpectralDecomposition> {
    if r == 0 {
        return Err(invalid("r must be at least 1"));
    }
    if n_modes == 0 {
        return Err(invalid("need at least one mode"));
    }
    if galerkin_dim < 2 * n_modes {
        return Err(invalid(format!(
            "galerkin_dim = {galerkin_dim} must be at least 2 * n_modes = {}",
            2 * n_modes
        )));
    }
    let len = galerkin_dim + 2 * r;
    let columns: Vec<Vec<f64>> = (0..galerkin_dim)
        .map(|j| {
            let mut series = vec![0.0; j + r + 1];
            series[j + r] = normalization(j + r);
            for _ in 0..r {
                series = integrate_series(&series);
            }
            // P_m -> p_m coefficients
            (0..len)
                .map(|m| series.get(m).copied().unwrap_or(0.0) / normalization(m))
                .collect()
        })
        .collect();

    // b_j only involves degrees of the parity of j.
    struct Mode {
        sigma: f64,
        phi_normalized: Vec<f64>,
        v: Vec<(usize, f64)>,
    }
    let mut modes: Vec<Mode> = Vec::new();
    for parity in 0..2 {
        let col_idx: Vec<usize> = (parity..galerkin_dim).step_by(2).collect();
        let row_idx: Vec<usize> = (parity..len).step_by(2).collect();
        let compressed: Vec<Vec<f64>> = col_idx
            .iter()
            .map(|&j| row_idx.iter().map(|&m| columns[j][m]).collect())
            .collect();
        let svd = preconditioned_jacobi(compressed);
        for n in 0..svd.sigma.len() {
            let mut phi_normalized = vec![0.0; len];
            for (i, &m) in row_idx.iter().enumerate() {
                phi_normalized[m] = svd.u[n][i];
            }
            modes.push(Mode {
                sigma: svd.sigma[n],
                phi_normalized,
                v: col_idx
                    .iter()
                    .copied()
                    .zip(svd.v[n].iter().copied())
                    .collect(),
            });
        }
    }
    modes.sort_by(|a, b| b.sigma.total_cmp(&a.sigma));
    modes.truncate(n_modes);

    let mut eigenvalues = Vec::with_capacity(n_modes);
    let mut phi = Vec::with_capacity(n_modes);
    let mut phi_r = Vec::with_capacity(n_modes);
    for mode in modes {
        if !(mode.sigma > 0.0) {
            return Err(Error::Internal(
                "Galerkin Gram matrix is not positive definite".into(),
            ));
        }
        let lambda = 1.0 / (mode.sigma * mode.sigma);
        let mut p: Vec<f64> = mode
            .phi_normalized
            .iter()
            .enumerate()
            .map(|(m, c)| c * normalization(m))
            .collect();
        let mut pr = vec![0.0; galerkin_dim + r];
        for (j, vj) in mode.v {
            pr[j + r] = vj / mode.sigma * normalization(j + r);
        }
        if sign_at_left(&pr, r, lambda) < 0.0 {
            p.iter_mut().for_each(|c| *c = -*c);
            pr.iter_mut().for_each(|c| *c = -*c);
        }
        eigenvalues.push(lambda);
        phi.push(p);
        phi_r.push(pr);
    }
    Ok(SpectralDecomposition {
        r,
        galerkin_dim,
        eigenvalues,
        phi,
        phi_r,
    })
}

/// Sign of the first derivative of order `r, r+1, ...` that is nonzero at `-1`.
fn sign_at_left(phi_r: &[f64], r: usize, lambda: f64) -> f64 {
    let mut series = phi_r.to_vec();
    for i in 0..=2 * r {
        let value = clenshaw(&series, -1.0);
        let natural = lambda.powf((r + i) as f64 / (2 * r) as f64);
        if value.abs() > 1e-6 * natural {
            return value.signum();
        }
        series = differentiate_series(&series);
    }
    1.0
}

impl SpectralDecomposition {
    pub fn r(&self) -> usize {
        self.r
    }

    pub fn n_modes(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn galerkin_dim(&self) -> usize {
        self.galerkin_dim
    }

    /// `λ_1 ≤ λ_2 ≤ ...`; index 0 is `λ_1`.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Legendre (`P_m`) coefficients of `φ_{index+1}^{(s)}`.
    pub fn derivative_series(&self, index: usize, s: usize) -> Vec<f64> {
        let (mut series, steps) = if s >= self.r {
            (self.phi_r[index].clone(), s - self.r)
        } else {
            (self.phi[index].clone(), s)
        };
        for _ in 0..steps {
            series = differentiate_series(&series);
        }
        series
    }

    /// `φ_{index+1}^{(s)}(x)`.
    pub fn eigenfunction(&self, index: usize, s: usize, x: f64) -> f64 {
        clenshaw(&self.derivative_series(index, s), x)
    }

    /// `(f, φ_n)` for every retained mode.
    pub fn fourier(&self, f: &PiecewisePolynomial) -> Vec<f64> {
        let len = self.phi.first().map_or(0, Vec::len);
        let moments = legendre_moments(f, len);
        self.phi
            .iter()
            .map(|p| p.iter().zip(&moments).map(|(a, b)| a * b).sum())
            .collect()
    }
}

/// `(f, P_m)` for `m < count`, exact for piecewise polynomials.
pub(crate) fn legendre_moments(f: &PiecewisePolynomial, count: usize) -> Vec<f64> {
    let rule = GaussLegendre::for_degree(f.degree() + count);
    let mut out = vec![0.0; count];
    for w in f.breakpoints().windows(2) {
        for (x, wt) in rule.mapped(w[0], w[1]) {
            let fx = wt * f.evaluate(x, Side::Right);
            let mut p_prev = 1.0;
            let mut p = x;
            out[0] += fx;
            if count > 1 {
                out[1] += fx * x;
            }
            for m in 2..count {
                let mf = (m - 1) as f64;
                let next = ((2.0 * mf + 1.0) * x * p - mf * p_prev) / (mf + 1.0);
                p_prev = p;
                p = next;
                out[m] += fx * p;
            }
        }
    }
    out
}

/// `u_λ = u₀ - Σ λ c_n/(λ_n + λ) φ_n` truncated at the retained modes, with
/// tail-corrected norms.
#[derive(Debug, Clone)]
pub struct SeriesSolution {
    pub lambda: f64,
    /// `‖u_λ‖₂` from the truncated sum plus the moment-corrected tail.
    pub norm_u: f64,
    /// `‖u_λ^{(r)}‖₂`, likewise.
    pub norm_ur: f64,
    /// Bounds on the neglected remainders of `‖u_λ‖₂²` and `‖u_λ^{(r)}‖₂²`.
    pub tail_bound_u_sq: f64,
    pub tail_bound_ur_sq: f64,
    u0: PiecewisePolynomial,
    correction: Vec<f64>,
}

impl SeriesSolution {
    /// Value of the truncated series at `x`.
    pub fn evaluate(&self, x: f64, side: Side) -> f64 {
        self.u0.evaluate(x, side) - clenshaw(&self.correction, x)
    }
}

/// Series representation for the `λ = 0` solution `u0` of a problem.
///
/// With `c_n = (u₀, φ_n)`, `γ_n = 1/λ_n` and the tail moments
/// `T₀ = ‖u₀‖² - Σ c_n²`, `T₁ = (u₀, 𝒜⁻¹u₀) - Σ γ_n c_n²`:
///
/// `‖u_λ‖² = Σ c_n²/(1+λγ_n)² + T₀ - 2λT₁ + O(3λ²γ_N T₁)`,
/// `‖u_λ^{(r)}‖² = ‖u₀^{(r)}‖² + λ² Σ γ_n c_n²/(1+λγ_n)² + λ²T₁ + O(2λ³γ_N T₁)`.
pub fn series_solution(
    dec: &SpectralDecomposition,
    u0: &PiecewisePolynomial,
    lambda: f64,
) -> Result<SeriesSolution> {
    if !(lambda >= 0.0) {
        return Err(invalid(format!("lambda = {lambda} must be >= 0")));
    }
    let r = dec.r;
    let c = dec.fourier(u0);
    let u0_sq = u0.norm().powi(2);
    let a0_sq = u0.differentiate(r).norm().powi(2);
    let w = inverse_polynomial(r, u0);
    let q1 = u0.inner_product(&w);

    let mut sum_b = 0.0;
    let mut sum_a = 0.0;
    let mut plain = 0.0;
    let mut plain_gamma = 0.0;
    let len = dec.phi.first().map_or(0, Vec::len);
    let mut correction = vec![0.0; len];
    for (n, &cn) in c.iter().enumerate() {
        let gamma = 1.0 / dec.eigenvalues[n];
        let damp = 1.0 / (1.0 + lambda * gamma);
        sum_b += (cn * damp).powi(2);
        sum_a += gamma * (cn * damp).powi(2);
        plain += cn * cn;
        plain_gamma += gamma * cn * cn;
        let weight = lambda * gamma * cn * damp;
        for (acc, p) in correction.iter_mut().zip(&dec.phi[n]) {
            *acc += weight * p;
        }
    }
    let t0 = (u0_sq - plain).max(0.0);
    let t1 = (q1 - plain_gamma).max(0.0);
    let gamma_n = c
        .len()
        .checked_sub(1)
        .map_or(0.0, |n| 1.0 / dec.eigenvalues[n]);
    let b_sq = sum_b + t0 - 2.0 * lambda * t1;
    let a_sq = a0_sq + lambda * lambda * (sum_a + t1);
    Ok(SeriesSolution {
        lambda,
        norm_u: b_sq.max(0.0).sqrt(),
        norm_ur: a_sq.sqrt(),
        tail_bound_u_sq: 3.0 * lambda * lambda * gamma_n * t1,
        tail_bound_ur_sq: 2.0 * lambda.powi(3) * gamma_n * t1,
        u0: u0.clone(),
        correction,
    })
}

/// Samples `(x, φ_{index+1}^{(s)}(x))` on a uniform grid of `samples` points.
pub fn eigen_derivative_profile(
    dec: &SpectralDecomposition,
    index: usize,
    s: usize,
    samples: usize,
) -> Result<Vec<(f64, f64)>> {
    if index >= dec.n_modes() {
        return Err(invalid(format!(
            "mode index {index} out of range (have {} modes)",
            dec.n_modes()
        )));
    }
    if samples < 2 {
        return Err(invalid("need at least two samples"));
    }
    let series = dec.derivative_series(index, s);
    Ok((0..samples)
        .map(|i| {
            let x = -1.0 + 2.0 * i as f64 / (samples - 1) as f64;
            (x, clenshaw(&series, x))
        })
        .collect())
}

/// Default number of samples for derivative profiles.
pub const DEFAULT_PROFILE_SAMPLES: usize = 2001;

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn string_eigenvalues() {
        let dec = decompose(1, 20, 60).unwrap();
        for (n, l) in dec.eigenvalues().iter().enumerate() {
            let exact = PI * PI * ((n + 1) * (n + 1)) as f64 / 4.0;
            assert!((l - exact).abs() < 1e-10 * exact, "n={n}");
        }
    }

    #[test]
    fn first_string_mode_is_cosine() {
        let dec = decompose(1, 4, 40).unwrap();
        let rule = GaussLegendre::new(60);
        let err = rule.integrate(-1.0, 1.0, |x| {
            (dec.eigenfunction(0, 0, x) - (PI * x / 2.0).cos()).powi(2)
        });
        assert!(err.sqrt() < 1e-10);
    }

    #[test]
    fn rejects_small_galerkin_space() {
        assert!(decompose(2, 10, 19).is_err());
    }
}
