//! Whether `|φ_n^{(r+k)}|` peaks at the endpoints, mode by mode.

use rayon::prelude::*;

use crate::bvp::{self, ProblemSpec};
use crate::error::{invalid, Result};
use crate::poly_core::check_orders;
use crate::poly_core::legendre::clenshaw;
use crate::roots::golden_max;
use crate::spectral::{decompose, SpectralDecomposition};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
        }
    }
}

/// Endpoint value against interior maximum of `|φ_n^{(r+k)}|`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConjectureReport {
    pub r: usize,
    pub k: usize,
    /// 1-based mode index.
    pub mode: usize,
    pub eigenvalue: f64,
    /// `|φ_n^{(r+k)}(-1)|`.
    pub endpoint: f64,
    /// Largest `|φ_n^{(r+k)}|` strictly inside `(-1, 1)`.
    pub interior_max: f64,
    pub interior_argmax: f64,
    /// `endpoint - interior_max`.
    pub margin: f64,
    /// Grid tolerance `max(1e-9·endpoint, h²/8·max|φ_n^{(r+k+2)}|)`.
    pub tolerance: f64,
    pub verdict: Verdict,
    pub samples: usize,
}

/// Galerkin dimension used by [`check_conjecture`].
pub fn conjecture_galerkin_dim(n_modes: usize) -> usize {
    2 * n_modes + 60
}

/// Check the first `n_modes` eigenfunctions of `(-1)^r D^{2r}` on a uniform
/// grid of `samples` points, polishing interior local maxima.
pub fn check_conjecture(
    r: usize,
    k: usize,
    n_modes: usize,
    samples: usize,
) -> Result<Vec<ConjectureReport>> {
    check_orders(r, k)?;
    let dec = decompose(r, n_modes, conjecture_galerkin_dim(n_modes))?;
    check_conjecture_with(&dec, k, samples)
}

pub fn check_conjecture_with(
    dec: &SpectralDecomposition,
    k: usize,
    samples: usize,
) -> Result<Vec<ConjectureReport>> {
    let r = dec.r();
    check_orders(r, k)?;
    if samples < 3 {
        return Err(invalid("need at least three samples"));
    }
    (0..dec.n_modes())
        .into_par_iter()
        .map(|index| Ok(report(dec, k, index, samples)))
        .collect()
}

fn report(dec: &SpectralDecomposition, k: usize, index: usize, samples: usize) -> ConjectureReport {
    let r = dec.r();
    let series = dec.derivative_series(index, r + k);
    let curvature = dec.derivative_series(index, r + k + 2);
    let h = 2.0 / (samples - 1) as f64;
    let xs: Vec<f64> = (0..samples).map(|i| -1.0 + h * i as f64).collect();
    let g: Vec<f64> = xs.iter().map(|&x| clenshaw(&series, x).abs()).collect();
    let endpoint = g[0].max(g[samples - 1]);
    let est = xs
        .iter()
        .map(|&x| clenshaw(&curvature, x).abs())
        .fold(0.0, f64::max);

    let (mut interior_argmax, mut interior_max) = (xs[1], g[1]);
    for i in 1..samples - 1 {
        if g[i] > interior_max {
            interior_max = g[i];
            interior_argmax = xs[i];
        }
        if g[i] >= g[i - 1] && g[i] >= g[i + 1] {
            let (x, v) = golden_max(|x| clenshaw(&series, x).abs(), xs[i - 1], xs[i + 1], 80);
            if v > interior_max {
                interior_max = v;
                interior_argmax = x;
            }
        }
    }
    let margin = endpoint - interior_max;
    let tolerance = (1e-9 * endpoint).max(h * h / 8.0 * est);
    ConjectureReport {
        r,
        k,
        mode: index + 1,
        eigenvalue: dec.eigenvalues()[index],
        endpoint,
        interior_max,
        interior_argmax,
        margin,
        tolerance,
        verdict: if margin >= -tolerance {
            Verdict::Holds
        } else {
            Verdict::Fails
        },
        samples,
    }
}

/// Rows `(x, [φ_1^{(r+k)}(x), ..., φ_m^{(r+k)}(x)])` on a uniform grid.
pub fn conjecture_figure(
    dec: &SpectralDecomposition,
    k: usize,
    samples: usize,
) -> Result<Vec<(f64, Vec<f64>)>> {
    check_orders(dec.r(), k)?;
    if samples < 2 {
        return Err(invalid("need at least two samples"));
    }
    let series: Vec<Vec<f64>> = (0..dec.n_modes())
        .map(|i| dec.derivative_series(i, dec.r() + k))
        .collect();
    Ok((0..samples)
        .map(|i| {
            let x = -1.0 + 2.0 * i as f64 / (samples - 1) as f64;
            (x, series.iter().map(|s| clenshaw(s, x)).collect())
        })
        .collect())
}

/// Largest relative excess of the interior norms over the endpoint norms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DominationCheck {
    /// `max (‖u_{λ,t}^{(r)}‖ − ‖u_λ^{(r)}‖)/‖u_λ^{(r)}‖`.
    pub worst_ur: f64,
    /// `max (‖u_{λ,t}‖ − ‖u_λ‖)/‖u_λ‖`.
    pub worst_u: f64,
    pub checked: usize,
}

impl DominationCheck {
    pub fn holds(&self, tol: f64) -> bool {
        self.worst_ur <= tol && self.worst_u <= tol
    }
}

/// `‖u_{λ,t}^{(r)}‖₂ ≤ ‖u_λ^{(r)}‖₂` and `‖u_{λ,t}‖₂ ≤ ‖u_λ‖₂` on a `(λ, t)` grid.
pub fn norm_domination(r: usize, k: usize, lambdas: &[f64], ts: &[f64]) -> Result<DominationCheck> {
    let endpoint = ProblemSpec::endpoint(r, k)?;
    let pairs: Vec<(f64, f64)> = lambdas
        .iter()
        .flat_map(|&l| ts.iter().map(move |&t| (l, t)))
        .collect();
    let excess = pairs
        .par_iter()
        .map(|&(lambda, t)| {
            let end = bvp::solve(&endpoint, lambda)?;
            let inner = bvp::solve(&ProblemSpec::new(r, k, t)?, lambda)?;
            Ok((
                (inner.norm_ur() - end.norm_ur()) / end.norm_ur(),
                (inner.norm_u() - end.norm_u()) / end.norm_u(),
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DominationCheck {
        worst_ur: excess.iter().map(|e| e.0).fold(f64::NEG_INFINITY, f64::max),
        worst_u: excess.iter().map(|e| e.1).fold(f64::NEG_INFINITY, f64::max),
        checked: excess.len(),
    })
}
