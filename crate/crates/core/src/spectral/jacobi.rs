//! One-sided (Hestenes) Jacobi SVD. Singular values of `C = C̃ D` with
//! `C̃` well conditioned and `D` diagonal come out with high relative
//! accuracy, which a Gram-matrix eigensolver cannot deliver once the
//! spectrum spans more than ~10 decades.

use nalgebra::DMatrix;

/// Thin SVD `C = U Σ Vᵀ` of a column-stored matrix, singular values descending.
#[derive(Debug, Clone)]
pub(crate) struct Svd {
    pub sigma: Vec<f64>,
    /// Left singular vectors, one per column of the input.
    pub u: Vec<Vec<f64>>,
    /// Right singular vectors; `v[n][j]` is component `j` of vector `n`.
    pub v: Vec<Vec<f64>>,
}

#[cfg(test)]
pub(crate) fn one_sided_jacobi(cols: Vec<Vec<f64>>) -> Svd {
    let n = cols.len();
    let identity = (0..n)
        .map(|i| {
            let mut e = vec![0.0; n];
            e[i] = 1.0;
            e
        })
        .collect();
    jacobi_sweeps(cols, identity)
}

/// Same result, started from the eigenvectors `V₀` of `CᵀC`: the columns of
/// `C V₀` are already orthogonal up to the absolute accuracy of the Gram
/// eigensolver, and the sweeps only restore relative accuracy.
pub(crate) fn preconditioned_jacobi(cols: Vec<Vec<f64>>) -> Svd {
    let n = cols.len();
    let gram = DMatrix::from_fn(n, n, |i, j| dot(&cols[i], &cols[j]));
    let eig = gram.symmetric_eigen();
    let m = cols.first().map_or(0, Vec::len);
    let v0: Vec<Vec<f64>> = (0..n)
        .map(|k| eig.eigenvectors.column(k).iter().copied().collect())
        .collect();
    let rotated: Vec<Vec<f64>> = v0
        .iter()
        .map(|vk| {
            let mut out = vec![0.0; m];
            for (c, &w) in cols.iter().zip(vk) {
                if w != 0.0 {
                    for (o, x) in out.iter_mut().zip(c) {
                        *o += w * x;
                    }
                }
            }
            out
        })
        .collect();
    jacobi_sweeps(rotated, v0)
}

/// Rotates column pairs of `cols` until mutually orthogonal; `v` accumulates
/// the rotations (as columns `v[k]` of the right factor).
fn jacobi_sweeps(mut cols: Vec<Vec<f64>>, mut v: Vec<Vec<f64>>) -> Svd {
    let n = cols.len();
    let tol = f64::EPSILON * (cols.first().map_or(1, Vec::len) as f64).sqrt();
    let mut norms: Vec<f64> = cols.iter().map(|c| dot(c, c)).collect();
    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let (alpha, beta) = (norms[p], norms[q]);
                if alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                let gamma = dot(&cols[p], &cols[q]);
                if gamma.abs() <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let (left, right) = cols.split_at_mut(q);
                rotate(&mut left[p], &mut right[0], c, s);
                let (left, right) = v.split_at_mut(q);
                rotate(&mut left[p], &mut right[0], c, s);
                norms[p] = dot(&cols[p], &cols[p]);
                norms[q] = dot(&cols[q], &cols[q]);
            }
        }
        if !rotated {
            break;
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| norms[b].total_cmp(&norms[a]));
    let mut sigma = Vec::with_capacity(n);
    let mut u = Vec::with_capacity(n);
    let mut vs = Vec::with_capacity(n);
    for &i in &order {
        let s = norms[i].sqrt();
        sigma.push(s);
        u.push(
            cols[i]
                .iter()
                .map(|x| if s > 0.0 { x / s } else { 0.0 })
                .collect(),
        );
        vs.push(v[i].clone());
    }
    Svd { sigma, u, v: vs }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

// [a, b] <- [a, b] [[c, s], [-s, c]]
fn rotate(a: &mut [f64], b: &mut [f64], c: f64, s: f64) {
    for (x, y) in a.iter_mut().zip(b.iter_mut()) {
        let (xa, yb) = (*x, *y);
        *x = c * xa - s * yb;
        *y = s * xa + c * yb;
    }
}
