//! Gauss-Legendre quadrature rules.

use std::f64::consts::PI;

/// Nodes and weights of an `n`-point Gauss-Legendre rule on [-1, 1].
///
/// Nodes are sorted ascending. The rule integrates polynomials of degree
/// `2n - 1` exactly.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let half = (n + 1) / 2;
        for i in 0..half {
            // Tricomi initial guess, then Newton on P_n.
            let theta = PI * (4.0 * i as f64 + 3.0) / (4.0 * n as f64 + 2.0);
            let nf = n as f64;
            let mut x = (1.0 - (nf - 1.0) / (8.0 * nf * nf * nf)) * theta.cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_and_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                    break;
                }
            }
            let (_, d) = legendre_and_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            weights[i] = w;
            nodes[n - 1 - i] = x;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    /// Rule exact for polynomials of the given degree.
    pub fn for_degree(degree: usize) -> Self {
        Self::new(degree / 2 + 1)
    }

    /// Integrates `f` over `[a, b]`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let mut sum = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            sum += w * f(c + h * x);
        }
        sum * h
    }

    /// Mapped nodes and scaled weights on `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(x, w)| (c + h * x, w * h))
    }
}

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 1..n {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0) * x * p1 - kf * p0) / (kf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let pm1 = if n == 0 { 0.0 } else { p0 };
    let d = n as f64 * (x * p - pm1) / (x * x - 1.0);
    (p, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two() {
        for n in [1, 2, 5, 17, 64, 301] {
            let g = GaussLegendre::new(n);
            let s: f64 = g.weights.iter().sum();
            assert!((s - 2.0).abs() < 1e-13, "n={n} sum={s}");
        }
    }

    #[test]
    fn exact_for_monomials() {
        let g = GaussLegendre::new(21);
        for j in 0..=41usize {
            let exact = if j % 2 == 1 {
                0.0
            } else {
                2.0 / (j as f64 + 1.0)
            };
            let got = g.integrate(-1.0, 1.0, |x| x.powi(j as i32));
            assert!((got - exact).abs() < 1e-14, "j={j}");
        }
    }

    #[test]
    fn nodes_sorted_and_interior() {
        let g = GaussLegendre::new(40);
        for w in g.nodes.windows(2) {
            assert!(w[0] < w[1]);
        }
        assert!(g.nodes[0] > -1.0 && g.nodes[39] < 1.0);
    }
}
