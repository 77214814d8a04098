//! Legendre polynomials: orthonormal basis evaluation and coefficient-space
//! operations on Legendre series `Σ a_m P_m(x)`.

/// Orthonormal Legendre basis `p_n = sqrt((2n+1)/2) P_n` of the polynomials
/// of degree `< dimension` in `L2[-1,1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrthonormalPolyBasis {
    dimension: usize,
}

impl OrthonormalPolyBasis {
    pub fn new(dimension: usize) -> Self {
        assert!(dimension >= 1, "basis dimension must be at least 1");
        Self { dimension }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// `p_n^{(s)}(x)` for `n = 0..dimension`.
    pub fn derivatives_at(&self, s: usize, x: f64) -> Vec<f64> {
        let table = legendre_derivative_table(self.dimension - 1, s, x);
        (0..self.dimension)
            .map(|n| normalization(n) * table[s][n])
            .collect()
    }

    pub fn value(&self, n: usize, x: f64) -> f64 {
        self.derivative(n, 0, x)
    }

    pub fn derivative(&self, n: usize, s: usize, x: f64) -> f64 {
        assert!(n < self.dimension);
        normalization(n) * legendre_derivative_table(n, s, x)[s][n]
    }
}

/// `sqrt((2n+1)/2)`, the factor turning `P_n` into a unit vector of `L2[-1,1]`.
pub fn normalization(n: usize) -> f64 {
    ((2 * n + 1) as f64 / 2.0).sqrt()
}

/// `‖P_m‖² = 2/(2m+1)`.
pub fn norm_squared(m: usize) -> f64 {
    2.0 / (2 * m + 1) as f64
}

/// `table[j][n] = P_n^{(j)}(x)` for `j = 0..=s`, `n = 0..=max_degree`.
///
/// Uses the differentiated three-term recurrence
/// `(n+1) P_{n+1}^{(j)} = (2n+1)(x P_n^{(j)} + j P_n^{(j-1)}) - n P_{n-1}^{(j)}`.
pub fn legendre_derivative_table(max_degree: usize, s: usize, x: f64) -> Vec<Vec<f64>> {
    let mut table = vec![vec![0.0; max_degree + 1]; s + 1];
    for j in 0..=s {
        for n in 0..=max_degree {
            let value = if n == 0 {
                if j == 0 {
                    1.0
                } else {
                    0.0
                }
            } else {
                let nf = (n - 1) as f64;
                let prev = table[j][n - 1];
                let prev_lower = if j > 0 { table[j - 1][n - 1] } else { 0.0 };
                let prev2 = if n >= 2 { table[j][n - 2] } else { 0.0 };
                ((2.0 * nf + 1.0) * (x * prev + j as f64 * prev_lower) - nf * prev2) / (nf + 1.0)
            };
            table[j][n] = value;
        }
    }
    table
}

/// `P_0(x), ..., P_max(x)`.
pub fn legendre_values(max_degree: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(max_degree + 1);
    out.push(1.0);
    if max_degree == 0 {
        return out;
    }
    out.push(x);
    for n in 1..max_degree {
        let nf = n as f64;
        let next = ((2.0 * nf + 1.0) * x * out[n] - nf * out[n - 1]) / (nf + 1.0);
        out.push(next);
    }
    out
}

/// Evaluates `Σ a_m P_m(x)` by Clenshaw's recurrence.
pub fn clenshaw(coeffs: &[f64], x: f64) -> f64 {
    let mut b1 = 0.0;
    let mut b2 = 0.0;
    for k in (0..coeffs.len()).rev() {
        let kf = k as f64;
        let alpha = (2.0 * kf + 1.0) / (kf + 1.0) * x;
        let beta = -(kf + 1.0) / (kf + 2.0);
        let b0 = coeffs[k] + alpha * b1 + beta * b2;
        b2 = b1;
        b1 = b0;
    }
    b1
}

/// Legendre coefficients of the derivative of `Σ a_m P_m`.
pub fn differentiate_series(coeffs: &[f64]) -> Vec<f64> {
    let n = coeffs.len();
    if n <= 1 {
        return vec![0.0];
    }
    let mut d = vec![0.0; n - 1];
    // d_{m-1} = (2m-1) (a_m + d_{m+1} / (2m+3))
    for m in (1..n).rev() {
        let next = if m + 1 < n - 1 { d[m + 1] } else { 0.0 };
        let mf = m as f64;
        d[m - 1] = (2.0 * mf - 1.0) * (coeffs[m] + next / (2.0 * mf + 3.0));
    }
    d
}

/// Legendre coefficients of `x ↦ ∫_{-1}^x Σ a_m P_m`.
///
/// Relies on `∫_{-1}^x P_m = (P_{m+1} - P_{m-1})/(2m+1)` for `m ≥ 1` and
/// `∫_{-1}^x P_0 = P_0 + P_1`.
pub fn integrate_series(coeffs: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; coeffs.len() + 1];
    for (m, &a) in coeffs.iter().enumerate() {
        if a == 0.0 {
            continue;
        }
        if m == 0 {
            out[0] += a;
            out[1] += a;
        } else {
            let f = a / (2 * m + 1) as f64;
            out[m + 1] += f;
            out[m - 1] -= f;
        }
    }
    out
}
