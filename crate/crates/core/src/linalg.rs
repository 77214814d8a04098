//! Small dense solves with equilibration, full pivoting, one step of
//! iterative refinement and a 1-norm condition estimate.

use nalgebra::{ComplexField, DMatrix, DVector};

use crate::error::{Error, Result};

/// Solution of `A x = b` together with the condition estimate of the
/// equilibrated matrix.
#[derive(Debug, Clone)]
pub struct Solved<T: ComplexField> {
    pub x: DVector<T>,
    pub condition: f64,
}

pub fn solve_refined<T>(a: &DMatrix<T>, b: &DVector<T>, context: &str) -> Result<Solved<T>>
where
    T: ComplexField<RealField = f64> + Copy,
{
    let n = a.nrows();
    assert_eq!(n, a.ncols());
    assert_eq!(n, b.len());

    let mut row_scale = vec![1.0; n];
    let mut col_scale = vec![1.0; n];
    for i in 0..n {
        let m = (0..n).map(|j| a[(i, j)].modulus()).fold(0.0, f64::max);
        if m > 0.0 {
            row_scale[i] = 1.0 / m;
        }
    }
    for j in 0..n {
        let m = (0..n)
            .map(|i| a[(i, j)].modulus() * row_scale[i])
            .fold(0.0, f64::max);
        if m > 0.0 {
            col_scale[j] = 1.0 / m;
        }
    }
    let scaled = DMatrix::from_fn(n, n, |i, j| {
        a[(i, j)] * T::from_real(row_scale[i] * col_scale[j])
    });
    let rhs = DVector::from_fn(n, |i, _| b[i] * T::from_real(row_scale[i]));

    let lu = scaled.clone().full_piv_lu();
    let inverse = lu.try_inverse().ok_or_else(|| Error::IllConditioned {
        condition: f64::INFINITY,
        context: context.to_string(),
    })?;
    let condition = one_norm(&scaled) * one_norm(&inverse);
    if !condition.is_finite() {
        return Err(Error::IllConditioned {
            condition,
            context: context.to_string(),
        });
    }

    let mut y = lu.solve(&rhs).ok_or_else(|| Error::IllConditioned {
        condition,
        context: context.to_string(),
    })?;
    let residual = &rhs - &scaled * &y;
    if let Some(dy) = lu.solve(&residual) {
        y += dy;
    }
    let x = DVector::from_fn(n, |j, _| y[j] * T::from_real(col_scale[j]));
    Ok(Solved { x, condition })
}

fn one_norm<T: ComplexField<RealField = f64> + Copy>(m: &DMatrix<T>) -> f64 {
    (0..m.ncols())
        .map(|j| (0..m.nrows()).map(|i| m[(i, j)].modulus()).sum::<f64>())
        .fold(0.0, f64::max)
}
